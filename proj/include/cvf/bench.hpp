#pragma once

#include <cstdint>
#include <iosfwd>

#include "cvf/linalg.hpp"

namespace cvf::bench {

/// 2x2 damped rotation [[-c, w], [-w, -c]] with w = c sqrt(kappa^2 - 1):
/// measure -c and 2-norm c*kappa exactly, negative definite as a quadratic
/// form, and (I + aA)^T (I + aA) is a multiple of I, so every difference pair
/// realizes the Lipschitz constant of Id + a f.
Matrix conformal_system(double c, double kappa);

/// Lower-triangular 2x2 with mu_1 = -c and 1-norm ell = c*kappa exactly
/// (diagonally dominant columns).
Matrix column_dominant_system(double c, double kappa);

/// Transpose construction for the inf-norm.
Matrix row_dominant_system(double c, double kappa);

/// kappa in {2, 5, 10, 20, 50, 100}: runs each solver at its auto step on the
/// instance constructed for its norm and writes
///   kappa,method,predicted,empirical
/// rows. Deterministic given the seed.
void run_kappa_scaling(std::ostream& os, std::uint64_t seed);

/// Empirical probes of open questions (no assertions): step scans for the
/// best extra-gradient factor, per-step factors of the sphere forward step,
/// and Newton inner convergence from starts beyond the guaranteed ball.
/// Same CSV columns; the kappa column carries the scan parameter.
void run_conjectures(std::ostream& os, std::uint64_t seed);

} // namespace cvf::bench
