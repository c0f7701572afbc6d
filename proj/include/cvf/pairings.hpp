#pragma once

#include <cstdint>
#include <cstddef>

#include "cvf/linalg.hpp"
#include "cvf/rng.hpp"

namespace cvf {

/// Weak pairing compatible with the norm of `ns`:
///   p = 1:   [x, y] = ||Ry||_1 * sign(Ry)^T Rx          (sign(0) = 0)
///   p = 2:   [x, y] = x^T P y   (P = R^T R)
///   p = inf: [x, y] = max_{i in I(Ry)} (Ry)_i (Rx)_i
/// where I(z) = { i : |z_i| >= ||z||_inf * (1 - tie_tol) }. The tolerance band
/// keeps the active index set stable under floating-point ties.
struct WeakPairing {
    NormSpec ns;
    std::size_t dim = 0;
    double tie_tol = 1e-12;

    static WeakPairing for_norm(NormSpec ns, std::size_t dim, double tie_tol = 1e-12);
};

double wp_eval(const Vector& x, const Vector& y, const WeakPairing& wp);

/// Worst margins observed over random samples, one entry per pairing axiom.
/// Violations are positive for the max-style entries; `min_quadratic` and
/// `min_deimling` are minima (healthy pairings keep them >= 0).
struct AxiomReport {
    NormOrder p = NormOrder::Two;
    bool weighted = false;
    std::size_t dim = 0;
    int samples = 0;
    std::uint64_t seed = 0;

    double worst_subadditivity = 0.0;  // [x1+x2, y] - [x1, y] - [x2, y]
    double worst_homogeneity = 0.0;    // deviation from [ax,y] = [x,ay] = a[x,y], [-x,-y] = [x,y]
    double min_quadratic = 0.0;        // min [x, x] over unit-norm x
    double worst_norm_compat = 0.0;    // | [x, x] - ||x||^2 |
    double worst_cauchy_schwarz = 0.0; // |[x, y]| - ||x|| ||y||
    double min_deimling = 0.0;         // Deimling margin (one-sided numerical estimate)

    Vector witness_subadd_x1, witness_subadd_x2, witness_subadd_y;
    Vector witness_cs_x, witness_cs_y;
    Vector witness_deimling_x, witness_deimling_y;
};

/// Samples the pairing axioms; deterministic given (sample_count, seed) and
/// independent of evaluation order (per-sample seed derivation).
AxiomReport wp_axiom_check(const WeakPairing& wp, int sample_count, std::uint64_t seed);

/// RHS - LHS of Deimling's inequality, the RHS estimated with the decreasing-h
/// quotient of ||y + hx||. The quotient decreases to the limit, so the result
/// upper-bounds the true margin; it is a validation number, not a proof.
double deimling_margin(const Vector& x, const Vector& y, const WeakPairing& wp,
                       double h_min = 1e-8);

struct SamplerConfig {
    int count = 2000;
    std::uint64_t seed = 0;
};

/// Estimate of sup_{x != 0} [Ax, x] / ||x||^2 over random unit vectors plus
/// constructed near-maximizer candidates. Never exceeds the matrix measure;
/// the candidates bring it within tolerance of it.
double lumer_sup(const Matrix& a, const WeakPairing& wp, const SamplerConfig& sampler);

/// Random point on the unit sphere of the norm: normalized Gaussian for p = 2,
/// normalized box sample otherwise.
Vector sample_unit_vector(std::mt19937_64& rng, std::size_t dim, const NormSpec& ns);

} // namespace cvf
