#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvf/fields.hpp"

namespace cvf {

enum class SolveMethod { Forward, ImplicitFixedPoint, ImplicitNewton, ExtraGradient };
enum class SolveStatus { Converged, MaxIter, Diverged, InnerFailed };
const char* to_string(SolveMethod m);
const char* to_string(SolveStatus s);

struct SolverConfig {
    SolveMethod method = SolveMethod::Forward;
    std::optional<double> alpha; // empty = auto step for the norm family
    double tol = 1e-10;          // residual ||f(x_k)||
    int max_iter = 200000;
    double inner_tol = 1e-13;
    int inner_max_iter = 500;
    Vector x0; // empty = origin

    /// Keep the Newton inner solve even when its sufficient conditions fail
    /// (probing use; the default falls back to the fixed-point inner).
    bool force_newton = false;
};

// ---------------------------------------------------------------------------
// Step-size rules
// ---------------------------------------------------------------------------

/// Euclidean optimal step alpha* = 1/(c kappa^2) = c/l^2 and its contraction
/// factor sqrt(1 - 1/kappa^2). Requires a p = 2 certificate.
struct EuclideanStep {
    double alpha;
    double factor;
};
EuclideanStep euclidean_optimal_step(const ContractionCertificate& cert);

/// Admissible Euclidean range (0, 2/(c kappa^2)); inside it Id + alpha f has
/// Lipschitz bound sqrt(1 - 2 alpha c + alpha^2 l^2) < 1.
std::pair<double, double> euclidean_step_range(const ContractionCertificate& cert);

/// Admissible range (0, 1/(c kappa (1 + kappa))) for p in {1, inf}.
std::pair<double, double> wp_step_range(const ContractionCertificate& cert);

/// Two-term series step (1/c)(1/(2 kappa^2) - 3/(8 kappa^3)), clamped into the
/// admissible range, with the series factor 1 - 1/(4 kappa^2) + 1/(8 kappa^3).
/// Below kappa = 2 the series regime does not apply: the midpoint of the range
/// is used and `series_fallback` is set.
struct WpStep {
    double alpha;
    double predicted_factor;
    bool series_fallback;
};
WpStep wp_optimal_step(const ContractionCertificate& cert);

/// Start-norm threshold for the Newton inner iteration:
/// 2 (1 + alpha c)(1 - alpha l) / (alpha (1 + alpha l)).
double newton_start_norm_bound(double alpha, double c, double ell);

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

struct SolveTrace {
    SolveStatus status = SolveStatus::MaxIter;
    double alpha = 0.0;
    std::string guarantee; // which step/factor rule produced the prediction
    double predicted_factor = std::numeric_limits<double>::quiet_NaN();

    std::vector<Vector> iterates;   // x_0 .. x_K
    std::vector<double> residuals;  // ||f(x_k)||
    std::vector<double> step_factors; // rho_k (vs x* when known, else displacement ratio)
    bool factors_vs_equilibrium = false;
    std::optional<Vector> equilibrium; // known x* (affine fields)

    std::vector<int> inner_iterations;            // per outer step (implicit)
    std::vector<std::vector<double>> inner_errors; // ||z_i - z_final|| per outer step
    std::vector<std::string> warnings;

    int iterations() const { return static_cast<int>(iterates.size()) - 1; }
    double final_residual() const { return residuals.empty() ? 0.0 : residuals.back(); }
    const Vector& final_point() const { return iterates.back(); }

    /// Largest per-step factor over steps measured away from the fixed point.
    double empirical_factor() const;
};

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

/// Forward step x_{k+1} = x_k + alpha f(x_k). Auto step picks the optimal
/// rule for the certificate's norm family (times 0.9 for empirical
/// certificates). A step outside the guaranteed range runs with a warning.
SolveTrace forward_solve(const VectorField& f, const ContractionCertificate& cert,
                         const SolverConfig& cfg);

/// Implicit Euler x_{k+1} = x_k + alpha f(x_{k+1}), outer contraction factor
/// (1 + alpha c)^-1 for any alpha > 0. Inner solve per cfg.method:
/// fixed-point (contraction factor alpha l, needs alpha l < 1) or Newton
/// (quadratic; affine fields solve exactly in one LU step).
SolveTrace implicit_solve(const VectorField& f, const ContractionCertificate& cert,
                          const SolverConfig& cfg);

/// Extra-gradient x_{k+1/2} = x_k + alpha f(x_k), x_{k+1} = x_k + alpha
/// f(x_{k+1/2}); per-step factor at most (1 + alpha^3 l^3)/(1 + alpha c).
/// Auto step alpha = 1/(2 c kappa sqrt(kappa)).
SolveTrace extragradient_solve(const VectorField& f, const ContractionCertificate& cert,
                               const SolverConfig& cfg);

/// max over random pairs of ||F(x) - F(y)|| / ||x - y||; a lower bound on the
/// Lipschitz constant of F on the box.
double empirical_contraction_factor(const std::function<Vector(const Vector&)>& map,
                                    std::size_t dim, const NormSpec& ns, int samples,
                                    std::uint64_t seed, const Box& box = Box{});

} // namespace cvf
