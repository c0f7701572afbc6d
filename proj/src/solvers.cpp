#include "cvf/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace cvf {

const char* to_string(SolveMethod m) {
    switch (m) {
    case SolveMethod::Forward: return "forward";
    case SolveMethod::ImplicitFixedPoint: return "implicit-fixed-point";
    case SolveMethod::ImplicitNewton: return "implicit-newton";
    case SolveMethod::ExtraGradient: return "extragradient";
    }
    return "?";
}

const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max-iterations";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::InnerFailed: return "inner-failed";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Step rules
// ---------------------------------------------------------------------------

EuclideanStep euclidean_optimal_step(const ContractionCertificate& cert) {
    if (cert.ns.order() != NormOrder::Two)
        throw Error("euclidean step rule requires a p=2 certificate");
    double c = cert.rate, l = cert.lipschitz, k = cert.kappa;
    return EuclideanStep{c / (l * l), std::sqrt(std::max(0.0, 1.0 - 1.0 / (k * k)))};
}

std::pair<double, double> euclidean_step_range(const ContractionCertificate& cert) {
    if (cert.ns.order() != NormOrder::Two)
        throw Error("euclidean step rule requires a p=2 certificate");
    double c = cert.rate, l = cert.lipschitz;
    return {0.0, 2.0 * c / (l * l)};
}

std::pair<double, double> wp_step_range(const ContractionCertificate& cert) {
    if (cert.ns.order() == NormOrder::Two)
        throw Error("weak-pairing step rule requires a p in {1, inf} certificate");
    double c = cert.rate, l = cert.lipschitz;
    return {0.0, c / (l * (c + l))};
}

WpStep wp_optimal_step(const ContractionCertificate& cert) {
    auto range = wp_step_range(cert);
    double c = cert.rate, k = cert.kappa;
    double series_factor = 1.0 - 1.0 / (4.0 * k * k) + 1.0 / (8.0 * k * k * k);
    if (k < 2.0) {
        return WpStep{0.5 * range.second, series_factor, true};
    }
    double alpha = (1.0 / c) * (1.0 / (2.0 * k * k) - 3.0 / (8.0 * k * k * k));
    alpha = std::min(alpha, 0.999 * range.second);
    return WpStep{alpha, series_factor, false};
}

double newton_start_norm_bound(double alpha, double c, double ell) {
    return 2.0 * (1.0 + alpha * c) * (1.0 - alpha * ell) / (alpha * (1.0 + alpha * ell));
}

// ---------------------------------------------------------------------------
// Trace helpers
// ---------------------------------------------------------------------------

double SolveTrace::empirical_factor() const {
    if (step_factors.empty()) return std::numeric_limits<double>::quiet_NaN();
    double worst = 0.0;
    bool any = false;
    for (double r : step_factors) {
        if (!std::isfinite(r)) continue;
        worst = std::max(worst, r);
        any = true;
    }
    return any ? worst : std::numeric_limits<double>::quiet_NaN();
}

namespace {

struct Runner {
    const VectorField& f;
    const ContractionCertificate& cert;
    const SolverConfig& cfg;
    SolveTrace trace;
    Vector x;
    double initial_residual = 0.0;
    double initial_distance = 0.0;
    Vector x0;

    Runner(const VectorField& field, const ContractionCertificate& certificate,
           const SolverConfig& config)
        : f(field), cert(certificate), cfg(config) {
        x = cfg.x0.empty() ? Vector(f.dim(), 0.0) : cfg.x0;
        if (x.size() != f.dim()) throw DimensionError("start point dimension mismatch");
        x0 = x;

        if (f.kind() == VectorField::Kind::Affine) {
            // equilibrium by direct linear solve A x = -b
            Vector rhs = vscale(-1.0, *f.affine_offset());
            trace.equilibrium = solve(*f.affine_matrix(), rhs);
            trace.factors_vs_equilibrium = true;
            initial_distance = vec_norm(vsub(x, *trace.equilibrium), cert.ns);
        }
        push(x);
        initial_residual = trace.residuals.front();
    }

    void push(const Vector& xk) {
        trace.iterates.push_back(xk);
        trace.residuals.push_back(vec_norm(f(xk), cert.ns));
    }

    // one entry per step; NaN when the denominator is at rounding scale
    void record_factor(const Vector& prev, const Vector& next) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        if (trace.equilibrium) {
            double den = vec_norm(vsub(prev, *trace.equilibrium), cert.ns);
            double num = vec_norm(vsub(next, *trace.equilibrium), cert.ns);
            trace.step_factors.push_back(den >= 1e-6 * (1.0 + initial_distance) ? num / den : nan);
        } else if (trace.iterates.size() >= 2) {
            const Vector& before = trace.iterates[trace.iterates.size() - 2];
            double den = vec_norm(vsub(prev, before), cert.ns);
            double num = vec_norm(vsub(next, prev), cert.ns);
            trace.step_factors.push_back(den > 1e-14 ? num / den : nan);
        } else {
            trace.step_factors.push_back(nan);
        }
    }

    bool diverged(const Vector& xk, double residual) const {
        if (!all_finite(xk) || !std::isfinite(residual)) return true;
        if (residual > 1e6 * (initial_residual + 1.0)) return true;
        return vec_norm(vsub(xk, x0), cert.ns) > 1e6 * (1.0 + vec_norm(x0, cert.ns));
    }

    bool finished() {
        if (trace.residuals.back() <= cfg.tol) {
            trace.status = SolveStatus::Converged;
            return true;
        }
        if (diverged(trace.iterates.back(), trace.residuals.back())) {
            trace.status = SolveStatus::Diverged;
            return true;
        }
        if (trace.iterations() >= cfg.max_iter) {
            trace.status = SolveStatus::MaxIter;
            return true;
        }
        return false;
    }
};

double auto_safety(const ContractionCertificate& cert) {
    return cert.mode == CertificateMode::Empirical ? 0.9 : 1.0;
}

} // namespace

// ---------------------------------------------------------------------------
// Forward step
// ---------------------------------------------------------------------------

SolveTrace forward_solve(const VectorField& f, const ContractionCertificate& cert,
                         const SolverConfig& cfg) {
    Runner run(f, cert, cfg);
    SolveTrace& trace = run.trace;

    double c = cert.rate, l = cert.lipschitz;
    bool euclidean = cert.ns.order() == NormOrder::Two;

    if (cfg.alpha) {
        trace.alpha = *cfg.alpha;
        if (euclidean) {
            trace.guarantee = "forward-euclidean-range";
            double a = trace.alpha;
            trace.predicted_factor = std::sqrt(std::max(0.0, 1.0 - 2.0 * a * c + a * a * l * l));
            if (a <= 0.0 || a >= euclidean_step_range(cert).second)
                trace.warnings.push_back("step outside guaranteed range");
        } else {
            trace.guarantee = "forward-wp-range";
            // no closed-form factor away from the series step; range check only
            if (trace.alpha <= 0.0 || trace.alpha >= wp_step_range(cert).second)
                trace.warnings.push_back("step outside guaranteed range");
        }
    } else if (euclidean) {
        EuclideanStep st = euclidean_optimal_step(cert);
        trace.alpha = auto_safety(cert) * st.alpha;
        trace.guarantee = "forward-euclidean-optimal";
        trace.predicted_factor = st.factor;
    } else {
        WpStep st = wp_optimal_step(cert);
        trace.alpha = auto_safety(cert) * st.alpha;
        trace.guarantee = "forward-wp-series";
        trace.predicted_factor = st.predicted_factor;
        if (st.series_fallback) trace.warnings.push_back("series step regime requires kappa >= 2");
    }
    if (!(trace.alpha > 0.0)) throw Error("forward step requires alpha > 0");

    while (!run.finished()) {
        Vector next = vadd(run.x, vscale(trace.alpha, f(run.x)));
        run.record_factor(run.x, next);
        run.x = next;
        run.push(run.x);
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Implicit Euler
// ---------------------------------------------------------------------------

namespace {

struct InnerResult {
    Vector z;
    int iterations = 0;
    std::vector<double> errors; // ||z_i - z_final||
    bool ok = false;
};

InnerResult inner_fixed_point(const VectorField& f, const NormSpec& ns, const Vector& xk,
                              double alpha, double inner_tol, int inner_max_iter) {
    InnerResult res;
    std::vector<Vector> path;
    Vector z = xk;
    path.push_back(z);
    for (int i = 0; i < inner_max_iter; ++i) {
        Vector next = vadd(xk, vscale(alpha, f(z)));
        double delta = vec_norm(vsub(next, z), ns);
        z = std::move(next);
        path.push_back(z);
        if (!all_finite(z)) return res;
        if (delta <= inner_tol) {
            res.ok = true;
            break;
        }
    }
    if (!res.ok) return res;
    res.z = z;
    res.iterations = static_cast<int>(path.size()) - 1;
    for (const Vector& zi : path) res.errors.push_back(vec_norm(vsub(zi, z), ns));
    return res;
}

InnerResult inner_newton(const VectorField& f, const NormSpec& ns, const Vector& xk, double alpha,
                         double inner_tol, int inner_max_iter) {
    InnerResult res;
    std::vector<Vector> path;
    Vector z = xk;
    path.push_back(z);
    Matrix eye = Matrix::identity(f.dim());
    for (int i = 0; i < inner_max_iter; ++i) {
        Vector g = vsub(vsub(z, vscale(alpha, f(z))), xk); // g(z) - x_k
        if (vec_norm(g, ns) <= inner_tol) {
            res.ok = true;
            break;
        }
        Matrix jg = eye - alpha * f.jacobian(z);
        Vector step;
        try {
            step = solve(jg, g);
        } catch (const SingularMatrixError&) {
            return res;
        }
        z = vsub(z, step);
        path.push_back(z);
        if (!all_finite(z)) return res;
    }
    if (!res.ok) return res;
    res.z = z;
    res.iterations = static_cast<int>(path.size()) - 1;
    for (const Vector& zi : path) res.errors.push_back(vec_norm(vsub(zi, z), ns));
    return res;
}

} // namespace

SolveTrace implicit_solve(const VectorField& f, const ContractionCertificate& cert,
                          const SolverConfig& cfg) {
    if (cfg.method != SolveMethod::ImplicitFixedPoint && cfg.method != SolveMethod::ImplicitNewton)
        throw Error("implicit_solve requires an implicit method");
    Runner run(f, cert, cfg);
    SolveTrace& trace = run.trace;

    double c = cert.rate, l = cert.lipschitz;
    trace.alpha = cfg.alpha.value_or(1.0 / c);
    if (!(trace.alpha > 0.0)) throw Error("implicit step requires alpha > 0");
    double alpha = trace.alpha;
    trace.guarantee = "implicit-euler-factor";
    trace.predicted_factor = 1.0 / (1.0 + alpha * c);

    bool newton = cfg.method == SolveMethod::ImplicitNewton;
    bool affine = f.kind() == VectorField::Kind::Affine;

    if (alpha * l >= 1.0) {
        trace.warnings.push_back("alpha * lipschitz >= 1: inner iteration not guaranteed");
        if (newton && !affine && !cfg.force_newton) {
            newton = false;
            trace.warnings.push_back("newton preconditions failed; using fixed-point inner");
        }
    } else if (newton && !affine) {
        double bound = newton_start_norm_bound(alpha, c, l);
        if (run.initial_residual > bound && !cfg.force_newton) {
            newton = false;
            trace.warnings.push_back("newton start-norm condition failed; using fixed-point inner");
        }
    }

    // Newton on an affine field is a single linear solve; factor it once.
    std::optional<LuFactors> affine_lu;
    if (newton && affine)
        affine_lu = lu_factor(Matrix::identity(f.dim()) - alpha * (*f.affine_matrix()));

    while (!run.finished()) {
        InnerResult inner;
        if (affine_lu) {
            Vector rhs = vadd(run.x, vscale(alpha, *f.affine_offset()));
            inner.z = lu_solve(*affine_lu, rhs);
            inner.iterations = 1;
            inner.errors = {vec_norm(vsub(run.x, inner.z), cert.ns), 0.0};
            inner.ok = true;
        } else if (newton) {
            inner = inner_newton(f, cert.ns, run.x, alpha, cfg.inner_tol, cfg.inner_max_iter);
        } else {
            inner = inner_fixed_point(f, cert.ns, run.x, alpha, cfg.inner_tol, cfg.inner_max_iter);
        }
        if (!inner.ok) {
            trace.status = SolveStatus::InnerFailed;
            trace.warnings.push_back("inner solve exhausted its budget");
            return trace;
        }
        trace.inner_iterations.push_back(inner.iterations);
        trace.inner_errors.push_back(std::move(inner.errors));
        run.record_factor(run.x, inner.z);
        run.x = inner.z;
        run.push(run.x);
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Extra-gradient
// ---------------------------------------------------------------------------

SolveTrace extragradient_solve(const VectorField& f, const ContractionCertificate& cert,
                               const SolverConfig& cfg) {
    Runner run(f, cert, cfg);
    SolveTrace& trace = run.trace;

    double c = cert.rate, l = cert.lipschitz, k = cert.kappa;
    double range_hi = 1.0 / (c * k * std::sqrt(k));
    if (cfg.alpha) {
        trace.alpha = *cfg.alpha;
        if (trace.alpha <= 0.0 || trace.alpha > range_hi)
            trace.warnings.push_back("step outside guaranteed range");
        trace.guarantee = "extragradient-cubic-bound";
    } else {
        trace.alpha = auto_safety(cert) * 0.5 * range_hi;
        trace.guarantee = "extragradient-series";
    }
    if (!(trace.alpha > 0.0)) throw Error("extra-gradient step requires alpha > 0");
    double a = trace.alpha;
    trace.predicted_factor = (1.0 + a * a * a * l * l * l) / (1.0 + a * c);

    while (!run.finished()) {
        Vector mid = vadd(run.x, vscale(a, f(run.x)));
        Vector next = vadd(run.x, vscale(a, f(mid)));
        run.record_factor(run.x, next);
        run.x = next;
        run.push(run.x);
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Empirical Lipschitz sampling
// ---------------------------------------------------------------------------

double empirical_contraction_factor(const std::function<Vector(const Vector&)>& map,
                                    std::size_t dim, const NormSpec& ns, int samples,
                                    std::uint64_t seed, const Box& box) {
    if (samples < 2) throw Error("empirical_contraction_factor requires samples >= 2");
    auto ratios = parallel_map<double>(static_cast<std::size_t>(samples), [&](std::size_t i) {
        auto rng = make_rng(derive_seed(seed, i));
        Vector x = sample_box(rng, dim, box);
        Vector y = sample_box(rng, dim, box);
        double den = vec_norm(vsub(x, y), ns);
        if (den <= 1e-12) return 0.0;
        return vec_norm(vsub(map(x), map(y)), ns) / den;
    });
    double worst = 0.0;
    for (double r : ratios) worst = std::max(worst, r);
    return worst;
}

} // namespace cvf
