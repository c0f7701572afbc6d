#include "cvf/bench.hpp"

#include <cmath>
#include <ostream>

#include "cvf/io.hpp"
#include "cvf/solvers.hpp"
#include "cvf/sphere.hpp"

namespace cvf::bench {

Matrix conformal_system(double c, double kappa) {
    double w = c * std::sqrt(kappa * kappa - 1.0);
    Matrix a(2, 2);
    a(0, 0) = -c;
    a(0, 1) = w;
    a(1, 0) = -w;
    a(1, 1) = -c;
    return a;
}

Matrix column_dominant_system(double c, double kappa) {
    double ell = c * kappa;
    Matrix a(2, 2);
    a(0, 0) = -(c + ell) / 2.0;
    a(1, 0) = (ell - c) / 2.0;
    a(0, 1) = 0.0;
    a(1, 1) = -c;
    return a;
}

Matrix row_dominant_system(double c, double kappa) {
    return transpose(column_dominant_system(c, kappa));
}

namespace {

struct Row {
    double param;
    const char* method;
    double predicted;
    double empirical;
};

void emit(std::ostream& os, const Row& row) {
    os << io::format_double(row.param) << ',' << row.method << ','
       << io::format_double(row.predicted) << ',' << io::format_double(row.empirical) << '\n';
}

double map_factor(const VectorField& f, double alpha, const NormSpec& ns, std::uint64_t seed) {
    auto map = [&](const Vector& x) { return vadd(x, vscale(alpha, f(x))); };
    return empirical_contraction_factor(map, f.dim(), ns, 2000, seed);
}

} // namespace

void run_kappa_scaling(std::ostream& os, std::uint64_t seed) {
    os << "kappa,method,predicted,empirical\n";
    const double c = 1.0;
    const Vector offset{0.3, -0.7};

    for (double kappa : {2.0, 5.0, 10.0, 20.0, 50.0, 100.0}) {
        // Euclidean forward step at the optimal step size
        {
            VectorField f = VectorField::affine(conformal_system(c, kappa), offset);
            NormSpec two(NormOrder::Two);
            ContractionCertificate cert = certify(f, two, Box{}, 1, seed);
            EuclideanStep st = euclidean_optimal_step(cert);
            emit(os, {kappa, "forward-euclidean", st.factor,
                      map_factor(f, st.alpha, two, derive_seed(seed, 1))});
        }
        // weak-pairing forward step at the series step, both polyhedral norms
        {
            VectorField f = VectorField::affine(column_dominant_system(c, kappa), offset);
            NormSpec one(NormOrder::One);
            ContractionCertificate cert = certify(f, one, Box{}, 1, seed);
            WpStep st = wp_optimal_step(cert);
            emit(os, {kappa, "forward-wp-l1", st.predicted_factor,
                      map_factor(f, st.alpha, one, derive_seed(seed, 2))});
        }
        {
            VectorField f = VectorField::affine(row_dominant_system(c, kappa), offset);
            NormSpec inf(NormOrder::Inf);
            ContractionCertificate cert = certify(f, inf, Box{}, 1, seed);
            WpStep st = wp_optimal_step(cert);
            emit(os, {kappa, "forward-wp-linf", st.predicted_factor,
                      map_factor(f, st.alpha, inf, derive_seed(seed, 3))});
        }
        // extra-gradient at its auto step
        {
            VectorField f = VectorField::affine(column_dominant_system(c, kappa), offset);
            NormSpec one(NormOrder::One);
            ContractionCertificate cert = certify(f, one, Box{}, 1, seed);
            double alpha = 0.5 / (c * kappa * std::sqrt(kappa));
            double series = 1.0 - 3.0 / (8.0 * kappa * std::sqrt(kappa));
            auto eg = [&](const Vector& x) {
                Vector mid = vadd(x, vscale(alpha, f(x)));
                return vadd(x, vscale(alpha, f(mid)));
            };
            (void)cert;
            emit(os, {kappa, "extragradient", series,
                      empirical_contraction_factor(eg, 2, one, 2000, derive_seed(seed, 4))});
        }
        // implicit Euler at alpha = 0.9 / ell (fixed-point inner stays well-posed)
        {
            VectorField f = VectorField::affine(column_dominant_system(c, kappa), offset);
            NormSpec one(NormOrder::One);
            ContractionCertificate cert = certify(f, one, Box{}, 1, seed);
            SolverConfig cfg;
            cfg.method = SolveMethod::ImplicitNewton;
            cfg.alpha = 0.9 / cert.lipschitz;
            cfg.x0 = Vector{4.0, -3.0};
            cfg.max_iter = 400;
            SolveTrace trace = implicit_solve(f, cert, cfg);
            emit(os, {kappa, "implicit-euler", trace.predicted_factor, trace.empirical_factor()});
        }
    }
}

void run_conjectures(std::ostream& os, std::uint64_t seed) {
    os << "param,method,predicted,empirical\n";
    const double c = 1.0;
    const Vector offset{0.3, -0.7};

    // best extra-gradient factor over a step scan vs. the conjectured 1 - 1/kappa order
    for (double kappa : {2.0, 5.0, 10.0, 20.0, 50.0}) {
        VectorField f = VectorField::affine(column_dominant_system(c, kappa), offset);
        NormSpec one(NormOrder::One);
        double hi = 1.0 / (c * kappa * std::sqrt(kappa));
        double best = 2.0;
        for (int i = 1; i <= 40; ++i) {
            double alpha = hi * 10.0 * static_cast<double>(i) / 40.0;
            auto eg = [&](const Vector& x) {
                Vector mid = vadd(x, vscale(alpha, f(x)));
                return vadd(x, vscale(alpha, f(mid)));
            };
            best = std::min(best,
                            empirical_contraction_factor(eg, 2, one, 500, derive_seed(seed, i)));
        }
        emit(os, {kappa, "extragradient-best-scan", 1.0 - 1.0 / kappa, best});
    }

    // per-step factor of the sphere forward step for the attractor field
    {
        SpherePoint target(0.0, 0.0, 1.0);
        SphereField field = SphereField::attractor(target);
        for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(alpha * 100)));
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            double worst = 0.0;
            for (int i = 0; i < 500; ++i) {
                SpherePoint x(u(rng), u(rng), std::abs(u(rng)) + 0.1);
                SpherePoint y(u(rng), u(rng), std::abs(u(rng)) + 0.1);
                double before = sphere_dist(x, y);
                if (before < 1e-6) continue;
                SpherePoint xs = sphere_exp(x, SphereTangent(x, scale3(alpha, field(x).ambient())));
                SpherePoint ys = sphere_exp(y, SphereTangent(y, scale3(alpha, field(y).ambient())));
                worst = std::max(worst, sphere_dist(xs, ys) / before);
            }
            emit(os, {alpha, "sphere-forward-step", 1.0 - alpha, worst});
        }
    }

    // Newton inner convergence from starts far beyond the guaranteed ball
    {
        Vector d{1.0, 1.0};
        Matrix w(2, 2);
        w(0, 0) = -2.0;
        w(0, 1) = 0.5;
        w(1, 0) = -0.5;
        w(1, 1) = -2.0;
        VectorField net = VectorField::tanh_network(d, w, Vector{0.4, -0.3});
        NormSpec inf(NormOrder::Inf);
        ContractionCertificate cert = certify(net, inf, Box{-8.0, 8.0}, 300, seed);
        double alpha = 0.9 / cert.lipschitz;
        double bound = newton_start_norm_bound(alpha, cert.rate, cert.lipschitz);
        for (double mult : {1.0, 4.0, 16.0, 64.0}) {
            // scale the start until ||f(x0)|| is about mult * bound
            Vector x0{mult * bound, -mult * bound};
            SolverConfig cfg;
            cfg.method = SolveMethod::ImplicitNewton;
            cfg.alpha = alpha;
            cfg.x0 = x0;
            cfg.max_iter = 400;
            cfg.force_newton = true;
            SolveTrace trace = implicit_solve(net, cert, cfg);
            double converged = trace.status == SolveStatus::Converged ? 1.0 : 0.0;
            emit(os, {mult, "newton-far-start", 1.0, converged});
        }
    }
}

} // namespace cvf::bench
