#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cvf/bench.hpp"
#include "cvf/solvers.hpp"

using namespace cvf;

namespace {

Matrix example_matrix() {
    Matrix a(2, 2);
    a(0, 0) = -10.0;
    a(0, 1) = 2.5;
    a(1, 0) = 9.0;
    a(1, 1) = -3.0;
    return a;
}

VectorField example_field() { return VectorField::affine(example_matrix(), Vector{-19.0, 20.0}); }

VectorField neg_identity(std::size_t n) {
    return VectorField::affine(-1.0 * Matrix::identity(n), Vector(n, 0.0));
}

ContractionCertificate cert_of(const VectorField& f, NormOrder p) {
    return certify(f, NormSpec(p), Box{}, 50, 0);
}

ContractionCertificate synthetic_cert(NormOrder p, double c, double ell) {
    ContractionCertificate cert;
    cert.ns = NormSpec(p);
    cert.rate = c;
    cert.lipschitz = ell;
    cert.kappa = ell / c;
    cert.mode = CertificateMode::ExactAffine;
    return cert;
}

} // namespace

TEST_CASE("euclidean step rules") {
    auto st = euclidean_optimal_step(synthetic_cert(NormOrder::Two, 1.0, 1.0));
    CHECK(st.alpha == doctest::Approx(1.0));
    CHECK(st.factor == doctest::Approx(0.0));

    st = euclidean_optimal_step(synthetic_cert(NormOrder::Two, 1.0, 2.0));
    CHECK(st.alpha == doctest::Approx(0.25));
    CHECK(st.factor == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));

    st = euclidean_optimal_step(synthetic_cert(NormOrder::Two, 0.5, 5.0));
    CHECK(st.alpha == doctest::Approx(0.02));
    CHECK(st.factor == doctest::Approx(std::sqrt(1.0 - 1.0 / 100.0)).epsilon(1e-12));

    auto range = euclidean_step_range(synthetic_cert(NormOrder::Two, 1.0, 1.0));
    CHECK(range.second == doctest::Approx(2.0));
    range = euclidean_step_range(synthetic_cert(NormOrder::Two, 0.5, 19.0));
    CHECK(range.second == doctest::Approx(1.0 / 361.0).epsilon(1e-12));

    // the Lipschitz bound reaches one exactly at the range endpoint
    double c = 1.0, l = 2.0, a = 2.0 * c / (l * l);
    CHECK(std::sqrt(1.0 - 2.0 * a * c + a * a * l * l) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(euclidean_optimal_step(synthetic_cert(NormOrder::One, 1.0, 2.0)), Error);
}

TEST_CASE("weak-pairing step rules") {
    auto range = wp_step_range(synthetic_cert(NormOrder::One, 0.5, 19.0));
    CHECK(range.second == doctest::Approx(0.5 / (19.0 * 19.5)).epsilon(1e-12));
    CHECK(range.second == doctest::Approx(1.3495e-3).epsilon(1e-4));

    range = wp_step_range(synthetic_cert(NormOrder::Inf, 1.0, 1.0));
    CHECK(range.second == doctest::Approx(0.5));
    range = wp_step_range(synthetic_cert(NormOrder::One, 1.0, 2.0));
    CHECK(range.second == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    CHECK_THROWS_AS(wp_step_range(synthetic_cert(NormOrder::Two, 1.0, 2.0)), Error);
}

TEST_CASE("weak-pairing optimal step series") {
    auto st = wp_optimal_step(synthetic_cert(NormOrder::One, 1.0, 10.0));
    CHECK(st.alpha == doctest::Approx(1.0 / 200.0 - 3.0 / 8000.0).epsilon(1e-12));
    CHECK(st.alpha == doctest::Approx(4.625e-3).epsilon(1e-10));
    CHECK(st.predicted_factor ==
          doctest::Approx(1.0 - 1.0 / 400.0 + 1.0 / 8000.0).epsilon(1e-12));
    CHECK(st.predicted_factor == doctest::Approx(0.997625).epsilon(1e-10));
    CHECK_FALSE(st.series_fallback);

    // the worked example: inside the admissible range
    auto paper = wp_optimal_step(synthetic_cert(NormOrder::One, 0.5, 19.0));
    CHECK(paper.alpha == doctest::Approx(6.789e-4).epsilon(1e-3));
    CHECK(paper.alpha < wp_step_range(synthetic_cert(NormOrder::One, 0.5, 19.0)).second);

    // kappa below the series regime: midpoint fallback
    auto fallback = wp_optimal_step(synthetic_cert(NormOrder::One, 1.0, 1.0));
    CHECK(fallback.series_fallback);
    CHECK(fallback.alpha == doctest::Approx(0.25));
}

TEST_CASE("forward solve basics") {
    // one-step convergence for f = -x at alpha = 1
    VectorField neg = neg_identity(1);
    SolverConfig cfg;
    cfg.alpha = 1.0;
    cfg.x0 = Vector{7.0};
    SolveTrace trace = forward_solve(neg, cert_of(neg, NormOrder::Two), cfg);
    CHECK(trace.status == SolveStatus::Converged);
    CHECK(trace.iterations() == 1);
    CHECK(trace.final_point()[0] == doctest::Approx(0.0));

    // worked example at alpha = 1e-3 lands on the equilibrium
    VectorField f = example_field();
    SolverConfig cfg2;
    cfg2.alpha = 1e-3;
    cfg2.tol = 1e-11;
    cfg2.x0 = Vector{0.0, 0.0};
    SolveTrace t2 = forward_solve(f, cert_of(f, NormOrder::One), cfg2);
    CHECK(t2.status == SolveStatus::Converged);
    CHECK(t2.final_point()[0] == doctest::Approx(-14.0 / 15.0).epsilon(1e-8));
    CHECK(t2.final_point()[1] == doctest::Approx(58.0 / 15.0).epsilon(1e-8));
    REQUIRE(t2.equilibrium.has_value());
    CHECK((*t2.equilibrium)[0] == doctest::Approx(-14.0 / 15.0).epsilon(1e-12));

    // auto step on the worked example converges too
    SolverConfig cfg3;
    cfg3.x0 = Vector{0.0, 0.0};
    SolveTrace t3 = forward_solve(f, cert_of(f, NormOrder::One), cfg3);
    CHECK(t3.status == SolveStatus::Converged);
    CHECK(t3.guarantee == "forward-wp-series");

    // the 2-norm route is refused upstream
    CHECK_THROWS_AS(cert_of(f, NormOrder::Two), NotContractiveError);
}

TEST_CASE("euclidean factor bound across the admissible range") {
    NormSpec two(NormOrder::Two);

    // conformal instance: the bound is met with equality at every step size
    for (double kappa : {2.0, 10.0}) {
        VectorField f = VectorField::affine(bench::conformal_system(1.0, kappa), Vector{0.5, 0.2});
        ContractionCertificate cert = cert_of(f, NormOrder::Two);
        double c = cert.rate, l = cert.lipschitz;
        auto range = euclidean_step_range(cert);
        for (int i = 1; i <= 8; ++i) {
            double alpha = range.second * static_cast<double>(i) / 9.0;
            auto map = [&](const Vector& x) { return vadd(x, vscale(alpha, f(x))); };
            double emp = empirical_contraction_factor(map, 2, two, 300, 42);
            double bound = std::sqrt(1.0 - 2.0 * alpha * c + alpha * alpha * l * l);
            CHECK(std::abs(emp - bound) < 1e-9);
        }
    }

    // random symmetric negative-definite instances stay below the bound
    auto rng = make_rng(2025);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 6; ++rep) {
        Matrix g(3, 3);
        for (double& v : g.data) v = u(rng);
        Matrix s = g + transpose(g);
        double shift = -lambda_max_symmetric(s) - 0.4;
        Matrix a = s + shift * Matrix::identity(3);
        VectorField f = VectorField::affine(a, Vector{0.1, -0.2, 0.3});
        ContractionCertificate cert = cert_of(f, NormOrder::Two);
        auto range = euclidean_step_range(cert);
        for (int i = 1; i <= 5; ++i) {
            double alpha = range.second * static_cast<double>(i) / 6.0;
            auto map = [&](const Vector& x) { return vadd(x, vscale(alpha, f(x))); };
            double emp = empirical_contraction_factor(map, 3, two, 300, 7);
            double bound = std::sqrt(1.0 - 2.0 * alpha * cert.rate +
                                     alpha * alpha * cert.lipschitz * cert.lipschitz);
            CHECK(emp <= bound + 1e-9);
            CHECK(emp < 1.0);
        }
    }
}

TEST_CASE("weak-pairing range guarantee on the worked example") {
    VectorField f = example_field();
    ContractionCertificate cert = cert_of(f, NormOrder::One);
    NormSpec one(NormOrder::One);
    auto range = wp_step_range(cert);

    for (int i = 1; i <= 10; ++i) {
        double alpha = range.second * static_cast<double>(i) / 11.0;
        auto map = [&](const Vector& x) { return vadd(x, vscale(alpha, f(x))); };
        double emp = empirical_contraction_factor(map, 2, one, 400, 3);
        CHECK(emp < 1.0);
        // closed-form cross-check for the affine map
        Matrix step = Matrix::identity(2) + alpha * example_matrix();
        double exact = mat_norm(step, one);
        CHECK(emp <= exact + 1e-12);
        CHECK(emp >= exact - 5e-3);
    }

    // expansion becomes observable once the diagonal flips sign: the map
    // stays a 1-norm contraction for every alpha < 2/19
    double crossing = 2.0 / 19.0;
    Matrix below = Matrix::identity(2) + (0.99 * crossing) * example_matrix();
    Matrix above = Matrix::identity(2) + (1.05 * crossing) * example_matrix();
    CHECK(mat_norm(below, one) < 1.0);
    CHECK(mat_norm(above, one) >= 1.0);
    auto expanding_map = [&](const Vector& x) {
        return vadd(x, vscale(1.05 * crossing, f(x)));
    };
    CHECK(empirical_contraction_factor(expanding_map, 2, one, 2000, 5) >= 1.0);
}

TEST_CASE("forward solve warns outside the guaranteed range") {
    VectorField f = example_field();
    ContractionCertificate cert = cert_of(f, NormOrder::One);
    SolverConfig cfg;
    cfg.alpha = 10.0 * wp_step_range(cert).second;
    cfg.x0 = Vector{1.0, 1.0};
    SolveTrace trace = forward_solve(f, cert, cfg);
    REQUIRE(!trace.warnings.empty());
    CHECK(trace.warnings.front() == "step outside guaranteed range");
    CHECK(trace.status == SolveStatus::Converged); // still contracting at this step

    // a genuinely expanding step diverges
    SolverConfig cfg2;
    cfg2.alpha = 0.5;
    cfg2.x0 = Vector{1.0, 1.0};
    cfg2.max_iter = 2000;
    SolveTrace t2 = forward_solve(f, cert, cfg2);
    CHECK(t2.status == SolveStatus::Diverged);
}

TEST_CASE("implicit euler on affine fields") {
    VectorField neg = neg_identity(1);
    ContractionCertificate cert = cert_of(neg, NormOrder::Two);

    SolverConfig cfg;
    cfg.method = SolveMethod::ImplicitNewton;
    cfg.alpha = 1.0;
    cfg.x0 = Vector{8.0};
    cfg.tol = 1e-12;
    SolveTrace trace = implicit_solve(neg, cert, cfg);
    CHECK(trace.status == SolveStatus::Converged);
    REQUIRE(trace.iterates.size() >= 4);
    CHECK(trace.iterates[1][0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(trace.iterates[2][0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(trace.iterates[3][0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(trace.predicted_factor == doctest::Approx(0.5));

    // alpha = 10: factor 1/11 per step
    SolverConfig cfg10 = cfg;
    cfg10.alpha = 10.0;
    SolveTrace t10 = implicit_solve(neg, cert, cfg10);
    CHECK(t10.iterates[1][0] == doctest::Approx(8.0 / 11.0).epsilon(1e-14));
    CHECK(t10.empirical_factor() == doctest::Approx(1.0 / 11.0).epsilon(1e-9));

    // unconditional stability on the worked example
    VectorField f = example_field();
    ContractionCertificate fcert = cert_of(f, NormOrder::One);
    for (double alpha : {0.1, 1.0, 10.0}) {
        SolverConfig c2;
        c2.method = SolveMethod::ImplicitNewton;
        c2.alpha = alpha;
        c2.x0 = Vector{5.0, -5.0};
        SolveTrace t2 = implicit_solve(f, fcert, c2);
        CHECK(t2.status == SolveStatus::Converged);
        CHECK(t2.empirical_factor() <= 1.0 / (1.0 + alpha * fcert.rate) + 1e-9);
    }
}

TEST_CASE("fixed-point inner iteration contracts at alpha * ell") {
    VectorField f = example_field();
    ContractionCertificate cert = cert_of(f, NormOrder::One);
    double alpha = 0.05; // alpha * ell = 0.95 < 1
    SolverConfig cfg;
    cfg.method = SolveMethod::ImplicitFixedPoint;
    cfg.alpha = alpha;
    cfg.x0 = Vector{3.0, 3.0};
    cfg.max_iter = 4000;
    SolveTrace trace = implicit_solve(f, cert, cfg);
    CHECK(trace.status == SolveStatus::Converged);
    CHECK(trace.empirical_factor() <= 1.0 / (1.0 + alpha * cert.rate) + 1e-9);

    double rate_bound = alpha * cert.lipschitz;
    REQUIRE(!trace.inner_errors.empty());
    int measured = 0;
    for (const auto& errs : trace.inner_errors) {
        for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
            if (errs[i] < 1e-10) break;
            CHECK(errs[i + 1] <= rate_bound * errs[i] + 1e-9);
            ++measured;
        }
    }
    CHECK(measured > 10);

    // alpha * ell >= 1 makes the fixed-point inner fail
    SolverConfig bad;
    bad.method = SolveMethod::ImplicitFixedPoint;
    bad.alpha = 0.2; // alpha * ell = 3.8
    bad.x0 = Vector{1.0, 1.0};
    SolveTrace tb = implicit_solve(f, cert, bad);
    CHECK(tb.status == SolveStatus::InnerFailed);
    CHECK(!tb.warnings.empty());
}

TEST_CASE("newton start-norm bound") {
    CHECK(newton_start_norm_bound(0.1, 0.5, 1.0) == doctest::Approx(17.18).epsilon(1e-3));
    CHECK(newton_start_norm_bound(0.1, 0.5, 1.0) ==
          doctest::Approx(2.0 * 1.05 * 0.9 / (0.1 * 1.1)).epsilon(1e-12));
}

TEST_CASE("newton inner converges quadratically on a nonlinear field") {
    // strongly curved scalar network: f(x) = -x - 8 tanh(x) + 1
    Vector d{1.0};
    Matrix w(1, 1);
    w(0, 0) = -8.0;
    VectorField f = VectorField::tanh_network(d, w, Vector{1.0});
    NormSpec two(NormOrder::Two);
    ContractionCertificate cert = certify(f, two, Box{-6.0, 6.0}, 400, 3);

    double alpha = 0.95 / cert.lipschitz;
    SolverConfig cfg;
    cfg.method = SolveMethod::ImplicitNewton;
    cfg.alpha = alpha;
    cfg.x0 = Vector{0.0};
    cfg.inner_tol = 1e-15;
    cfg.max_iter = 300;
    SolveTrace trace = implicit_solve(f, cert, cfg);
    CHECK(trace.status == SolveStatus::Converged);
    for (const auto& w2 : trace.warnings) CHECK(w2.find("fixed-point") == std::string::npos);

    // fitted exponent of log e_{i+1} vs log e_i over the last usable steps
    bool fitted = false;
    for (const auto& errs : trace.inner_errors) {
        std::vector<double> usable;
        for (double e : errs)
            if (e > 1e-13) usable.push_back(e);
        if (usable.size() < 4) continue;
        std::size_t m = usable.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int npts = 0;
        for (std::size_t i = m - 4; i + 1 < m; ++i) {
            double lx = std::log(usable[i]), ly = std::log(usable[i + 1]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++npts;
        }
        double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
        CHECK(slope >= 1.9);
        fitted = true;
        break;
    }
    CHECK(fitted);
}

TEST_CASE("newton falls back to the fixed-point inner when its ball is missed") {
    Vector d{1.0};
    Matrix w(1, 1);
    w(0, 0) = -8.0;
    VectorField f = VectorField::tanh_network(d, w, Vector{1.0});
    ContractionCertificate cert = certify(f, NormSpec(NormOrder::Two), Box{-6.0, 6.0}, 400, 3);

    SolverConfig cfg;
    cfg.method = SolveMethod::ImplicitNewton;
    cfg.alpha = 0.95 / cert.lipschitz;
    cfg.x0 = Vector{40.0}; // far start: ||f(x0)|| above the guaranteed ball
    cfg.max_iter = 2000;
    SolveTrace trace = implicit_solve(f, cert, cfg);
    bool fell_back = false;
    for (const auto& msg : trace.warnings)
        if (msg.find("fixed-point") != std::string::npos) fell_back = true;
    CHECK(fell_back);
    CHECK(trace.status == SolveStatus::Converged);
}

TEST_CASE("extra-gradient factors") {
    VectorField neg = neg_identity(1);
    ContractionCertificate cert = cert_of(neg, NormOrder::Two);

    SolverConfig cfg;
    cfg.method = SolveMethod::ExtraGradient;
    cfg.alpha = 0.5;
    cfg.x0 = Vector{8.0};
    SolveTrace trace = extragradient_solve(neg, cert, cfg);
    CHECK(trace.status == SolveStatus::Converged);
    CHECK(trace.predicted_factor == doctest::Approx(0.75).epsilon(1e-15));
    for (double r : trace.step_factors)
        if (std::isfinite(r)) CHECK(r == doctest::Approx(0.75).epsilon(1e-13));

    // auto step for kappa = 1 is 0.5
    SolverConfig auto_cfg;
    auto_cfg.method = SolveMethod::ExtraGradient;
    auto_cfg.x0 = Vector{8.0};
    SolveTrace ta = extragradient_solve(neg, cert, auto_cfg);
    CHECK(ta.alpha == doctest::Approx(0.5).epsilon(1e-12));

    // worked example at the auto step
    VectorField f = example_field();
    ContractionCertificate fcert = cert_of(f, NormOrder::One);
    SolverConfig pcfg;
    pcfg.method = SolveMethod::ExtraGradient;
    pcfg.x0 = Vector{0.0, 0.0};
    SolveTrace tp = extragradient_solve(f, fcert, pcfg);
    CHECK(tp.alpha == doctest::Approx(1.0 / (2.0 * 0.5 * 38.0 * std::sqrt(38.0))).epsilon(1e-12));
    CHECK(tp.alpha == doctest::Approx(4.269e-3).epsilon(1e-3));
    CHECK(tp.status == SolveStatus::Converged);
    double bound = tp.predicted_factor;
    for (double r : tp.step_factors)
        if (std::isfinite(r)) CHECK(r <= bound + 1e-9);

    // bound holds for every step on further affine instances
    for (double kappa : {2.0, 10.0}) {
        VectorField g = VectorField::affine(bench::column_dominant_system(1.0, kappa),
                                            Vector{0.4, -0.8});
        ContractionCertificate gc = cert_of(g, NormOrder::One);
        SolverConfig gcfg;
        gcfg.method = SolveMethod::ExtraGradient;
        gcfg.x0 = Vector{3.0, -2.0};
        SolveTrace tg = extragradient_solve(g, gc, gcfg);
        CHECK(tg.status == SolveStatus::Converged);
        for (double r : tg.step_factors)
            if (std::isfinite(r)) CHECK(r <= tg.predicted_factor + 1e-9);
    }
}

TEST_CASE("empirical contraction factor") {
    NormSpec two(NormOrder::Two);
    auto vanish = [](const Vector& x) { return Vector(x.size(), 0.0); };
    CHECK(empirical_contraction_factor(vanish, 2, two, 100, 0) == doctest::Approx(0.0));

    auto doubling = [](const Vector& x) { return vscale(2.0, x); };
    CHECK(empirical_contraction_factor(doubling, 2, two, 100, 0) ==
          doctest::Approx(2.0).epsilon(1e-12));

    VectorField f = example_field();
    double alpha = 1e-3;
    auto step_map = [&](const Vector& x) { return vadd(x, vscale(alpha, f(x))); };
    NormSpec one(NormOrder::One);
    double emp = empirical_contraction_factor(step_map, 2, one, 3000, 9);
    double exact = mat_norm(Matrix::identity(2) + alpha * example_matrix(), one);
    CHECK(emp > 0.0);
    CHECK(emp < 1.0);
    CHECK(emp <= exact + 1e-12);
    CHECK(emp >= exact - 5e-3);

    CHECK_THROWS_AS(empirical_contraction_factor(vanish, 2, two, 1, 0), Error);
}

TEST_CASE("solves are deterministic") {
    VectorField f = example_field();
    ContractionCertificate cert = cert_of(f, NormOrder::One);
    SolverConfig cfg;
    cfg.x0 = Vector{0.0, 0.0};
    SolveTrace a = forward_solve(f, cert, cfg);
    SolveTrace b = forward_solve(f, cert, cfg);
    CHECK(a.iterates.back() == b.iterates.back());
    CHECK(a.residuals == b.residuals);
}
