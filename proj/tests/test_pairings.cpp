#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cvf/pairings.hpp"

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

Matrix test_weight() {
    Matrix r(2, 2);
    r(0, 0) = 2.0;
    r(0, 1) = 1.0;
    r(1, 0) = 0.0;
    r(1, 1) = 1.0;
    return r;
}

std::vector<WeakPairing> builtin_pairings(std::size_t dim) {
    std::vector<WeakPairing> out;
    for (NormOrder p : {NormOrder::One, NormOrder::Two, NormOrder::Inf})
        out.push_back(WeakPairing::for_norm(NormSpec(p), dim));
    if (dim == 2) {
        Matrix r = test_weight();
        out.push_back(WeakPairing::for_norm(NormSpec::with_weight(NormOrder::One, r), 2));
        out.push_back(WeakPairing::for_norm(NormSpec::with_weight(NormOrder::Inf, r), 2));
        Matrix p(2, 2);
        p(0, 0) = 4.0;
        p(0, 1) = 1.0;
        p(1, 0) = 1.0;
        p(1, 1) = 9.0;
        out.push_back(WeakPairing::for_norm(NormSpec::with_metric(p), 2));
    }
    return out;
}

} // namespace

TEST_CASE("pairing evaluation") {
    WeakPairing one = WeakPairing::for_norm(NormSpec(NormOrder::One), 2);
    CHECK(wp_eval(Vector{1.0, 2.0}, Vector{3.0, -4.0}, one) == doctest::Approx(-7.0));
    CHECK(wp_eval(Vector{3.0, -4.0}, Vector{3.0, -4.0}, one) == doctest::Approx(49.0));

    WeakPairing inf = WeakPairing::for_norm(NormSpec(NormOrder::Inf), 2);
    CHECK(wp_eval(Vector{1.0, 3.0}, Vector{2.0, -2.0}, inf) == doctest::Approx(2.0));

    Matrix p(2, 2);
    p(0, 0) = 4.0;
    p(1, 1) = 9.0;
    WeakPairing two = WeakPairing::for_norm(NormSpec::with_metric(p), 2);
    CHECK(wp_eval(Vector{1.0, 1.0}, Vector{1.0, -1.0}, two) == doctest::Approx(4.0 - 9.0));

    CHECK_THROWS_AS(wp_eval(Vector{1.0}, Vector{1.0, 2.0}, one), DimensionError);
}

TEST_CASE("zero scaling is exact") {
    for (const auto& wp : builtin_pairings(3)) {
        Vector x{0.4, -1.7, 0.2}, y{1.0, 0.5, -2.0};
        if (wp.dim != 3) continue;
        CHECK(wp_eval(vscale(0.0, x), y, wp) == 0.0);
        CHECK(wp_eval(x, vscale(0.0, y), wp) == 0.0);
        CHECK(wp_eval(vscale(-1.0, x), vscale(-1.0, y), wp) ==
              doctest::Approx(wp_eval(x, y, wp)).epsilon(1e-15));
    }
}

TEST_CASE("axiom sweep stays within tolerance") {
    for (std::size_t dim : {2, 3, 5}) {
        for (const auto& wp : builtin_pairings(dim)) {
            if (wp.dim != dim) continue;
            AxiomReport rep = wp_axiom_check(wp, 10000, 123);
            CAPTURE(to_string(rep.p));
            CAPTURE(rep.weighted);
            CHECK(rep.worst_subadditivity <= 1e-9);
            CHECK(rep.worst_homogeneity <= 1e-9);
            CHECK(rep.min_quadratic > 0.0);
            CHECK(rep.worst_norm_compat <= 1e-9);
            CHECK(rep.worst_cauchy_schwarz <= 1e-9);
            CHECK(rep.min_deimling >= -1e-6);
        }
    }
}

TEST_CASE("axiom sweep is deterministic") {
    WeakPairing wp = WeakPairing::for_norm(NormSpec(NormOrder::One), 3);
    AxiomReport a = wp_axiom_check(wp, 2000, 7);
    AxiomReport b = wp_axiom_check(wp, 2000, 7);
    CHECK(a.worst_subadditivity == b.worst_subadditivity);
    CHECK(a.min_deimling == b.min_deimling);
    CHECK(a.witness_cs_x == b.witness_cs_x);
}

TEST_CASE("deimling margins") {
    WeakPairing one = WeakPairing::for_norm(NormSpec(NormOrder::One), 2);
    CHECK(std::abs(deimling_margin(Vector{1.0, 1.0}, Vector{1.0, 1.0}, one)) < 1e-6);
    CHECK(deimling_margin(Vector{1.0, 2.0}, Vector{3.0, -4.0}, one) >= -1e-9);
    CHECK(std::abs(deimling_margin(Vector{0.0, 0.0}, Vector{1.0, -2.0}, one)) < 1e-12);
    CHECK_THROWS_AS(deimling_margin(Vector{1.0, 0.0}, Vector{0.0, 0.0}, one), Error);
}

TEST_CASE("lumer sup reproduces the measure") {
    SamplerConfig sampler{2000, 99};

    WeakPairing one = WeakPairing::for_norm(NormSpec(NormOrder::One), 2);
    CHECK(lumer_sup(Matrix::identity(2), one, sampler) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(lumer_sup(example_matrix(), one, sampler) == doctest::Approx(-0.5).epsilon(2e-4));

    // symmetric p = 2: the sup equals the largest eigenvalue
    auto rng = make_rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Matrix g(4, 4);
    for (double& v : g.data) v = u(rng);
    Matrix s = g + transpose(g);
    WeakPairing two = WeakPairing::for_norm(NormSpec(NormOrder::Two), 4);
    CHECK(lumer_sup(s, two, sampler) ==
          doctest::Approx(lambda_max_symmetric(s)).epsilon(1e-8));
}

TEST_CASE("lumer sup is bounded by the measure and candidates reach it") {
    auto rng = make_rng(55);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    SamplerConfig sampler{500, 5};
    for (int rep = 0; rep < 12; ++rep) {
        std::size_t n = 2 + rep % 6;
        Matrix a(n, n);
        for (double& v : a.data) v = u(rng);
        for (NormOrder p : {NormOrder::One, NormOrder::Two, NormOrder::Inf}) {
            WeakPairing wp = WeakPairing::for_norm(NormSpec(p), n);
            double mu = matrix_measure(a, NormSpec(p));
            double sup = lumer_sup(a, wp, sampler);
            CHECK(sup <= mu + 1e-9);
            if (p == NormOrder::Two)
                CHECK(sup >= mu - 1e-8);
            else
                CHECK(sup >= mu - 1e-4);
        }
    }
}

TEST_CASE("weighted pairings stay norm-compatible") {
    Matrix r = test_weight();
    for (NormOrder p : {NormOrder::One, NormOrder::Inf}) {
        NormSpec ns = NormSpec::with_weight(p, r);
        WeakPairing wp = WeakPairing::for_norm(ns, 2);
        auto rng = make_rng(77);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int i = 0; i < 200; ++i) {
            Vector x{u(rng), u(rng)};
            double n = vec_norm(x, ns);
            CHECK(wp_eval(x, x, wp) == doctest::Approx(n * n).epsilon(1e-12));
        }
    }
}

TEST_CASE("weighted lumer sup matches the weighted measure") {
    Matrix r = test_weight();
    Matrix a = example_matrix();
    SamplerConfig sampler{2000, 13};
    for (NormOrder p : {NormOrder::One, NormOrder::Inf}) {
        NormSpec ns = NormSpec::with_weight(p, r);
        WeakPairing wp = WeakPairing::for_norm(ns, 2);
        double mu = matrix_measure(a, ns);
        double sup = lumer_sup(a, wp, sampler);
        CHECK(sup <= mu + 1e-9);
        CHECK(sup >= mu - 1e-4);
    }
}
