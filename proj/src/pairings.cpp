#include "cvf/pairings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvf {

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double directional_quotient(const Vector& y, const Vector& x, const NormSpec& ns, double h_min) {
    double q = 0.0;
    double ny = vec_norm(y, ns);
    double h = 0.1;
    while (true) {
        q = (vec_norm(vadd(y, vscale(h, x)), ns) - ny) / h;
        if (h <= h_min) break;
        h *= 0.5;
    }
    return q;
}

} // namespace

WeakPairing WeakPairing::for_norm(NormSpec ns, std::size_t dim, double tie_tol) {
    if (ns.is_weighted() && ns.dim() != dim) throw DimensionError("pairing dimension mismatch");
    if (dim == 0) throw DimensionError("pairing dimension must be positive");
    return WeakPairing{std::move(ns), dim, tie_tol};
}

double wp_eval(const Vector& x, const Vector& y, const WeakPairing& wp) {
    if (x.size() != y.size() || x.size() != wp.dim)
        throw DimensionError("pairing operand dimension mismatch");

    switch (wp.ns.order()) {
    case NormOrder::One: {
        Vector zx = wp.ns.apply_weight(x);
        Vector zy = wp.ns.apply_weight(y);
        double signed_sum = 0.0, norm1 = 0.0;
        for (std::size_t i = 0; i < zy.size(); ++i) {
            signed_sum += sign_of(zy[i]) * zx[i];
            norm1 += std::abs(zy[i]);
        }
        return norm1 * signed_sum;
    }
    case NormOrder::Two: {
        if (wp.ns.has_metric()) return dot(x, matvec(wp.ns.metric(), y));
        if (wp.ns.is_weighted()) return dot(wp.ns.apply_weight(x), wp.ns.apply_weight(y));
        return dot(x, y);
    }
    case NormOrder::Inf: {
        Vector zx = wp.ns.apply_weight(x);
        Vector zy = wp.ns.apply_weight(y);
        double m = max_abs(zy);
        if (m == 0.0) return 0.0;
        double band = m * (1.0 - wp.tie_tol);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < zy.size(); ++i)
            if (std::abs(zy[i]) >= band) best = std::max(best, zy[i] * zx[i]);
        return best;
    }
    }
    return 0.0;
}

Vector sample_unit_vector(std::mt19937_64& rng, std::size_t dim, const NormSpec& ns) {
    Vector x(dim);
    if (ns.order() == NormOrder::Two && !ns.is_weighted()) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (double& v : x) v = gauss(rng);
    } else {
        std::uniform_real_distribution<double> box(-1.0, 1.0);
        for (double& v : x) v = box(rng);
    }
    double n = vec_norm(x, ns);
    if (n < 1e-12) {
        x.assign(dim, 0.0);
        x[0] = 1.0;
        n = vec_norm(x, ns);
    }
    return vscale(1.0 / n, x);
}

AxiomReport wp_axiom_check(const WeakPairing& wp, int sample_count, std::uint64_t seed) {
    if (sample_count < 1) throw Error("sample_count must be at least 1");

    AxiomReport rep;
    rep.p = wp.ns.order();
    rep.weighted = wp.ns.is_weighted();
    rep.dim = wp.dim;
    rep.samples = sample_count;
    rep.seed = seed;
    rep.worst_subadditivity = -std::numeric_limits<double>::infinity();
    rep.worst_homogeneity = 0.0;
    rep.min_quadratic = std::numeric_limits<double>::infinity();
    rep.worst_norm_compat = 0.0;
    rep.worst_cauchy_schwarz = -std::numeric_limits<double>::infinity();
    rep.min_deimling = std::numeric_limits<double>::infinity();

    struct Sample {
        double subadd, homog, quad, compat, cs, deimling;
        Vector x1, x2, y;
    };

    auto eval_sample = [&](std::size_t i) {
        auto rng = make_rng(derive_seed(seed, i));
        std::uniform_real_distribution<double> alpha_dist(0.0, 4.0);
        Sample s;
        s.x1 = sample_unit_vector(rng, wp.dim, wp.ns);
        s.x2 = sample_unit_vector(rng, wp.dim, wp.ns);
        s.y = sample_unit_vector(rng, wp.dim, wp.ns);
        double alpha = alpha_dist(rng);

        s.subadd = wp_eval(vadd(s.x1, s.x2), s.y, wp) - wp_eval(s.x1, s.y, wp) -
                   wp_eval(s.x2, s.y, wp);

        double base = wp_eval(s.x1, s.y, wp);
        double h1 = std::abs(wp_eval(vscale(alpha, s.x1), s.y, wp) - alpha * base);
        double h2 = std::abs(wp_eval(s.x1, vscale(alpha, s.y), wp) - alpha * base);
        double h3 = std::abs(wp_eval(vscale(-1.0, s.x1), vscale(-1.0, s.y), wp) - base);
        s.homog = std::max({h1, h2, h3});

        double quad = wp_eval(s.x1, s.x1, wp);
        s.quad = quad;
        double nx = vec_norm(s.x1, wp.ns);
        s.compat = std::abs(quad - nx * nx);

        s.cs = std::abs(base) - nx * vec_norm(s.y, wp.ns);
        s.deimling = deimling_margin(s.x1, s.y, wp, 1e-7);
        return s;
    };

    auto samples = parallel_map<Sample>(static_cast<std::size_t>(sample_count), eval_sample);

    for (const Sample& s : samples) {
        if (s.subadd > rep.worst_subadditivity) {
            rep.worst_subadditivity = s.subadd;
            rep.witness_subadd_x1 = s.x1;
            rep.witness_subadd_x2 = s.x2;
            rep.witness_subadd_y = s.y;
        }
        rep.worst_homogeneity = std::max(rep.worst_homogeneity, s.homog);
        rep.min_quadratic = std::min(rep.min_quadratic, s.quad);
        rep.worst_norm_compat = std::max(rep.worst_norm_compat, s.compat);
        if (s.cs > rep.worst_cauchy_schwarz) {
            rep.worst_cauchy_schwarz = s.cs;
            rep.witness_cs_x = s.x1;
            rep.witness_cs_y = s.y;
        }
        if (s.deimling < rep.min_deimling) {
            rep.min_deimling = s.deimling;
            rep.witness_deimling_x = s.x1;
            rep.witness_deimling_y = s.y;
        }
    }
    return rep;
}

double deimling_margin(const Vector& x, const Vector& y, const WeakPairing& wp, double h_min) {
    if (vec_norm(y, wp.ns) == 0.0) throw Error("deimling_margin requires y != 0");
    double rhs = vec_norm(y, wp.ns) * directional_quotient(y, x, wp.ns, h_min);
    return rhs - wp_eval(x, y, wp);
}

double lumer_sup(const Matrix& a, const WeakPairing& wp, const SamplerConfig& sampler) {
    if (!a.square() || a.rows != wp.dim) throw DimensionError("lumer_sup dimension mismatch");
    std::size_t n = a.rows;
    const NormSpec& ns = wp.ns;

    auto rayleigh = [&](const Vector& x) {
        double nx = vec_norm(x, ns);
        if (nx == 0.0) return -std::numeric_limits<double>::infinity();
        return wp_eval(matvec(a, x), x, wp) / (nx * nx);
    };

    // z lives in the weighted coordinates; candidates map back through R^-1.
    auto from_weighted = [&](const Vector& z) {
        return ns.is_weighted() ? matvec(ns.weight_inverse(), z) : z;
    };

    Matrix b = ns.conjugate(a);
    double best = -std::numeric_limits<double>::infinity();

    // (a) random unit vectors
    auto values = parallel_map<double>(static_cast<std::size_t>(std::max(0, sampler.count)),
                                       [&](std::size_t i) {
                                           auto rng = make_rng(derive_seed(sampler.seed, i));
                                           return rayleigh(sample_unit_vector(rng, n, ns));
                                       });
    for (double v : values) best = std::max(best, v);

    // (b) constructed near-maximizers
    switch (ns.order()) {
    case NormOrder::One: {
        // e_j + eps * column sign pattern approaches the sup as eps -> 0; the
        // finer eps refines the estimate past the coarse one.
        for (double eps : {1e-6, 1e-9}) {
            for (std::size_t j = 0; j < n; ++j) {
                Vector z(n, 0.0);
                z[j] = 1.0;
                best = std::max(best, rayleigh(from_weighted(z)));
                for (std::size_t i = 0; i < n; ++i)
                    if (i != j) z[i] = eps * sign_of(b(i, j));
                best = std::max(best, rayleigh(from_weighted(z)));
            }
        }
        break;
    }
    case NormOrder::Inf: {
        if (n <= 12) {
            // all sign vectors with z_0 = +1; the pairing is sign-flip invariant
            std::size_t count = std::size_t{1} << (n - 1);
            for (std::size_t bits = 0; bits < count; ++bits) {
                Vector z(n, 1.0);
                for (std::size_t i = 1; i < n; ++i)
                    if (bits & (std::size_t{1} << (i - 1))) z[i] = -1.0;
                best = std::max(best, rayleigh(from_weighted(z)));
            }
        } else {
            auto rng = make_rng(derive_seed(sampler.seed, 0x5164e));
            std::uniform_int_distribution<int> coin(0, 1);
            for (int s = 0; s < std::max(64, sampler.count); ++s) {
                Vector z(n);
                for (double& v : z) v = coin(rng) ? 1.0 : -1.0;
                best = std::max(best, rayleigh(from_weighted(z)));
            }
            // row-wise sign patterns reach the measure exactly
            for (std::size_t i = 0; i < n; ++i) {
                Vector z(n);
                for (std::size_t j = 0; j < n; ++j) z[j] = j == i ? 1.0 : sign_of(b(i, j));
                best = std::max(best, rayleigh(from_weighted(z)));
            }
        }
        break;
    }
    case NormOrder::Two: {
        SymmetricEigen eig = jacobi_eigen(b + transpose(b));
        Vector z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = eig.vectors(i, n - 1);
        best = std::max(best, rayleigh(from_weighted(z)));
        break;
    }
    }
    return best;
}

} // namespace cvf
