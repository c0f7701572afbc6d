#include "cvf/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "cvf/expr.hpp"

namespace cvf {

VectorField VectorField::affine(Matrix a, Vector b) {
    if (!a.square() || a.rows != b.size())
        throw DimensionError("affine field requires square A matching b");
    VectorField f;
    f.kind_ = Kind::Affine;
    f.dim_ = b.size();
    f.description_ = "affine";
    auto a_shared = std::make_shared<Matrix>(a);
    auto b_shared = std::make_shared<Vector>(b);
    f.eval_ = [a_shared, b_shared](const Vector& x) {
        return vadd(matvec(*a_shared, x), *b_shared);
    };
    f.jac_ = [a_shared](const Vector&) { return *a_shared; };
    f.affine_a_ = std::move(a);
    f.affine_b_ = std::move(b);
    return f;
}

VectorField VectorField::tanh_network(Vector d_diag, Matrix w, Vector b) {
    std::size_t n = d_diag.size();
    if (!w.square() || w.rows != n || b.size() != n)
        throw DimensionError("tanh network requires matching D, W, b dimensions");
    for (double d : d_diag)
        if (d < 0.0) throw Error("tanh network requires nonnegative diagonal D");

    VectorField f;
    f.kind_ = Kind::Builtin;
    f.dim_ = n;
    f.description_ = "tanhnet";
    auto d_shared = std::make_shared<Vector>(std::move(d_diag));
    auto w_shared = std::make_shared<Matrix>(std::move(w));
    auto b_shared = std::make_shared<Vector>(std::move(b));
    f.eval_ = [d_shared, w_shared, b_shared, n](const Vector& x) {
        Vector t(n);
        for (std::size_t i = 0; i < n; ++i) t[i] = std::tanh(x[i]);
        Vector out = vadd(matvec(*w_shared, t), *b_shared);
        for (std::size_t i = 0; i < n; ++i) out[i] -= (*d_shared)[i] * x[i];
        return out;
    };
    f.jac_ = [d_shared, w_shared, n](const Vector& x) {
        Matrix j(n, n);
        for (std::size_t c = 0; c < n; ++c) {
            double th = std::tanh(x[c]);
            double s = 1.0 - th * th;
            for (std::size_t r = 0; r < n; ++r) j(r, c) = (*w_shared)(r, c) * s;
        }
        for (std::size_t i = 0; i < n; ++i) j(i, i) -= (*d_shared)[i];
        return j;
    };
    return f;
}

VectorField VectorField::parsed(const std::string& source, std::size_t dim) {
    expr::Program prog = expr::Program::parse(source, dim);
    VectorField f;
    f.kind_ = Kind::Parsed;
    f.dim_ = dim;
    f.description_ = "expr";
    f.eval_ = [prog](const Vector& x) { return prog.eval(x); };
    return f;
}

Matrix VectorField::jacobian(const Vector& x) const {
    if (x.size() != dim_) throw DimensionError("field input dimension mismatch");
    if (jac_) return jac_(x);
    return jacobian_fd(*this, x, default_fd_step(x));
}

double default_fd_step(const Vector& x) { return 1e-5 * std::max(1.0, max_abs(x)); }

Matrix jacobian_fd(const VectorField& f, const Vector& x, double h) {
    if (!(h > 0.0)) throw Error("finite-difference step must be positive");
    std::size_t n = f.dim();
    Matrix j(n, n);
    Vector xp = x, xm = x;
    for (std::size_t c = 0; c < n; ++c) {
        xp[c] = x[c] + h;
        xm[c] = x[c] - h;
        Vector fp = f(xp), fm = f(xm);
        for (std::size_t r = 0; r < n; ++r) j(r, c) = (fp[r] - fm[r]) / (2.0 * h);
        xp[c] = x[c];
        xm[c] = x[c];
    }
    return j;
}

Vector sample_box(std::mt19937_64& rng, std::size_t dim, const Box& box) {
    std::uniform_real_distribution<double> u(box.lo, box.hi);
    Vector x(dim);
    for (double& v : x) v = u(rng);
    return x;
}

double demidovich_rate(const VectorField& f, const NormSpec& ns, const Box& box, int samples,
                       std::uint64_t seed) {
    if (samples < 1) throw Error("demidovich_rate requires samples >= 1");
    auto mus = parallel_map<double>(static_cast<std::size_t>(samples), [&](std::size_t i) {
        auto rng = make_rng(derive_seed(seed, i));
        Vector x = sample_box(rng, f.dim(), box);
        return matrix_measure(f.jacobian(x), ns);
    });
    double worst = -std::numeric_limits<double>::infinity();
    for (double m : mus) worst = std::max(worst, m);
    return -worst;
}

double osl_margin(const VectorField& f, const WeakPairing& wp,
                  const std::vector<std::pair<Vector, Vector>>& pairs, double c) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : pairs) {
        Vector d = vsub(x, y);
        double nd = vec_norm(d, wp.ns);
        if (nd == 0.0) throw Error("osl_margin requires distinct pair points");
        double lhs = wp_eval(vsub(f(x), f(y)), d, wp);
        worst = std::min(worst, -c * nd * nd - lhs);
    }
    return worst;
}

double lipschitz_estimate(const VectorField& f, const NormSpec& ns, const Box& box, int samples,
                          std::uint64_t seed) {
    if (samples < 1) throw Error("lipschitz_estimate requires samples >= 1");
    auto vals = parallel_map<double>(static_cast<std::size_t>(samples), [&](std::size_t i) {
        auto rng = make_rng(derive_seed(seed, i));
        Vector x = sample_box(rng, f.dim(), box);
        Vector y = sample_box(rng, f.dim(), box);
        double best = mat_norm(f.jacobian(x), ns);
        double nd = vec_norm(vsub(x, y), ns);
        if (nd > 1e-12) best = std::max(best, vec_norm(vsub(f(x), f(y)), ns) / nd);
        return best;
    });
    double worst = 0.0;
    for (double v : vals) worst = std::max(worst, v);
    return worst;
}

const char* to_string(CertificateMode m) {
    return m == CertificateMode::ExactAffine ? "exact-affine" : "empirical";
}

ContractionCertificate certify(const VectorField& f, const NormSpec& ns, const Box& box,
                               int budget, std::uint64_t seed) {
    if (budget < 1) throw Error("certify requires budget >= 1");
    ns.check_dim(f.dim());

    ContractionCertificate cert;
    cert.ns = ns;
    cert.box = box;
    cert.samples = budget;
    cert.seed = seed;

    if (f.kind() == VectorField::Kind::Affine) {
        const Matrix& a = *f.affine_matrix();
        double mu = matrix_measure(a, ns);
        if (mu >= 0.0)
            throw NotContractiveError("affine field has nonnegative matrix measure");
        cert.mode = CertificateMode::ExactAffine;
        cert.rate = -mu;
        cert.lipschitz = mat_norm(a, ns);
        cert.kappa = cert.lipschitz / cert.rate;
        return cert;
    }

    cert.mode = CertificateMode::Empirical;

    // rate and Lipschitz sweeps, keeping the worst witnesses
    double worst_mu = -std::numeric_limits<double>::infinity();
    double worst_norm = 0.0;
    for (int i = 0; i < budget; ++i) {
        auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        Vector x = sample_box(rng, f.dim(), box);
        Matrix j = f.jacobian(x);
        double mu = matrix_measure(j, ns);
        double nj = mat_norm(j, ns);
        if (mu > worst_mu) {
            worst_mu = mu;
            cert.witness_rate = x;
        }
        if (nj > worst_norm) {
            worst_norm = nj;
            cert.witness_lipschitz = x;
        }
    }
    cert.rate = -worst_mu;
    if (cert.rate <= 0.0)
        throw NotContractiveError("sampled Jacobian measures are not uniformly negative");

    double pairwise = lipschitz_estimate(f, ns, box, budget, derive_seed(seed, 0x11ab));
    cert.lipschitz = std::max(worst_norm, pairwise);
    cert.kappa = cert.lipschitz / cert.rate;

    // cross-validation: the pairwise condition must hold at the reported rate
    WeakPairing wp = WeakPairing::for_norm(ns, f.dim());
    std::vector<std::pair<Vector, Vector>> pairs;
    pairs.reserve(static_cast<std::size_t>(budget));
    for (int i = 0; i < budget; ++i) {
        auto rng = make_rng(derive_seed(seed, 0x9a17 + static_cast<std::uint64_t>(i)));
        Vector x = sample_box(rng, f.dim(), box);
        Vector y = sample_box(rng, f.dim(), box);
        if (vec_norm(vsub(x, y), ns) > 1e-9) pairs.emplace_back(std::move(x), std::move(y));
    }
    double margin = osl_margin(f, wp, pairs, cert.rate);
    if (margin < -1e-6)
        throw CertificationError("pairwise evidence contradicts the sampled rate");
    return cert;
}

} // namespace cvf
