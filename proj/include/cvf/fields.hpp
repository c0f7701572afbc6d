#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvf/linalg.hpp"
#include "cvf/pairings.hpp"

namespace cvf {

/// Axis-aligned sampling box [lo, hi]^n.
struct Box {
    double lo = -5.0;
    double hi = 5.0;
};

/// Autonomous vector field x -> f(x) with a Jacobian evaluator. Affine and
/// tanh-network fields carry analytic Jacobians; parsed fields fall back to
/// central finite differences. Evaluation is reentrant.
class VectorField {
public:
    enum class Kind { Affine, Builtin, Parsed };

    /// f(x) = Ax + b
    static VectorField affine(Matrix a, Vector b);

    /// f(x) = -Dx + W tanh(x) + b, D diagonal with nonnegative entries.
    static VectorField tanh_network(Vector d_diag, Matrix w, Vector b);

    /// Components parsed from `source` over x1..xdim (see expr::Program).
    static VectorField parsed(const std::string& source, std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    Kind kind() const noexcept { return kind_; }
    bool has_analytic_jacobian() const noexcept { return static_cast<bool>(jac_); }

    Vector operator()(const Vector& x) const { return eval_(x); }
    Matrix jacobian(const Vector& x) const;

    const Matrix* affine_matrix() const noexcept { return affine_a_ ? &*affine_a_ : nullptr; }
    const Vector* affine_offset() const noexcept { return affine_b_ ? &*affine_b_ : nullptr; }
    const std::string& description() const noexcept { return description_; }

private:
    VectorField() = default;

    Kind kind_ = Kind::Affine;
    std::size_t dim_ = 0;
    std::function<Vector(const Vector&)> eval_;
    std::function<Matrix(const Vector&)> jac_;
    std::optional<Matrix> affine_a_;
    std::optional<Vector> affine_b_;
    std::string description_;
};

/// Central-difference Jacobian, column j = (f(x + h e_j) - f(x - h e_j)) / 2h.
Matrix jacobian_fd(const VectorField& f, const Vector& x, double h);

/// Step used when no h is supplied: 1e-5 * max(1, ||x||_inf).
double default_fd_step(const Vector& x);

/// c_hat = -max_x mu(Df(x)) over `samples` box points. Positive values are
/// empirical evidence of contraction at that rate; nonpositive values are a
/// valid not-contracting report.
double demidovich_rate(const VectorField& f, const NormSpec& ns, const Box& box, int samples,
                       std::uint64_t seed);

/// min over pairs of  -c ||x-y||^2 - [f(x)-f(y), x-y].  Nonnegative means the
/// one-sided Lipschitz condition holds at rate c on the sample.
double osl_margin(const VectorField& f, const WeakPairing& wp,
                  const std::vector<std::pair<Vector, Vector>>& pairs, double c);

/// max of sampled ||Df(x)|| and pairwise ratios ||f(x)-f(y)|| / ||x-y||; a
/// lower bound on the true Lipschitz constant, exact for affine fields.
double lipschitz_estimate(const VectorField& f, const NormSpec& ns, const Box& box, int samples,
                          std::uint64_t seed);

enum class CertificateMode { ExactAffine, Empirical };
const char* to_string(CertificateMode m);

/// Contraction evidence for a field: rate c, Lipschitz constant l >= c, and
/// condition number kappa = l/c >= 1 under the recorded norm. Exact for
/// affine fields; otherwise sampling-based with reproducible seed/witnesses.
struct ContractionCertificate {
    NormSpec ns;
    double rate = 0.0;      // c > 0
    double lipschitz = 0.0; // l >= c
    double kappa = 1.0;     // l / c
    Box box;
    int samples = 0;
    std::uint64_t seed = 0;
    CertificateMode mode = CertificateMode::Empirical;
    Vector witness_rate;      // sample with the largest mu(Df(x))
    Vector witness_lipschitz; // sample with the largest ||Df(x)||
};

/// Certifies contraction of `f` on `box`. Affine fields get the exact
/// certificate (c = -mu(A), l = ||A||); others are sampled with `budget`
/// points and cross-validated pairwise. Throws NotContractiveError when the
/// evidence gives c <= 0, CertificationError when it is inconsistent.
ContractionCertificate certify(const VectorField& f, const NormSpec& ns, const Box& box,
                               int budget, std::uint64_t seed);

/// Uniform sample in box^dim.
Vector sample_box(std::mt19937_64& rng, std::size_t dim, const Box& box);

} // namespace cvf
