#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "cvf/errors.hpp"

namespace cvf {

using Vector = std::vector<double>;

/// Dense row-major matrix. Desk-scale: everything is O(n^3)-friendly.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    static Matrix identity(std::size_t n);

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    bool square() const noexcept { return rows == cols && rows > 0; }
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix transpose(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

Vector matvec(const Matrix& a, const Vector& x);
Vector vadd(const Vector& a, const Vector& b);
Vector vsub(const Vector& a, const Vector& b);
Vector vscale(double s, const Vector& a);
double dot(const Vector& a, const Vector& b);
double max_abs(const Vector& a);
bool all_finite(const Vector& a);

// ---------------------------------------------------------------------------
// LU factorization (partial pivoting)
// ---------------------------------------------------------------------------

struct LuFactors {
    Matrix lu;
    std::vector<std::size_t> perm;
};

/// Throws SingularMatrixError when a pivot falls below 1e-12 relative to the
/// matrix scale.
LuFactors lu_factor(const Matrix& a);
Vector lu_solve(const LuFactors& f, const Vector& b);
Vector solve(const Matrix& a, const Vector& b);
Matrix inverse(const Matrix& a);

// ---------------------------------------------------------------------------
// Symmetric eigenproblem (cyclic Jacobi rotations)
// ---------------------------------------------------------------------------

struct SymmetricEigen {
    Vector values;  // ascending
    Matrix vectors; // columns match values
};

/// Cyclic Jacobi on the symmetrized input; terminates when every off-diagonal
/// entry is below off_tol * max(1, scale).
SymmetricEigen jacobi_eigen(const Matrix& s, double off_tol = 1e-12, int max_sweeps = 64);
double lambda_max_symmetric(const Matrix& s);

// ---------------------------------------------------------------------------
// Norm specification
// ---------------------------------------------------------------------------

enum class NormOrder { One, Two, Inf };
const char* to_string(NormOrder p);

/// Which norm governs a computation: p in {1, 2, inf} with an optional
/// invertible weight R (norms of Rx, measures of R A R^-1). For p = 2 the
/// weight may instead be given as a metric P = P^T > 0 with R = P^(1/2).
class NormSpec {
public:
    static constexpr double kWeightConditionCap = 1e12;
    static constexpr double kMetricMinEigenvalue = 1e-10;

    NormSpec() : p_(NormOrder::Two) {}
    explicit NormSpec(NormOrder p) : p_(p) {}

    /// Weighted norm ||x|| = ||Rx||_p. Rejects R whose 2-norm condition
    /// estimate exceeds max_condition.
    static NormSpec with_weight(NormOrder p, Matrix r, double max_condition = kWeightConditionCap);

    /// p = 2 with ||x||^2 = x^T P x; factors R = P^(1/2) for matrix operations.
    static NormSpec with_metric(Matrix p_metric);

    NormOrder order() const noexcept { return p_; }
    bool is_weighted() const noexcept { return weight_ != nullptr; }
    bool has_metric() const noexcept { return metric_ != nullptr; }
    /// Pinned dimension, or 0 when the spec applies to any dimension.
    std::size_t dim() const noexcept { return weight_ ? weight_->rows : 0; }

    const Matrix& weight() const { return *weight_; }
    const Matrix& weight_inverse() const { return *weight_inv_; }
    const Matrix& metric() const { return *metric_; }

    Vector apply_weight(const Vector& x) const;
    /// R A R^-1 (copy of A when unweighted).
    Matrix conjugate(const Matrix& a) const;
    void check_dim(std::size_t n) const;

private:
    NormOrder p_;
    std::shared_ptr<const Matrix> weight_;
    std::shared_ptr<const Matrix> weight_inv_;
    std::shared_ptr<const Matrix> metric_;
};

// ---------------------------------------------------------------------------
// Norms and matrix measures
// ---------------------------------------------------------------------------

/// ||Rx||_p (sqrt(x^T P x) when the spec carries a metric).
double vec_norm(const Vector& x, const NormSpec& ns);

/// Induced norm of R A R^-1: max column abs-sum (p=1), largest singular value
/// (p=2), max row abs-sum (p=inf).
double mat_norm(const Matrix& a, const NormSpec& ns);

/// Closed-form matrix measure:
///   mu_1(A)   = max_j (a_jj + sum_{i!=j} |a_ij|)
///   mu_2(A)   = (1/2) lambda_max(A + A^T)
///   mu_inf(A) = mu_1(A^T)
/// applied to R A R^-1 for weighted specs.
double matrix_measure(const Matrix& a, const NormSpec& ns);

/// Difference quotients (||I + hA|| - 1)/h on the schedule h = 0.1 * 2^-k,
/// stopping at the first h <= h_min. Convexity of the norm makes the sequence
/// non-increasing; the final entry approximates the measure from above.
std::vector<double> matrix_measure_quotients(const Matrix& a, const NormSpec& ns, double h_min);

/// Last entry of matrix_measure_quotients: the limit-definition estimate.
double matrix_measure_oracle(const Matrix& a, const NormSpec& ns, double h_min);

/// ||A|| / |mu(A)| for mu(A) < 0; throws NotContractiveError otherwise.
/// Always at least the classical condition number ||A|| * ||A^-1||.
double operator_condition_number(const Matrix& a, const NormSpec& ns);

} // namespace cvf
