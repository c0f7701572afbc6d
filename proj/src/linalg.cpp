#include "cvf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cvf {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw DimensionError("matrix shapes do not match");
}

void require_square(const Matrix& a) {
    if (!a.square()) throw DimensionError("square matrix required");
}

} // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw DimensionError("matrix product shapes do not match");
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix out = a;
    for (double& v : out.data) v *= s;
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) out(j, i) = a(i, j);
    return out;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return std::sqrt(s);
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const Matrix& a) {
    return std::all_of(a.data.begin(), a.data.end(), [](double v) { return std::isfinite(v); });
}

Vector matvec(const Matrix& a, const Vector& x) {
    if (a.cols != x.size()) throw DimensionError("matrix-vector shapes do not match");
    Vector y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vector vadd(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("vector sizes do not match");
    Vector out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

Vector vsub(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("vector sizes do not match");
    Vector out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

Vector vscale(double s, const Vector& a) {
    Vector out = a;
    for (double& v : out) v *= s;
    return out;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("vector sizes do not match");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs(const Vector& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const Vector& a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------
// LU
// ---------------------------------------------------------------------------

LuFactors lu_factor(const Matrix& a) {
    require_square(a);
    std::size_t n = a.rows;
    LuFactors f{a, std::vector<std::size_t>(n)};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    double scale = std::max(1.0, max_abs(a));
    Matrix& lu = f.lu;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
        if (std::abs(lu(piv, k)) <= 1e-12 * scale)
            throw SingularMatrixError("matrix is singular to working precision");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(piv, j), lu(k, j));
            std::swap(f.perm[piv], f.perm[k]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            lu(i, k) /= lu(k, k);
            double lik = lu(i, k);
            if (lik == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= lik * lu(k, j);
        }
    }
    return f;
}

Vector lu_solve(const LuFactors& f, const Vector& b) {
    std::size_t n = f.lu.rows;
    if (b.size() != n) throw DimensionError("right-hand side size does not match");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
        y[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * y[j];
        y[ii] = s / f.lu(ii, ii);
    }
    return y;
}

Vector solve(const Matrix& a, const Vector& b) { return lu_solve(lu_factor(a), b); }

Matrix inverse(const Matrix& a) {
    LuFactors f = lu_factor(a);
    std::size_t n = a.rows;
    Matrix inv(n, n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        Vector col = lu_solve(f, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver
// ---------------------------------------------------------------------------

SymmetricEigen jacobi_eigen(const Matrix& s, double off_tol, int max_sweeps) {
    require_square(s);
    std::size_t n = s.rows;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (s(i, j) + s(j, i));
    Matrix v = Matrix::identity(n);
    double threshold = off_tol * std::max(1.0, frobenius_norm(a));

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= threshold) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::abs(apq) <= threshold * 1e-3) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * c;

                double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = a(p, i) = c * aip - sn * aiq;
                    a(i, q) = a(q, i) = sn * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - sn * viq;
                    v(i, q) = sn * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

double lambda_max_symmetric(const Matrix& s) { return jacobi_eigen(s).values.back(); }

// ---------------------------------------------------------------------------
// NormSpec
// ---------------------------------------------------------------------------

const char* to_string(NormOrder p) {
    switch (p) {
    case NormOrder::One: return "1";
    case NormOrder::Two: return "2";
    case NormOrder::Inf: return "inf";
    }
    return "?";
}

NormSpec NormSpec::with_weight(NormOrder p, Matrix r, double max_condition) {
    if (!r.square()) throw DimensionError("weight matrix must be square");
    if (!all_finite(r)) throw Error("weight matrix has non-finite entries");

    NormSpec ns(p);
    auto inv = std::make_shared<Matrix>(inverse(r)); // throws SingularMatrixError

    SymmetricEigen gram = jacobi_eigen(transpose(r) * r);
    double lo = gram.values.front(), hi = gram.values.back();
    if (lo <= 0.0 || std::sqrt(hi / lo) > max_condition)
        throw SingularMatrixError("weight matrix condition estimate exceeds cap");

    ns.weight_ = std::make_shared<Matrix>(std::move(r));
    ns.weight_inv_ = std::move(inv);
    return ns;
}

NormSpec NormSpec::with_metric(Matrix p_metric) {
    if (!p_metric.square()) throw DimensionError("metric must be square");
    std::size_t n = p_metric.rows;
    double scale = std::max(1.0, max_abs(p_metric));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(p_metric(i, j) - p_metric(j, i)) > 1e-12 * scale)
                throw NotSpdError("metric is not symmetric");

    SymmetricEigen eig = jacobi_eigen(p_metric);
    if (eig.values.front() <= kMetricMinEigenvalue)
        throw NotSpdError("metric is not positive definite");

    Matrix root(n, n), root_inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0, si = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                double w = eig.vectors(i, k) * eig.vectors(j, k);
                s += w * std::sqrt(eig.values[k]);
                si += w / std::sqrt(eig.values[k]);
            }
            root(i, j) = s;
            root_inv(i, j) = si;
        }

    NormSpec ns(NormOrder::Two);
    ns.weight_ = std::make_shared<Matrix>(std::move(root));
    ns.weight_inv_ = std::make_shared<Matrix>(std::move(root_inv));
    ns.metric_ = std::make_shared<Matrix>(std::move(p_metric));
    return ns;
}

Vector NormSpec::apply_weight(const Vector& x) const {
    return weight_ ? matvec(*weight_, x) : x;
}

Matrix NormSpec::conjugate(const Matrix& a) const {
    if (!weight_) return a;
    check_dim(a.rows);
    return (*weight_ * a) * (*weight_inv_);
}

void NormSpec::check_dim(std::size_t n) const {
    if (weight_ && weight_->rows != n) throw DimensionError("norm weight dimension mismatch");
}

// ---------------------------------------------------------------------------
// Norms and measures
// ---------------------------------------------------------------------------

namespace {

double pnorm(const Vector& z, NormOrder p) {
    switch (p) {
    case NormOrder::One: {
        double s = 0.0;
        for (double v : z) s += std::abs(v);
        return s;
    }
    case NormOrder::Two:
        return std::sqrt(dot(z, z));
    case NormOrder::Inf:
        return max_abs(z);
    }
    return 0.0;
}

double induced_pnorm(const Matrix& b, NormOrder p) {
    switch (p) {
    case NormOrder::One: {
        double m = 0.0;
        for (std::size_t j = 0; j < b.cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < b.rows; ++i) s += std::abs(b(i, j));
            m = std::max(m, s);
        }
        return m;
    }
    case NormOrder::Two: {
        double lam = lambda_max_symmetric(transpose(b) * b);
        return std::sqrt(std::max(0.0, lam));
    }
    case NormOrder::Inf: {
        double m = 0.0;
        for (std::size_t i = 0; i < b.rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < b.cols; ++j) s += std::abs(b(i, j));
            m = std::max(m, s);
        }
        return m;
    }
    }
    return 0.0;
}

double measure_one(const Matrix& b) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.cols; ++j) {
        double s = b(j, j);
        for (std::size_t i = 0; i < b.rows; ++i)
            if (i != j) s += std::abs(b(i, j));
        m = std::max(m, s);
    }
    return m;
}

} // namespace

double vec_norm(const Vector& x, const NormSpec& ns) {
    ns.check_dim(x.size());
    if (ns.has_metric()) {
        // sqrt(x^T P x); avoids the square-root factor entirely.
        return std::sqrt(std::max(0.0, dot(x, matvec(ns.metric(), x))));
    }
    return pnorm(ns.apply_weight(x), ns.order());
}

double mat_norm(const Matrix& a, const NormSpec& ns) {
    require_square(a);
    return induced_pnorm(ns.conjugate(a), ns.order());
}

double matrix_measure(const Matrix& a, const NormSpec& ns) {
    require_square(a);
    Matrix b = ns.conjugate(a);
    switch (ns.order()) {
    case NormOrder::One: return measure_one(b);
    case NormOrder::Two: return 0.5 * lambda_max_symmetric(b + transpose(b));
    case NormOrder::Inf: return measure_one(transpose(b));
    }
    return 0.0;
}

std::vector<double> matrix_measure_quotients(const Matrix& a, const NormSpec& ns, double h_min) {
    require_square(a);
    if (!(h_min > 0.0)) throw Error("h_min must be positive");
    Matrix b = ns.conjugate(a);
    NormSpec plain(ns.order());
    Matrix eye = Matrix::identity(b.rows);

    std::vector<double> quotients;
    double h = 0.1;
    while (true) {
        quotients.push_back((mat_norm(eye + h * b, plain) - 1.0) / h);
        if (h <= h_min) break;
        h *= 0.5;
    }
    return quotients;
}

double matrix_measure_oracle(const Matrix& a, const NormSpec& ns, double h_min) {
    return matrix_measure_quotients(a, ns, h_min).back();
}

double operator_condition_number(const Matrix& a, const NormSpec& ns) {
    double mu = matrix_measure(a, ns);
    if (mu >= 0.0)
        throw NotContractiveError("matrix measure is nonnegative; condition number undefined");
    return mat_norm(a, ns) / (-mu);
}

} // namespace cvf
