#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cvf/errors.hpp"

namespace cvf {

using Vec3 = std::array<double, 3>;

double dot3(const Vec3& a, const Vec3& b);
double norm3(const Vec3& a);
Vec3 add3(const Vec3& a, const Vec3& b);
Vec3 sub3(const Vec3& a, const Vec3& b);
Vec3 scale3(double s, const Vec3& a);

/// Point on the unit sphere in ambient 3-space; renormalized on construction
/// to keep the unit invariant within rounding.
class SpherePoint {
public:
    explicit SpherePoint(const Vec3& ambient);
    SpherePoint(double x, double y, double z) : SpherePoint(Vec3{x, y, z}) {}
    const Vec3& ambient() const noexcept { return v_; }

private:
    Vec3 v_;
};

/// Tangent vector at a base point: ambient vector with x . v = 0. The
/// construction projects out any radial component.
class SphereTangent {
public:
    SphereTangent(const SpherePoint& base, const Vec3& ambient);
    const SpherePoint& base() const noexcept { return base_; }
    const Vec3& ambient() const noexcept { return v_; }
    double norm() const { return norm3(v_); }

private:
    SpherePoint base_;
    Vec3 v_;
};

/// Geodesic shooting: cos(|v|) x + sin(|v|) v/|v|.
SpherePoint sphere_exp(const SpherePoint& x, const SphereTangent& v);

/// Inverse of sphere_exp on the complement of the cut locus; |log_x(y)| equals
/// the geodesic distance. Throws AntipodalError near y = -x.
SphereTangent sphere_log(const SpherePoint& x, const SpherePoint& y);

/// arccos(clamp(x . y)) in [0, pi].
double sphere_dist(const SpherePoint& x, const SpherePoint& y);

/// Parallel transport of v along the minimal geodesic from x to y; preserves
/// norms and inner products. Throws AntipodalError near y = -x.
SphereTangent sphere_transport(const SpherePoint& x, const SpherePoint& y,
                               const SphereTangent& v);

/// Tangent vector field on the sphere.
class SphereField {
public:
    using Fn = std::function<SphereTangent(const SpherePoint&)>;

    explicit SphereField(Fn fn) : fn_(std::move(fn)) {}

    /// X(x) = log_x(target): points along the geodesic toward `target`.
    static SphereField attractor(const SpherePoint& target);

    /// Ambient map projected onto the tangent space at each point.
    static SphereField from_ambient(std::function<Vec3(const Vec3&)> ambient);

    SphereTangent operator()(const SpherePoint& x) const { return fn_(x); }

private:
    Fn fn_;
};

/// min over pairs of  -c d(x,y)^2 - ( <X(y), g'(1)> - <X(x), g'(0)> )  along
/// the connecting geodesic g. The equivalent parallel-transport form is
/// evaluated too and must agree within 1e-9 (CertificationError otherwise).
double geodesic_contraction_margin(const SphereField& field,
                                   const std::vector<std::pair<SpherePoint, SpherePoint>>& pairs,
                                   double c);

/// Both one-sided forms of the geodesic condition, for cross-checks:
/// first = <X(y), g'(1)> - <X(x), g'(0)>, second via transport of X(y) to x.
std::pair<double, double> geodesic_osl_forms(const SphereField& field, const SpherePoint& x,
                                             const SpherePoint& y);

struct SphereTrace {
    std::vector<SpherePoint> iterates;
    std::vector<double> field_norms;
    std::vector<double> distances; // to target when supplied
    bool converged = false;
};

/// x_{k+1} = exp_{x_k}(alpha X(x_k)); stops when |X(x_k)| <= tol. When the
/// field is the attractor toward `target`, each step scales the geodesic
/// distance by exactly (1 - alpha).
SphereTrace riemannian_forward_step(const SphereField& field, double alpha, const SpherePoint& x0,
                                    double tol, int max_iter,
                                    const std::optional<SpherePoint>& target = std::nullopt);

} // namespace cvf
