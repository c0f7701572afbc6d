#include "cvf/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvf {

namespace {
constexpr double kCutLocusGuard = 1e-10;
}

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }
Vec3 add3(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub3(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 scale3(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

SpherePoint::SpherePoint(const Vec3& ambient) : v_(ambient) {
    double n = norm3(v_);
    if (!(n > 1e-12)) throw Error("sphere point requires a nonzero ambient vector");
    v_ = scale3(1.0 / n, v_);
}

SphereTangent::SphereTangent(const SpherePoint& base, const Vec3& ambient)
    : base_(base), v_(ambient) {
    double radial = dot3(base_.ambient(), v_);
    v_ = sub3(v_, scale3(radial, base_.ambient()));
}

SpherePoint sphere_exp(const SpherePoint& x, const SphereTangent& v) {
    double nv = v.norm();
    if (nv == 0.0) return x;
    Vec3 dir = scale3(1.0 / nv, v.ambient());
    return SpherePoint(add3(scale3(std::cos(nv), x.ambient()), scale3(std::sin(nv), dir)));
}

double sphere_dist(const SpherePoint& x, const SpherePoint& y) {
    return std::acos(std::clamp(dot3(x.ambient(), y.ambient()), -1.0, 1.0));
}

SphereTangent sphere_log(const SpherePoint& x, const SpherePoint& y) {
    double cosd = std::clamp(dot3(x.ambient(), y.ambient()), -1.0, 1.0);
    if (cosd <= -1.0 + kCutLocusGuard)
        throw AntipodalError("log undefined at the cut locus (antipodal points)");
    Vec3 w = sub3(y.ambient(), scale3(cosd, x.ambient()));
    double nw = norm3(w);
    if (nw < 1e-15) return SphereTangent(x, Vec3{0.0, 0.0, 0.0});
    double d = std::acos(cosd);
    return SphereTangent(x, scale3(d / nw, w));
}

SphereTangent sphere_transport(const SpherePoint& x, const SpherePoint& y,
                               const SphereTangent& v) {
    double d = sphere_dist(x, y);
    if (d < 1e-15) return SphereTangent(y, v.ambient());
    SphereTangent log_xy = sphere_log(x, y); // throws near the cut locus
    Vec3 u = scale3(1.0 / log_xy.norm(), log_xy.ambient());
    double along = dot3(u, v.ambient());
    // v = along * u + w with w fixed by the transport; u rotates to
    // cos(d) u - sin(d) x in the geodesic plane.
    Vec3 w = sub3(v.ambient(), scale3(along, u));
    Vec3 u_at_y = sub3(scale3(std::cos(d), u), scale3(std::sin(d), x.ambient()));
    return SphereTangent(y, add3(w, scale3(along, u_at_y)));
}

SphereField SphereField::attractor(const SpherePoint& target) {
    return SphereField([target](const SpherePoint& x) { return sphere_log(x, target); });
}

SphereField SphereField::from_ambient(std::function<Vec3(const Vec3&)> ambient) {
    return SphereField([fn = std::move(ambient)](const SpherePoint& x) {
        return SphereTangent(x, fn(x.ambient()));
    });
}

std::pair<double, double> geodesic_osl_forms(const SphereField& field, const SpherePoint& x,
                                             const SpherePoint& y) {
    SphereTangent gprime0 = sphere_log(x, y);                    // velocity at x
    SphereTangent gprime1_back = sphere_log(y, x);               // -velocity at y
    SphereTangent xx = field(x);
    SphereTangent xy = field(y);

    double first = -dot3(xy.ambient(), gprime1_back.ambient()) - dot3(xx.ambient(), gprime0.ambient());

    SphereTangent transported = sphere_transport(y, x, xy);
    double second = dot3(sub3(transported.ambient(), xx.ambient()), gprime0.ambient());
    return {first, second};
}

double geodesic_contraction_margin(const SphereField& field,
                                   const std::vector<std::pair<SpherePoint, SpherePoint>>& pairs,
                                   double c) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : pairs) {
        auto [first, second] = geodesic_osl_forms(field, x, y);
        if (std::abs(first - second) > 1e-9)
            throw CertificationError("geodesic and transport forms disagree");
        double d = sphere_dist(x, y);
        margin = std::min(margin, -c * d * d - first);
    }
    return margin;
}

SphereTrace riemannian_forward_step(const SphereField& field, double alpha, const SpherePoint& x0,
                                    double tol, int max_iter,
                                    const std::optional<SpherePoint>& target) {
    if (!(alpha > 0.0)) throw Error("riemannian forward step requires alpha > 0");
    SphereTrace trace;
    SpherePoint x = x0;
    auto record = [&](const SpherePoint& p, double field_norm) {
        trace.iterates.push_back(p);
        trace.field_norms.push_back(field_norm);
        if (target) trace.distances.push_back(sphere_dist(p, *target));
    };

    for (int k = 0; k <= max_iter; ++k) {
        SphereTangent v = field(x);
        double nv = v.norm();
        record(x, nv);
        if (nv <= tol) {
            trace.converged = true;
            break;
        }
        if (k == max_iter) break;
        x = sphere_exp(x, SphereTangent(x, scale3(alpha, v.ambient())));
    }
    return trace;
}

} // namespace cvf
