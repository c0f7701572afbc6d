#include "cvf/flows.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace cvf {

namespace {

Vector rk4_step(const VectorField& f, const Vector& x, double dt) {
    Vector k1 = f(x);
    Vector k2 = f(vadd(x, vscale(0.5 * dt, k1)));
    Vector k3 = f(vadd(x, vscale(0.5 * dt, k2)));
    Vector k4 = f(vadd(x, vscale(dt, k3)));
    Vector out = x;
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

std::size_t grid_steps(double T, double dt) {
    if (!(dt > 0.0) || T < dt) throw Error("integration requires dt > 0 and T >= dt");
    return static_cast<std::size_t>(std::llround(T / dt));
}

void check_finite(const Vector& x) {
    if (!all_finite(x)) throw IntegrationError("non-finite state encountered");
}

} // namespace

Trajectory integrate(const VectorField& f, const Vector& x0, double T, double dt) {
    std::size_t steps = grid_steps(T, dt);
    Trajectory traj;
    traj.dt = dt;
    traj.states.reserve(steps + 1);
    traj.states.push_back(x0);
    check_finite(x0);
    for (std::size_t k = 0; k < steps; ++k) {
        traj.states.push_back(rk4_step(f, traj.states.back(), dt));
        check_finite(traj.states.back());
    }
    return traj;
}

double incremental_stability_margin(const VectorField& f, const NormSpec& ns, const Vector& x0,
                                    const Vector& y0, double c, double T, double dt) {
    std::size_t steps = grid_steps(T, dt);
    double d0 = vec_norm(vsub(x0, y0), ns);
    if (d0 == 0.0) throw Error("incremental stability requires distinct start points");

    Vector x = x0, y = y0;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= steps; ++k) {
        double t = dt * static_cast<double>(k);
        margin = std::min(margin, std::exp(-c * t) * d0 - vec_norm(vsub(x, y), ns));
        if (k == steps) break;
        x = rk4_step(f, x, dt);
        y = rk4_step(f, y, dt);
        check_finite(x);
        check_finite(y);
    }
    return margin;
}

std::vector<double> dini_decay_margins(const VectorField& f, const NormSpec& ns, const Vector& x0,
                                       const Vector& y0, double c, double T, double dt) {
    std::size_t steps = grid_steps(T, dt);
    std::vector<double> margins;
    margins.reserve(steps);
    Vector x = x0, y = y0;
    double prev = vec_norm(vsub(x, y), ns);
    for (std::size_t k = 0; k < steps; ++k) {
        x = rk4_step(f, x, dt);
        y = rk4_step(f, y, dt);
        check_finite(x);
        check_finite(y);
        double cur = vec_norm(vsub(x, y), ns);
        margins.push_back(-c * prev - (cur - prev) / dt);
        prev = cur;
    }
    return margins;
}

void write_pair_decay_csv(std::ostream& os, const VectorField& f, const NormSpec& ns,
                          const Vector& x0, const Vector& y0, double c, double T, double dt) {
    std::size_t steps = grid_steps(T, dt);
    std::size_t n = x0.size();
    double d0 = vec_norm(vsub(x0, y0), ns);

    os << "t";
    for (std::size_t i = 0; i < n; ++i) os << ",x" << (i + 1);
    for (std::size_t i = 0; i < n; ++i) os << ",y" << (i + 1);
    os << ",delta,bound\n";

    char buf[40];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
        os << buf;
    };

    Vector x = x0, y = y0;
    for (std::size_t k = 0; k <= steps; ++k) {
        double t = dt * static_cast<double>(k);
        put(t, ',');
        for (std::size_t i = 0; i < n; ++i) put(x[i], ',');
        for (std::size_t i = 0; i < n; ++i) put(y[i], ',');
        put(vec_norm(vsub(x, y), ns), ',');
        put(std::exp(-c * t) * d0, '\n');
        if (k == steps) break;
        x = rk4_step(f, x, dt);
        y = rk4_step(f, y, dt);
        check_finite(x);
        check_finite(y);
    }
}

} // namespace cvf
