#pragma once

#include <iosfwd>
#include <vector>

#include "cvf/fields.hpp"

namespace cvf {

/// Fixed-step RK4 trajectory on a uniform grid.
struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<Vector> states;

    double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
    const Vector& back() const { return states.back(); }
    std::size_t size() const { return states.size(); }
};

/// Classical RK4 for dx/dt = f(x); throws IntegrationError on non-finite
/// states.
Trajectory integrate(const VectorField& f, const Vector& x0, double T, double dt);

/// min over the grid of  e^{-ct} ||x0 - y0|| - ||x(t) - y(t)||. Nonnegative
/// (up to integrator slack) when the field contracts at rate c. Trajectories
/// are integrated in lockstep and not stored.
double incremental_stability_margin(const VectorField& f, const NormSpec& ns, const Vector& x0,
                                    const Vector& y0, double c, double T, double dt);

/// Margins of the decay condition along the grid: for each t,
///   -c ||D(t)|| - (||D(t+dt)|| - ||D(t)||)/dt,   D = x - y.
/// The forward difference under-resolves the derivative by O(dt), so healthy
/// fields report margins above a small negative floor.
std::vector<double> dini_decay_margins(const VectorField& f, const NormSpec& ns, const Vector& x0,
                                       const Vector& y0, double c, double T, double dt);

/// Streams rows  t, x..., y..., ||x-y||, e^{-ct}||x0-y0||  as CSV.
void write_pair_decay_csv(std::ostream& os, const VectorField& f, const NormSpec& ns,
                          const Vector& x0, const Vector& y0, double c, double T, double dt);

} // namespace cvf
