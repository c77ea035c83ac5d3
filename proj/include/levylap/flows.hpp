#pragma once

#include "levylap/levy.hpp"

#include <utility>
#include <vector>

namespace levylap {

/// Template functional at heat-flow time t: every leaf form is replaced by
/// its spectral heat propagation; the tree shape and outer maps are kept.
FunctionalPtr heat_functional(const PathFunctional& tmpl, double t);

/// |d/dt eval(F_t, c) - levy_analytic(F_t, c)| at time t, with the time
/// derivative taken as a centered difference of half-width dt.
double levy_heat_residual(const PathFunctional& tmpl, const Curve& c, double t,
                          double dt = 1e-5);

/// (limit, rate): the t -> infinity value of the heat-flowed template along c
/// (exact, from the harmonic projection of the leaves) and the decay rate of
/// |F(t) - F(inf)| from a log-linear fit over the t_grid samples. Fit points
/// with t < 0.05 (mode mixing) or |F(t) - F(inf)| < 1e-12 (floor) are
/// excluded; the rate is 0 when fewer than two points survive.
std::pair<double, double> long_time_limit(const PathFunctional& tmpl,
                                          const Curve& c,
                                          const std::vector<double>& t_grid);

/// U(1) Yang-Mills heat flow d/dt a = -delta d a: the coexact part decays
/// spectrally, the exact and harmonic parts are fixed points.
OneForm ym_u1_flow(const OneForm& a0, double t);

/// Residual |d/dt U^{a(t)}(c) - Levy Laplacian of U^{a(t)} at c| at each grid
/// time, with a(t) the heat flow of a0 and a centered dt difference in time.
std::vector<double> u1_transport_heat_check(const OneForm& a0, const Curve& c,
                                            const std::vector<double>& t_grid,
                                            double dt = 1e-5);

}  // namespace levylap
