#pragma once

#include <cvdyn/lindblad.hpp>
#include <cvdyn/symplectic.hpp>

#include <vector>

namespace cvdyn {

// Propagation of Gaussian states under a quadratic generator. evolve_exact
// uses a single matrix exponential of the doubled system (drift and
// diffusion at once); evolve_rk integrates the moment equations with an
// adaptive embedded Runge-Kutta pair and exists as an independent
// cross-check. Both require t >= 0.

GaussianState evolve_exact(const QuadraticGenerator& gen, const GaussianState& state, double t);

struct RkOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
};

// throws StiffnessError if the controller drives the step size to zero
GaussianState evolve_rk(const QuadraticGenerator& gen, const GaussianState& state, double t,
                        const RkOptions& opts = {});

// log-negativity of a two-mode trajectory, evaluated in factored extended
// precision so late times with enormous position spread stay accurate
std::vector<double> en_trajectory(const QuadraticGenerator& gen, const GaussianState& state,
                                  const std::vector<double>& times);

} // namespace cvdyn
