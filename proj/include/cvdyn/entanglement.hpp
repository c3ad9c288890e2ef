#pragma once

#include <cvdyn/symplectic.hpp>

namespace cvdyn {

// Entanglement of two-mode Gaussian states via the partial-transpose test.
// ppt_separable checks whether the reflected covariance is still a valid
// state; log_negativity returns max(0, -log2(2 nu)) where nu is the smaller
// symplectic eigenvalue of the reflected covariance, computed from the
// determinant invariants of the 2x2 blocks.

bool ppt_separable(const GaussianState& state, double tol = -1.0);

double log_negativity(const Mat& cov);
double log_negativity(const GaussianState& state);

} // namespace cvdyn
