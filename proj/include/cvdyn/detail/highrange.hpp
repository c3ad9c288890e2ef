#pragma once

#include <cvdyn/lindblad.hpp>
#include <cvdyn/symplectic.hpp>

#include <Eigen/Dense>

namespace cvdyn::detail {

// Extended-precision helpers for trajectories whose covariance becomes
// extremely ill-conditioned (ballistic spreading makes cond(V) grow like
// t^4, which destroys determinants computed from rounded entries). The
// covariance is kept in factored form V = L L^T; 2x2 minors of L are
// symplectic-area-sized even when entries are huge, and compensated
// determinants keep them at full relative accuracy.

using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

LMat to_extended(const Mat& m);
Mat to_double(const LMat& m);

struct FlowFactors {
    LMat f; // propagator exp(A t)
    LMat g; // accumulated diffusion integral(exp(A s) D exp(A^T s) ds)
};

// single expm of the doubled block matrix gives both factors
FlowFactors van_loan(const Mat& drift, const Mat& diffusion, double t);

// symmetric PSD square root with negative-eigenvalue clamping
LMat psd_sqrt_factor(const LMat& g);

struct TwoModeInvariants {
    long double det_alpha = 0.0L;
    long double det_beta = 0.0L;
    long double det_gamma = 0.0L;
    long double det_v = 0.0L;
};

// from a 4 x M factor with V = L L^T (Cauchy-Binet over column pairs)
TwoModeInvariants invariants_from_factor(const LMat& l);

// from covariance entries directly (compensated 2x2 minors, Laplace for det V)
TwoModeInvariants invariants_from_cov(const LMat& v);

// log-negativity from the invariants; throws NumericalInconsistency when the
// inputs cannot belong to any positive definite covariance
long double en_from_invariants(const TwoModeInvariants& inv);

} // namespace cvdyn::detail
