#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

// Phase-space conventions used throughout:
//   - N modes, quadratures ordered r = (x_1, p_1, ..., x_N, p_N)
//   - symplectic form Omega = I_N (x) omega with omega = [[0,1],[-1,0]],
//     so [r_i, r_j] = i Omega_ij with hbar scaled out
//   - a covariance matrix V is physical iff V + (i/2) Omega >= 0;
//     the vacuum is V = I/2
// All dense matrices are Eigen row-major-agnostic MatrixXd/MatrixXcd.

namespace cvdyn {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

Mat build_omega(int n_modes);

// Default tolerance policy for positivity and structure checks:
// 1e-10 * (1 + max_ij |M_ij|). Every predicate taking `tol` treats a
// negative value as "use the default for the matrix at hand".
double default_tol(const Mat& m);
double default_tol(const CMat& m);

bool is_symplectic(const Mat& s, double tol = -1.0);

// min eig of V + (i/2) Omega >= -tol. Requires square even dimension.
bool uncertainty_ok(const Mat& v, double tol = -1.0);

// Moduli of the eigenvalues of i Omega V, each listed once, ascending.
// Requires V symmetric positive definite.
std::vector<double> symplectic_eigenvalues(const Mat& v);

// S = exp(Omega H) with H symmetric, entries uniform in [-1, 1] drawn from
// a seeded mt19937_64. Deterministic for a given (n_modes, seed).
Mat random_symplectic(int n_modes, std::uint64_t seed);

struct GaussianState {
    Vec mean;
    Mat cov;

    int modes() const { return static_cast<int>(mean.size()) / 2; }
};

GaussianState vacuum_state(int n_modes);

// uncertainty_ok plus shape validation of the pair (mean, cov).
bool physical(const GaussianState& state, double tol = -1.0);

} // namespace cvdyn
