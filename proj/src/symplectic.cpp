#include <cvdyn/symplectic.hpp>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <complex>
#include <random>
#include <stdexcept>

namespace cvdyn {

namespace {

void require_even_square(const Eigen::Index rows, const Eigen::Index cols, const char* who) {
    if (rows != cols || rows < 2 || rows % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": expected a 2N x 2N matrix");
}

} // namespace

Mat build_omega(int n_modes) {
    if (n_modes < 1)
        throw std::invalid_argument("build_omega: n_modes must be >= 1");
    Mat omega = Mat::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

double default_tol(const Mat& m) {
    return 1e-10 * (1.0 + (m.size() ? m.cwiseAbs().maxCoeff() : 0.0));
}

double default_tol(const CMat& m) {
    return 1e-10 * (1.0 + (m.size() ? m.cwiseAbs().maxCoeff() : 0.0));
}

bool is_symplectic(const Mat& s, double tol) {
    require_even_square(s.rows(), s.cols(), "is_symplectic");
    Mat omega = build_omega(static_cast<int>(s.rows()) / 2);
    Mat resid = s * omega * s.transpose() - omega;
    if (tol < 0.0)
        tol = default_tol(s);
    return resid.cwiseAbs().maxCoeff() <= tol;
}

bool uncertainty_ok(const Mat& v, double tol) {
    require_even_square(v.rows(), v.cols(), "uncertainty_ok");
    if ((v - v.transpose()).cwiseAbs().maxCoeff() > default_tol(v))
        throw std::invalid_argument("uncertainty_ok: covariance must be symmetric");
    const int n = static_cast<int>(v.rows()) / 2;
    CMat m = v.cast<std::complex<double>>() +
             std::complex<double>(0.0, 0.5) * build_omega(n).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    if (tol < 0.0)
        tol = default_tol(v);
    return es.eigenvalues().minCoeff() >= -tol;
}

std::vector<double> symplectic_eigenvalues(const Mat& v) {
    require_even_square(v.rows(), v.cols(), "symplectic_eigenvalues");
    if ((v - v.transpose()).cwiseAbs().maxCoeff() > default_tol(v))
        throw std::invalid_argument("symplectic_eigenvalues: covariance must be symmetric");
    {
        Eigen::SelfAdjointEigenSolver<Mat> pd(v, Eigen::EigenvaluesOnly);
        if (pd.eigenvalues().minCoeff() <= 0.0)
            throw std::invalid_argument("symplectic_eigenvalues: covariance must be positive definite");
    }
    const int n = static_cast<int>(v.rows()) / 2;
    Eigen::EigenSolver<Mat> es(build_omega(n) * v, false);
    std::vector<double> moduli(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < 2 * n; ++i)
        moduli[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
    std::sort(moduli.begin(), moduli.end());
    // spectrum comes in +/- i nu pairs; keep one of each
    std::vector<double> nu(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        nu[static_cast<std::size_t>(i)] =
            0.5 * (moduli[static_cast<std::size_t>(2 * i)] + moduli[static_cast<std::size_t>(2 * i + 1)]);
    return nu;
}

Mat random_symplectic(int n_modes, std::uint64_t seed) {
    if (n_modes < 1)
        throw std::invalid_argument("random_symplectic: n_modes must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const int d = 2 * n_modes;
    Mat h(d, d);
    for (int i = 0; i < d; ++i) {
        h(i, i) = unif(rng);
        for (int j = i + 1; j < d; ++j)
            h(i, j) = h(j, i) = unif(rng);
    }
    return (build_omega(n_modes) * h).exp();
}

GaussianState vacuum_state(int n_modes) {
    if (n_modes < 1)
        throw std::invalid_argument("vacuum_state: n_modes must be >= 1");
    return GaussianState{Vec::Zero(2 * n_modes), 0.5 * Mat::Identity(2 * n_modes, 2 * n_modes)};
}

bool physical(const GaussianState& state, double tol) {
    if (state.mean.size() != state.cov.rows())
        throw std::invalid_argument("physical: mean and covariance dimensions differ");
    require_even_square(state.cov.rows(), state.cov.cols(), "physical");
    return uncertainty_ok(state.cov, tol);
}

} // namespace cvdyn
