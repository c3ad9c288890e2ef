#include <cvdyn/lindblad.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cvdyn {

namespace {

using std::complex;

// Relative tolerance for structural pattern tests. The additive default
// policy would swamp generators whose entries are physically tiny (the
// dimensionless gravity couplings sit around 1e-17), so structure checks
// scale with the matrix instead.
double structure_tol(const CMat& m, double tol) {
    if (tol >= 0.0)
        return tol;
    const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    return 1e-10 * scale;
}

Mat im_part(const CMat& m) { return m.imag(); }
Mat re_part(const CMat& m) { return m.real(); }

} // namespace

void validate(const QuadraticGenerator& gen) {
    const auto n = gen.hamiltonian.rows();
    if (n < 2 || n % 2 != 0 || gen.hamiltonian.cols() != n)
        throw std::invalid_argument("generator: hamiltonian must be 2N x 2N");
    if (gen.kossakowski.rows() != n || gen.kossakowski.cols() != n)
        throw std::invalid_argument("generator: kossakowski dimension mismatch");
    if ((gen.hamiltonian - gen.hamiltonian.transpose()).cwiseAbs().maxCoeff() >
        default_tol(gen.hamiltonian))
        throw std::invalid_argument("generator: hamiltonian must be symmetric");
    if ((gen.kossakowski - gen.kossakowski.adjoint()).cwiseAbs().maxCoeff() >
        default_tol(gen.kossakowski))
        throw std::invalid_argument("generator: kossakowski must be Hermitian");
    if (!gen.hamiltonian.allFinite() || !gen.kossakowski.allFinite())
        throw std::invalid_argument("generator: entries must be finite");
}

bool is_completely_positive(const QuadraticGenerator& gen, double tol) {
    validate(gen);
    if (tol < 0.0)
        tol = default_tol(gen.kossakowski);
    Eigen::SelfAdjointEigenSolver<CMat> es(gen.kossakowski, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

Mat drift_matrix(const QuadraticGenerator& gen) {
    validate(gen);
    return build_omega(gen.modes()) * (gen.hamiltonian - im_part(gen.kossakowski));
}

Mat diffusion_matrix(const QuadraticGenerator& gen) {
    validate(gen);
    Mat omega = build_omega(gen.modes());
    return omega.transpose() * re_part(gen.kossakowski) * omega;
}

Mat covariance_rhs(const QuadraticGenerator& gen, const Mat& v) {
    if (v.rows() != gen.hamiltonian.rows() || v.cols() != v.rows())
        throw std::invalid_argument("covariance_rhs: dimension mismatch");
    Mat a = drift_matrix(gen);
    Mat rhs = a * v + v * a.transpose() + diffusion_matrix(gen);
    return 0.5 * (rhs + rhs.transpose());
}

Vec mean_rhs(const QuadraticGenerator& gen, const Vec& mean) {
    if (mean.size() != gen.hamiltonian.rows())
        throw std::invalid_argument("mean_rhs: dimension mismatch");
    return drift_matrix(gen) * mean;
}

std::optional<DiffusiveClassSpec> in_diffusive_class(const QuadraticGenerator& gen,
                                                     const std::optional<Mat>& s, double tol) {
    validate(gen);
    CMat kappa = gen.kossakowski;
    if (s.has_value()) {
        if (!is_symplectic(*s))
            throw std::invalid_argument("in_diffusive_class: conjugation must be symplectic");
        if (s->rows() != kappa.rows())
            throw std::invalid_argument("in_diffusive_class: conjugation dimension mismatch");
        // kappa = S^T (kappa_N (x) tau) S  =>  unwind with the inverse
        Mat sinv = s->inverse();
        kappa = sinv.transpose().cast<complex<double>>() * kappa * sinv.cast<complex<double>>();
    }
    const double t = structure_tol(kappa, tol);
    const int n = static_cast<int>(kappa.rows()) / 2;
    // every entry touching a momentum index must vanish
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j)
            if ((i % 2 == 1 || j % 2 == 1) && std::abs(kappa(i, j)) > t)
                return std::nullopt;
    CMat kappa_n(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            kappa_n(a, b) = kappa(2 * a, 2 * b);
    kappa_n = 0.5 * (kappa_n + kappa_n.adjoint().eval()); // scrub roundoff from the unwinding
    return DiffusiveClassSpec{kappa_n, s};
}

std::optional<ViolationWitness> violation_witness(const DiffusiveClassSpec& spec) {
    if (spec.conjugation.has_value())
        throw std::invalid_argument(
            "violation_witness: plain-form spec required; transform the state instead");
    const int n = static_cast<int>(spec.kappa_n.rows());
    if (n < 1 || spec.kappa_n.cols() != n)
        throw std::invalid_argument("violation_witness: malformed kappa_n");
    Eigen::SelfAdjointEigenSolver<CMat> es(spec.kappa_n);
    const double lambda = es.eigenvalues()(0); // ascending: most negative first
    if (lambda >= 0.0)
        return std::nullopt;

    CVec v = es.eigenvectors().col(0);
    // deterministic phase: largest-modulus entry (lowest index on ties) real positive
    int pivot = 0;
    double best = 0.0;
    for (int i = 0; i < n; ++i)
        if (std::abs(v(i)) > best + 1e-15) {
            best = std::abs(v(i));
            pivot = i;
        }
    v *= std::conj(v(pivot)) / std::abs(v(pivot));

    ViolationWitness w;
    w.mode_vector = v;
    w.value = lambda; // = lambda * ||v||^2 with unit v
    w.u = CVec::Zero(2 * n);
    const complex<double> iu(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
        const complex<double> a = std::conj(v(k));
        w.u(2 * k) = a;
        w.u(2 * k + 1) = iu * a;
    }
    return w;
}

namespace {

// fixed-step RK4 on the covariance flow; plenty for the short horizons used here
Mat integrate_cov(const QuadraticGenerator& gen, Mat v, double t_final, int steps) {
    const double h = t_final / steps;
    for (int s = 0; s < steps; ++s) {
        Mat k1 = covariance_rhs(gen, v);
        Mat k2 = covariance_rhs(gen, v + 0.5 * h * k1);
        Mat k3 = covariance_rhs(gen, v + 0.5 * h * k2);
        Mat k4 = covariance_rhs(gen, v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return 0.5 * (v + v.transpose().eval());
}

double min_uncertainty_eig(const Mat& v) {
    const int n = static_cast<int>(v.rows()) / 2;
    CMat m = v.cast<complex<double>>() +
             complex<double>(0.0, 0.5) * build_omega(n).cast<complex<double>>();
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace

PositivityCpReport positivity_equals_cp_check(const QuadraticGenerator& gen,
                                              const DiffusiveClassSpec& spec, double eps0) {
    validate(gen);
    if (spec.conjugation.has_value())
        throw std::invalid_argument("positivity_equals_cp_check: plain-form spec required");
    if (eps0 <= 0.0)
        throw std::invalid_argument("positivity_equals_cp_check: eps0 must be positive");
    {
        auto plain = in_diffusive_class(gen);
        if (!plain || (plain->kappa_n - spec.kappa_n).cwiseAbs().maxCoeff() >
                          structure_tol(gen.kossakowski, -1.0) + 1e-14)
            throw std::invalid_argument("positivity_equals_cp_check: spec does not match generator");
    }

    const int n2 = static_cast<int>(gen.hamiltonian.rows());
    const Mat v0 = 0.5 * Mat::Identity(n2, n2);
    auto witness = violation_witness(spec);

    const double drift_scale = drift_matrix(gen).cwiseAbs().maxCoeff();
    double eps = std::min(eps0, 1e-2 / std::max(1.0, drift_scale));

    PositivityCpReport rep{};
    if (witness) {
        // shrink eps until the witness's first-order rate dominates the
        // quadratic remainder of the short-time expansion
        for (int iter = 0; iter < 60; ++iter) {
            Mat v_eps = integrate_cov(gen, v0, eps, 64);
            CMat m = v_eps.cast<complex<double>>() +
                     complex<double>(0.0, 0.5) *
                         build_omega(n2 / 2).cast<complex<double>>();
            const double observed = std::real(witness->u.dot(m * witness->u));
            const double linear = eps * witness->value;
            if (std::abs(observed - linear) <= 0.1 * std::abs(linear))
                break;
            eps *= 0.5;
        }
        rep.witness_value = witness->value;
    }

    Mat v_eps = integrate_cov(gen, v0, eps, 64);
    rep.epsilon_used = eps;
    rep.min_eig = min_uncertainty_eig(v_eps);
    rep.violated = rep.min_eig < -1e-13 * (1.0 + v_eps.cwiseAbs().maxCoeff());
    rep.consistent = rep.violated == witness.has_value();
    return rep;
}

} // namespace cvdyn
