#include <cvdyn/partial_transpose.hpp>

#include <cvdyn/detail/compensated.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cvdyn {

namespace {

void require_two_modes(Eigen::Index rows, const char* who) {
    if (rows != 4)
        throw std::invalid_argument(std::string(who) + ": two-mode (4x4) input required");
}

double rel_tol(double scale) { return 1e-10 * scale; }

} // namespace

BipartiteBlocks split_bipartite(const QuadraticGenerator& gen) {
    validate(gen);
    require_two_modes(gen.hamiltonian.rows(), "split_bipartite");
    BipartiteBlocks b;
    b.h = gen.hamiltonian;
    b.h1 = gen.hamiltonian.block<2, 2>(0, 0);
    b.h12 = gen.hamiltonian.block<2, 2>(0, 2);
    b.h2 = gen.hamiltonian.block<2, 2>(2, 2);
    b.kappa1 = gen.kossakowski.block<2, 2>(0, 0);
    b.kappa12 = gen.kossakowski.block<2, 2>(0, 2);
    b.kappa2 = gen.kossakowski.block<2, 2>(2, 2);
    return b;
}

QuadraticGenerator join_bipartite(const BipartiteBlocks& blocks) {
    QuadraticGenerator gen;
    gen.hamiltonian = Mat::Zero(4, 4);
    gen.hamiltonian.block<2, 2>(0, 0) = blocks.h1;
    gen.hamiltonian.block<2, 2>(0, 2) = blocks.h12;
    gen.hamiltonian.block<2, 2>(2, 0) = blocks.h12.transpose();
    gen.hamiltonian.block<2, 2>(2, 2) = blocks.h2;
    gen.kossakowski = CMat::Zero(4, 4);
    gen.kossakowski.block<2, 2>(0, 0) = blocks.kappa1;
    gen.kossakowski.block<2, 2>(0, 2) = blocks.kappa12;
    gen.kossakowski.block<2, 2>(2, 0) = blocks.kappa12.adjoint();
    gen.kossakowski.block<2, 2>(2, 2) = blocks.kappa2;
    validate(gen);
    return gen;
}

Mat reflection_theta() {
    Mat theta = Mat::Identity(4, 4);
    theta(2, 2) = -1.0;
    return theta;
}

GaussianState pt_state(const GaussianState& state) {
    if (state.mean.size() != 4 || state.cov.rows() != 4 || state.cov.cols() != 4)
        throw std::invalid_argument("pt_state: two-mode state required");
    Mat theta = reflection_theta();
    GaussianState out;
    out.mean = theta * state.mean;
    out.cov = theta * state.cov * theta;
    return out;
}

QuadraticGenerator pt_generator(const QuadraticGenerator& gen) {
    validate(gen);
    require_two_modes(gen.hamiltonian.rows(), "pt_generator");

    // Conjugate the covariance flow (A, D) by the reflection, then read the
    // hamiltonian and kossakowski matrices back off the transformed flow.
    const Mat theta = reflection_theta();
    const Mat omega = build_omega(2);
    const Mat a = theta * drift_matrix(gen) * theta;
    const Mat d = theta * diffusion_matrix(gen) * theta;

    const Mat re_kappa = omega * d * omega.transpose();
    const Mat y = omega.transpose() * a; // equals H' - Im kappa'
    const Mat h = 0.5 * (y + y.transpose());
    const Mat im_kappa = -0.5 * (y - y.transpose());

    QuadraticGenerator out;
    out.hamiltonian = h;
    out.kossakowski = re_kappa.cast<std::complex<double>>() +
                      std::complex<double>(0.0, 1.0) * im_kappa.cast<std::complex<double>>();
    validate(out);
    return out;
}

GenerationReport entanglement_generating(const QuadraticGenerator& gen, double tol) {
    validate(gen);
    require_two_modes(gen.hamiltonian.rows(), "entanglement_generating");

    GenerationReport rep;

    auto cls = in_diffusive_class(gen, std::nullopt, tol);
    if (!cls) {
        rep.reason = "kossakowski is not in plain diffusive form";
        return rep;
    }
    const CMat& kn = cls->kappa_n;

    Eigen::SelfAdjointEigenSolver<CMat> es_kn(kn, Eigen::EigenvaluesOnly);
    const double kn_scale = kn.cwiseAbs().maxCoeff();
    if (es_kn.eigenvalues().minCoeff() < -(tol >= 0.0 ? tol : rel_tol(kn_scale))) {
        rep.reason = "kossakowski is not positive semidefinite";
        return rep;
    }

    const Mat& h = gen.hamiltonian;
    const double h_scale = h.cwiseAbs().maxCoeff();
    const double tol_h = tol >= 0.0 ? tol : rel_tol(h_scale);
    if (std::abs(h(0, 3)) > tol_h || std::abs(h(1, 2)) > tol_h || std::abs(h(1, 3)) > tol_h) {
        rep.reason = "interaction is not a pure position-position coupling";
        return rep;
    }

    rep.c = h(0, 2);
    const double a = kn(0, 1).real();
    rep.det_re_kappa_n =
        static_cast<double>(detail::det2(kn(0, 0).real(), a, a, kn(1, 1).real()));

    {
        QuadraticGenerator pt = pt_generator(gen);
        const double pt_scale = pt.kossakowski.cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<CMat> es_pt(pt.kossakowski, Eigen::EigenvaluesOnly);
        rep.pt_cp = es_pt.eigenvalues().minCoeff() >=
                    -(tol >= 0.0 ? tol : rel_tol(pt_scale));
    }

    // det is compensated, so its error is relative to det itself, not to the
    // entry scale; keeping kn_scale^2 out of the tolerance lets couplings far
    // below the noise floor still decide the strict inequality
    const double c2 = rep.c * rep.c;
    const double scale = std::max(std::abs(rep.det_re_kappa_n), c2);
    const double tol_det = tol >= 0.0 ? tol : rel_tol(scale);
    if (rep.det_re_kappa_n < c2 - tol_det) {
        rep.verdict = Generation::generating;
        rep.reason = "partial transpose breaks complete positivity";
    } else {
        rep.verdict = Generation::non_generating;
        rep.reason = "partial transpose stays completely positive";
    }
    return rep;
}

} // namespace cvdyn
