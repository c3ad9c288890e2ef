#include <cvdyn/entanglement.hpp>

#include <cvdyn/detail/highrange.hpp>
#include <cvdyn/partial_transpose.hpp>

#include <stdexcept>

namespace cvdyn {

bool ppt_separable(const GaussianState& state, double tol) {
    if (state.modes() != 2)
        throw std::invalid_argument("ppt_separable: two-mode state required");
    return physical(pt_state(state), tol);
}

double log_negativity(const Mat& cov) {
    if (cov.rows() != 4 || cov.cols() != 4)
        throw std::invalid_argument("log_negativity: 4x4 covariance required");
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > default_tol(cov))
        throw std::invalid_argument("log_negativity: covariance must be symmetric");
    auto inv = detail::invariants_from_cov(detail::to_extended(cov));
    return static_cast<double>(detail::en_from_invariants(inv));
}

double log_negativity(const GaussianState& state) {
    if (state.modes() != 2)
        throw std::invalid_argument("log_negativity: two-mode state required");
    return log_negativity(state.cov);
}

} // namespace cvdyn
