#include <cvdyn/detail/highrange.hpp>

#include <cvdyn/detail/compensated.hpp>
#include <cvdyn/errors.hpp>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cvdyn::detail {

LMat to_extended(const Mat& m) { return m.cast<long double>(); }

Mat to_double(const LMat& m) { return m.cast<double>(); }

FlowFactors van_loan(const Mat& drift, const Mat& diffusion, double t) {
    const Eigen::Index n = drift.rows();
    if (drift.cols() != n || diffusion.rows() != n || diffusion.cols() != n)
        throw std::invalid_argument("van_loan: dimension mismatch");
    LMat block = LMat::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = to_extended(drift);
    block.topRightCorner(n, n) = to_extended(diffusion);
    block.bottomRightCorner(n, n) = -to_extended(drift).transpose();
    block *= static_cast<long double>(t);
    LMat e = block.exp();
    FlowFactors out;
    out.f = e.topLeftCorner(n, n);
    out.g = e.topRightCorner(n, n) * out.f.transpose();
    out.g = (0.5L * (out.g + out.g.transpose())).eval();
    return out;
}

LMat psd_sqrt_factor(const LMat& g) {
    Eigen::SelfAdjointEigenSolver<LMat> es(g);
    if (es.info() != Eigen::Success)
        throw NumericalInconsistency("psd_sqrt_factor: eigendecomposition failed");
    LVec lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        lam(i) = lam(i) > 0.0L ? std::sqrt(lam(i)) : 0.0L;
    return es.eigenvectors() * lam.asDiagonal();
}

namespace {

// compensated 2x2 minor of rows (r0, r1), columns (c0, c1)
long double minor2(const LMat& m, int r0, int r1, int c0, int c1) {
    return det2(m(r0, c0), m(r0, c1), m(r1, c0), m(r1, c1));
}

// Laplace expansion of a 4x4 determinant along the first two rows, given the
// six 2x2 minors of rows (0,1) and of rows (2,3) over columns {a<b<c<d}
long double laplace4(long double m_ab, long double m_ac, long double m_ad, long double m_bc,
                     long double m_bd, long double m_cd, long double n_ab, long double n_ac,
                     long double n_ad, long double n_bc, long double n_bd, long double n_cd) {
    KahanSum s;
    s.add(m_ab * n_cd);
    s.add(-m_ac * n_bd);
    s.add(m_ad * n_bc);
    s.add(m_bc * n_ad);
    s.add(-m_bd * n_ac);
    s.add(m_cd * n_ab);
    return s.value();
}

} // namespace

TwoModeInvariants invariants_from_factor(const LMat& l) {
    if (l.rows() != 4 || l.cols() < 4)
        throw std::invalid_argument("invariants_from_factor: need a 4 x M factor, M >= 4");
    const int m = static_cast<int>(l.cols());

    // all 2x2 minors of the two row pairs
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            pairs.emplace_back(i, j);
    std::vector<long double> top(pairs.size()), bot(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        top[k] = minor2(l, 0, 1, pairs[k].first, pairs[k].second);
        bot[k] = minor2(l, 2, 3, pairs[k].first, pairs[k].second);
    }
    auto pair_index = [&](int i, int j) { return i * (2 * m - i - 1) / 2 + (j - i - 1); };

    TwoModeInvariants inv;
    {
        KahanSum a, b, g;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            a.add(top[k] * top[k]);
            b.add(bot[k] * bot[k]);
            g.add(top[k] * bot[k]);
        }
        inv.det_alpha = a.value();
        inv.det_beta = b.value();
        inv.det_gamma = g.value();
    }
    {
        // det V = sum over column quadruples of det(L[:,S])^2
        KahanSum dv;
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                for (int c = b + 1; c < m; ++c)
                    for (int d = c + 1; d < m; ++d) {
                        const long double det4 = laplace4(
                            top[pair_index(a, b)], top[pair_index(a, c)], top[pair_index(a, d)],
                            top[pair_index(b, c)], top[pair_index(b, d)], top[pair_index(c, d)],
                            bot[pair_index(a, b)], bot[pair_index(a, c)], bot[pair_index(a, d)],
                            bot[pair_index(b, c)], bot[pair_index(b, d)], bot[pair_index(c, d)]);
                        dv.add(det4 * det4);
                    }
        inv.det_v = dv.value();
    }
    return inv;
}

TwoModeInvariants invariants_from_cov(const LMat& v) {
    if (v.rows() != 4 || v.cols() != 4)
        throw std::invalid_argument("invariants_from_cov: 4x4 covariance required");
    TwoModeInvariants inv;
    inv.det_alpha = minor2(v, 0, 1, 0, 1);
    inv.det_beta = minor2(v, 2, 3, 2, 3);
    inv.det_gamma = minor2(v, 0, 1, 2, 3);
    inv.det_v = laplace4(minor2(v, 0, 1, 0, 1), minor2(v, 0, 1, 0, 2), minor2(v, 0, 1, 0, 3),
                         minor2(v, 0, 1, 1, 2), minor2(v, 0, 1, 1, 3), minor2(v, 0, 1, 2, 3),
                         minor2(v, 2, 3, 0, 1), minor2(v, 2, 3, 0, 2), minor2(v, 2, 3, 0, 3),
                         minor2(v, 2, 3, 1, 2), minor2(v, 2, 3, 1, 3), minor2(v, 2, 3, 2, 3));
    return inv;
}

long double en_from_invariants(const TwoModeInvariants& inv) {
    const long double delta = inv.det_alpha + inv.det_beta - 2.0L * inv.det_gamma;
    const long double scale =
        std::max({delta * delta, 4.0L * std::abs(inv.det_v), 1e-300L});
    if (inv.det_v <= 0.0L)
        throw NumericalInconsistency("log_negativity: covariance determinant is not positive");
    if (delta <= 0.0L)
        throw NumericalInconsistency("log_negativity: invalid block invariants");
    long double rad = delta * delta - 4.0L * inv.det_v;
    if (rad < -1e-12L * scale)
        throw NumericalInconsistency("log_negativity: discriminant significantly negative");
    if (rad < 0.0L)
        rad = 0.0L;
    const long double nu2 = 2.0L * inv.det_v / (delta + std::sqrt(rad));
    const long double en = -0.5L * std::log2(4.0L * nu2);
    return en > 0.0L ? en : 0.0L;
}

} // namespace cvdyn::detail
