#include <cvdyn/gravity.hpp>

#include <cvdyn/errors.hpp>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace cvdyn::gravity {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string("scenario: ") + name + " must be positive");
}

const double kSqrtPi = std::sqrt(M_PI);

} // namespace

double newton_coupling(double mass_kg, double distance_m, const Constants& c) {
    require_positive(mass_kg, "mass");
    require_positive(distance_m, "distance");
    return 2.0 * c.newton_g * mass_kg * mass_kg / (distance_m * distance_m * distance_m);
}

double td_reduction(double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument("td_reduction: x must be nonnegative");
    if (x < 0.02) {
        // leading terms of the expansion; the closed form loses all digits
        // here to cancellation between the gaussian and erf pieces
        const double x2 = x * x;
        return x * x2 / (12.0 * kSqrtPi) * (1.0 - 0.45 * x2 + (5.0 / 896.0) * 12.0 * x2 * x2);
    }
    const double gauss = std::exp(-0.25 * x * x);
    return (x * x * x / (4.0 * kSqrtPi)) * gauss * (4.0 / (x * x) + 1.0) - std::erf(0.5 * x);
}

double td_coupling(double k_newton, double distance_m, double r0_m) {
    require_positive(distance_m, "distance");
    require_positive(r0_m, "r0");
    return 2.0 * k_newton * td_reduction(distance_m / r0_m);
}

Eigen::Matrix2d td_kossakowski(double k_newton, double distance_m, double r0_m) {
    require_positive(distance_m, "distance");
    require_positive(r0_m, "r0");
    const double x = distance_m / r0_m;
    const double diag = k_newton * x * x * x / (6.0 * kSqrtPi);
    const double off = 2.0 * k_newton * td_reduction(x);
    Eigen::Matrix2d kn;
    kn << diag, off, off, diag;
    return kn;
}

Eigen::Matrix2d naive_kossakowski(double mass_kg, double distance_m, const Constants& c) {
    const double g = 0.125 * newton_coupling(mass_kg, distance_m, c);
    Eigen::Matrix2d kn;
    kn << g, -g, -g, g;
    return kn;
}

ScaledGenerator build_generator(const Scenario& s, double t_max_s) {
    require_positive(s.mass_kg, "mass");
    require_positive(s.distance_m, "distance");
    require_positive(s.trap_frequency_rad_s, "trap frequency");
    require_positive(s.constants.newton_g, "G");
    require_positive(s.constants.hbar, "hbar");
    if (s.model == Model::td)
        require_positive(s.r0_m, "r0");
    if (!(t_max_s >= 0.0))
        throw std::invalid_argument("scenario: t_max must be nonnegative");

    const double omega = s.trap_frequency_rad_s;
    const double m_omega2 = s.mass_kg * omega * omega;
    const double k = newton_coupling(s.mass_kg, s.distance_m, s.constants);

    ScaledGenerator out;
    out.x0_m = std::sqrt(s.constants.hbar / (s.mass_kg * omega));
    out.t0_s = 1.0 / omega;

    Eigen::Matrix2d kappa_n = Eigen::Matrix2d::Zero();
    double k_eff = k;
    switch (s.model) {
    case Model::newton:
        break;
    case Model::naive:
        kappa_n = naive_kossakowski(s.mass_kg, s.distance_m, s.constants);
        break;
    case Model::td:
        kappa_n = td_kossakowski(k, s.distance_m, s.r0_m);
        k_eff = td_coupling(k, s.distance_m, s.r0_m);
        break;
    }

    const double c = k_eff / m_omega2;
    out.coupling_c = c;

    Mat h = Mat::Zero(4, 4);
    h(1, 1) = 1.0; // kinetic energy, free fall after release
    h(3, 3) = 1.0;
    h(0, 0) = -c;
    h(2, 2) = -c;
    h(0, 2) = c;
    h(2, 0) = c;

    CMat kappa = CMat::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            kappa(2 * a, 2 * b) = kappa_n(a, b) / m_omega2;

    out.gen.hamiltonian = h;
    out.gen.kossakowski = kappa;

    // regime guards: the quadratic expansion needs K << m omega^2 and the
    // wavepackets must stay small against every geometric length in play
    const double coupling_ratio = std::abs(k) / m_omega2;
    const double tau = omega * t_max_s;
    const double spread = out.x0_m * std::sqrt(0.5 * (1.0 + tau * tau));
    double geometry = s.distance_m;
    if (s.model == Model::td)
        geometry = std::min(geometry, s.r0_m);
    const double spread_ratio = spread / geometry;

    auto guard = [&out](double ratio, const char* what) {
        if (ratio > 1.0) {
            std::ostringstream msg;
            msg << "regime violated: " << what << " ratio " << ratio << " exceeds 1";
            throw RegimeError(msg.str());
        }
        if (ratio > 1e-2) {
            std::ostringstream msg;
            msg << "marginal regime: " << what << " ratio " << ratio << " exceeds 1e-2";
            out.warnings.push_back(msg.str());
        }
    };
    guard(coupling_ratio, "coupling to trap stiffness");
    guard(spread_ratio, "wavepacket spread to geometry");

    return out;
}

double critical_ratio() {
    // generation survives while diag(kappa)^2 < 2 * coupling^2; the
    // crossover ratio is the root of diag / coupling = sqrt(2)
    auto excess = [](double x) {
        const double diag = x * x * x / (12.0 * kSqrtPi);
        return diag - std::sqrt(2.0) * td_reduction(x);
    };
    double lo = 0.1, hi = 2.0;
    if (!(excess(lo) < 0.0) || !(excess(hi) > 0.0))
        throw std::logic_error("critical_ratio: bracket failed");
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double critical_r0(double distance_m) {
    require_positive(distance_m, "distance");
    return distance_m / critical_ratio();
}

} // namespace cvdyn::gravity
