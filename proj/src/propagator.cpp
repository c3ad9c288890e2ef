#include <cvdyn/propagator.hpp>

#include <cvdyn/detail/highrange.hpp>
#include <cvdyn/errors.hpp>

#include <boost/numeric/odeint.hpp>

#include <stdexcept>
#include <vector>

namespace cvdyn {

namespace {

void check_inputs(const QuadraticGenerator& gen, const GaussianState& state, double t) {
    validate(gen);
    if (state.mean.size() != gen.hamiltonian.rows() || state.cov.rows() != state.mean.size() ||
        state.cov.cols() != state.mean.size())
        throw std::invalid_argument("evolve: state and generator dimensions differ");
    if (!(t >= 0.0))
        throw std::invalid_argument("evolve: time must be nonnegative");
}

} // namespace

GaussianState evolve_exact(const QuadraticGenerator& gen, const GaussianState& state, double t) {
    check_inputs(gen, state, t);
    auto ff = detail::van_loan(drift_matrix(gen), diffusion_matrix(gen), t);
    detail::LMat v = ff.f * detail::to_extended(state.cov) * ff.f.transpose() + ff.g;
    v = (0.5L * (v + v.transpose())).eval();
    GaussianState out;
    out.cov = detail::to_double(v);
    out.mean = detail::to_double(ff.f * state.mean.cast<long double>());
    return out;
}

GaussianState evolve_rk(const QuadraticGenerator& gen, const GaussianState& state, double t,
                        const RkOptions& opts) {
    check_inputs(gen, state, t);
    const int n = static_cast<int>(state.mean.size());
    if (t == 0.0)
        return state;

    using state_t = std::vector<double>;
    auto pack = [n](const Vec& mean, const Mat& cov) {
        state_t y(static_cast<std::size_t>(n + n * n));
        for (int i = 0; i < n; ++i)
            y[i] = mean(i);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                y[n + i * n + j] = cov(i, j);
        return y;
    };
    auto unpack_cov = [n](const state_t& y) {
        Mat cov(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                cov(i, j) = y[n + i * n + j];
        return cov;
    };

    const Mat a = drift_matrix(gen);
    const Mat d = diffusion_matrix(gen);
    auto system = [&](const state_t& y, state_t& dydt, double) {
        Vec mean(n);
        for (int i = 0; i < n; ++i)
            mean(i) = y[i];
        Mat cov = unpack_cov(y);
        Vec dm = a * mean;
        Mat dc = a * cov + cov * a.transpose() + d;
        dydt.resize(y.size());
        for (int i = 0; i < n; ++i)
            dydt[i] = dm(i);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                dydt[n + i * n + j] = dc(i, j);
    };

    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<state_t>>(opts.abs_tol,
                                                                          opts.rel_tol);
    state_t y = pack(state.mean, state.cov);
    double time = 0.0;
    double dt = t / 64.0;
    const double dt_floor = t * 1e-14;
    while (time < t) {
        if (dt > t - time)
            dt = t - time;
        ode::controlled_step_result res;
        int attempts = 0;
        do {
            res = stepper.try_step(system, y, time, dt);
            if (res == ode::fail && (dt < dt_floor || ++attempts > 200))
                throw StiffnessError("evolve_rk: step size underflow, generator too stiff "
                                     "for the requested tolerance");
        } while (res == ode::fail);
        // keep the covariance block exactly symmetric as it integrates
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double s = 0.5 * (y[n + i * n + j] + y[n + j * n + i]);
                y[n + i * n + j] = s;
                y[n + j * n + i] = s;
            }
    }

    GaussianState out;
    out.mean = Vec(n);
    for (int i = 0; i < n; ++i)
        out.mean(i) = y[i];
    out.cov = unpack_cov(y);
    return out;
}

std::vector<double> en_trajectory(const QuadraticGenerator& gen, const GaussianState& state,
                                  const std::vector<double>& times) {
    check_inputs(gen, state, 0.0);
    if (state.mean.size() != 4)
        throw std::invalid_argument("en_trajectory: two-mode state required");
    const Mat a = drift_matrix(gen);
    const Mat d = diffusion_matrix(gen);
    const detail::LMat l0 = detail::psd_sqrt_factor(detail::to_extended(state.cov));

    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (!(t >= 0.0))
            throw std::invalid_argument("en_trajectory: times must be nonnegative");
        auto ff = detail::van_loan(a, d, t);
        detail::LMat l(4, 8);
        l.leftCols(4) = ff.f * l0;
        l.rightCols(4) = detail::psd_sqrt_factor(ff.g);
        out.push_back(
            static_cast<double>(detail::en_from_invariants(detail::invariants_from_factor(l))));
    }
    return out;
}

} // namespace cvdyn
