#include <cvdyn/entanglement.hpp>
#include <cvdyn/errors.hpp>
#include <cvdyn/gravity.hpp>
#include <cvdyn/lindblad.hpp>
#include <cvdyn/partial_transpose.hpp>
#include <cvdyn/propagator.hpp>
#include <cvdyn/symplectic.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

// Release gate for the pair-dynamics library. Each numbered check prints one
// PASS/FAIL line with the measured quantity; the exit status is the number of
// failed checks. Thresholds are fixed here on purpose: loosening them is a
// release decision, not a code change.

namespace {

using namespace cvdyn;

int g_failures = 0;

void report(int number, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", number, detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double unif(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Mat random_symmetric(int dim, std::mt19937_64& rng) {
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            a(i, j) = unif(rng, -1.0, 1.0);
    return 0.5 * (a + a.transpose());
}

CMat random_complex(int dim, std::mt19937_64& rng) {
    CMat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            a(i, j) = {unif(rng, -1.0, 1.0), unif(rng, -1.0, 1.0)};
    return a;
}

CMat random_psd(int dim, std::mt19937_64& rng) {
    CMat b = random_complex(dim, rng);
    CMat kn = b * b.adjoint() / dim + 0.01 * CMat::Identity(dim, dim);
    return 0.5 * (kn + kn.adjoint());
}

// PSD spectrum with one eigenvalue flipped clearly negative
CMat random_indefinite(int dim, std::mt19937_64& rng) {
    Eigen::SelfAdjointEigenSolver<CMat> es(random_psd(dim, rng));
    Vec ev = es.eigenvalues();
    const int flip = static_cast<int>(unif(rng, 0.0, 1.0) * dim) % dim;
    ev(flip) = -(0.05 + unif(rng, 0.0, 1.0)) * ev.maxCoeff();
    CMat kn = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    return 0.5 * (kn + kn.adjoint());
}

QuadraticGenerator class_gen(const CMat& kn, const Mat& h) {
    const int n = static_cast<int>(kn.rows());
    QuadraticGenerator gen;
    gen.hamiltonian = h;
    gen.kossakowski = CMat::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            gen.kossakowski(2 * a, 2 * b) = kn(a, b);
    return gen;
}

GaussianState random_physical_state(int n_modes, std::mt19937_64& rng) {
    Vec nu(2 * n_modes);
    for (int i = 0; i < n_modes; ++i) {
        const double v = 0.5 + unif(rng, 0.0, 1.0);
        nu(2 * i) = v;
        nu(2 * i + 1) = v;
    }
    const Mat s = random_symplectic(n_modes, rng());
    GaussianState st;
    st.cov = s * nu.asDiagonal() * s.transpose();
    st.cov = 0.5 * (st.cov + st.cov.transpose()).eval();
    st.mean = Vec(2 * n_modes);
    for (int i = 0; i < 2 * n_modes; ++i)
        st.mean(i) = unif(rng, -2.0, 2.0);
    return st;
}

gravity::Scenario make_scenario(gravity::Model model, double r0_m = 5e-4) {
    gravity::Scenario s;
    s.model = model;
    s.r0_m = r0_m;
    return s;
}

std::vector<double> en_at_seconds(const gravity::ScaledGenerator& sg,
                                  const std::vector<double>& times_s) {
    std::vector<double> taus(times_s.size());
    for (std::size_t i = 0; i < times_s.size(); ++i)
        taus[i] = times_s[i] / sg.t0_s;
    return en_trajectory(sg.gen, vacuum_state(2), taus);
}

double en_at_second(const gravity::ScaledGenerator& sg, double t_s) {
    return en_at_seconds(sg, {t_s})[0];
}

// first t in [t_lo, t_hi] with f(t) >= threshold, refined by bisection;
// negative when the level is never reached
template <class F>
double first_crossing(F&& f, double t_lo, double t_hi, double step, double threshold) {
    double prev = t_lo;
    if (f(t_lo) >= threshold)
        return t_lo;
    for (double t = t_lo + step; t <= t_hi + 0.5 * step; t += step) {
        if (f(t) >= threshold) {
            double lo = prev, hi = t;
            for (int i = 0; i < 80 && hi - lo > 1e-6; ++i) {
                const double mid = 0.5 * (lo + hi);
                (f(mid) >= threshold ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev = t;
    }
    return -1.0;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / (n - 1.0));
    g.front() = lo;
    g.back() = hi;
    return g;
}

void criterion_1() {
    const double ratio = gravity::critical_ratio();
    report(1, std::abs(ratio - 0.85) <= 0.01,
           "critical separation-to-length ratio = " + fmt(ratio) + " (want 0.85 +/- 0.01)");
}

void criterion_2() {
    const double r0 = gravity::critical_r0(3e-4);
    report(2, std::abs(r0 - 3.5e-4) <= 0.02 * 3.5e-4,
           "critical regularization length at d = 3e-4 m: " + fmt(r0) +
               " m (want 3.5e-4 +/- 2%)");
}

void criterion_3() {
    const auto sg = gravity::build_generator(make_scenario(gravity::Model::newton), 2.0);
    const double t = first_crossing([&](double x) { return en_at_second(sg, x); }, 0.2,
                                    2.0, 0.05, 1e-2);
    report(3, t >= 0.64 && t <= 0.96,
           "bare-coupling log-negativity crosses 1e-2 at t = " + fmt(t) +
               " s (want 0.8 +/- 20%)");
}

void criterion_4() {
    const int nr = 36;
    const auto radii = log_grid(3.6e-4, 1e-2, nr);
    std::vector<gravity::ScaledGenerator> gens;
    gens.reserve(radii.size());
    for (double r0 : radii)
        gens.push_back(gravity::build_generator(make_scenario(gravity::Model::td, r0), 7.0));
    auto best = [&](double t_s) {
        double v = 0.0;
        for (const auto& sg : gens)
            v = std::max(v, en_at_second(sg, t_s));
        return v;
    };
    const double t = first_crossing(best, 0.5, 7.0, 0.1, 1e-2);
    report(4, t >= 3.76 && t <= 5.64,
           "best regulated log-negativity over r0 in [3.6e-4, 1e-2] m crosses 1e-2 at t = " +
               fmt(t) + " s (want 4.7 +/- 20%)");
}

void criterion_5() {
    const auto times = log_grid(0.01, 50.0, 25);
    const auto newton =
        en_at_seconds(gravity::build_generator(make_scenario(gravity::Model::newton), 50.0),
                      times);
    bool ordered = true;
    double worst_gap = 1e300;
    for (double r0 : {3e-3, 5e-4, 3.7e-4}) {
        const auto td = en_at_seconds(
            gravity::build_generator(make_scenario(gravity::Model::td, r0), 50.0), times);
        for (std::size_t i = 0; i < times.size(); ++i) {
            ordered = ordered && td[i] < newton[i];
            worst_gap = std::min(worst_gap, newton[i] - td[i]);
        }
    }
    double plateau_max = 0.0;
    for (double r0 : {3e-4, 2.5e-4}) {
        const auto td = en_at_seconds(
            gravity::build_generator(make_scenario(gravity::Model::td, r0), 50.0), times);
        for (double v : td)
            plateau_max = std::max(plateau_max, v);
    }
    report(5, ordered && plateau_max <= 1e-9,
           "regulated stays below bare at every sampled time (smallest gap " +
               fmt(worst_gap) + "), zero plateau max " + fmt(plateau_max) +
               " for d/r0 in {1.0, 1.2} (want <= 1e-9)");
}

void criterion_6() {
    std::mt19937_64 rng(61);
    bool all_generating = true;
    bool det_zero = true;
    for (int trial = 0; trial < 50; ++trial) {
        gravity::Scenario s = make_scenario(gravity::Model::naive);
        s.mass_kg = std::pow(10.0, unif(rng, -8.0, -6.0));
        s.distance_m = std::pow(10.0, unif(rng, -4.0, -3.0));
        s.trap_frequency_rad_s = std::pow(10.0, unif(rng, 4.5, 5.5));
        const auto sg = gravity::build_generator(s, 1.0);
        const GenerationReport rep = entanglement_generating(sg.gen);
        all_generating = all_generating && rep.verdict == Generation::generating;
        det_zero = det_zero && rep.det_re_kappa_n == 0.0;
    }

    const auto times = log_grid(0.5, 30.0, 20);
    const auto en_n =
        en_at_seconds(gravity::build_generator(make_scenario(gravity::Model::newton), 30.0),
                      times);
    const auto en_v =
        en_at_seconds(gravity::build_generator(make_scenario(gravity::Model::naive), 30.0),
                      times);
    bool nonneg = true;
    double max_rel = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double rel = en_n[i] == 0.0 ? 0.0 : (en_n[i] - en_v[i]) / en_n[i];
        nonneg = nonneg && rel >= 0.0;
        max_rel = std::max(max_rel, rel);
    }
    report(6, all_generating && det_zero && nonneg && max_rel >= 0.0316,
           "collapse-noise channel always generating with exactly zero determinant; "
           "relative reduction in [0.5, 30] s peaks at " +
               fmt(max_rel) + " (want >= 0.0316)");
}

void criterion_7() {
    std::mt19937_64 rng(71);
    int bad_indefinite = 0;
    int bad_psd = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 4;

        const CMat neg = random_indefinite(n, rng);
        const QuadraticGenerator gen_neg = class_gen(neg, random_symmetric(2 * n, rng));
        const DiffusiveClassSpec spec_neg{neg, std::nullopt};
        const auto w = violation_witness(spec_neg);
        const auto rep_neg = positivity_equals_cp_check(gen_neg, spec_neg);
        if (!w || !(w->value < 0.0) || !rep_neg.violated || !rep_neg.consistent)
            ++bad_indefinite;

        const CMat pos = random_psd(n, rng);
        const QuadraticGenerator gen_pos = class_gen(pos, random_symmetric(2 * n, rng));
        const DiffusiveClassSpec spec_pos{pos, std::nullopt};
        const auto rep_pos = positivity_equals_cp_check(gen_pos, spec_pos);
        bool ok = !violation_witness(spec_pos).has_value() && !rep_pos.violated &&
                  rep_pos.consistent;
        for (double t : {0.2, 0.7, 1.5})
            ok = ok && uncertainty_ok(evolve_exact(gen_pos, vacuum_state(n), t).cov);
        if (!ok)
            ++bad_psd;
    }
    report(7, bad_indefinite == 0 && bad_psd == 0,
           "uncertainty violation tracks the sign of the diffusion matrix: " +
               std::to_string(bad_indefinite) + "/1000 indefinite and " +
               std::to_string(bad_psd) + "/1000 positive draws failed (want 0 and 0)");
}

void criterion_8() {
    std::mt19937_64 rng(81);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        QuadraticGenerator gen;
        gen.hamiltonian = random_symmetric(4, rng);
        if (trial % 2 == 0) {
            CMat kn = random_complex(2, rng);
            gen = class_gen(0.5 * (kn + kn.adjoint()).eval(), gen.hamiltonian);
        } else {
            gen.kossakowski = random_psd(2 * 2, rng);
        }
        const GaussianState st = random_physical_state(2, rng);
        const double t = 0.7;
        const GaussianState lhs = pt_state(evolve_exact(gen, st, t));
        const GaussianState rhs = evolve_exact(pt_generator(gen), pt_state(st), t);
        const double scale = 1.0 + lhs.cov.cwiseAbs().maxCoeff();
        worst = std::max(worst, (lhs.cov - rhs.cov).cwiseAbs().maxCoeff() / scale);
        worst = std::max(worst, (lhs.mean - rhs.mean).cwiseAbs().maxCoeff() / scale);
    }
    report(8, worst <= 1e-10,
           "transpose-then-evolve equals evolve-then-transpose to " + fmt(worst) +
               " over 200 generators (want <= 1e-10)");
}

void criterion_9() {
    std::mt19937_64 rng(91);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        QuadraticGenerator gen;
        gen.hamiltonian = random_symmetric(4, rng);
        gen.kossakowski = random_psd(4, rng);
        const GaussianState st = random_physical_state(2, rng);
        const double t = 1.0;
        const GaussianState a = evolve_exact(gen, st, t);
        const GaussianState b = evolve_rk(gen, st, t);
        const double scale = 1.0 + a.cov.cwiseAbs().maxCoeff();
        worst = std::max(worst, (a.cov - b.cov).cwiseAbs().maxCoeff() / scale);
        worst = std::max(worst, (a.mean - b.mean).cwiseAbs().maxCoeff() / scale);
    }
    report(9, worst <= 1e-8,
           "closed-form and adaptive integrators agree to " + fmt(worst) +
               " over 200 completely positive generators (want <= 1e-8)");
}

void criterion_10() {
    double worst = 0.0;
    for (double r : {0.1, 0.5, 1.0}) {
        const double ch = 0.5 * std::cosh(2.0 * r);
        const double sh = 0.5 * std::sinh(2.0 * r);
        Mat v = ch * Mat::Identity(4, 4);
        v(0, 2) = v(2, 0) = sh;
        v(1, 3) = v(3, 1) = -sh;
        const double want = 2.0 * r / std::log(2.0);
        worst = std::max(worst, std::abs(log_negativity(v) - want));
    }
    report(10, worst <= 1e-9,
           "two-mode squeezed log-negativity off by " + fmt(worst) +
               " from 2r*log2(e) (want <= 1e-9)");
}

void criterion_11() {
    std::mt19937_64 rng(111);
    double worst = 0.0;
    for (int trial = 0; trial < 60; ++trial) {
        Mat h = Mat::Zero(4, 4);
        h.topLeftCorner<2, 2>() = random_symmetric(2, rng);
        h.bottomRightCorner<2, 2>() = random_symmetric(2, rng);
        const QuadraticGenerator gen = class_gen(random_psd(2, rng), h);

        GaussianState product = vacuum_state(2);
        const Mat s1 = random_symplectic(1, rng());
        const Mat s2 = random_symplectic(1, rng());
        product.cov.topLeftCorner<2, 2>() = 0.5 * s1 * s1.transpose();
        product.cov.bottomRightCorner<2, 2>() = 0.5 * s2 * s2.transpose();

        for (const GaussianState& st : {vacuum_state(2), product})
            for (double en : en_trajectory(gen, st, {0.3, 1.0, 3.0, 8.0}))
                worst = std::max(worst, en);
    }
    report(11, worst <= 1e-9,
           "uncoupled modes under positive correlated diffusion stay separable: max "
           "log-negativity " +
               fmt(worst) + " (want <= 1e-9)");
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria failed\n", g_failures);
    return g_failures;
}
