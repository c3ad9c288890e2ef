#include <doctest.h>

#include <cvdyn/entanglement.hpp>
#include <cvdyn/errors.hpp>
#include <cvdyn/partial_transpose.hpp>
#include <cvdyn/propagator.hpp>

#include <cmath>
#include <complex>
#include <random>

using namespace cvdyn;
using std::complex;

namespace {

Mat random_symmetric(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = dist(rng);
    return 0.5 * (m + m.transpose().eval());
}

CMat random_psd(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    CMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = complex<double>(dist(rng), dist(rng));
    return m * m.adjoint();
}

QuadraticGenerator random_cp_gen(int modes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    QuadraticGenerator gen;
    gen.hamiltonian = random_symmetric(2 * modes, rng);
    gen.kossakowski = random_psd(2 * modes, rng);
    return gen;
}

QuadraticGenerator random_any_gen(int modes, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0xabcdef12345ULL);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    QuadraticGenerator gen;
    gen.hamiltonian = random_symmetric(2 * modes, rng);
    CMat m(2 * modes, 2 * modes);
    for (int i = 0; i < 2 * modes; ++i)
        for (int j = 0; j < 2 * modes; ++j)
            m(i, j) = complex<double>(dist(rng), dist(rng));
    gen.kossakowski = 0.5 * (m + m.adjoint().eval());
    return gen;
}

GaussianState random_state(int modes, std::uint64_t seed) {
    std::mt19937_64 rng(seed + 17);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GaussianState st;
    st.mean = Vec(2 * modes);
    for (int i = 0; i < 2 * modes; ++i)
        st.mean(i) = dist(rng);
    Mat s = random_symplectic(modes, seed + 17);
    Mat d = Mat::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        const double nu = 0.5 + 0.4 * std::abs(dist(rng));
        d(2 * k, 2 * k) = nu;
        d(2 * k + 1, 2 * k + 1) = nu;
    }
    st.cov = s * d * s.transpose();
    st.cov = 0.5 * (st.cov + st.cov.transpose()).eval();
    return st;
}

double max_rel_diff(const Mat& a, const Mat& b) {
    const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()) + 1e-300;
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

} // namespace

TEST_SUITE("propagator") {

TEST_CASE("zero generator leaves the state untouched") {
    QuadraticGenerator gen;
    gen.hamiltonian = Mat::Zero(4, 4);
    gen.kossakowski = CMat::Zero(4, 4);
    GaussianState st = random_state(2, 7);
    GaussianState out = evolve_exact(gen, st, 1.7);
    CHECK((out.cov - st.cov).cwiseAbs().maxCoeff() < 1e-18);
    CHECK((out.mean - st.mean).cwiseAbs().maxCoeff() < 1e-18);
}

TEST_CASE("free particle spreads ballistically") {
    QuadraticGenerator gen;
    gen.hamiltonian = Mat::Zero(2, 2);
    gen.hamiltonian(1, 1) = 1.0; // p^2/2
    gen.kossakowski = CMat::Zero(2, 2);

    GaussianState st = vacuum_state(1);
    st.mean << 0.4, -1.1;
    const double t = 2.0;
    GaussianState out = evolve_exact(gen, st, t);

    CHECK(out.cov(0, 0) == doctest::Approx(0.5 * (1.0 + t * t)).epsilon(1e-14));
    CHECK(out.cov(0, 1) == doctest::Approx(0.5 * t).epsilon(1e-14));
    CHECK(out.cov(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(out.mean(0) == doctest::Approx(0.4 - 1.1 * t).epsilon(1e-14));
    CHECK(out.mean(1) == doctest::Approx(-1.1).epsilon(1e-14));
}

TEST_CASE("position coupling to the environment heats momentum only") {
    QuadraticGenerator gen;
    gen.hamiltonian = Mat::Zero(2, 2);
    gen.kossakowski = CMat::Zero(2, 2);
    const double kappa = 0.6, t = 3.0;
    gen.kossakowski(0, 0) = kappa;

    GaussianState out = evolve_exact(gen, vacuum_state(1), t);
    CHECK(out.cov(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(out.cov(1, 1) == doctest::Approx(0.5 + kappa * t).epsilon(1e-14));
    CHECK(std::abs(out.cov(0, 1)) < 1e-15);
}

TEST_CASE("harmonic evolution is periodic") {
    QuadraticGenerator gen;
    gen.hamiltonian = Mat::Identity(2, 2);
    gen.kossakowski = CMat::Zero(2, 2);

    GaussianState st = vacuum_state(1);
    st.cov << 1.3, 0.2, 0.2, 0.45;
    st.mean << 0.9, -0.2;

    GaussianState out = evolve_exact(gen, st, 2.0 * M_PI);
    CHECK((out.cov - st.cov).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((out.mean - st.mean).cwiseAbs().maxCoeff() < 1e-12);

    GaussianState quarter = evolve_exact(gen, st, 0.5 * M_PI);
    CHECK(quarter.cov(0, 0) == doctest::Approx(st.cov(1, 1)).epsilon(1e-12));
    CHECK(quarter.cov(1, 1) == doctest::Approx(st.cov(0, 0)).epsilon(1e-12));
}

TEST_CASE("adaptive integration matches the exact propagator") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        QuadraticGenerator gen = random_cp_gen(2, seed);
        GaussianState st = random_state(2, seed);
        GaussianState ex = evolve_exact(gen, st, 0.7);
        GaussianState rk = evolve_rk(gen, st, 0.7);
        CHECK(max_rel_diff(ex.cov, rk.cov) < 1e-8);
        CHECK((ex.mean - rk.mean).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("exact propagation composes as a semigroup") {
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
        QuadraticGenerator gen = random_any_gen(2, seed);
        GaussianState st = random_state(2, seed);
        GaussianState two_leg = evolve_exact(gen, evolve_exact(gen, st, 0.4), 0.6);
        GaussianState one_leg = evolve_exact(gen, st, 1.0);
        CHECK(max_rel_diff(two_leg.cov, one_leg.cov) < 1e-10);
        CHECK((two_leg.mean - one_leg.mean).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("completely positive generators preserve physicality") {
    for (std::uint64_t seed = 60; seed < 80; ++seed) {
        QuadraticGenerator gen = random_cp_gen(2, seed);
        REQUIRE(is_completely_positive(gen));
        for (double t : {0.1, 1.0, 4.0}) {
            GaussianState out = evolve_exact(gen, vacuum_state(2), t);
            CHECK(physical(out));
        }
    }
}

TEST_CASE("partial transpose commutes with evolution") {
    for (std::uint64_t seed = 90; seed < 110; ++seed) {
        QuadraticGenerator gen = random_any_gen(2, seed);
        QuadraticGenerator pt_gen = pt_generator(gen);
        GaussianState st = random_state(2, seed);
        const double t = 0.8;

        GaussianState evolve_then_pt = pt_state(evolve_exact(gen, st, t));
        GaussianState pt_then_evolve = evolve_exact(pt_gen, pt_state(st), t);
        CHECK(max_rel_diff(evolve_then_pt.cov, pt_then_evolve.cov) < 1e-10);
        CHECK((evolve_then_pt.mean - pt_then_evolve.mean).cwiseAbs().maxCoeff() < 1e-10);

        GaussianState rk_route = evolve_rk(pt_gen, pt_state(st), t);
        CHECK(max_rel_diff(evolve_then_pt.cov, rk_route.cov) < 1e-7);
    }
}

TEST_CASE("trajectory log-negativity matches the direct formula at moderate times") {
    QuadraticGenerator gen;
    gen.hamiltonian = Mat::Zero(4, 4);
    gen.hamiltonian(0, 2) = 0.3;
    gen.hamiltonian(2, 0) = 0.3;
    gen.hamiltonian(1, 1) = 1.0;
    gen.hamiltonian(3, 3) = 1.0;
    gen.kossakowski = CMat::Zero(4, 4);
    gen.kossakowski(0, 0) = 0.05;
    gen.kossakowski(0, 2) = -0.05;
    gen.kossakowski(2, 0) = -0.05;
    gen.kossakowski(2, 2) = 0.05;

    const std::vector<double> times = {0.0, 0.5, 1.0, 2.0, 5.0};
    auto traj = en_trajectory(gen, vacuum_state(2), times);
    REQUIRE(traj.size() == times.size());
    CHECK(traj[0] < 1e-9); // the vacuum sits exactly on the degenerate root

    for (std::size_t i = 0; i < times.size(); ++i) {
        const double direct = log_negativity(evolve_exact(gen, vacuum_state(2), times[i]));
        CHECK(traj[i] == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
    }
    CHECK(traj.back() > 0.0);
}

TEST_CASE("impossible tolerances raise the stiffness error") {
    QuadraticGenerator gen;
    gen.hamiltonian = Mat::Identity(2, 2);
    gen.kossakowski = CMat::Zero(2, 2);
    RkOptions opts;
    opts.abs_tol = 1e-300;
    opts.rel_tol = 1e-300;
    // displaced so the rotation has a nonzero right-hand side to misestimate;
    // the vacuum itself is a fixed point with exactly zero step error
    GaussianState st = vacuum_state(1);
    st.mean(0) = 1.0;
    CHECK_THROWS_AS(evolve_rk(gen, st, 1.0, opts), StiffnessError);
}

TEST_CASE("bad arguments are rejected") {
    QuadraticGenerator gen;
    gen.hamiltonian = Mat::Identity(2, 2);
    gen.kossakowski = CMat::Zero(2, 2);
    CHECK_THROWS_AS(evolve_exact(gen, vacuum_state(2), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve_exact(gen, vacuum_state(1), -0.5), std::invalid_argument);
    CHECK_THROWS_AS(en_trajectory(gen, vacuum_state(1), {0.1}), std::invalid_argument);
}

} // TEST_SUITE
