#pragma once

#include <cvdyn/symplectic.hpp>

#include <optional>

// Quadratic Markovian generators. A generator is the pair (H, kappa):
//   - H real symmetric 2N x 2N, the Hamiltonian matrix of (1/2) r^T H r
//   - kappa complex Hermitian 2N x 2N (Kossakowski matrix in the quadrature
//     basis)
// The induced flow on Gaussian states is
//   dV/dt = A V + V A^T + D,   dm/dt = A m,
//   A = Omega (H - Im kappa),  D = Omega^T Re kappa Omega.
// The map is completely positive iff kappa >= 0.

namespace cvdyn {

struct QuadraticGenerator {
    Mat hamiltonian;
    CMat kossakowski;

    int modes() const { return static_cast<int>(hamiltonian.rows()) / 2; }
};

// Shape/symmetry/Hermiticity checks; throws std::invalid_argument.
void validate(const QuadraticGenerator& gen);

bool is_completely_positive(const QuadraticGenerator& gen, double tol = -1.0);

Mat drift_matrix(const QuadraticGenerator& gen);
Mat diffusion_matrix(const QuadraticGenerator& gen);

Mat covariance_rhs(const QuadraticGenerator& gen, const Mat& v);
Vec mean_rhs(const QuadraticGenerator& gen, const Vec& mean);

// Diffusive (position-coupled) generators: kappa = kappa_N (x) tau with
// tau = [[1,0],[0,0]] and kappa_N an N x N Hermitian matrix, possibly
// conjugated by a symplectic S as kappa = S^T (kappa_N (x) tau) S.
struct DiffusiveClassSpec {
    CMat kappa_n;
    std::optional<Mat> conjugation; // S, when the plain form holds only after unwinding it
};

// Recognizes membership. Without S the plain pattern is required; with S the
// kappa is conjugated by the inverse first and the plain form re-tested.
std::optional<DiffusiveClassSpec> in_diffusive_class(const QuadraticGenerator& gen,
                                                     const std::optional<Mat>& s = std::nullopt,
                                                     double tol = -1.0);

// Certificate that a non-CP diffusive generator breaks the uncertainty
// relation: u annihilates I + i Omega, and the initial rate u† dV/dt|_{I/2} u
// equals `value` = lambda ||v||^2 < 0 independently of the Hamiltonian.
struct ViolationWitness {
    CVec u;           // 2N phase-space vector, u = ⊕_n (a_n, i a_n)
    CVec mode_vector; // v, unit eigenvector of the most negative eigenvalue
    double value;
};

// Empty when kappa_N >= 0. Deterministic: most negative eigenvalue, ties
// broken by lowest index. Requires a plain-form spec (no conjugation).
std::optional<ViolationWitness> violation_witness(const DiffusiveClassSpec& spec);

struct PositivityCpReport {
    double epsilon_used;                  // integration time after refinement
    double min_eig;                       // min eig of V_eps + (i/2) Omega
    bool violated;                        // uncertainty broken at eps
    std::optional<double> witness_value;  // present iff kappa_N not PSD
    bool consistent;                      // violated <=> witness present
};

// Integrates the covariance flow from V0 = I/2 over a short time and compares
// the observed positivity against the witness prediction. eps is halved until
// the first-order term dominates the quadratic residual.
PositivityCpReport positivity_equals_cp_check(const QuadraticGenerator& gen,
                                              const DiffusiveClassSpec& spec,
                                              double eps0 = 1e-3);

} // namespace cvdyn
