#pragma once

#include <cvdyn/lindblad.hpp>
#include <cvdyn/symplectic.hpp>

#include <string>

namespace cvdyn {

// Partial transposition of the second mode of a two-mode system. On phase
// space it acts as the reflection Theta = diag(1, 1, -1, 1): states map as
// V -> Theta V Theta, m -> Theta m. Generators map so that evolving then
// transposing equals transposing then evolving with the mapped generator.

struct BipartiteBlocks {
    Mat h;        // full 4x4 hamiltonian
    Mat h1, h2;   // 2x2 local blocks
    Mat h12;      // 2x2 coupling block (rows mode 1, cols mode 2)
    CMat kappa1, kappa2, kappa12; // 2x2 blocks of kossakowski
};

BipartiteBlocks split_bipartite(const QuadraticGenerator& gen);
QuadraticGenerator join_bipartite(const BipartiteBlocks& blocks);

Mat reflection_theta();

GaussianState pt_state(const GaussianState& state);
QuadraticGenerator pt_generator(const QuadraticGenerator& gen);

enum class Generation { generating, non_generating, undecidable };

struct GenerationReport {
    Generation verdict = Generation::undecidable;
    double det_re_kappa_n = 0.0; // determinant of the 2x2 diffusive-class matrix
    double c = 0.0;              // position-position coupling strength h(0,2)
    bool pt_cp = false;          // partial transpose of generator still CP
    std::string reason;
};

// Decides whether a two-mode diffusive-class generator with a pure
// position-position coupling creates entanglement from some separable state.
// Requires: plain diffusive class, coupling only in the x1*x2 entry of the
// interaction block (local hamiltonian blocks are unconstrained). Anything
// else is reported undecidable rather than guessed at.
GenerationReport entanglement_generating(const QuadraticGenerator& gen, double tol = -1.0);

} // namespace cvdyn
