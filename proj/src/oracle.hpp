// Brute-force verification of the protocol: the joint dipole x field state
// is evolved branch by branch through the cavity and beamsplitter maps, the
// detector-2 mode is expanded in a truncated Fock basis, the threshold
// projector M = I - |0><0| is applied, and the dipole density matrix,
// fidelity and efficiency are extracted numerically. Deliberately slower and
// structured differently from the protocol closed form.
#pragma once

#include <array>
#include <vector>

#include "types.hpp"

namespace dit {

// Smallest Fock truncation whose Poisson tail beyond n_max stays below
// 1e-12 for a coherent state of the given amplitude; floor 8.
int choose_truncation(complexd amplitude);

// A coherent state realized as an explicit Fock-coefficient vector
// <n|amplitude> for n = 0..n_max. Construction rejects truncations whose
// Poisson tail exceeds the 1e-12 bound.
struct TruncatedCoherentState {
    complexd amplitude{};
    int n_max = 0;
    std::vector<complexd> coefficients;
};

TruncatedCoherentState truncate_coherent(complexd amplitude, int n_max);

// Per-branch coherent amplitudes of the four output modes; each branch
// carries overall weight 1/2 from the initialized dipole superposition.
struct JointState {
    std::array<complexd, 4> d2{};
    std::array<complexd, 4> d1{};
    std::array<complexd, 4> b_out{};
    std::array<complexd, 4> d_out{};
};

JointState evolve(const SystemPair& pair);
JointState evolve(const SystemPair& pair, const ScatterSet& s);

struct OracleResult {
    // Normalized post-detection dipole density matrix, branch-ordered
    // {gg, gm, mg, mm}.
    std::array<std::array<complexd, 4>, 4> rho{};
    double fidelity = 0.0;
    double efficiency = 0.0;
};

OracleResult measure(const JointState& state, int n_max);

// Eigenvalues (ascending) of a 4x4 Hermitian matrix; cyclic Jacobi.
std::array<double, 4> hermitian_eigenvalues(const std::array<std::array<complexd, 4>, 4>& m);

} // namespace dit
