// Exact evaluation of the entanglement protocol for coherent-state inputs.
//
// Each dipole branch xy carries a product of coherent states over the four
// output modes (d2, d1, b_out, d_out). Conditioning on a threshold detection
// at d2 and tracing the remaining modes gives the dipole density matrix; the
// fidelity against |Psi_-> = (|gm> - |mg>)/sqrt(2) reduces to
// F = (F1 - F2)/eta with
//   F1  = (rho_gm,gm + rho_mg,mg)/2                  (branch populations)
//   F2  = Re rho_gm,mg                               (branch coherence)
//   eta = (1/4) sum_xy (1 - exp(-|mu_xy|^2))         (detection probability)
// where every inner product is a mode-wise coherent-state overlap. Photons
// lost to kappa_l and dipole decay enter only through |r|^2+|t|^2 < 1.
#pragma once

#include <array>

#include "types.hpp"

namespace dit {

// Per-branch output-mode amplitudes after the cavities and the 50/50
// beamsplitter: mu feeds detector d2, d1 is the bright port, b/d_out are the
// transmitted modes of arms 1 and 2.
struct DetectorAmplitudes {
    std::array<complexd, 4> mu;
    std::array<complexd, 4> d1;
    std::array<complexd, 4> b_out;
    std::array<complexd, 4> d_out;
};

DetectorAmplitudes detector_amplitudes(const SystemPair& pair, const ScatterSet& s);

struct ProtocolResult {
    double fidelity = 0.0;
    double efficiency = 0.0;
    std::array<complexd, 4> mu{};
    // Residual-mode overlap <psi_mg|psi_gm> (d1, b_out, d_out product) and
    // the detected d2 overlap <mu_mg|M|mu_gm> entering F2.
    complexd psi_overlap_gm_mg{};
    complexd mu_overlap_gm_mg{};
    bool fidelity_clamped = false;
};

ProtocolResult fidelity_efficiency(const SystemPair& pair);
ProtocolResult fidelity_efficiency(const SystemPair& pair, const ScatterSet& s);

// Normalized coefficients of the post-detection state to first order in
// photon number (all four branches; c_mm vanishes when r^m = 0). The
// fidelity of this pure state is |c_gm - c_mg|^2 / 2.
struct FirstOrderState {
    std::array<complexd, 4> c{};
    double fidelity = 0.0;
};

FirstOrderState first_order_state(const SystemPair& pair, const ScatterSet& s);

// beta satisfying the matching condition alpha r1g = beta r2g.
complexd matching_amplitudes(const ScatterSet& s, complexd alpha);

} // namespace dit
