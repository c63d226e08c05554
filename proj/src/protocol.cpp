#include "protocol.hpp"

#include <cmath>

#include "cohmath.hpp"
#include "model.hpp"

namespace dit {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

} // namespace

DetectorAmplitudes detector_amplitudes(const SystemPair& pair, const ScatterSet& s) {
    DetectorAmplitudes out;
    for (int b = 0; b < 4; ++b) {
        const complexd u = pair.alpha * s.r(1, branch_state1(b));
        const complexd v = pair.beta * s.r(2, branch_state2(b));
        out.mu[b] = (u - v) * kInvSqrt2;
        out.d1[b] = (u + v) * kInvSqrt2;
        out.b_out[b] = pair.alpha * s.t(1, branch_state1(b));
        out.d_out[b] = pair.beta * s.t(2, branch_state2(b));
    }
    return out;
}

ProtocolResult fidelity_efficiency(const SystemPair& pair) {
    validate(pair, "pair");
    return fidelity_efficiency(pair, scatter_set(pair));
}

ProtocolResult fidelity_efficiency(const SystemPair& pair, const ScatterSet& s) {
    const DetectorAmplitudes amps = detector_amplitudes(pair, s);

    bool any_mu = false;
    for (int b = 0; b < 4; ++b)
        if (abs2(amps.mu[b]) > 0.0) any_mu = true;
    if (!any_mu)
        throw ComputeError("no detection possible: all detector-2 amplitudes vanish");

    double eta = 0.0;
    for (int b = 0; b < 4; ++b)
        eta += 0.25 * detection_probability(amps.mu[b]);
    if (eta < 1e-300)
        throw ComputeError("no detection possible: detection probability underflows");

    const double f1 =
        0.5 * 0.25 * (detection_probability(amps.mu[kGM]) + detection_probability(amps.mu[kMG]));

    // <psi_mg|psi_gm> over the three traced modes, times the detected d2
    // overlap, gives the gm-mg coherence of the unnormalized density matrix.
    const complexd psi_ov = coherent_overlap(amps.d1[kMG], amps.d1[kGM]) *
                            coherent_overlap(amps.b_out[kMG], amps.b_out[kGM]) *
                            coherent_overlap(amps.d_out[kMG], amps.d_out[kGM]);
    const complexd mu_ov = detected_overlap(amps.mu[kMG], amps.mu[kGM]);
    const double f2 = 0.25 * (psi_ov * mu_ov).real();

    ProtocolResult res;
    res.mu = amps.mu;
    res.psi_overlap_gm_mg = psi_ov;
    res.mu_overlap_gm_mg = mu_ov;
    res.efficiency = eta;

    double f = (f1 - f2) / eta;
    if (f < -1e-9 || f > 1.0 + 1e-9)
        res.fidelity_clamped = true;
    res.fidelity = std::min(1.0, std::max(0.0, f));
    return res;
}

FirstOrderState first_order_state(const SystemPair& pair, const ScatterSet& s) {
    const DetectorAmplitudes amps = detector_amplitudes(pair, s);

    double norm2 = 0.0;
    for (int b = 0; b < 4; ++b)
        norm2 += abs2(amps.mu[b]);
    if (norm2 <= 0.0)
        throw ComputeError("first-order state has zero norm");

    FirstOrderState st;
    const double inv_norm = 1.0 / std::sqrt(norm2);
    for (int b = 0; b < 4; ++b)
        st.c[b] = amps.mu[b] * inv_norm;
    st.fidelity = 0.5 * abs2(st.c[kGM] - st.c[kMG]);
    return st;
}

complexd matching_amplitudes(const ScatterSet& s, complexd alpha) {
    if (std::abs(s.r2g) < 1e-12)
        throw ComputeError(
            "first matching condition singular; use second matching condition");
    return alpha * s.r1g / s.r2g;
}

} // namespace dit
