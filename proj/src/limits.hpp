// Weak-excitation operating limits of the linear-scattering model and the
// exciton-biexciton coherence figures of merit. A "<<" condition passes when
// the left side times a configurable margin stays at or below the bound.
#pragma once

#include "types.hpp"

namespace dit {

struct PulseContext {
    double tau_p = 0.0;          // laser pulse width (ns)
    double photon_number = 0.0;  // |alpha|^2
    double margin = 10.0;        // required factor between flux and bound
};

void validate(const PulseContext& p, const std::string& key);

// Steady-state excited-state population g^2 kappa flux / (g^4 + delta^2 kappa^2 / 4)
// for the g-transition; the formula presumes cooperativity > 1 and the result
// carries a validity flag instead of failing outside that regime.
struct ExcitationEstimate {
    double probability = 0.0;
    bool formula_valid = true;
};

ExcitationEstimate excitation_probability(const ArmConfig& arm, double flux);

// Photon-flux bound g^2/kappa + kappa delta^2 / g^2 of the g-transition.
double weak_limit_flux(const ArmConfig& arm);

struct WeakLimitCheck {
    double flux = 0.0;
    double bound = 0.0;
    bool pass = false;
    ExcitationEstimate excitation;
};

WeakLimitCheck weak_excitation_check(const ArmConfig& arm, const PulseContext& pulse);

// Both arms' flux bounds plus the reflected-photon rate R = |alpha r1g|^2/tau_p
// against its universal bound g1^2/kappa1. Assumes the matching condition has
// been applied to pair.beta.
struct PairLimitReport {
    double bound1 = 0.0;
    double bound2 = 0.0;
    double flux_alpha = 0.0;
    double flux_beta = 0.0;
    double reflected_rate = 0.0;
    double reflected_bound = 0.0;
    bool pass_alpha = false;
    bool pass_beta = false;
    bool pass_reflected = false;
};

PairLimitReport matched_pair_limit(const SystemPair& pair, const ScatterSet& s,
                                   const PulseContext& pulse);

// Exciton-biexciton scenario: ground state plays |m>, the exciton plays |g>
// and the biexciton plays |e>; the XX transition is cavity-enhanced while
// the cavity-suppressed X line sets the qubit coherence time.
struct BiexcitonScenario {
    double g_X = 0.0;
    double g_XX = 0.0;
    double gamma_X = 0.0;
    double delta_X = 0.0;
    double T2 = 0.0;      // dephasing time (ns)
    double kappa = 0.0;   // total cavity decay (GHz)
    double delta_XX1 = 0.0;
    double delta_XX2 = 0.0;
};

void validate(const BiexcitonScenario& s, const std::string& key);

struct CoherenceFigures {
    double Gamma_X = 0.0;  // qubit decoherence rate (GHz)
    double N_ent = 0.0;    // entanglements per coherence time
};

CoherenceFigures coherence_figures(const BiexcitonScenario& s);

// Two-arm system for the scenario: both cavities at the reference frequency
// with kappa split evenly between the reflected and transmitted channels,
// XX as the g-transition (detuned delta_XX per arm) and X as the m-transition.
SystemPair biexciton_pair(const BiexcitonScenario& s);

} // namespace dit
