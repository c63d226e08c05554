#include "limits.hpp"

#include <cmath>

#include "cohmath.hpp"
#include "model.hpp"

namespace dit {

void validate(const PulseContext& p, const std::string& key) {
    if (!std::isfinite(p.tau_p) || p.tau_p <= 0.0)
        throw ValidationError(key + ".tau_p: pulse width must be > 0");
    if (!std::isfinite(p.photon_number) || p.photon_number < 0.0)
        throw ValidationError(key + ".photon_number: |alpha|^2 must be >= 0");
    if (!std::isfinite(p.margin) || p.margin <= 1.0)
        throw ValidationError(key + ".margin: margin must be > 1");
}

ExcitationEstimate excitation_probability(const ArmConfig& arm, double flux) {
    validate(arm, "arm");
    if (!std::isfinite(flux) || flux < 0.0)
        throw ValidationError("flux: photon flux must be >= 0");

    const double g = arm.g_transition.g;
    const double delta = arm.g_transition.delta;
    const double kappa = arm.cavity.kappa_total();

    ExcitationEstimate est;
    est.formula_valid = cooperativity(arm) > 1.0;
    const double g2 = g * g;
    est.probability = g2 * kappa * flux / (g2 * g2 + 0.25 * delta * delta * kappa * kappa);
    return est;
}

double weak_limit_flux(const ArmConfig& arm) {
    validate(arm, "arm");
    const double g = arm.g_transition.g;
    const double delta = arm.g_transition.delta;
    const double kappa = arm.cavity.kappa_total();
    if (g <= 0.0)
        throw ValidationError("arm.g_transition.g: flux bound requires g > 0");
    return g * g / kappa + kappa * delta * delta / (g * g);
}

WeakLimitCheck weak_excitation_check(const ArmConfig& arm, const PulseContext& pulse) {
    validate(pulse, "pulse");
    WeakLimitCheck chk;
    chk.flux = pulse.photon_number / pulse.tau_p;
    chk.bound = weak_limit_flux(arm);
    chk.pass = chk.flux * pulse.margin <= chk.bound;
    chk.excitation = excitation_probability(arm, chk.flux);
    return chk;
}

PairLimitReport matched_pair_limit(const SystemPair& pair, const ScatterSet& s,
                                   const PulseContext& pulse) {
    validate(pair, "pair");
    validate(pulse, "pulse");

    PairLimitReport rep;
    rep.bound1 = weak_limit_flux(pair.arm1);
    rep.bound2 = weak_limit_flux(pair.arm2);
    rep.flux_alpha = abs2(pair.alpha) / pulse.tau_p;
    rep.flux_beta = abs2(pair.beta) / pulse.tau_p;
    rep.reflected_rate = abs2(pair.alpha * s.r1g) / pulse.tau_p;
    const double g1 = pair.arm1.g_transition.g;
    rep.reflected_bound = g1 * g1 / pair.arm1.cavity.kappa_total();
    rep.pass_alpha = rep.flux_alpha * pulse.margin <= rep.bound1;
    rep.pass_beta = rep.flux_beta * pulse.margin <= rep.bound2;
    rep.pass_reflected = rep.reflected_rate * pulse.margin <= rep.reflected_bound;
    return rep;
}

void validate(const BiexcitonScenario& s, const std::string& key) {
    if (!std::isfinite(s.g_X) || s.g_X <= 0.0)
        throw ValidationError(key + ".g_X: Rabi frequency must be > 0");
    if (!std::isfinite(s.g_XX) || s.g_XX <= 0.0)
        throw ValidationError(key + ".g_XX: Rabi frequency must be > 0");
    if (!std::isfinite(s.gamma_X) || s.gamma_X <= 0.0)
        throw ValidationError(key + ".gamma_X: decay rate must be > 0");
    if (!std::isfinite(s.delta_X))
        throw ValidationError(key + ".delta_X: detuning must be finite");
    if (!std::isfinite(s.T2) || s.T2 <= 0.0)
        throw ValidationError(key + ".T2: dephasing time must be > 0");
    if (!std::isfinite(s.kappa) || s.kappa <= 0.0)
        throw ValidationError(key + ".kappa: cavity decay must be > 0");
    if (!std::isfinite(s.delta_XX1) || !std::isfinite(s.delta_XX2))
        throw ValidationError(key + ".delta_XX: detunings must be finite");
}

CoherenceFigures coherence_figures(const BiexcitonScenario& s) {
    validate(s, "biexciton");
    CoherenceFigures fig;
    fig.Gamma_X = s.g_X * s.g_X * s.kappa / (s.delta_X * s.delta_X + s.kappa * s.kappa) +
                  s.gamma_X + 1.0 / s.T2;
    fig.N_ent = s.g_XX * s.g_XX / (s.kappa * fig.Gamma_X);
    return fig;
}

SystemPair biexciton_pair(const BiexcitonScenario& s) {
    validate(s, "biexciton");
    SystemPair pair;
    auto make_arm = [&s](double delta_xx) {
        ArmConfig arm;
        arm.cavity = CavityPort{0.0, 0.5 * s.kappa, 0.5 * s.kappa, 0.0};
        arm.g_transition = DipoleTransition{s.g_XX, delta_xx, s.gamma_X};
        arm.m_transition = DipoleTransition{s.g_X, s.delta_X, s.gamma_X};
        return arm;
    };
    pair.arm1 = make_arm(s.delta_XX1);
    pair.arm2 = make_arm(s.delta_XX2);
    pair.omega = 0.0;
    pair.alpha = complexd{0.01, 0.0};
    pair.beta = complexd{0.01, 0.0};
    return pair;
}

} // namespace dit
