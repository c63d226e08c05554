#include "model.hpp"

#include <cmath>

namespace dit {

namespace {

const complexd kI{0.0, 1.0};

} // namespace

ReflectionTransmission scatter(const ArmConfig& arm, DipoleState which, double omega) {
    if (!std::isfinite(omega))
        throw ValidationError("omega: laser frequency must be finite");
    validate(arm, "arm");

    const CavityPort& c = arm.cavity;
    const DipoleTransition& tr =
        which == DipoleState::g ? arm.g_transition : arm.m_transition;

    const double delta_omega = omega - c.omega_c;
    // Dipole back-action term g^2 / (-i(dw - delta) + gamma); gamma > 0 keeps
    // it pole-free at exact dipole resonance.
    const complexd dipole =
        tr.g * tr.g / (-kI * (delta_omega - tr.delta) + tr.gamma);
    const complexd denom =
        -kI * delta_omega + 0.5 * c.kappa_total() + dipole;

    ReflectionTransmission out;
    out.r = (-kI * delta_omega + dipole + 0.5 * (c.kappa_r - c.kappa_t - c.kappa_l)) / denom;
    out.t = std::sqrt(c.kappa_r * c.kappa_t) / denom;
    return out;
}

ScatterSet scatter_set(const SystemPair& pair) {
    ScatterSet s;
    const auto g1 = scatter(pair.arm1, DipoleState::g, pair.omega);
    const auto m1 = scatter(pair.arm1, DipoleState::m, pair.omega);
    const auto g2 = scatter(pair.arm2, DipoleState::g, pair.omega);
    const auto m2 = scatter(pair.arm2, DipoleState::m, pair.omega);
    s.r1g = g1.r; s.t1g = g1.t;
    s.r1m = m1.r; s.t1m = m1.t;
    s.r2g = g2.r; s.t2g = g2.t;
    s.r2m = m2.r; s.t2m = m2.t;
    return s;
}

double cooperativity(const ArmConfig& arm) {
    validate(arm, "arm");
    const DipoleTransition& tr = arm.g_transition;
    return tr.g * tr.g / (tr.gamma * arm.cavity.kappa_total());
}

double critical_coupling_check(const CavityPort& cavity) {
    validate(cavity, "cavity");
    return (cavity.kappa_r - cavity.kappa_t - cavity.kappa_l) / cavity.kappa_total();
}

ReflectionTransmission lorentzian_limit(const ArmConfig& arm, double delta_m) {
    validate(arm, "arm");
    if (!std::isfinite(delta_m))
        throw ValidationError("delta_m: detuning must be finite");
    if (std::abs(critical_coupling_check(arm.cavity)) > 1e-9)
        throw ValidationError(
            "cavity: lorentzian_limit requires critical coupling (kappa_r = kappa_t + kappa_l)");

    const DipoleTransition& tr = arm.g_transition;
    // kappa_1 is the reflected-channel rate at critical coupling.
    const double coop = tr.g * tr.g / (tr.gamma * arm.cavity.kappa_r);
    const complexd lorentz = tr.gamma / complexd(tr.gamma, delta_m);
    const complexd cl = coop * lorentz;

    ReflectionTransmission out;
    out.r = cl / (1.0 + cl);
    out.t = 1.0 / (1.0 + cl);
    return out;
}

} // namespace dit
