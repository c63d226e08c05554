#include "types.hpp"

namespace dit {

namespace {

void require_finite(double v, const std::string& key) {
    if (!std::isfinite(v))
        throw ValidationError(key + ": value must be finite");
}

} // namespace

void validate(const DipoleTransition& t, const std::string& key) {
    require_finite(t.g, key + ".g");
    require_finite(t.delta, key + ".delta");
    require_finite(t.gamma, key + ".gamma");
    if (t.g < 0.0)
        throw ValidationError(key + ".g: vacuum Rabi frequency must be >= 0");
    if (t.gamma <= 0.0)
        throw ValidationError(key + ".gamma: decay rate must be > 0");
}

void validate(const CavityPort& c, const std::string& key) {
    require_finite(c.omega_c, key + ".omega_c");
    require_finite(c.kappa_r, key + ".kappa_r");
    require_finite(c.kappa_t, key + ".kappa_t");
    require_finite(c.kappa_l, key + ".kappa_l");
    if (c.kappa_r <= 0.0)
        throw ValidationError(key + ".kappa_r: reflected-channel decay must be > 0");
    if (c.kappa_t < 0.0)
        throw ValidationError(key + ".kappa_t: transmitted-channel decay must be >= 0");
    if (c.kappa_l < 0.0)
        throw ValidationError(key + ".kappa_l: leaky-channel decay must be >= 0");
    if (c.kappa_total() <= 0.0)
        throw ValidationError(key + ": total cavity decay must be > 0");
}

void validate(const ArmConfig& a, const std::string& key) {
    validate(a.cavity, key + ".cavity");
    validate(a.g_transition, key + ".g_transition");
    validate(a.m_transition, key + ".m_transition");
}

void validate(const SystemPair& p, const std::string& key) {
    validate(p.arm1, key + ".arm1");
    validate(p.arm2, key + ".arm2");
    require_finite(p.omega, key + ".laser.omega");
    if (!std::isfinite(p.alpha.real()) || !std::isfinite(p.alpha.imag()))
        throw ValidationError(key + ".laser.alpha: amplitude must be finite");
    if (!std::isfinite(p.beta.real()) || !std::isfinite(p.beta.imag()))
        throw ValidationError(key + ".laser.beta: amplitude must be finite");
}

} // namespace dit
