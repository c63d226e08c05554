// Domain types for the two-arm dipole-cavity system. All rates and
// frequencies are plain GHz and times ns; the scattering formulas depend
// only on ratios of same-unit quantities, so no angular-frequency
// convention is imposed.
#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "errors.hpp"

namespace dit {

using complexd = std::complex<double>;

// One optical transition of a dipole: vacuum Rabi frequency g, detuning
// delta from its own cavity resonance, and non-cavity decay rate gamma.
struct DipoleTransition {
    double g = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
};

// A double-sided cavity: resonance offset from the global reference frame
// and decay rates into the reflected, transmitted and parasitic channels.
struct CavityPort {
    double omega_c = 0.0;
    double kappa_r = 0.0;
    double kappa_t = 0.0;
    double kappa_l = 0.0;

    double kappa_total() const { return kappa_r + kappa_t + kappa_l; }
};

// One arm of the interferometer: a cavity plus the transitions that couple
// when the dipole sits in |g> or in |m>. Perfect selection-rule decoupling
// of |m> is the special case m_transition.g == 0, not a separate code path.
struct ArmConfig {
    CavityPort cavity;
    DipoleTransition g_transition;
    DipoleTransition m_transition;
};

enum class DipoleState { g, m };

// The eight steady-state amplitudes {r,t} x {g,m} x {arm1,arm2} at one laser
// frequency.
struct ScatterSet {
    complexd r1g, t1g, r1m, t1m;
    complexd r2g, t2g, r2m, t2m;

    complexd r(int arm, DipoleState s) const {
        if (arm == 1) return s == DipoleState::g ? r1g : r1m;
        return s == DipoleState::g ? r2g : r2m;
    }
    complexd t(int arm, DipoleState s) const {
        if (arm == 1) return s == DipoleState::g ? t1g : t1m;
        return s == DipoleState::g ? t2g : t2m;
    }
};

// Full protocol configuration: two arms, the common laser frequency (global
// reference frame) and the coherent input amplitudes.
struct SystemPair {
    ArmConfig arm1;
    ArmConfig arm2;
    double omega = 0.0;
    complexd alpha{0.0, 0.0};
    complexd beta{0.0, 0.0};
};

// The four dipole branches, ordered so that |Psi_-> lives on {gm, mg}.
enum Branch : int { kGG = 0, kGM = 1, kMG = 2, kMM = 3 };

inline DipoleState branch_state1(int b) { return b < 2 ? DipoleState::g : DipoleState::m; }
inline DipoleState branch_state2(int b) { return (b % 2) == 0 ? DipoleState::g : DipoleState::m; }

void validate(const DipoleTransition& t, const std::string& key);
void validate(const CavityPort& c, const std::string& key);
void validate(const ArmConfig& a, const std::string& key);
void validate(const SystemPair& p, const std::string& key);

} // namespace dit
