// Steady-state scattering of a monochromatic field off a dipole-coupled
// double-sided cavity, plus the on-resonance Lorentzian simplification and
// the critical-coupling / cooperativity diagnostics.
#pragma once

#include <utility>

#include "types.hpp"

namespace dit {

struct ReflectionTransmission {
    complexd r;
    complexd t;
};

// Reflection and transmission amplitudes at laser frequency omega (global
// frame) with the dipole held in `which`. Pure function of its arguments.
ReflectionTransmission scatter(const ArmConfig& arm, DipoleState which, double omega);

// All eight coefficients of the pair at pair.omega.
ScatterSet scatter_set(const SystemPair& pair);

// Atomic cooperativity g^2/(gamma * kappa_total) of the g-transition.
// Reporting diagnostic only; never enters the scattering math.
double cooperativity(const ArmConfig& arm);

// (kappa_r - kappa_t - kappa_l)/kappa_total; zero at critical coupling.
double critical_coupling_check(const CavityPort& cavity);

// On-resonance simplification r = CL/(1+CL), t = 1/(1+CL) with
// L = gamma/(gamma + i delta_m) and C = g^2/(gamma kappa_r), valid at
// critical coupling. Cross-check against scatter(), never used by it.
ReflectionTransmission lorentzian_limit(const ArmConfig& arm, double delta_m);

} // namespace dit
