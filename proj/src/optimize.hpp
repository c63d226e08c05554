// Fidelity maximization over the laser frequency and the complex input
// ratio alpha/beta for detuned-cavity configurations. Deterministic
// two-stage search: coarse grid over (omega, Re ratio, Im ratio) followed by
// Nelder-Mead refinement from the best grid point. The objective is the
// exact closed form evaluated at a fixed weak amplitude scale, so the
// landscape is a detuning study, not an amplitude study.
#pragma once

#include <span>
#include <vector>

#include "limits.hpp"
#include "types.hpp"

namespace dit {

struct SearchBox {
    double omega_min = 0.0;
    double omega_max = 0.0;
    double ratio_re_min = -8.0;
    double ratio_re_max = 8.0;
    double ratio_im_min = -8.0;
    double ratio_im_max = 8.0;
};

struct OptimizationProblem {
    SystemPair pair;     // template; amplitudes are derived from target_scale
    SearchBox box;
    double target_scale = 1e-4;  // nominal |alpha r1g|^2 operating point
    int grid_omega = 41;
    int grid_re = 21;
    int grid_im = 21;
    bool optimize_omega = true;  // when false the ratio is tuned at pair.omega
    bool record_trace = false;
};

void validate(const OptimizationProblem& p, const std::string& key);

// omega search box centred on the two cavities with slack for the dipole
// sidebands.
SearchBox default_search_box(const SystemPair& pair);

enum class MatchingRegime { First, Second, Intermediate };

const char* to_string(MatchingRegime r);

struct TracePoint {
    double omega = 0.0;
    complexd ratio{};
    double fidelity = 0.0;
};

struct OptimizationReport {
    double omega = 0.0;
    complexd ratio{};        // alpha / beta at the optimum
    double fidelity = 0.0;
    double efficiency = 0.0;
    MatchingRegime regime = MatchingRegime::Intermediate;
    SystemPair operating_point;  // pair with the optimal frequency/amplitudes
    std::vector<TracePoint> trace;
};

OptimizationReport optimize_fidelity(const OptimizationProblem& problem);

struct FrequencyPoint {
    double omega = 0.0;
    complexd ratio{};
    double fidelity = 0.0;
    double efficiency = 0.0;
};

// Ratio-only optimization at each grid frequency; the curve's argmax is the
// optimal laser frequency of the configuration.
std::vector<FrequencyPoint> fidelity_vs_frequency(const OptimizationProblem& problem,
                                                  std::span<const double> omegas);

// Shared hardware of a detuned pair study; the cavity split and the dipole
// detunings relative to the mid-cavity reference are applied on top.
struct DetunedPairTemplate {
    CavityPort cavity;               // omega_c ignored; split applied as -/+ dws/2
    DipoleTransition g_transition;   // delta ignored; set from Delta1/Delta2
    DipoleTransition m_transition;   // used verbatim on both arms
};

SystemPair make_detuned_pair(const DetunedPairTemplate& tpl, double delta_omega_s,
                             double delta1, double delta2);

struct FidelitySurface {
    std::vector<double> delta_omega_s;
    std::vector<double> delta1;
    std::vector<double> fidelity;  // row-major over (delta_omega_s, delta1)
};

FidelitySurface fidelity_surface(const DetunedPairTemplate& tpl,
                                 std::span<const double> dws_grid,
                                 std::span<const double> delta1_grid, double delta2,
                                 const OptimizationProblem& defaults);

struct BiexcitonMap {
    std::vector<double> delta_xx1;
    std::vector<double> delta_xx2;
    std::vector<double> fidelity;  // row-major over (delta_xx1, delta_xx2)
};

// Operating point used for each cell of the biexciton map. Matched applies
// the plain first matching condition at the common cavity resonance (the
// published treatment of the scenario); the optimize modes tune the ratio
// and optionally the frequency on top.
enum class MapOperating { Matched, OptimizeRatio, OptimizeRatioOmega };

// Fidelity per (delta_XX1, delta_XX2) with the finite X-line coupling kept in
// the m coefficients.
BiexcitonMap biexciton_fidelity_map(const BiexcitonScenario& scenario,
                                    std::span<const double> dxx1_grid,
                                    std::span<const double> dxx2_grid,
                                    const OptimizationProblem& defaults,
                                    MapOperating operating = MapOperating::Matched);

} // namespace dit
