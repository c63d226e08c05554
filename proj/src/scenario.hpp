// Scenario files: JSON configuration ingestion with strict schema
// validation (unknown keys rejected, every domain invariant enforced at load
// with a keyed message), built-in presets, and serialization. All rates are
// GHz and times ns throughout.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "limits.hpp"
#include "optimize.hpp"
#include "types.hpp"

namespace dit {

using json = nlohmann::ordered_json;

struct LaserConfig {
    double omega = 0.0;
    complexd alpha{0.0, 0.0};
    bool auto_match = true;  // beta derived from the first matching condition
    complexd beta{0.0, 0.0};
};

struct OptimizeConfig {
    std::optional<double> omega_min;  // auto box when absent
    std::optional<double> omega_max;
    double ratio_re_min = -8.0, ratio_re_max = 8.0;
    double ratio_im_min = -8.0, ratio_im_max = 8.0;
    double target_scale = 1e-4;
    int grid_omega = 41, grid_re = 21, grid_im = 21;
    std::optional<bool> optimize_omega;  // default: kind-dependent
    bool record_trace = false;
};

enum class SweepKind {
    Amplitude,        // fidelity/efficiency vs |alpha r1g|^2
    ConstantFidelity, // efficiency vs delta1 at fixed fidelity
    Frequency,        // ratio-optimized fidelity vs laser frequency
    CavityDetuning,   // optimized fidelity vs cavity separation per Delta1
    CavityMap,        // optimized fidelity over (cavity separation, Delta1)
    BiexcitonMap,     // fidelity over (delta_XX1, delta_XX2)
};

const char* to_string(SweepKind k);

struct SweepConfig {
    SweepKind kind = SweepKind::Amplitude;

    // amplitude
    double amp_min = 1e-3, amp_max = 100.0;
    bool log_axis = true;

    // constant-fidelity
    double target_fidelity = 0.85;
    double delta1_min = 0.0, delta1_max = 100.0;
    std::vector<double> delta2_values{0.0};

    // frequency
    double omega_min = -60.0, omega_max = 60.0;

    // cavity-detuning / cavity-map
    double dws_min = 0.0, dws_max = 150.0;
    std::vector<double> delta1_values{0.0};
    double delta2 = 0.0;
    int dws_steps = 16;
    int delta1_steps = 7;

    // biexciton-map
    double dxx1_min = 0.0, dxx1_max = 100.0;
    double dxx2_min = 0.0, dxx2_max = 100.0;
    int dxx1_steps = 11, dxx2_steps = 11;
    MapOperating operating = MapOperating::Matched;

    int steps = 41;  // grid size of the single-axis kinds
};

struct Scenario {
    ArmConfig arm1;
    ArmConfig arm2;
    LaserConfig laser;
    double tau_p = 10.0;
    double margin = 10.0;
    std::optional<BiexcitonScenario> biexciton;
    std::optional<SweepConfig> sweep;
    OptimizeConfig optimize;
};

// Built-in presets: "section3" (the photonic-crystal parameter set g=20,
// kappa=100, gamma=0.125 with ideally decoupled |m>) and "biexciton" (the
// exciton-biexciton scenario g=20, kappa=50, delta_X=250, T2=2).
std::vector<std::string> preset_names();
Scenario preset_scenario(const std::string& name);

Scenario scenario_from_json(const json& doc);
json scenario_to_json(const Scenario& sc);
Scenario load_scenario_text(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Resolves the laser into a SystemPair; auto-match computes beta from the
// first matching condition at the configured frequency.
SystemPair make_system_pair(const Scenario& sc);

// Optimization problem from the scenario's arms and optimize section.
// biexciton_map selects the kind-dependent default for omega optimization.
OptimizationProblem make_problem(const Scenario& sc, bool biexciton_map = false);

} // namespace dit
