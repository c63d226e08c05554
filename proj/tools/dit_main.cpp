// dit — command-line front end of the ditsim shared library.
//
// Subcommands: coeffs, fidelity, sweep, optimize, limits, oracle-check,
// preset. Exit codes: 0 success, 1 validation error, 2 computation error,
// 3 oracle-check deviation above tolerance.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ditsim.h"

namespace {

int fail(dit_status status) {
    std::cerr << "error: " << dit_last_error() << "\n";
    return static_cast<int>(status);
}

int write_output(const char* text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << out_path << "'\n";
        return 1;
    }
    out << text;
    return 0;
}

struct ScenarioArgs {
    std::string config;
    std::string preset;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
    auto* config = cmd->add_option("--config", args.config, "Scenario JSON file");
    auto* preset = cmd->add_option("--preset", args.preset, "Built-in preset name");
    config->excludes(preset);
}

dit_status open_scenario(const ScenarioArgs& args, dit_scenario** sc) {
    if (!args.config.empty()) return dit_scenario_load(args.config.c_str(), sc);
    if (!args.preset.empty()) return dit_preset(args.preset.c_str(), sc);
    return dit_scenario_parse("", sc);  // forces a keyed validation error
}

int run_report(const ScenarioArgs& args, const std::string& out_path,
               dit_status (*fn)(const dit_scenario*, char**)) {
    dit_scenario* sc = nullptr;
    dit_status status = open_scenario(args, &sc);
    if (status != DIT_OK) return fail(status);
    char* text = nullptr;
    status = fn(sc, &text);
    dit_scenario_free(sc);
    if (status != DIT_OK) return fail(status);
    const int rc = write_output(text, out_path);
    dit_string_free(text);
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dipole-induced-transparency entanglement protocol simulator"};
    app.require_subcommand(1);

    ScenarioArgs args;
    std::string out_path;
    double margin = 0.0;
    int trials = 100;
    double tolerance = 1e-8;
    std::string preset_name;

    auto* coeffs = app.add_subcommand("coeffs", "Scattering coefficients at the laser frequency");
    add_scenario_options(coeffs, args);
    coeffs->add_option("--out", out_path, "Output file (stdout when absent)");

    auto* fidelity = app.add_subcommand("fidelity", "Exact protocol fidelity and efficiency");
    add_scenario_options(fidelity, args);
    fidelity->add_option("--out", out_path, "Output file");

    auto* sweep = app.add_subcommand("sweep", "Emit the scenario's sweep as CSV");
    add_scenario_options(sweep, args);
    sweep->add_option("--out", out_path, "Output file");

    auto* optimize = app.add_subcommand("optimize", "Optimize fidelity over frequency and ratio");
    add_scenario_options(optimize, args);
    optimize->add_option("--out", out_path, "Output file");

    auto* limits = app.add_subcommand("limits", "Weak-excitation and coherence checks");
    add_scenario_options(limits, args);
    limits->add_option("--out", out_path, "Output file");
    limits->add_option("--margin", margin, "Override the scenario margin factor");

    auto* oracle = app.add_subcommand("oracle-check",
                                      "Randomized closed-form vs Fock-oracle equivalence trials");
    oracle->add_option("--trials", trials, "Number of randomized trials")->check(CLI::PositiveNumber);
    oracle->add_option("--out", out_path, "Output file");

    auto* preset = app.add_subcommand("preset", "Write a built-in scenario file");
    preset->add_option("name", preset_name, "Preset name (section3, biexciton)")->required();
    preset->add_option("--out", out_path, "Output file");

    CLI11_PARSE(app, argc, argv);

    if (coeffs->parsed()) return run_report(args, out_path, dit_coeffs_json);
    if (fidelity->parsed()) return run_report(args, out_path, dit_fidelity_json);
    if (sweep->parsed()) return run_report(args, out_path, dit_sweep_csv);
    if (optimize->parsed()) return run_report(args, out_path, dit_optimize_json);

    if (limits->parsed()) {
        dit_scenario* sc = nullptr;
        dit_status status = open_scenario(args, &sc);
        if (status != DIT_OK) return fail(status);
        char* text = nullptr;
        status = dit_limits_json(sc, margin, &text);
        dit_scenario_free(sc);
        if (status != DIT_OK) return fail(status);
        const int rc = write_output(text, out_path);
        dit_string_free(text);
        return rc;
    }

    if (oracle->parsed()) {
        char* text = nullptr;
        const dit_status status = dit_oracle_check_json(trials, 0x5eed00d5ULL, tolerance, &text);
        if (status != DIT_OK && status != DIT_ERR_TOLERANCE) return fail(status);
        const int rc = write_output(text ? text : "", out_path);
        dit_string_free(text);
        if (status == DIT_ERR_TOLERANCE) {
            std::cerr << "error: " << dit_last_error() << "\n";
            return static_cast<int>(status);
        }
        return rc;
    }

    if (preset->parsed()) {
        dit_scenario* sc = nullptr;
        dit_status status = dit_preset(preset_name.c_str(), &sc);
        if (status != DIT_OK) return fail(status);
        char* text = nullptr;
        status = dit_scenario_json(sc, &text);
        dit_scenario_free(sc);
        if (status != DIT_OK) return fail(status);
        const std::string path = out_path.empty() ? preset_name + ".json" : out_path;
        const int rc = write_output(text, path);
        dit_string_free(text);
        if (rc == 0) std::cerr << "wrote " << path << "\n";
        return rc;
    }

    return 1;
}
