// Sweep orchestration and tabular/JSON report generation: the machinery
// behind the CLI subcommands. Tables reproduce the protocol's figure-style
// curves; ordering is row-major over the declared axes and serialization is
// deterministic so identical configs produce byte-identical files.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace dit {

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// RFC-4180-style CSV with a header row; floats carry 17 significant digits.
std::string to_csv(const ResultTable& table);

ResultTable run_sweep(const Scenario& sc);

// Bisects |alpha r1g|^2 to hit the fidelity target at each (delta1, delta2)
// and reports the efficiency there; unreachable targets are flagged per row.
ResultTable constant_fidelity_efficiency(const Scenario& sc, double target_fidelity,
                                         std::span<const double> delta1_grid,
                                         std::span<const double> delta2_values);

struct OracleCheckReport {
    int trials = 0;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    double max_fidelity_dev = 0.0;
    double max_efficiency_dev = 0.0;
    double min_eigenvalue = 0.0;
    double max_trace_dev = 0.0;
    bool pass = false;
};

// Randomized closed-form vs Fock-oracle equivalence trials over physical
// scattering coefficients with |alpha|, |beta| <= 0.7.
OracleCheckReport oracle_check(int trials, std::uint64_t seed, double tolerance);

// JSON reports behind the CLI subcommands.
json coeffs_report(const Scenario& sc);
json fidelity_report(const Scenario& sc);
json limits_report(const Scenario& sc);
json optimize_report_json(const Scenario& sc);
json oracle_check_json(const OracleCheckReport& rep);

} // namespace dit
