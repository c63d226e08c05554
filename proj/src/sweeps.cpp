#include "sweeps.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "cohmath.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "protocol.hpp"
#include "rng.hpp"

namespace dit {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        out += c;
        if (c == '"') out += '"';
    }
    out += "\"";
    return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i)
        v[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v = linspace(std::log10(lo), std::log10(hi), n);
    for (double& x : v) x = std::pow(10.0, x);
    return v;
}

json complex_json(complexd z) { return json::array({z.real(), z.imag()}); }

// Pair with the g-transition detunings overridden; used by the amplitude and
// constant-fidelity studies which scan dipole detunings on fixed hardware.
SystemPair pair_with_deltas(const Scenario& sc, double delta1, double delta2) {
    SystemPair pair;
    pair.arm1 = sc.arm1;
    pair.arm2 = sc.arm2;
    pair.arm1.g_transition.delta = delta1;
    pair.arm2.g_transition.delta = delta2;
    pair.omega = sc.laser.omega;
    return pair;
}

// Protocol result at reflected photon number P = |alpha r1g|^2 under the
// first matching condition.
ProtocolResult matched_result_at(const SystemPair& base, const ScatterSet& s, double amp2) {
    SystemPair pair = base;
    pair.alpha = complexd{std::sqrt(amp2) / std::abs(s.r1g), 0.0};
    pair.beta = matching_amplitudes(s, pair.alpha);
    return fidelity_efficiency(pair, s);
}

ResultTable amplitude_sweep(const Scenario& sc, const SweepConfig& sw) {
    ResultTable table;
    table.columns = {"alpha_r1g_sq", "fidelity",  "efficiency", "mu_gg_re", "mu_gg_im",
                     "mu_gm_re",     "mu_gm_im",  "mu_mg_re",   "mu_mg_im", "mu_mm_re",
                     "mu_mm_im",     "first_order_fidelity"};
    const SystemPair base = pair_with_deltas(sc, sc.arm1.g_transition.delta,
                                             sc.arm2.g_transition.delta);
    const ScatterSet s = scatter_set(base);
    if (std::abs(s.r1g) < 1e-12)
        throw ComputeError("amplitude sweep: r1g vanishes at the laser frequency");

    const std::vector<double> amps = sw.log_axis ? logspace(sw.amp_min, sw.amp_max, sw.steps)
                                                 : linspace(sw.amp_min, sw.amp_max, sw.steps);
    for (double amp2 : amps) {
        SystemPair pair = base;
        pair.alpha = complexd{std::sqrt(amp2) / std::abs(s.r1g), 0.0};
        pair.beta = matching_amplitudes(s, pair.alpha);
        const ProtocolResult res = fidelity_efficiency(pair, s);
        const FirstOrderState fo = first_order_state(pair, s);
        table.rows.push_back({amp2, res.fidelity, res.efficiency, res.mu[kGG].real(),
                              res.mu[kGG].imag(), res.mu[kGM].real(), res.mu[kGM].imag(),
                              res.mu[kMG].real(), res.mu[kMG].imag(), res.mu[kMM].real(),
                              res.mu[kMM].imag(), fo.fidelity});
    }
    return table;
}

ResultTable frequency_sweep(const Scenario& sc, const SweepConfig& sw) {
    ResultTable table;
    table.columns = {"omega", "fidelity", "efficiency", "ratio_re", "ratio_im"};
    OptimizationProblem problem = make_problem(sc);
    const std::vector<double> omegas = linspace(sw.omega_min, sw.omega_max, sw.steps);
    const auto curve = fidelity_vs_frequency(problem, omegas);
    for (const FrequencyPoint& pt : curve)
        table.rows.push_back(
            {pt.omega, pt.fidelity, pt.efficiency, pt.ratio.real(), pt.ratio.imag()});
    return table;
}

DetunedPairTemplate template_from_scenario(const Scenario& sc) {
    DetunedPairTemplate tpl;
    tpl.cavity = sc.arm1.cavity;
    tpl.g_transition = sc.arm1.g_transition;
    tpl.m_transition = sc.arm1.m_transition;
    return tpl;
}

ResultTable cavity_detuning_sweep(const Scenario& sc, const SweepConfig& sw) {
    ResultTable table;
    table.columns = {"delta_omega_s", "delta1", "fidelity", "omega_opt",
                     "ratio_re",      "ratio_im", "efficiency", "regime_code"};
    const DetunedPairTemplate tpl = template_from_scenario(sc);
    const OptimizationProblem defaults = make_problem(sc);
    const std::vector<double> dws_grid = linspace(sw.dws_min, sw.dws_max, sw.steps);
    for (double dws : dws_grid) {
        for (double d1 : sw.delta1_values) {
            OptimizationProblem problem = defaults;
            problem.pair = make_detuned_pair(tpl, dws, d1, sw.delta2);
            problem.record_trace = false;
            const SearchBox auto_box = default_search_box(problem.pair);
            problem.box.omega_min = auto_box.omega_min;
            problem.box.omega_max = auto_box.omega_max;
            const OptimizationReport rep = optimize_fidelity(problem);
            table.rows.push_back({dws, d1, rep.fidelity, rep.omega, rep.ratio.real(),
                                  rep.ratio.imag(), rep.efficiency,
                                  static_cast<double>(static_cast<int>(rep.regime))});
        }
    }
    return table;
}

ResultTable cavity_map_sweep(const Scenario& sc, const SweepConfig& sw) {
    ResultTable table;
    table.columns = {"delta_omega_s", "delta1", "fidelity"};
    const DetunedPairTemplate tpl = template_from_scenario(sc);
    const std::vector<double> dws_grid = linspace(sw.dws_min, sw.dws_max, sw.dws_steps);
    const std::vector<double> d1_grid = linspace(sw.delta1_min, sw.delta1_max, sw.delta1_steps);
    const FidelitySurface surf =
        fidelity_surface(tpl, dws_grid, d1_grid, sw.delta2, make_problem(sc));
    size_t idx = 0;
    for (double dws : dws_grid)
        for (double d1 : d1_grid)
            table.rows.push_back({dws, d1, surf.fidelity[idx++]});
    return table;
}

ResultTable biexciton_map_sweep(const Scenario& sc, const SweepConfig& sw) {
    if (!sc.biexciton)
        throw ValidationError("sweep: biexciton-map requires a biexciton section");
    ResultTable table;
    table.columns = {"delta_xx1", "delta_xx2", "fidelity"};
    const std::vector<double> g1 = linspace(sw.dxx1_min, sw.dxx1_max, sw.dxx1_steps);
    const std::vector<double> g2 = linspace(sw.dxx2_min, sw.dxx2_max, sw.dxx2_steps);
    const BiexcitonMap map = biexciton_fidelity_map(
        *sc.biexciton, g1, g2, make_problem(sc, /*biexciton_map=*/true), sw.operating);
    size_t idx = 0;
    for (double d1 : g1)
        for (double d2 : g2)
            table.rows.push_back({d1, d2, map.fidelity[idx++]});
    return table;
}

} // namespace

std::string to_csv(const ResultTable& table) {
    std::string out;
    for (size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += csv_quote(table.columns[c]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

ResultTable run_sweep(const Scenario& sc) {
    if (!sc.sweep)
        throw ValidationError("sweep: scenario has no sweep section");
    const SweepConfig& sw = *sc.sweep;
    switch (sw.kind) {
        case SweepKind::Amplitude: return amplitude_sweep(sc, sw);
        case SweepKind::ConstantFidelity: {
            const std::vector<double> d1 = linspace(sw.delta1_min, sw.delta1_max, sw.steps);
            return constant_fidelity_efficiency(sc, sw.target_fidelity, d1, sw.delta2_values);
        }
        case SweepKind::Frequency: return frequency_sweep(sc, sw);
        case SweepKind::CavityDetuning: return cavity_detuning_sweep(sc, sw);
        case SweepKind::CavityMap: return cavity_map_sweep(sc, sw);
        case SweepKind::BiexcitonMap: return biexciton_map_sweep(sc, sw);
    }
    throw ValidationError("sweep.kind: unknown kind");
}

ResultTable constant_fidelity_efficiency(const Scenario& sc, double target_fidelity,
                                         std::span<const double> delta1_grid,
                                         std::span<const double> delta2_values) {
    if (!(target_fidelity > 0.0) || !std::isfinite(target_fidelity))
        throw ValidationError("sweep.target_fidelity: must be > 0");

    ResultTable table;
    table.columns = {"delta1", "delta2", "alpha_r1g_sq", "fidelity", "efficiency", "reachable"};
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (double d2 : delta2_values) {
        for (double d1 : delta1_grid) {
            const SystemPair base = pair_with_deltas(sc, d1, d2);
            const ScatterSet s = scatter_set(base);
            if (std::abs(s.r1g) < 1e-12) {
                table.rows.push_back({d1, d2, nan, nan, nan, 0.0});
                continue;
            }

            // F decreases monotonically with the reflected photon number
            // under matching, so a sign-bracketing bisection is sound.
            double lo = 1e-12;
            if (matched_result_at(base, s, lo).fidelity < target_fidelity) {
                table.rows.push_back({d1, d2, nan, nan, nan, 0.0});
                continue;
            }
            double hi = 1.0;
            bool bracketed = false;
            for (int i = 0; i < 60 && !bracketed; ++i) {
                if (matched_result_at(base, s, hi).fidelity < target_fidelity) bracketed = true;
                else hi *= 4.0;
            }
            if (!bracketed) {
                table.rows.push_back({d1, d2, nan, nan, nan, 0.0});
                continue;
            }

            double mid = hi;
            ProtocolResult res;
            for (int i = 0; i < 200; ++i) {
                mid = 0.5 * (lo + hi);
                res = matched_result_at(base, s, mid);
                if (std::abs(res.fidelity - target_fidelity) <= 1e-6) break;
                if (res.fidelity > target_fidelity) lo = mid;
                else hi = mid;
            }
            table.rows.push_back({d1, d2, mid, res.fidelity, res.efficiency, 1.0});
        }
    }
    return table;
}

OracleCheckReport oracle_check(int trials, std::uint64_t seed, double tolerance) {
    if (trials < 1)
        throw ValidationError("trials: must be >= 1");
    OracleCheckReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.tolerance = tolerance;
    rep.min_eigenvalue = 1.0;

    SplitMix64 rng(seed);
    auto random_coefficient_pair = [&rng](complexd& r, complexd& t) {
        double mr = 0.0, mt = 0.0;
        do {
            mr = rng.uniform();
            mt = rng.uniform();
        } while (mr * mr + mt * mt > 1.0);
        const double pr = rng.uniform(0.0, 2.0 * M_PI);
        const double pt = rng.uniform(0.0, 2.0 * M_PI);
        r = std::polar(mr, pr);
        t = std::polar(mt, pt);
    };

    for (int trial = 0; trial < trials; ++trial) {
        ScatterSet s;
        random_coefficient_pair(s.r1g, s.t1g);
        random_coefficient_pair(s.r1m, s.t1m);
        random_coefficient_pair(s.r2g, s.t2g);
        random_coefficient_pair(s.r2m, s.t2m);

        SystemPair pair;
        pair.alpha = std::polar(rng.uniform(0.0, 0.7), rng.uniform(0.0, 2.0 * M_PI));
        pair.beta = std::polar(rng.uniform(0.0, 0.7), rng.uniform(0.0, 2.0 * M_PI));

        const ProtocolResult closed = fidelity_efficiency(pair, s);

        const JointState st = evolve(pair, s);
        int n_max = 8;
        for (int b = 0; b < 4; ++b)
            n_max = std::max(n_max, choose_truncation(st.d2[b]));
        const OracleResult orc = measure(st, n_max);

        rep.max_fidelity_dev =
            std::max(rep.max_fidelity_dev, std::abs(closed.fidelity - orc.fidelity));
        rep.max_efficiency_dev =
            std::max(rep.max_efficiency_dev, std::abs(closed.efficiency - orc.efficiency));

        const auto ev = hermitian_eigenvalues(orc.rho);
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, ev[0]);
        complexd trace = 0.0;
        for (int a = 0; a < 4; ++a) trace += orc.rho[a][a];
        rep.max_trace_dev = std::max(rep.max_trace_dev, std::abs(trace - 1.0));
    }

    rep.pass = rep.max_fidelity_dev < tolerance && rep.max_efficiency_dev < tolerance &&
               rep.min_eigenvalue > -1e-12 && rep.max_trace_dev < 1e-12;
    return rep;
}

json coeffs_report(const Scenario& sc) {
    const SystemPair pair = make_system_pair(sc);
    const ScatterSet s = scatter_set(pair);
    json j;
    j["omega"] = pair.omega;
    j["coefficients"] = json{
        {"r1g", complex_json(s.r1g)}, {"t1g", complex_json(s.t1g)},
        {"r1m", complex_json(s.r1m)}, {"t1m", complex_json(s.t1m)},
        {"r2g", complex_json(s.r2g)}, {"t2g", complex_json(s.t2g)},
        {"r2m", complex_json(s.r2m)}, {"t2m", complex_json(s.t2m)}};
    j["reflectivity"] = json{{"r1g_abs2", abs2(s.r1g)},
                             {"r1m_abs2", abs2(s.r1m)},
                             {"r2g_abs2", abs2(s.r2g)},
                             {"r2m_abs2", abs2(s.r2m)}};
    j["cooperativity"] = json{{"arm1", cooperativity(sc.arm1)}, {"arm2", cooperativity(sc.arm2)}};
    j["critical_coupling"] = json{{"arm1", critical_coupling_check(sc.arm1.cavity)},
                                  {"arm2", critical_coupling_check(sc.arm2.cavity)}};
    return j;
}

json fidelity_report(const Scenario& sc) {
    const SystemPair pair = make_system_pair(sc);
    const ScatterSet s = scatter_set(pair);
    const ProtocolResult res = fidelity_efficiency(pair, s);
    const FirstOrderState fo = first_order_state(pair, s);
    json j;
    j["fidelity"] = res.fidelity;
    j["efficiency"] = res.efficiency;
    j["alpha"] = complex_json(pair.alpha);
    j["beta"] = complex_json(pair.beta);
    j["auto_matched"] = sc.laser.auto_match;
    j["mu"] = json{{"gg", complex_json(res.mu[kGG])},
                   {"gm", complex_json(res.mu[kGM])},
                   {"mg", complex_json(res.mu[kMG])},
                   {"mm", complex_json(res.mu[kMM])}};
    j["psi_overlap_gm_mg"] = complex_json(res.psi_overlap_gm_mg);
    j["mu_overlap_gm_mg"] = complex_json(res.mu_overlap_gm_mg);
    j["first_order_fidelity"] = fo.fidelity;
    j["fidelity_clamped"] = res.fidelity_clamped;
    return j;
}

json limits_report(const Scenario& sc) {
    const SystemPair pair = make_system_pair(sc);
    const ScatterSet s = scatter_set(pair);
    PulseContext pulse;
    pulse.tau_p = sc.tau_p;
    pulse.margin = sc.margin;
    pulse.photon_number = abs2(pair.alpha);

    const PairLimitReport rep = matched_pair_limit(pair, s, pulse);
    json j;
    j["pair"] = json{{"bound1", rep.bound1},
                     {"bound2", rep.bound2},
                     {"flux_alpha", rep.flux_alpha},
                     {"flux_beta", rep.flux_beta},
                     {"reflected_rate", rep.reflected_rate},
                     {"reflected_bound", rep.reflected_bound},
                     {"pass_alpha", rep.pass_alpha},
                     {"pass_beta", rep.pass_beta},
                     {"pass_reflected", rep.pass_reflected},
                     {"tau_p", pulse.tau_p},
                     {"margin", pulse.margin}};

    const ExcitationEstimate e1 = excitation_probability(sc.arm1, rep.flux_alpha);
    const ExcitationEstimate e2 = excitation_probability(sc.arm2, rep.flux_beta);
    j["arm1"] = json{{"excitation_probability", e1.probability}, {"formula_valid", e1.formula_valid}};
    j["arm2"] = json{{"excitation_probability", e2.probability}, {"formula_valid", e2.formula_valid}};

    bool pass = rep.pass_alpha && rep.pass_beta && rep.pass_reflected;
    if (sc.biexciton) {
        const CoherenceFigures fig = coherence_figures(*sc.biexciton);
        const bool n_ent_pass = fig.N_ent > 1.0;
        j["biexciton"] = json{{"Gamma_X", fig.Gamma_X},
                              {"N_ent", fig.N_ent},
                              {"pass_n_ent", n_ent_pass}};
        pass = pass && n_ent_pass;
    }
    j["pass"] = pass;
    return j;
}

json optimize_report_json(const Scenario& sc) {
    const OptimizationProblem problem = make_problem(sc);
    const OptimizationReport rep = optimize_fidelity(problem);
    json j;
    j["omega"] = rep.omega;
    j["ratio"] = complex_json(rep.ratio);
    j["fidelity"] = rep.fidelity;
    j["efficiency"] = rep.efficiency;
    j["regime"] = to_string(rep.regime);
    j["alpha"] = complex_json(rep.operating_point.alpha);
    j["beta"] = complex_json(rep.operating_point.beta);
    if (problem.record_trace) {
        json trace = json::array();
        for (const TracePoint& pt : rep.trace)
            trace.push_back(json::array({pt.omega, pt.ratio.real(), pt.ratio.imag(), pt.fidelity}));
        j["trace"] = std::move(trace);
    }
    return j;
}

json oracle_check_json(const OracleCheckReport& rep) {
    json j;
    j["trials"] = rep.trials;
    j["seed"] = rep.seed;
    j["tolerance"] = rep.tolerance;
    j["max_fidelity_dev"] = rep.max_fidelity_dev;
    j["max_efficiency_dev"] = rep.max_efficiency_dev;
    j["min_eigenvalue"] = rep.min_eigenvalue;
    j["max_trace_dev"] = rep.max_trace_dev;
    j["pass"] = rep.pass;
    return j;
}

} // namespace dit
