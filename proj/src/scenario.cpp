#include "scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "model.hpp"
#include "protocol.hpp"

namespace dit {

namespace {

void check_keys(const json& j, const std::string& section,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw ValidationError(section + ": expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) known = true;
        if (!known)
            throw ValidationError(section + "." + item.key() + ": unknown key");
    }
}

double get_number(const json& j, const std::string& section, const char* key,
                  std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ValidationError(section + "." + key + ": missing required value");
    }
    const json& v = j.at(key);
    if (!v.is_number())
        throw ValidationError(section + "." + key + ": expected a number");
    return v.get<double>();
}

int get_int(const json& j, const std::string& section, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer())
        throw ValidationError(section + "." + key + ": expected an integer");
    return v.get<int>();
}

bool get_bool(const json& j, const std::string& section, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean())
        throw ValidationError(section + "." + key + ": expected a boolean");
    return v.get<bool>();
}

complexd get_complex(const json& j, const std::string& section, const char* key) {
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ValidationError(section + "." + key + ": expected [re, im]");
    return complexd{v[0].get<double>(), v[1].get<double>()};
}

std::vector<double> get_number_list(const json& j, const std::string& section, const char* key) {
    const json& v = j.at(key);
    if (!v.is_array() || v.empty())
        throw ValidationError(section + "." + key + ": expected a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            throw ValidationError(section + "." + key + ": expected a non-empty array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

DipoleTransition transition_from_json(const json& j, const std::string& section) {
    check_keys(j, section, {"g", "delta", "gamma"});
    DipoleTransition t;
    t.g = get_number(j, section, "g");
    t.delta = get_number(j, section, "delta");
    t.gamma = get_number(j, section, "gamma");
    validate(t, section);
    return t;
}

CavityPort cavity_from_json(const json& j, const std::string& section) {
    check_keys(j, section, {"omega_c", "kappa_r", "kappa_t", "kappa_l"});
    CavityPort c;
    c.omega_c = get_number(j, section, "omega_c", 0.0);
    c.kappa_r = get_number(j, section, "kappa_r");
    c.kappa_t = get_number(j, section, "kappa_t");
    c.kappa_l = get_number(j, section, "kappa_l", 0.0);
    validate(c, section);
    return c;
}

ArmConfig arm_from_json(const json& j, const std::string& section) {
    check_keys(j, section, {"cavity", "g_transition", "m_transition"});
    if (!j.contains("cavity") || !j.contains("g_transition") || !j.contains("m_transition"))
        throw ValidationError(section + ": requires cavity, g_transition and m_transition");
    ArmConfig a;
    a.cavity = cavity_from_json(j.at("cavity"), section + ".cavity");
    a.g_transition = transition_from_json(j.at("g_transition"), section + ".g_transition");
    a.m_transition = transition_from_json(j.at("m_transition"), section + ".m_transition");
    return a;
}

json transition_to_json(const DipoleTransition& t) {
    return json{{"g", t.g}, {"delta", t.delta}, {"gamma", t.gamma}};
}

json cavity_to_json(const CavityPort& c) {
    return json{{"omega_c", c.omega_c},
                {"kappa_r", c.kappa_r},
                {"kappa_t", c.kappa_t},
                {"kappa_l", c.kappa_l}};
}

json arm_to_json(const ArmConfig& a) {
    return json{{"cavity", cavity_to_json(a.cavity)},
                {"g_transition", transition_to_json(a.g_transition)},
                {"m_transition", transition_to_json(a.m_transition)}};
}

LaserConfig laser_from_json(const json& j) {
    check_keys(j, "laser", {"omega", "alpha", "beta"});
    LaserConfig l;
    l.omega = get_number(j, "laser", "omega", 0.0);
    if (!j.contains("alpha"))
        throw ValidationError("laser.alpha: missing required value");
    l.alpha = get_complex(j, "laser", "alpha");
    if (!j.contains("beta"))
        throw ValidationError("laser.beta: missing required value ([re, im] or \"auto-match\")");
    const json& b = j.at("beta");
    if (b.is_string()) {
        if (b.get<std::string>() != "auto-match")
            throw ValidationError("laser.beta: expected [re, im] or \"auto-match\"");
        l.auto_match = true;
    } else {
        l.auto_match = false;
        l.beta = get_complex(j, "laser", "beta");
    }
    if (!std::isfinite(l.alpha.real()) || !std::isfinite(l.alpha.imag()))
        throw ValidationError("laser.alpha: amplitude must be finite");
    if (!l.auto_match && (!std::isfinite(l.beta.real()) || !std::isfinite(l.beta.imag())))
        throw ValidationError("laser.beta: amplitude must be finite");
    if (!std::isfinite(l.omega))
        throw ValidationError("laser.omega: frequency must be finite");
    return l;
}

json laser_to_json(const LaserConfig& l) {
    json j;
    j["omega"] = l.omega;
    j["alpha"] = json::array({l.alpha.real(), l.alpha.imag()});
    if (l.auto_match)
        j["beta"] = "auto-match";
    else
        j["beta"] = json::array({l.beta.real(), l.beta.imag()});
    return j;
}

BiexcitonScenario biexciton_from_json(const json& j) {
    check_keys(j, "biexciton",
               {"g_X", "g_XX", "gamma_X", "delta_X", "T2", "kappa", "delta_XX1", "delta_XX2"});
    BiexcitonScenario s;
    s.g_X = get_number(j, "biexciton", "g_X");
    s.g_XX = get_number(j, "biexciton", "g_XX");
    s.gamma_X = get_number(j, "biexciton", "gamma_X");
    s.delta_X = get_number(j, "biexciton", "delta_X");
    s.T2 = get_number(j, "biexciton", "T2");
    s.kappa = get_number(j, "biexciton", "kappa");
    s.delta_XX1 = get_number(j, "biexciton", "delta_XX1", 0.0);
    s.delta_XX2 = get_number(j, "biexciton", "delta_XX2", 0.0);
    validate(s, "biexciton");
    return s;
}

json biexciton_to_json(const BiexcitonScenario& s) {
    return json{{"g_X", s.g_X},       {"g_XX", s.g_XX},
                {"gamma_X", s.gamma_X}, {"delta_X", s.delta_X},
                {"T2", s.T2},         {"kappa", s.kappa},
                {"delta_XX1", s.delta_XX1}, {"delta_XX2", s.delta_XX2}};
}

OptimizeConfig optimize_from_json(const json& j) {
    check_keys(j, "optimize",
               {"omega_min", "omega_max", "ratio_re", "ratio_im", "target_scale", "grid",
                "optimize_omega", "record_trace"});
    OptimizeConfig o;
    if (j.contains("omega_min")) o.omega_min = get_number(j, "optimize", "omega_min");
    if (j.contains("omega_max")) o.omega_max = get_number(j, "optimize", "omega_max");
    if (o.omega_min.has_value() != o.omega_max.has_value())
        throw ValidationError("optimize.omega_min: omega_min and omega_max must be set together");
    auto range = [&j](const char* key, double& lo, double& hi) {
        if (!j.contains(key)) return;
        const json& v = j.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ValidationError(std::string("optimize.") + key + ": expected [min, max]");
        lo = v[0].get<double>();
        hi = v[1].get<double>();
    };
    range("ratio_re", o.ratio_re_min, o.ratio_re_max);
    range("ratio_im", o.ratio_im_min, o.ratio_im_max);
    o.target_scale = get_number(j, "optimize", "target_scale", 1e-4);
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (!g.is_array() || g.size() != 3)
            throw ValidationError("optimize.grid: expected [n_omega, n_re, n_im]");
        o.grid_omega = g[0].get<int>();
        o.grid_re = g[1].get<int>();
        o.grid_im = g[2].get<int>();
    }
    if (j.contains("optimize_omega"))
        o.optimize_omega = get_bool(j, "optimize", "optimize_omega", true);
    o.record_trace = get_bool(j, "optimize", "record_trace", false);
    return o;
}

json optimize_to_json(const OptimizeConfig& o) {
    json j;
    if (o.omega_min) j["omega_min"] = *o.omega_min;
    if (o.omega_max) j["omega_max"] = *o.omega_max;
    j["ratio_re"] = json::array({o.ratio_re_min, o.ratio_re_max});
    j["ratio_im"] = json::array({o.ratio_im_min, o.ratio_im_max});
    j["target_scale"] = o.target_scale;
    j["grid"] = json::array({o.grid_omega, o.grid_re, o.grid_im});
    if (o.optimize_omega) j["optimize_omega"] = *o.optimize_omega;
    j["record_trace"] = o.record_trace;
    return j;
}

SweepConfig sweep_from_json(const json& j) {
    check_keys(j, "sweep",
               {"kind", "amp_min", "amp_max", "log", "steps", "target_fidelity", "delta1_min",
                "delta1_max", "delta2_values", "omega_min", "omega_max", "dws_min", "dws_max",
                "dws_steps", "delta1_values", "delta1_steps", "delta2", "dxx1_min", "dxx1_max",
                "dxx1_steps", "dxx2_min", "dxx2_max", "dxx2_steps", "operating"});
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw ValidationError("sweep.kind: expected one of amplitude, constant-fidelity, "
                              "frequency, cavity-detuning, cavity-map, biexciton-map");
    const std::string kind = j.at("kind").get<std::string>();
    SweepConfig s;
    if (kind == "amplitude") {
        s.kind = SweepKind::Amplitude;
        s.amp_min = get_number(j, "sweep", "amp_min", 1e-3);
        s.amp_max = get_number(j, "sweep", "amp_max", 100.0);
        s.log_axis = get_bool(j, "sweep", "log", true);
        s.steps = get_int(j, "sweep", "steps", 41);
        if (s.amp_min <= 0.0 || s.amp_max < s.amp_min)
            throw ValidationError("sweep.amp_min: need 0 < amp_min <= amp_max");
    } else if (kind == "constant-fidelity") {
        s.kind = SweepKind::ConstantFidelity;
        s.target_fidelity = get_number(j, "sweep", "target_fidelity", 0.85);
        s.delta1_min = get_number(j, "sweep", "delta1_min", 0.0);
        s.delta1_max = get_number(j, "sweep", "delta1_max", 100.0);
        s.steps = get_int(j, "sweep", "steps", 21);
        if (j.contains("delta2_values")) s.delta2_values = get_number_list(j, "sweep", "delta2_values");
    } else if (kind == "frequency") {
        s.kind = SweepKind::Frequency;
        s.omega_min = get_number(j, "sweep", "omega_min");
        s.omega_max = get_number(j, "sweep", "omega_max");
        s.steps = get_int(j, "sweep", "steps", 81);
        if (s.omega_max < s.omega_min)
            throw ValidationError("sweep.omega_min: need omega_min <= omega_max");
    } else if (kind == "cavity-detuning") {
        s.kind = SweepKind::CavityDetuning;
        s.dws_min = get_number(j, "sweep", "dws_min", 0.0);
        s.dws_max = get_number(j, "sweep", "dws_max", 150.0);
        s.steps = get_int(j, "sweep", "steps", 16);
        if (j.contains("delta1_values")) s.delta1_values = get_number_list(j, "sweep", "delta1_values");
        s.delta2 = get_number(j, "sweep", "delta2", 0.0);
    } else if (kind == "cavity-map") {
        s.kind = SweepKind::CavityMap;
        s.dws_min = get_number(j, "sweep", "dws_min", 0.0);
        s.dws_max = get_number(j, "sweep", "dws_max", 150.0);
        s.dws_steps = get_int(j, "sweep", "dws_steps", 16);
        s.delta1_min = get_number(j, "sweep", "delta1_min", 0.0);
        s.delta1_max = get_number(j, "sweep", "delta1_max", 30.0);
        s.delta1_steps = get_int(j, "sweep", "delta1_steps", 7);
        s.delta2 = get_number(j, "sweep", "delta2", 0.0);
    } else if (kind == "biexciton-map") {
        s.kind = SweepKind::BiexcitonMap;
        s.dxx1_min = get_number(j, "sweep", "dxx1_min", 0.0);
        s.dxx1_max = get_number(j, "sweep", "dxx1_max", 100.0);
        s.dxx1_steps = get_int(j, "sweep", "dxx1_steps", 11);
        s.dxx2_min = get_number(j, "sweep", "dxx2_min", 0.0);
        s.dxx2_max = get_number(j, "sweep", "dxx2_max", 100.0);
        s.dxx2_steps = get_int(j, "sweep", "dxx2_steps", 11);
        if (j.contains("operating")) {
            const json& op = j.at("operating");
            const std::string name = op.is_string() ? op.get<std::string>() : "";
            if (name == "matched") s.operating = MapOperating::Matched;
            else if (name == "optimize-ratio") s.operating = MapOperating::OptimizeRatio;
            else if (name == "optimize") s.operating = MapOperating::OptimizeRatioOmega;
            else
                throw ValidationError(
                    "sweep.operating: expected matched, optimize-ratio or optimize");
        }
    } else {
        throw ValidationError("sweep.kind: unknown kind '" + kind + "'");
    }
    if (s.steps < 1 || s.dws_steps < 1 || s.delta1_steps < 1 || s.dxx1_steps < 1 ||
        s.dxx2_steps < 1)
        throw ValidationError("sweep.steps: grid sizes must be >= 1");
    return s;
}

json sweep_to_json(const SweepConfig& s) {
    json j;
    j["kind"] = to_string(s.kind);
    switch (s.kind) {
        case SweepKind::Amplitude:
            j["amp_min"] = s.amp_min;
            j["amp_max"] = s.amp_max;
            j["log"] = s.log_axis;
            j["steps"] = s.steps;
            break;
        case SweepKind::ConstantFidelity:
            j["target_fidelity"] = s.target_fidelity;
            j["delta1_min"] = s.delta1_min;
            j["delta1_max"] = s.delta1_max;
            j["steps"] = s.steps;
            j["delta2_values"] = s.delta2_values;
            break;
        case SweepKind::Frequency:
            j["omega_min"] = s.omega_min;
            j["omega_max"] = s.omega_max;
            j["steps"] = s.steps;
            break;
        case SweepKind::CavityDetuning:
            j["dws_min"] = s.dws_min;
            j["dws_max"] = s.dws_max;
            j["steps"] = s.steps;
            j["delta1_values"] = s.delta1_values;
            j["delta2"] = s.delta2;
            break;
        case SweepKind::CavityMap:
            j["dws_min"] = s.dws_min;
            j["dws_max"] = s.dws_max;
            j["dws_steps"] = s.dws_steps;
            j["delta1_min"] = s.delta1_min;
            j["delta1_max"] = s.delta1_max;
            j["delta1_steps"] = s.delta1_steps;
            j["delta2"] = s.delta2;
            break;
        case SweepKind::BiexcitonMap:
            j["dxx1_min"] = s.dxx1_min;
            j["dxx1_max"] = s.dxx1_max;
            j["dxx1_steps"] = s.dxx1_steps;
            j["dxx2_min"] = s.dxx2_min;
            j["dxx2_max"] = s.dxx2_max;
            j["dxx2_steps"] = s.dxx2_steps;
            j["operating"] = s.operating == MapOperating::Matched
                                 ? "matched"
                                 : (s.operating == MapOperating::OptimizeRatio ? "optimize-ratio"
                                                                               : "optimize");
            break;
    }
    return j;
}

} // namespace

const char* to_string(SweepKind k) {
    switch (k) {
        case SweepKind::Amplitude: return "amplitude";
        case SweepKind::ConstantFidelity: return "constant-fidelity";
        case SweepKind::Frequency: return "frequency";
        case SweepKind::CavityDetuning: return "cavity-detuning";
        case SweepKind::CavityMap: return "cavity-map";
        default: return "biexciton-map";
    }
}

std::vector<std::string> preset_names() { return {"section3", "biexciton"}; }

Scenario preset_scenario(const std::string& name) {
    Scenario sc;
    if (name == "section3") {
        ArmConfig arm;
        arm.cavity = CavityPort{0.0, 50.0, 50.0, 0.0};
        arm.g_transition = DipoleTransition{20.0, 0.0, 0.125};
        arm.m_transition = DipoleTransition{0.0, 0.0, 0.125};
        sc.arm1 = arm;
        sc.arm2 = arm;
        sc.laser = LaserConfig{0.0, complexd{0.1, 0.0}, true, complexd{}};
        sc.tau_p = 10.0;
        sc.margin = 10.0;
        SweepConfig sweep;
        sweep.kind = SweepKind::Amplitude;
        sweep.amp_min = 1e-3;
        sweep.amp_max = 100.0;
        sweep.log_axis = true;
        sweep.steps = 41;
        sc.sweep = sweep;
        return sc;
    }
    if (name == "biexciton") {
        BiexcitonScenario bx;
        bx.g_X = 20.0;
        bx.g_XX = 20.0;
        bx.gamma_X = 0.125;
        bx.delta_X = 250.0;
        bx.T2 = 2.0;
        bx.kappa = 50.0;
        bx.delta_XX1 = 0.0;
        bx.delta_XX2 = 0.0;
        const SystemPair pair = biexciton_pair(bx);
        sc.arm1 = pair.arm1;
        sc.arm2 = pair.arm2;
        sc.laser = LaserConfig{0.0, complexd{0.01, 0.0}, true, complexd{}};
        sc.tau_p = 10.0;
        sc.margin = 10.0;
        sc.biexciton = bx;
        SweepConfig sweep;
        sweep.kind = SweepKind::BiexcitonMap;
        sc.sweep = sweep;
        sc.optimize.optimize_omega = false;
        return sc;
    }
    throw ValidationError("preset: unknown preset '" + name + "' (expected section3 or biexciton)");
}

Scenario scenario_from_json(const json& doc) {
    check_keys(doc, "scenario",
               {"preset", "arm1", "arm2", "laser", "limits", "biexciton", "sweep", "optimize"});

    Scenario sc;
    bool have_base = false;
    if (doc.contains("preset")) {
        if (!doc.at("preset").is_string())
            throw ValidationError("preset: expected a preset name string");
        sc = preset_scenario(doc.at("preset").get<std::string>());
        have_base = true;
    }

    if (doc.contains("arm1")) sc.arm1 = arm_from_json(doc.at("arm1"), "arm1");
    if (doc.contains("arm2")) sc.arm2 = arm_from_json(doc.at("arm2"), "arm2");
    if (!have_base && (!doc.contains("arm1") || !doc.contains("arm2")))
        throw ValidationError("arm1: scenario requires arm1 and arm2 (or a preset base)");

    if (doc.contains("laser")) sc.laser = laser_from_json(doc.at("laser"));
    else if (!have_base)
        throw ValidationError("laser: missing required section");

    if (doc.contains("limits")) {
        const json& j = doc.at("limits");
        check_keys(j, "limits", {"tau_p", "margin"});
        sc.tau_p = get_number(j, "limits", "tau_p", 10.0);
        sc.margin = get_number(j, "limits", "margin", 10.0);
    }
    if (!std::isfinite(sc.tau_p) || sc.tau_p <= 0.0)
        throw ValidationError("limits.tau_p: pulse width must be > 0");
    if (!std::isfinite(sc.margin) || sc.margin <= 1.0)
        throw ValidationError("limits.margin: margin must be > 1");

    if (doc.contains("biexciton")) sc.biexciton = biexciton_from_json(doc.at("biexciton"));
    if (doc.contains("sweep")) sc.sweep = sweep_from_json(doc.at("sweep"));
    if (doc.contains("optimize")) {
        const std::optional<bool> base_optimize_omega = sc.optimize.optimize_omega;
        sc.optimize = optimize_from_json(doc.at("optimize"));
        if (!sc.optimize.optimize_omega.has_value())
            sc.optimize.optimize_omega = base_optimize_omega;
    }

    validate(sc.arm1, "arm1");
    validate(sc.arm2, "arm2");
    return sc;
}

json scenario_to_json(const Scenario& sc) {
    json doc;
    doc["arm1"] = arm_to_json(sc.arm1);
    doc["arm2"] = arm_to_json(sc.arm2);
    doc["laser"] = laser_to_json(sc.laser);
    doc["limits"] = json{{"tau_p", sc.tau_p}, {"margin", sc.margin}};
    if (sc.biexciton) doc["biexciton"] = biexciton_to_json(*sc.biexciton);
    if (sc.sweep) doc["sweep"] = sweep_to_json(*sc.sweep);
    doc["optimize"] = optimize_to_json(sc.optimize);
    return doc;
}

Scenario load_scenario_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("scenario: invalid JSON: ") + e.what());
    }
    return scenario_from_json(doc);
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("scenario: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario_text(buf.str());
}

SystemPair make_system_pair(const Scenario& sc) {
    SystemPair pair;
    pair.arm1 = sc.arm1;
    pair.arm2 = sc.arm2;
    pair.omega = sc.laser.omega;
    pair.alpha = sc.laser.alpha;
    if (sc.laser.auto_match) {
        pair.beta = complexd{0.0, 0.0};
        pair.beta = matching_amplitudes(scatter_set(pair), pair.alpha);
    } else {
        pair.beta = sc.laser.beta;
    }
    validate(pair, "scenario");
    return pair;
}

OptimizationProblem make_problem(const Scenario& sc, bool biexciton_map) {
    OptimizationProblem p;
    // Template amplitudes are irrelevant to the optimizer (it derives them
    // from target_scale), so auto-match is deliberately not resolved here.
    p.pair.arm1 = sc.arm1;
    p.pair.arm2 = sc.arm2;
    p.pair.omega = sc.laser.omega;
    p.pair.alpha = sc.laser.alpha;
    p.pair.beta = sc.laser.auto_match ? sc.laser.alpha : sc.laser.beta;
    const OptimizeConfig& o = sc.optimize;
    if (o.omega_min && o.omega_max) {
        p.box.omega_min = *o.omega_min;
        p.box.omega_max = *o.omega_max;
    } else {
        const SearchBox auto_box = default_search_box(p.pair);
        p.box.omega_min = auto_box.omega_min;
        p.box.omega_max = auto_box.omega_max;
    }
    p.box.ratio_re_min = o.ratio_re_min;
    p.box.ratio_re_max = o.ratio_re_max;
    p.box.ratio_im_min = o.ratio_im_min;
    p.box.ratio_im_max = o.ratio_im_max;
    p.target_scale = o.target_scale;
    p.grid_omega = o.grid_omega;
    p.grid_re = o.grid_re;
    p.grid_im = o.grid_im;
    p.optimize_omega = o.optimize_omega.value_or(!biexciton_map);
    p.record_trace = o.record_trace;
    return p;
}

} // namespace dit
