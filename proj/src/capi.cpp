// extern-C surface over the core library. Exceptions are mapped to status
// codes; messages land in a thread-local buffer.
#include "ditsim.h"

#include <cstring>
#include <new>
#include <string>

#include "errors.hpp"
#include "scenario.hpp"
#include "sweeps.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
dit_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const dit::ValidationError& e) {
        g_last_error = e.what();
        return DIT_ERR_VALIDATION;
    } catch (const dit::ComputeError& e) {
        g_last_error = e.what();
        return DIT_ERR_COMPUTE;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return DIT_ERR_COMPUTE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DIT_ERR_VALIDATION;
    }
}

} // namespace

struct dit_scenario {
    dit::Scenario scenario;
};

extern "C" {

const char* dit_version(void) { return "1.0.0"; }

const char* dit_last_error(void) { return g_last_error.c_str(); }

dit_status dit_scenario_parse(const char* json_text, dit_scenario** out) {
    if (!json_text || !out) {
        g_last_error = "null argument";
        return DIT_ERR_VALIDATION;
    }
    return guarded([&] {
        *out = new dit_scenario{dit::load_scenario_text(json_text)};
        return DIT_OK;
    });
}

dit_status dit_scenario_load(const char* path, dit_scenario** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return DIT_ERR_VALIDATION;
    }
    return guarded([&] {
        *out = new dit_scenario{dit::load_scenario_file(path)};
        return DIT_OK;
    });
}

dit_status dit_preset(const char* name, dit_scenario** out) {
    if (!name || !out) {
        g_last_error = "null argument";
        return DIT_ERR_VALIDATION;
    }
    return guarded([&] {
        *out = new dit_scenario{dit::preset_scenario(name)};
        return DIT_OK;
    });
}

void dit_scenario_free(dit_scenario* sc) { delete sc; }

dit_status dit_scenario_json(const dit_scenario* sc, char** out) {
    if (!sc || !out) {
        g_last_error = "null argument";
        return DIT_ERR_VALIDATION;
    }
    return guarded([&] {
        *out = dup_string(dit::scenario_to_json(sc->scenario).dump(2) + "\n");
        return DIT_OK;
    });
}

dit_status dit_coeffs_json(const dit_scenario* sc, char** out) {
    if (!sc || !out) {
        g_last_error = "null argument";
        return DIT_ERR_VALIDATION;
    }
    return guarded([&] {
        *out = dup_string(dit::coeffs_report(sc->scenario).dump(2) + "\n");
        return DIT_OK;
    });
}

dit_status dit_fidelity_json(const dit_scenario* sc, char** out) {
    if (!sc || !out) {
        g_last_error = "null argument";
        return DIT_ERR_VALIDATION;
    }
    return guarded([&] {
        *out = dup_string(dit::fidelity_report(sc->scenario).dump(2) + "\n");
        return DIT_OK;
    });
}

dit_status dit_limits_json(const dit_scenario* sc, double margin, char** out) {
    if (!sc || !out) {
        g_last_error = "null argument";
        return DIT_ERR_VALIDATION;
    }
    return guarded([&] {
        dit::Scenario scenario = sc->scenario;
        if (margin > 0.0) scenario.margin = margin;
        *out = dup_string(dit::limits_report(scenario).dump(2) + "\n");
        return DIT_OK;
    });
}

dit_status dit_optimize_json(const dit_scenario* sc, char** out) {
    if (!sc || !out) {
        g_last_error = "null argument";
        return DIT_ERR_VALIDATION;
    }
    return guarded([&] {
        *out = dup_string(dit::optimize_report_json(sc->scenario).dump(2) + "\n");
        return DIT_OK;
    });
}

dit_status dit_sweep_csv(const dit_scenario* sc, char** out) {
    if (!sc || !out) {
        g_last_error = "null argument";
        return DIT_ERR_VALIDATION;
    }
    return guarded([&] {
        *out = dup_string(dit::to_csv(dit::run_sweep(sc->scenario)));
        return DIT_OK;
    });
}

dit_status dit_oracle_check_json(int trials, unsigned long long seed, double tolerance,
                                 char** out) {
    if (!out) {
        g_last_error = "null argument";
        return DIT_ERR_VALIDATION;
    }
    return guarded([&] {
        const dit::OracleCheckReport rep = dit::oracle_check(trials, seed, tolerance);
        *out = dup_string(dit::oracle_check_json(rep).dump(2) + "\n");
        if (!rep.pass) {
            g_last_error = "oracle-check deviation above tolerance";
            return DIT_ERR_TOLERANCE;
        }
        return DIT_OK;
    });
}

void dit_string_free(char* s) { delete[] s; }

} // extern "C"
