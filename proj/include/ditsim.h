/*
 * ditsim — dipole-induced-transparency entanglement simulator, C API.
 *
 * The library evaluates the two-cavity entanglement protocol exactly for
 * coherent-state inputs: steady-state scattering coefficients, detection
 * fidelity/efficiency, a truncated-Fock-space verification oracle,
 * weak-excitation operating limits, and fidelity optimization over the
 * laser frequency and input-amplitude ratio.
 *
 * All entry points act on an opaque scenario handle built from a JSON
 * configuration (see README for the schema; rates in GHz, times in ns).
 * Functions return DIT_OK or an error code; the message for the most recent
 * failure on the calling thread is available via dit_last_error(). Strings
 * returned through char** are heap-allocated and must be released with
 * dit_string_free().
 */
#ifndef DITSIM_H
#define DITSIM_H

#if defined(_WIN32)
#define DIT_API __declspec(dllexport)
#elif defined(__GNUC__)
#define DIT_API __attribute__((visibility("default")))
#else
#define DIT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dit_scenario dit_scenario;

typedef enum dit_status {
    DIT_OK = 0,
    DIT_ERR_VALIDATION = 1, /* malformed or invariant-violating configuration */
    DIT_ERR_COMPUTE = 2,    /* valid input with no defined result */
    DIT_ERR_TOLERANCE = 3   /* oracle-check deviation above tolerance */
} dit_status;

DIT_API const char* dit_version(void);

/* Message for the last failure on this thread; empty string if none. */
DIT_API const char* dit_last_error(void);

DIT_API dit_status dit_scenario_parse(const char* json_text, dit_scenario** out);
DIT_API dit_status dit_scenario_load(const char* path, dit_scenario** out);
DIT_API dit_status dit_preset(const char* name, dit_scenario** out);
DIT_API void dit_scenario_free(dit_scenario* sc);

/* Scenario serialized back to its canonical JSON form. */
DIT_API dit_status dit_scenario_json(const dit_scenario* sc, char** out);

/* Scattering coefficients of both arms at the configured laser frequency. */
DIT_API dit_status dit_coeffs_json(const dit_scenario* sc, char** out);

/* Exact protocol fidelity/efficiency and detector amplitudes. */
DIT_API dit_status dit_fidelity_json(const dit_scenario* sc, char** out);

/* Weak-excitation checks and, when configured, the exciton-biexciton
 * coherence figures of merit. margin <= 0 keeps the scenario's margin. */
DIT_API dit_status dit_limits_json(const dit_scenario* sc, double margin, char** out);

/* Fidelity optimization over laser frequency and input ratio. */
DIT_API dit_status dit_optimize_json(const dit_scenario* sc, char** out);

/* CSV table for the scenario's sweep section. */
DIT_API dit_status dit_sweep_csv(const dit_scenario* sc, char** out);

/* Randomized closed-form vs Fock-oracle equivalence trials; returns
 * DIT_ERR_TOLERANCE when the maximum deviation exceeds tolerance. */
DIT_API dit_status dit_oracle_check_json(int trials, unsigned long long seed, double tolerance,
                                 char** out);

DIT_API void dit_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* DITSIM_H */
