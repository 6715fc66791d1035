/*
 * cppa — communication protection policy analyzer.
 *
 * C interface to the analysis engine: opaque handles, integer status codes,
 * UTF-8 strings. Every char* returned through an out-parameter is owned by
 * the caller and must be released with cppa_string_free(); handles are
 * released with their matching *_free function. All functions are
 * thread-compatible (no shared mutable state besides the thread-local error
 * message).
 */
#ifndef CPPA_H
#define CPPA_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cppa_scenario cppa_scenario;
typedef struct cppa_report cppa_report;

typedef enum cppa_status {
    CPPA_OK = 0,
    CPPA_ERR_INVALID_ARGUMENT = 1, /* bad parameter or precondition */
    CPPA_ERR_PARSE = 2,            /* malformed or inconsistent input document */
    CPPA_ERR_IO = 3,               /* file could not be read or written */
    CPPA_ERR_UNSUPPORTED = 4,      /* request outside the model, e.g. DOT of OUT_OF_PLACE */
    CPPA_ERR_INTERNAL = 5
} cppa_status;

const char* cppa_version(void);

/* Explanation of the most recent failure on this thread ("" when none). */
const char* cppa_last_error(void);

/* ---- scenarios ---- */

cppa_status cppa_scenario_parse(const char* json_text, cppa_scenario** out);
cppa_status cppa_scenario_load(const char* path, cppa_scenario** out);
cppa_status cppa_scenario_to_json(const cppa_scenario* scenario, char** out_json);
cppa_status cppa_scenario_save(const cppa_scenario* scenario, const char* path);
void cppa_scenario_free(cppa_scenario* scenario);

typedef struct cppa_generation_params {
    size_t n_pi;       /* non-conflicting PIs */
    size_t n_conflict; /* conflicting PIs */
    size_t n_entities; /* exact entity count */
    unsigned long long seed;
    double w_end_to_end;   /* scheme weights; all zero means library defaults */
    double w_site_to_site;
    double w_remote_access;
} cppa_generation_params;

cppa_status cppa_scenario_generate(const cppa_generation_params* params, cppa_scenario** out);

/* ---- analysis ---- */

typedef struct cppa_analysis_options {
    size_t path_cap;      /* 0 means the default (1024) */
    int strict_asymmetric; /* nonzero: flag every PI lacking a mirror */
} cppa_analysis_options;

typedef struct cppa_stats {
    size_t entity_count;
    size_t pi_count;
    size_t connection_count;
    size_t enumerated_paths;
    int paths_truncated;
    double pre_computation_ms;
    double analysis_ms;
} cppa_stats;

/* options may be NULL for defaults. */
cppa_status cppa_analyze(const cppa_scenario* scenario, const cppa_analysis_options* options,
                         cppa_report** out);
void cppa_report_free(cppa_report* report);

size_t cppa_report_anomaly_count(const cppa_report* report);
cppa_status cppa_report_stats(const cppa_report* report, cppa_stats* out);
cppa_status cppa_report_to_text(const cppa_report* report, char** out_text);
cppa_status cppa_report_to_json(const cppa_report* report, char** out_json);

/* DOT renderings: one per renderable anomaly. */
size_t cppa_report_dot_count(const cppa_report* report);
cppa_status cppa_report_dot(const cppa_report* report, size_t index, char** out_name,
                            char** out_dot);

/* ---- configuration mapping ---- */

/* context_json: {"client_address": "...", "ciphers": {"suite": [hi,pi,c]}},
 * NULL or "" for defaults. Output: {"schema_version":1, "pis":[...]}. */
cppa_status cppa_map_strongswan(const char* conf_text, const char* context_json,
                                char** out_pis_json);
cppa_status cppa_map_openvpn(const char* client_text, const char* server_text,
                             const char* context_json, char** out_pis_json);
cppa_status cppa_map_ssh(const char* conf_text, const char* context_json, char** out_pis_json);

void cppa_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CPPA_H */
