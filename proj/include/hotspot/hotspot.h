#ifndef HOTSPOT_H
#define HOTSPOT_H

/*
 * C interface to the hotspot detector. Every object is an opaque handle
 * released with its *_free function. Functions return HS_OK or an error
 * status; hs_last_error() then describes the failure (per thread).
 * Strings returned as const char* belong to the handle they came from or,
 * for handle-less calls, to the calling thread until its next call.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HS_API __declspec(dllexport)
#else
#define HS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hs_status {
    HS_OK = 0,
    HS_ERR_INVALID_ARGUMENT = 1,
    HS_ERR_IO = 2,
    HS_ERR_PARSE = 3,
    HS_ERR_INFEASIBLE = 4,
    HS_ERR_OVERFLOW = 5,
    HS_ERR_INTERNAL = 6
} hs_status;

typedef enum hs_hypothesis { HS_EPIDEMIC = 0, HS_UNIFORM_NULL = 1, HS_UNKNOWN = -1 } hs_hypothesis;
typedef enum hs_mode { HS_MODE_NN = 0, HS_MODE_BALL = 1 } hs_mode;
typedef enum hs_topology_kind { HS_TOPO_ER = 0, HS_TOPO_GRID, HS_TOPO_TREE, HS_TOPO_POWERLAW } hs_topology_kind;
typedef enum hs_regime { HS_REGIME_DENSE = 0, HS_REGIME_SMALL = 1, HS_REGIME_AUTO = 2 } hs_regime;
typedef enum hs_gamma_source {
    HS_GAMMA_VALUE = 0,
    HS_GAMMA_FALLBACK,
    HS_GAMMA_TREE,
    HS_GAMMA_GRID,
    HS_GAMMA_PROFILE
} hs_gamma_source;

typedef struct hs_graph hs_graph;
typedef struct hs_snapshot hs_snapshot;
typedef struct hs_gamma_profile hs_gamma_profile;
typedef struct hs_experiment hs_experiment;
typedef struct hs_sweep_result hs_sweep_result;

HS_API const char* hs_last_error(void);
HS_API const char* hs_status_name(hs_status status);

/* ---- graphs ---- */

typedef struct hs_topology {
    hs_topology_kind kind;
    size_t n;           /* er, powerlaw */
    double p;           /* er edge probability */
    size_t dim, side;   /* grid */
    size_t degree, depth; /* tree */
    double exponent;    /* powerlaw */
} hs_topology;

HS_API void hs_topology_defaults(hs_topology* t);
HS_API hs_status hs_graph_generate(const hs_topology* t, uint64_t seed, hs_graph** out);
HS_API hs_status hs_graph_load(const char* path, int compact, hs_graph** out);
HS_API hs_status hs_graph_from_edges(size_t num_nodes, const uint32_t* endpoints, size_t num_edges, hs_graph** out);
HS_API hs_status hs_graph_save(const hs_graph* g, const char* path);
HS_API size_t hs_graph_num_nodes(const hs_graph* g);
HS_API size_t hs_graph_num_edges(const hs_graph* g);
HS_API void hs_graph_free(hs_graph* g);

/* ---- snapshots ---- */

typedef struct hs_scenario {
    double alpha;
    double q;
    double f;
    size_t num_seeds;
    int seeds_in_giant;   /* nonzero: seeds drawn from the largest component */
    double time_budget;   /* > 0: stop at this time instead of at ceil(alpha N) */
} hs_scenario;

HS_API void hs_scenario_defaults(hs_scenario* s);
HS_API hs_status hs_simulate_epidemic(const hs_graph* g, const hs_scenario* s, uint64_t seed, hs_snapshot** out);
HS_API hs_status hs_simulate_null(const hs_graph* g, double p, uint64_t seed, hs_snapshot** out);
HS_API hs_status hs_snapshot_from_ids(size_t num_nodes, const uint32_t* ids, size_t count, hs_snapshot** out);
HS_API hs_status hs_snapshot_read(const char* path, hs_snapshot** out);
HS_API hs_status hs_snapshot_write(const hs_snapshot* s, const char* path);
HS_API size_t hs_snapshot_num_nodes(const hs_snapshot* s);
HS_API size_t hs_snapshot_size(const hs_snapshot* s);
HS_API const uint32_t* hs_snapshot_ids(const hs_snapshot* s);
HS_API size_t hs_snapshot_infected_count(const hs_snapshot* s);
HS_API int hs_snapshot_truncated(const hs_snapshot* s);
HS_API hs_hypothesis hs_snapshot_truth(const hs_snapshot* s);
HS_API void hs_snapshot_free(hs_snapshot* s);

/* ---- detection ---- */

typedef struct hs_detector {
    hs_mode mode;
    size_t k_or_l; /* K in nn mode, radius in ball mode */
    size_t s;      /* reporting members required; 0 means s = k_or_l */
    double t;      /* Epidemic iff hotspot count > t */
} hs_detector;

typedef struct hs_noise {
    double flip_prob; /* 0 disables */
    uint32_t magnitude;
    uint64_t seed;
} hs_noise;

typedef struct hs_verdict {
    hs_hypothesis label;
    size_t hotspot_count;
    double threshold;
    hs_mode mode;
    size_t k_or_l;
    size_t s;
} hs_verdict;

HS_API hs_status hs_classify(const hs_graph* g, const hs_snapshot* s, const hs_detector* d, const hs_noise* noise,
                             hs_verdict* out);
HS_API const char* hs_verdict_csv_header(void);
HS_API const char* hs_verdict_csv_row(const hs_verdict* v, hs_hypothesis truth);

typedef struct hs_auto_params {
    double q, alpha, f;
    hs_regime regime;
    double density_cutoff;     /* auto: dense iff N_reporting / N > cutoff */
    double beta, rho, mu;      /* small regime; beta <= 0 derives it from N_reporting */
    hs_gamma_source gamma_source;
    double gamma;              /* HS_GAMMA_VALUE */
    const hs_gamma_profile* profile; /* HS_GAMMA_PROFILE */
    size_t infection_size;     /* fallback |S|; 0 means ceil(alpha N) */
    double log_base;           /* <= 0: natural log */
} hs_auto_params;

typedef struct hs_auto_choice {
    hs_regime regime;
    size_t k;
    double t;
    double gamma; /* dense only */
    double p;
    double p_in;
    double beta;  /* small only */
    int feasible; /* small: K mu <= rho; dense: gamma profile qualified */
} hs_auto_choice;

HS_API void hs_auto_params_defaults(hs_auto_params* p);
HS_API hs_status hs_auto_detect(const hs_graph* g, const hs_snapshot* s, const hs_auto_params* p, hs_verdict* out,
                                hs_auto_choice* choice);

/* ---- calibration ---- */

HS_API hs_status hs_reporting_probabilities(double q, double alpha, double f, double* p, double* p_in);
HS_API hs_status hs_gamma_estimate(const hs_graph* g, const hs_scenario* s, const size_t* ks, size_t num_ks,
                                   size_t trials, uint64_t seed, const char* topology_label, hs_gamma_profile** out);
HS_API hs_status hs_gamma_read(const char* path, hs_gamma_profile** out);
HS_API hs_status hs_gamma_write(const hs_gamma_profile* p, const char* path);
HS_API const char* hs_gamma_csv(hs_gamma_profile* p);
HS_API size_t hs_gamma_count(const hs_gamma_profile* p);
HS_API hs_status hs_gamma_entry(const hs_gamma_profile* p, size_t index, size_t* k, double* gamma, double* std_error);
HS_API hs_status hs_gamma_solve_k(const hs_gamma_profile* p, double f, double log_base, size_t* k, int* qualified);
HS_API void hs_gamma_free(hs_gamma_profile* p);

typedef struct hs_bounds {
    double e1;
    double e2;
    double p_big;
    double p_in_big;
    int separated;
} hs_bounds;

HS_API hs_status hs_error_bounds(double gamma, double q, double alpha, double f, size_t k, size_t n_reporting,
                                 hs_bounds* out);

/* ---- experiments ---- */

HS_API hs_status hs_experiment_new(hs_experiment** out);
HS_API hs_status hs_experiment_load(const char* path, hs_experiment** out);
HS_API hs_status hs_experiment_parse(const char* text, hs_experiment** out);
HS_API hs_status hs_experiment_set(hs_experiment* e, const char* key, const char* value);
HS_API hs_status hs_experiment_use_graph(hs_experiment* e, const hs_graph* g);
HS_API const char* hs_experiment_format(hs_experiment* e);
HS_API hs_status hs_experiment_run(const hs_experiment* e, hs_sweep_result** out);
HS_API hs_status hs_experiment_threshold_sweep(const hs_experiment* e, const double* t_values, size_t count,
                                               hs_sweep_result** out);
HS_API void hs_experiment_free(hs_experiment* e);

typedef struct hs_sweep_row {
    double sweep_value;
    size_t trials;
    double type1, type2, mean_error;
    double mean_hotspots_epi, sd_epi, mean_hotspots_null, sd_null;
    size_t failures, truncated;
} hs_sweep_row;

HS_API size_t hs_sweep_rows(const hs_sweep_result* r);
HS_API hs_status hs_sweep_row_at(const hs_sweep_result* r, size_t index, hs_sweep_row* out);
HS_API const char* hs_sweep_csv(hs_sweep_result* r);
HS_API void hs_sweep_free(hs_sweep_result* r);

HS_API const char* hs_describe_defaults(void);

#ifdef __cplusplus
}
#endif

#endif
