/*
 * C interface to the coupled-map-lattice wealth model.
 *
 * All functions returning cml_status report failures through the return code;
 * cml_last_error() then holds a thread-local description. Handles are opaque
 * and owned by the caller once returned; release them with the matching
 * *_free function (NULL is accepted).
 */
#ifndef CML_ECONO_H
#define CML_ECONO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CML_ECONO_BUILD)
#    define CML_API __declspec(dllexport)
#  else
#    define CML_API __declspec(dllimport)
#  endif
#else
#  define CML_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cml_status {
    CML_OK = 0,
    CML_ERR_CONFIG = 1,
    CML_ERR_DIVERGENT = 2,
    CML_ERR_INSUFFICIENT_DATA = 3,
    CML_ERR_UNDEFINED = 4,
    CML_ERR_IO = 5,
    CML_ERR_NULL_ARG = 6,
    CML_ERR_OUT_OF_RANGE = 7,
    CML_ERR_INTERNAL = 8
} cml_status;

typedef enum cml_classification {
    CML_CLASS_NEITHER = 0,
    CML_CLASS_BOLTZMANN_GIBBS = 1,
    CML_CLASS_PARETO = 2,
    CML_CLASS_BOTH = 3
} cml_classification;

typedef struct cml_config cml_config;
typedef struct cml_table cml_table;
typedef struct cml_simulation cml_simulation;

typedef struct cml_fit {
    int present;
    double exponent;
    double intercept;
    double beta;
    int accepted;
    size_t points_used;
} cml_fit;

/* Unset observables are NAN. */
typedef struct cml_cell {
    double a;
    double r;
    int divergent;
    double h_snapshot;
    double h_mean;
    double sigma_mean;
    double gini_snapshot;
    double gini_mean;
    cml_fit bg;
    cml_fit pareto;
    cml_classification classification;
    double temperature;
} cml_cell;

CML_API const char* cml_version(void);
CML_API const char* cml_rng_identity(void);
CML_API const char* cml_last_error(void);
CML_API const char* cml_status_string(cml_status status);
CML_API const char* cml_classification_string(cml_classification c);

/*
 * Configuration. Keys:
 *   ranges:  a_range r_range bg_fit_range pareto_fit_range
 *   doubles: grid_step init_lo init_hi init_const beta_threshold
 *            min_count_fraction
 *   uints:   n transient window realizations master_seed bg_bins pareto_bins
 *            min_points min_count
 *   strings: sample_mode (pooled|snapshot) pareto_scheme (linear|logarithmic)
 * Setters do not validate cross-field constraints; cml_config_validate does.
 */
CML_API cml_status cml_config_create(cml_config** out);
CML_API cml_status cml_config_clone(const cml_config* cfg, cml_config** out);
CML_API void cml_config_free(cml_config* cfg);
CML_API cml_status cml_config_apply_profile(cml_config* cfg, const char* profile);
CML_API cml_status cml_config_apply_preset(cml_config* cfg, const char* preset);
CML_API cml_status cml_config_set_double(cml_config* cfg, const char* key, double value);
CML_API cml_status cml_config_set_uint(cml_config* cfg, const char* key, uint64_t value);
CML_API cml_status cml_config_set_string(cml_config* cfg, const char* key, const char* value);
CML_API cml_status cml_config_set_range(cml_config* cfg, const char* key, double lo, double hi);
CML_API cml_status cml_config_get_double(const cml_config* cfg, const char* key, double* out);
CML_API cml_status cml_config_get_uint(const cml_config* cfg, const char* key, uint64_t* out);
CML_API cml_status cml_config_get_range(const cml_config* cfg, const char* key, double* lo, double* hi);
CML_API cml_status cml_config_validate(const cml_config* cfg);
/* Writes a NUL-terminated JSON echo; *len receives the length without NUL. */
CML_API cml_status cml_config_to_json(const cml_config* cfg, char* buf, size_t cap, size_t* len);

/* Phase-map tables, rows sorted by (r, a). */
CML_API cml_status cml_sweep(const cml_config* cfg, unsigned threads, cml_table** out);
/* fixed_axis is 'a' or 'r'; the other parameter spans its configured range. */
CML_API cml_status cml_scan(const cml_config* cfg, char fixed_axis, double value, unsigned threads,
                            cml_table** out);
CML_API cml_status cml_ensemble_cell(const cml_config* cfg, double a, double r, cml_cell* out);
CML_API size_t cml_table_size(const cml_table* table);
CML_API cml_status cml_table_cell(const cml_table* table, size_t index, cml_cell* out);
CML_API cml_status cml_table_write_csv(const cml_table* table, const char* path);
CML_API cml_status cml_table_read_csv(const char* path, cml_table** out);
CML_API void cml_table_free(cml_table* table);

/* One trajectory (realization 0) with histograms and observable series. */
CML_API cml_status cml_simulate(const cml_config* cfg, double a, double r, cml_simulation** out);
CML_API cml_status cml_simulation_cell(const cml_simulation* sim, cml_cell* out);
CML_API uint64_t cml_simulation_seed(const cml_simulation* sim);
/* Writes histogram_bg.csv, histogram_pareto.csv, fits.csv, series.csv and
 * cell.csv into out_dir (created if missing). Histograms are skipped when
 * they could not be built. */
CML_API cml_status cml_simulation_write_outputs(cml_simulation* sim, const char* out_dir);
CML_API size_t cml_simulation_output_count(const cml_simulation* sim);
CML_API const char* cml_simulation_output_path(const cml_simulation* sim, size_t index);
CML_API void cml_simulation_free(cml_simulation* sim);

/* Records config, code version, RNG identity, timestamps and SHA-256 digests
 * of `files` as JSON at `path`. started_unix_ms is the run start time. */
CML_API cml_status cml_write_manifest(const cml_config* cfg, const char* command, const char* seed_source,
                                      unsigned threads, int64_t started_unix_ms, const char* const* files,
                                      size_t nfiles, const char* path);

CML_API cml_status cml_mean_field(const double* x, size_t n, double* out);
CML_API cml_status cml_sigma(const double* x, size_t n, double* out);
CML_API cml_status cml_gini(const double* x, size_t n, double* out);

#ifdef __cplusplus
}
#endif

#endif /* CML_ECONO_H */
