/* C interface to the mixedbo library.
 *
 * Objects are opaque handles created by *_create / *_from_* functions and
 * released with the matching *_free. Every fallible call returns an
 * mbo_status; on failure mbo_last_error() describes the problem (the message
 * is per-thread and valid until the next failing call on that thread).
 * Strings returned through char** out-parameters are heap allocated and must
 * be released with mbo_string_free.
 *
 * Configurations are exchanged as JSON arrays with one entry per dimension:
 * a number for real and integer dimensions, a label string for categorical
 * ones, e.g. [0.25, 3, "relu"].
 */
#ifndef MIXEDBO_H
#define MIXEDBO_H

#include <stddef.h>
#include <stdint.h>

#if defined(MIXEDBO_BUILDING_LIBRARY)
#define MBO_API __attribute__((visibility("default")))
#else
#define MBO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mbo_status {
  MBO_OK = 0,
  MBO_ERR_INVALID_ARGUMENT = 1,
  MBO_ERR_INVALID_CONFIG = 2,
  MBO_ERR_DIMENSION = 3,
  MBO_ERR_SINGULAR_MODEL = 4,
  MBO_ERR_SAMPLER_STUCK = 5,
  MBO_ERR_INSUFFICIENT_DATA = 6,
  MBO_ERR_INVALID_OBSERVATION = 7,
  MBO_ERR_GRID_TOO_LARGE = 8,
  MBO_ERR_INCOMPLETE_GRID = 9,
  MBO_ERR_IO = 10,
  MBO_ERR_OBJECTIVE = 11,
  MBO_ERR_INTERNAL = 100
} mbo_status;

typedef enum mbo_recommend_mode {
  MBO_RECOMMEND_POSTERIOR_MEAN_MIN = 0,
  MBO_RECOMMEND_BEST_OBSERVED = 1
} mbo_recommend_mode;

typedef struct mbo_space mbo_space;
typedef struct mbo_optimizer mbo_optimizer;

MBO_API const char* mbo_version(void);
MBO_API const char* mbo_last_error(void);
MBO_API const char* mbo_status_string(mbo_status status);
MBO_API void mbo_string_free(char* s);

/* Search spaces. `json` uses the {"dims":[{"kind":"real",...},...]} schema;
 * `layout` is one of "2d-int", "2d-cat", "4d-int", "4d-cat". */
MBO_API mbo_status mbo_space_from_json(const char* json, mbo_space** out);
MBO_API mbo_status mbo_space_from_layout(const char* layout, mbo_space** out);
MBO_API void mbo_space_free(mbo_space* space);
MBO_API size_t mbo_space_encoded_width(const mbo_space* space);
MBO_API mbo_status mbo_space_to_json(const mbo_space* space, char** out_json);
MBO_API mbo_status mbo_space_encode(const mbo_space* space, const char* config_json,
                                    double* out, size_t width);
MBO_API mbo_status mbo_space_transform(const mbo_space* space, const double* point,
                                       double* out, size_t width);
MBO_API mbo_status mbo_space_decode(const mbo_space* space, const double* point, size_t width,
                                    char** out_config_json);

/* Ask/tell optimizer. `strategy` is one of "naive", "basic", "proposed",
 * "tpe", "random". `options_json` may be NULL or an object with any of
 * n_init, hyper_samples, burn_in, noiseless, n_random, n_starts, tol,
 * family ("matern32" | "se"), gamma, n_candidates, prior_weight. */
MBO_API mbo_status mbo_optimizer_create(const mbo_space* space, const char* strategy,
                                        uint64_t seed, const char* options_json,
                                        mbo_optimizer** out);
MBO_API void mbo_optimizer_free(mbo_optimizer* opt);
/* Returns the next configuration to evaluate. Pending until mbo_optimizer_tell. */
MBO_API mbo_status mbo_optimizer_ask(mbo_optimizer* opt, char** out_config_json);
/* Reports the objective value for the pending ask. */
MBO_API mbo_status mbo_optimizer_tell(mbo_optimizer* opt, double y);
/* Records an evaluation of an arbitrary configuration (e.g. replayed history). */
MBO_API mbo_status mbo_optimizer_observe(mbo_optimizer* opt, const char* config_json, double y);
/* Replays the eval_config_json/observed_y columns of a records.csv file. */
MBO_API mbo_status mbo_optimizer_load_history(mbo_optimizer* opt, const char* records_csv_path,
                                              size_t* out_rows);
MBO_API mbo_status mbo_optimizer_recommend(mbo_optimizer* opt, mbo_recommend_mode mode,
                                           char** out_config_json);
MBO_API size_t mbo_optimizer_num_observations(const mbo_optimizer* opt);

/* Benchmark harness. `config_json` keys: layout | space, strategies,
 * iterations, repetitions, noise, hyper_samples, burn_in, bootstrap, seed,
 * out, n_init, grid_density, objective_cmd, threads, n_random, n_starts, tol.
 * Writes records.csv, summary.csv and regret.svg to `out`. The optional
 * report lists the final-iteration summary and any failed runs as JSON. */
MBO_API mbo_status mbo_experiment_run(const char* config_json, char** out_report_json);

/* Re-summarizes one or more records.csv files (e.g. adding externally
 * produced baseline results) into `out_dir`. `records_paths` is a
 * NULL-terminated array. */
MBO_API mbo_status mbo_experiment_summarize(const mbo_space* space, const char* const* records_paths,
                                            int bootstrap_samples, uint64_t seed,
                                            const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* MIXEDBO_H */
