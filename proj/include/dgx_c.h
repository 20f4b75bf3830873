/* C interface to the dgx library. All handles are opaque; every call that can
 * fail returns a dgx_status and leaves a message for dgx_last_error(). */
#ifndef DGX_C_H_
#define DGX_C_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DGX_API __declspec(dllexport)
#else
#define DGX_API __attribute__((visibility("default")))
#endif

typedef enum dgx_status {
  DGX_OK = 0,
  DGX_INVALID_ARGUMENT = 1,
  DGX_OUT_OF_RANGE = 2,
  DGX_DUPLICATE_EDGE = 3,
  DGX_SHAPE_MISMATCH = 4,
  DGX_NOT_SYMMETRIC = 5,
  DGX_NOT_CONVERGED = 6,
  DGX_NON_FINITE = 7,
  DGX_MISSING_ARTIFACT = 8,
  DGX_HASH_MISMATCH = 9,
  DGX_CHECKSUM_MISMATCH = 10,
  DGX_COUNT_MISMATCH = 11,
  DGX_TOO_LARGE = 12,
  DGX_PARSE = 13,
  DGX_IO = 14,
  DGX_VALIDATION_GATE = 15,
  DGX_INTERNAL = 99
} dgx_status;

typedef struct dgx_config dgx_config;
typedef struct dgx_result dgx_result;

/* Message of the last failed call on this thread ("" if none). */
DGX_API const char* dgx_last_error(void);
/* JSON error record of the last failed call on this thread. */
DGX_API const char* dgx_last_error_json(void);
DGX_API const char* dgx_status_name(dgx_status status);
/* Process exit code for a status: 0 ok, 1 usage, 2 missing artifact, 3 otherwise. */
DGX_API int dgx_exit_code(dgx_status status);

/* ---- configuration ---- */

DGX_API dgx_status dgx_config_new(dgx_config** out);
/* Parses a key = value file. */
DGX_API dgx_status dgx_config_load(const char* path, dgx_config** out);
DGX_API dgx_status dgx_config_set(dgx_config* config, const char* key, const char* value);
/* Canonical serialization; the returned result owns the text. */
DGX_API dgx_status dgx_config_canonical(const dgx_config* config, dgx_result** out);
/* 16 hex digits plus NUL; `size` must be at least 17. */
DGX_API dgx_status dgx_config_hash(const dgx_config* config, char* buffer, size_t size);
DGX_API void dgx_config_free(dgx_config* config);

/* ---- results ---- */

DGX_API const char* dgx_result_text(const dgx_result* result);
DGX_API void dgx_result_free(dgx_result* result);

/* ---- pipeline stages (artifacts under the config's `out`) ----
 * `summary` may be NULL; otherwise it receives a JSON summary. */

DGX_API dgx_status dgx_generate(const dgx_config* config, dgx_result** summary);
/* Writes the checkpoint and log even when the accuracy gate fails
 * (DGX_VALIDATION_GATE). */
DGX_API dgx_status dgx_train(const dgx_config* config, dgx_result** summary);
DGX_API dgx_status dgx_explain(const dgx_config* config, dgx_result** summary);
DGX_API dgx_status dgx_evaluate(const dgx_config* config, dgx_result** summary);

/* ---- sweeps and oracles ---- */

/* Runs the AUC sweep over all six synthetic datasets and `seeds`. Writes
 * table1.json, table1_seeds.csv and table1.txt under the config's `out`.
 * The summary holds table1.json. */
DGX_API dgx_status dgx_reproduce_table1(const dgx_config* config, const uint64_t* seeds,
                                        size_t num_seeds, dgx_result** summary);

/* Fidelity/characterization sweep on one real-world manifest; `sample_nodes`
 * <= 0 explains every test node. Writes table2_<name>.json/.csv under `out`. */
DGX_API dgx_status dgx_table2(const dgx_config* config, const char* manifest_path,
                              int sample_nodes, dgx_result** summary);

/* kind: "theorem1" or "entropy". Writes oracle_<kind>.json under `out`. */
DGX_API dgx_status dgx_oracle(const dgx_config* config, const char* kind, dgx_result** summary);

/* DOT rendering of one explanation (a JSON object, or one line of a JSON lines
 * file selected by `target`, -1 = first). `ground_truth_csv` may be NULL. */
DGX_API dgx_status dgx_export_dot(const char* explanation_path, int target,
                                  const char* ground_truth_csv, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* DGX_C_H_ */
