/* radshoot — shooting solver for coupled cubic Schrödinger systems on the
 * unit ball: sign-changing radial solutions, coupling continuation, and
 * entire-space trajectory classification.
 *
 * C API of the shared library. All entry points return rs_status; on failure
 * rs_last_error() holds a thread-local message. Objects returned through
 * out-parameters are owned by the caller and released with the matching
 * *_free function.
 */

#ifndef RADSHOOT_H
#define RADSHOOT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
  RS_OK = 0,
  RS_ERR_INVALID_ARGUMENT = 1,
  RS_ERR_PARSE = 2,
  RS_ERR_SOLVER = 3,
  RS_ERR_IO = 4,
  RS_ERR_INTERNAL = 5
} rs_status;

typedef struct rs_config rs_config; /* parsed run configuration */
typedef struct rs_result rs_result; /* summary of a run or regression */

const char* rs_version(void);

/* Message for the most recent failure on this thread; empty string if the
 * last call succeeded. The pointer stays valid until the next API call on
 * the same thread. */
const char* rs_last_error(void);

/* --- configuration ------------------------------------------------------ */

rs_status rs_config_parse_file(const char* path, rs_config** out);
rs_status rs_config_parse_text(const char* text, rs_config** out);

/* Override one flat key, e.g. rs_config_override(cfg, "seed", "99"). */
rs_status rs_config_override(rs_config* cfg, const char* key,
                             const char* value);

/* fnv1a64 hex digest of the canonical configuration text. */
const char* rs_config_hash(const rs_config* cfg);

void rs_config_free(rs_config* cfg);

/* --- experiments --------------------------------------------------------- */

/* Runs the configured experiment, writing its outputs and manifest.json
 * under out_dir. jobs <= 1 runs sequentially; results are identical either
 * way. The call succeeds (RS_OK) even when the experiment itself fails;
 * check rs_result_exit_code. */
rs_status rs_run(const rs_config* cfg, const char* out_dir, unsigned jobs,
                 rs_result** out);

/* Re-runs every golden case under golden_dir into work_dir and compares the
 * outputs. policy: "default" (per-field tolerances) or "exact". */
rs_status rs_regress(const char* golden_dir, const char* work_dir,
                     unsigned jobs, const char* policy, rs_result** out);

/* JSON summary of the run/regression (owned by the result object). */
const char* rs_result_json(const rs_result* res);

/* 0 on success; 1 solver failure; 2 invalid configuration. */
int rs_result_exit_code(const rs_result* res);

void rs_result_free(rs_result* res);

/* --- direct solver entry points ------------------------------------------ */

/* Scalar problem on the unit ball: amplitude whose trajectory vanishes at
 * r=1 with exactly `nodes` interior sign changes. record_json receives the
 * solution record; release with rs_string_free. */
rs_status rs_solve_scalar(double lambda, double mu, int nodes,
                          char** record_json);

/* Non-degeneracy probe of the scalar solution: boundary values of the two
 * linearized flows. nondegenerate receives 0 or 1. */
rs_status rs_scalar_nondegeneracy(double lambda, double mu, int nodes,
                                  double* z_end, double* v_end,
                                  int* nondegenerate);

void rs_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RADSHOOT_H */
