#ifndef RIGCHECK_H
#define RIGCHECK_H

/* C interface to the rigcheck engine. Every call returns an rc_status; on
 * failure rc_last_error() describes the cause for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * rc_string_free. */

#include <stdint.h>

#if defined(RIGCHECK_BUILDING_LIBRARY)
#define RC_API __attribute__((visibility("default")))
#else
#define RC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rc_status {
  RC_OK = 0,
  RC_LENGTH_MISMATCH,
  RC_TYPE_MISMATCH,
  RC_BAD_PARAMS,
  RC_NAMED_GENERATOR_PRESENT,
  RC_NOT_PARALLEL,
  RC_UNSUPPORTED_GENERATOR,
  RC_NON_UNITARY_FUNCTOR,
  RC_UNASSIGNED_GENERATOR,
  RC_DIMENSION_MISMATCH,
  RC_COEFFICIENT_MISMATCH,
  RC_LEGS_NOT_ROTATION_RELATED,
  RC_UNKNOWN_DIAGRAM,
  RC_WITNESS_MISSING,
  RC_SIGNATURE_MISMATCH,
  RC_NO_INVERSION_AVAILABLE,
  RC_PARSE_ERROR,
  RC_TYPE_ERROR,
  RC_IO_ERROR,
  RC_INVALID_ARGUMENT,
  RC_INTERNAL_ERROR = 100
} rc_status;

typedef enum rc_verdict { RC_EQUAL = 0, RC_UNEQUAL = 1, RC_INDETERMINATE = 2 } rc_verdict;

typedef enum rc_mode { RC_MODE_DECLARED = 0, RC_MODE_EXACT = 1, RC_MODE_MODEL = 2 } rc_mode;

typedef struct rc_flags rc_flags;
typedef struct rc_report rc_report;

RC_API const char* rc_version(void);
RC_API const char* rc_status_name(int status);
RC_API const char* rc_last_error(void);
RC_API void rc_string_free(char* s);

/* Run flags. The seed defaults to RIGCHECK_SEED, else 0. */
RC_API rc_status rc_flags_new(rc_flags** out);
RC_API void rc_flags_free(rc_flags* flags);
RC_API rc_status rc_flags_set_mode(rc_flags* flags, rc_mode mode);
RC_API rc_status rc_flags_set_seed(rc_flags* flags, uint64_t seed);
RC_API rc_status rc_flags_set_models(rc_flags* flags, int count);
RC_API rc_status rc_flags_set_maxdim(rc_flags* flags, int max_dim);
RC_API rc_status rc_flags_set_tol(rc_flags* flags, double tol);
RC_API rc_status rc_flags_set_truncation(rc_flags* flags, int window);

/* Run a directory of .diag files, a single file, or diagram text. flags may be NULL. */
RC_API rc_status rc_run_corpus(const char* path, const rc_flags* flags, rc_report** out);
RC_API rc_status rc_run_text(const char* text, const rc_flags* flags, rc_report** out);
RC_API void rc_report_free(rc_report* report);

RC_API rc_status rc_report_counts(const rc_report* report, int* total, int* passed, int* failed,
                                  int* indeterminate);
RC_API int rc_report_all_pass(const rc_report* report);
RC_API rc_status rc_report_warning_count(const rc_report* report, int* count);
/* Report as JSON (include_timing != 0 keeps the ms fields) or as a text table. */
RC_API rc_status rc_report_json(const rc_report* report, int include_timing, char** out);
RC_API rc_status rc_report_text(const rc_report* report, int include_timing, char** out);

/* Parse diagram text and report the number of diagrams it declares. */
RC_API rc_status rc_parse_check(const char* text, int* diagrams);

/* Decide equality of two morphism expressions under the declarations of a
 * diagram body (e.g. "obj a b;"). */
RC_API rc_status rc_decide_equal(const char* declarations, const char* lhs, const char* rhs, rc_verdict* verdict);

/* Stabilization catalogue: report JSON, and rotation witnesses for replay. */
RC_API rc_status rc_rig_check(const char* diagram, int truncation, int steps, char** json_out);
RC_API rc_status rc_rig_witness(const char* diagram, int truncation, int steps, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
