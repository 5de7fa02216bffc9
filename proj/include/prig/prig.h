/* Copyright 2026 The prig Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the prig library. All inputs and reports are JSON strings;
 * every string returned through an out-parameter is owned by the caller and
 * released with prig_string_free.
 *
 * A context carries the run configuration and caches the built group. It may
 * be used from one thread at a time; separate contexts are independent.
 */

#ifndef PRIG_H
#define PRIG_H

#include <stdint.h>

#if defined(_WIN32)
#define PRIG_API __declspec(dllexport)
#elif defined(PRIG_BUILDING_LIBRARY)
#define PRIG_API __attribute__((visibility("default")))
#else
#define PRIG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum prig_status {
    PRIG_OK = 0,
    PRIG_BOUNDED_BELOW = 1,  /* dichotomy ended in the bounded-below branch */
    PRIG_E_INPUT = 2,        /* malformed input or violated precondition */
    PRIG_UNDECIDED = 3,      /* more than half of the scanned tuples undecided */
    PRIG_CHECK_FAILED = 4,   /* an axiom check failed */
    PRIG_E_INTERNAL = 5
} prig_status;

typedef struct prig_context prig_context;
typedef struct prig_series prig_series;

/* config: {"p", "precision", "degree_bound", "level", "group", "mode",
 * "count", "cap", "seed", "threads"}; group is "multiplicative" or
 * Lubin-Tate parameters {"p", "f"}. Missing keys take defaults (p = 3,
 * precision 12, degree_bound 16, level 2, exhaustive, cap 10^6, seed 0).
 * Returns NULL on error with *status set; the message is then available from
 * prig_last_error(NULL). */
PRIG_API prig_context* prig_context_new(const char* config_json, prig_status* status);
PRIG_API void prig_context_free(prig_context* ctx);

/* Message of the last failed call on ctx, or of the last failed
 * prig_context_new / prig_series_parse on this thread when ctx is NULL. */
PRIG_API const char* prig_last_error(const prig_context* ctx);
PRIG_API void prig_string_free(char* s);
PRIG_API const char* prig_version(void);

/* a_values: JSON array of decimal strings. Emits {"law", "brackets"}. */
PRIG_API prig_status prig_lt_build(prig_context* ctx, const char* a_values_json, char** out_json);
PRIG_API prig_status prig_verify_axioms(prig_context* ctx, uint32_t trials, char** out_json);

/* generators: one series object, an array of them, or {"generators": [...]}.
 * thresholds: JSON array of rational strings such as "1/2" (may be NULL). */
PRIG_API prig_status prig_scan(prig_context* ctx, const char* generators_json, const char* thresholds_json,
                               char** out_json);
PRIG_API prig_status prig_detect(prig_context* ctx, const char* generators_json, char** out_json);
PRIG_API prig_status prig_profile(prig_context* ctx, const char* generators_json, char** out_json);

/* Pulls a series back along a change of variables and, when tuples_json is a
 * non-NULL array of "level:exponent" tuples, moves the tuples by the matching
 * action. Emits {"series", "tuples"}. */
PRIG_API prig_status prig_changevars(prig_context* ctx, const char* series_json, const char* cv_json,
                                     const char* tuples_json, char** out_json);

/* Sequence normalization on "level:exponent" tuples. */
PRIG_API prig_status prig_normalize(prig_context* ctx, const char* tuples_json, char** out_json);

PRIG_API prig_series* prig_series_parse(const char* json, prig_status* status);
PRIG_API char* prig_series_to_json(const prig_series* s);
PRIG_API int prig_series_equal(const prig_series* a, const prig_series* b);
PRIG_API void prig_series_free(prig_series* s);

#ifdef __cplusplus
}
#endif

#endif
