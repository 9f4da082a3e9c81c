/*
 * C interface to the semipullback library.
 *
 * Models are opaque handles parsed from JSON model files. Operations return
 * a status code; text results are written to caller-owned strings that must
 * be released with spb_string_free. After a non-OK status,
 * spb_last_error() describes the failure (per thread).
 */
#ifndef SEMIPB_SEMIPB_H
#define SEMIPB_SEMIPB_H

#if defined(_WIN32)
#define SPB_API __declspec(dllexport)
#else
#define SPB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spb_status {
  SPB_OK = 0,
  /* Semantic failure: validation violations, a failed check, a leg that is
     not a morphism, or two LMPs that are not behaviorally equivalent. */
  SPB_FAILED = 1,
  /* Malformed JSON or a schema violation (dangling reference, bad rational). */
  SPB_SCHEMA_ERROR = 2,
  /* Bad argument: unknown name, null pointer, parameter out of range. */
  SPB_INVALID_ARGUMENT = 3,
  SPB_INTERNAL_ERROR = 4
} spb_status;

typedef enum spb_mode { SPB_MODE_KERNEL = 0, SPB_MODE_LMP = 1 } spb_mode;

typedef struct spb_model spb_model;

SPB_API const char* spb_version(void);
SPB_API const char* spb_last_error(void);
SPB_API void spb_string_free(char* s);

SPB_API spb_status spb_model_load_file(const char* path, spb_model** out);
SPB_API spb_status spb_model_load_string(const char* json, spb_model** out);
SPB_API void spb_model_free(spb_model* model);
/* Canonical serialization (sorted keys, reduced rationals). */
SPB_API spb_status spb_model_serialize(const spb_model* model, char** out_json);

/* Runs every validator. SPB_OK iff the model is clean; the report lists one
   violation per line. */
SPB_API spb_status spb_validate(const spb_model* model, char** out_report);

/* Semipullback of a named cospan. Kernel mode uses the probability pipeline
   when all three kernels are probability kernels, otherwise the one-point
   completion. With check != 0 the result is re-verified and the report ends
   with PASS or FAIL (FAIL yields SPB_FAILED). out_json receives the vertex,
   projections and per-point certificates as a model document. */
SPB_API spb_status spb_semipullback(const spb_model* model, const char* cospan, spb_mode mode, int check,
                                    char** out_json, char** out_report);

/* Largest zigzag quotient of a named LMP, as a model document. */
SPB_API spb_status spb_quotient(const spb_model* model, const char* lmp, char** out_json);

/* Cospan through the common quotient, then its semipullback span. Returns
   SPB_FAILED with report "not behaviorally equivalent" when there is none. */
SPB_API spb_status spb_span_from_cospan(const spb_model* model, const char* lmp1, const char* lmp2, char** out_json,
                                        char** out_report);

/* Derivation that the countable-cocountable cospan has no semipullback for
   parameters r1 != r2 given as "p/q" strings. */
SPB_API spb_status spb_counterexample(const char* r1, const char* r2, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* SEMIPB_SEMIPB_H */
