#ifndef PDSL_H
#define PDSL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PdslStatus {
  PDSL_STATUS_OK = 0,
  PDSL_STATUS_NULL_POINTER = 1,
  PDSL_STATUS_INVALID_UTF8 = 2,
  PDSL_STATUS_PARSE_ERROR = 3,
  PDSL_STATUS_INVALID_MODEL = 4,
  PDSL_STATUS_RESOURCE_EXCEEDED = 5,
  PDSL_STATUS_NOT_IN_FRAGMENT = 6,
  PDSL_STATUS_INTERNAL = 7,
} PdslStatus;

/**
 * A parsed formula.
 */
typedef struct PdslFormula PdslFormula;

/**
 * A validated state-preferential standpoint structure.
 */
typedef struct PdslModel PdslModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library from the same thread.
 */
const char *pdsl_last_error(void);

/**
 * # Safety
 * `s` must be null or come from this library.
 */
void pdsl_string_free(char *s);

/**
 * Parses a formula; the vocabulary is inferred from the text.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum PdslStatus pdsl_formula_parse(const char *text, struct PdslFormula **out);

/**
 * # Safety
 * `f` must be null or a handle from `pdsl_formula_parse`.
 */
void pdsl_formula_free(struct PdslFormula *f);

/**
 * Concrete syntax of the formula.
 *
 * # Safety
 * `f` must be a live formula handle and `out` a valid pointer.
 */
enum PdslStatus pdsl_formula_print(const struct PdslFormula *f, char **out);

/**
 * Local satisfiability. When satisfiable and `out_model` is not null, a
 * model whose first precisification satisfies `f` is stored there;
 * otherwise it is set to null.
 *
 * # Safety
 * `f` must be a live formula handle, `out_sat` valid, `out_model` null or valid.
 */
enum PdslStatus pdsl_local_sat(const struct PdslFormula *f,
                               bool *out_sat,
                               struct PdslModel **out_model);

/**
 * Global satisfiability, with the same conventions as `pdsl_local_sat`.
 *
 * # Safety
 * As for `pdsl_local_sat`.
 */
enum PdslStatus pdsl_global_sat(const struct PdslFormula *f,
                                bool *out_sat,
                                struct PdslModel **out_model);

/**
 * Preferential entailment of `query` by the `kb_len` formulas in `kb`.
 * A countermodel is stored in `out_countermodel` (when not null) if the
 * query is not entailed.
 *
 * # Safety
 * `kb` must point to `kb_len` live formula handles (or be null with
 * `kb_len == 0`); other pointers as for `pdsl_local_sat`.
 */
enum PdslStatus pdsl_entails(const struct PdslFormula *const *kb,
                             size_t kb_len,
                             const struct PdslFormula *query,
                             bool *out_entailed,
                             struct PdslModel **out_countermodel);

/**
 * Translation into classical standpoint logic; `permissive` admits
 * complex indexes.
 *
 * # Safety
 * `f` must be a live formula handle and `out` a valid pointer.
 */
enum PdslStatus pdsl_translate(const struct PdslFormula *f,
                               bool permissive,
                               struct PdslFormula **out);

/**
 * Reads and validates a model in the JSON exchange format.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum PdslStatus pdsl_model_from_json(const char *json, struct PdslModel **out);

/**
 * # Safety
 * `m` must be a live model handle and `out` a valid pointer.
 */
enum PdslStatus pdsl_model_to_json(const struct PdslModel *m, char **out);

/**
 * # Safety
 * `m` must be null or a handle from this library.
 */
void pdsl_model_free(struct PdslModel *m);

/**
 * Truth of `f` at the named precisification, or at all of them when
 * `world` is null.
 *
 * # Safety
 * `m` and `f` must be live handles, `world` null or a nul-terminated
 * string, `out` a valid pointer.
 */
enum PdslStatus pdsl_model_satisfies(const struct PdslModel *m,
                                     const struct PdslFormula *f,
                                     const char *world,
                                     bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PDSL_H */
