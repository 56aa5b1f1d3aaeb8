/* C ABI for the tamebrauer library. Generated by cbindgen; do not edit. */

#ifndef TAMEBRAUER_H
#define TAMEBRAUER_H

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes; aligned with the CLI exit codes where they overlap.
typedef enum TbStatus {
  // Success; for verification entry points, everything verified.
  TB_STATUS_OK = 0,
  // A verification failed or an oracle cross-check disagreed.
  TB_STATUS_VERIFY_FAILED = 1,
  // Malformed input: bad JSON, schema violation, or a domain error.
  TB_STATUS_INVALID_INPUT = 2,
  // The configured enumeration budget was exceeded.
  TB_STATUS_BUDGET_EXCEEDED = 3,
  // A required pointer argument was NULL.
  TB_STATUS_NULL_ARGUMENT = 4,
  // Internal error (a bug; details via tb_last_error_message).
  TB_STATUS_INTERNAL_ERROR = 5,
} TbStatus;

// Opaque handle for a tame Brauer class.
typedef struct tb_class_t tb_class_t;

// Opaque handle for a field model.
typedef struct tb_field_t tb_field_t;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *tb_version(void);

// Description of the most recent error on this thread, or NULL when no
// error was recorded. Do not free; the buffer is reused by later errors.
const char *tb_last_error_message(void);

// Release a string returned by this library.
//
// # Safety
// `ptr` must be NULL or a pointer previously returned by a `tb_*` function
// that documents `tb_string_free`.
void tb_string_free(char *ptr);

// Parse a field model from JSON: {"residue_char": q, "lattice": {...},
// "labels": {...}}.
//
// # Safety
// `json` must be a valid NUL-terminated string; `out` a valid pointer.
enum TbStatus tb_field_from_json(const char *json, struct tb_field_t **out);

// # Safety
// `field` must be NULL or a pointer from `tb_field_from_json`.
void tb_field_free(struct tb_field_t *field);

// Parse a class from JSON: {"schema":1, "field": {...}, "level": N,
// "form": [[...]]} (the schema key is optional).
//
// # Safety
// `json` must be a valid NUL-terminated string; `out` a valid pointer.
enum TbStatus tb_class_from_json(const char *json, struct tb_class_t **out);

// # Safety
// `class` must be NULL or a pointer from a `tb_class_*` constructor.
void tb_class_free(struct tb_class_t *class_);

// Serialize a class handle back to JSON; release with `tb_string_free`.
//
// # Safety
// `class` must come from a `tb_class_*` constructor; `out_json` valid.
enum TbStatus tb_class_to_json(const struct tb_class_t *class_, char **out_json);

// Sum of two classes over the same field (tensor product of algebras).
//
// # Safety
// Handles must come from `tb_class_*` constructors; `out` valid.
enum TbStatus tb_class_add(const struct tb_class_t *left,
                           const struct tb_class_t *right,
                           struct tb_class_t **out);

// Class of the opposite algebra.
//
// # Safety
// As for `tb_class_add`.
enum TbStatus tb_class_neg(const struct tb_class_t *class_, struct tb_class_t **out);

// The class scaled by an integer multiplier.
//
// # Safety
// As for `tb_class_add`.
enum TbStatus tb_class_scale(const struct tb_class_t *class_,
                             int64_t multiplier,
                             struct tb_class_t **out);

// Scalar extension of a class along a larger field.
//
// # Safety
// As for `tb_class_add`; `field` from `tb_field_from_json`.
enum TbStatus tb_class_extend(const struct tb_class_t *class_,
                              const struct tb_field_t *field,
                              struct tb_class_t **out);

// Invariants report for a class handle as JSON
// {"index", "exponent", "divisors", "value_lattice"}; release with
// `tb_string_free`.
//
// # Safety
// As for `tb_class_to_json`.
enum TbStatus tb_class_invariants_json(const struct tb_class_t *class_, char **out_json);

// Full symbol report (same document as `tamebrauer symbol`). Budget 0 means
// no oracle cross-check. Returns VerifyFailed when the oracle disagrees.
//
// # Safety
// `input_json` valid NUL-terminated string; `out_json` valid pointer.
enum TbStatus tb_symbol_report_json(const char *input_json,
                                    uint64_t oracle_budget,
                                    char **out_json);

// Full class report (same document as `tamebrauer class`).
//
// # Safety
// As for `tb_symbol_report_json`.
enum TbStatus tb_class_report_json(const char *input_json, uint64_t oracle_budget, char **out_json);

// Scalar-extension report (same document as `tamebrauer extend`). Returns
// VerifyFailed when the two division predicates disagree.
//
// # Safety
// Both inputs valid NUL-terminated strings; `out_json` valid pointer.
enum TbStatus tb_extend_report_json(const char *class_json,
                                    const char *extension_json,
                                    char **out_json);

// Build and verify tower levels (same document as `tamebrauer tower`).
// `verify` is one of "all", "center", "intersection". Returns VerifyFailed
// when a verification fails or the oracle disagrees, BudgetExceeded when
// the sweep is too large for `budget`.
//
// # Safety
// `verify` valid NUL-terminated string; `out_json` valid pointer.
enum TbStatus tb_tower_report_json(uint64_t p,
                                   uint32_t levels,
                                   const char *verify,
                                   bool oracle,
                                   uint64_t budget,
                                   uint64_t residue_char,
                                   char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAMEBRAUER_H */
