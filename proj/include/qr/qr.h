#ifndef QR_QR_H
#define QR_QR_H

/* C interface to the quasirandomness toolkit. Every call returns a
 * qr_status; on failure qr_last_error() describes the problem for the
 * calling thread. Strings returned through char** are owned by the caller
 * and released with qr_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(QR_BUILDING_LIBRARY)
#define QR_API __attribute__((visibility("default")))
#else
#define QR_API
#endif

typedef enum qr_status {
  QR_OK = 0,
  QR_INVALID_ARGUMENT = 1,
  QR_NOT_PRIME = 2,
  QR_REDUCIBLE_MODULUS = 3,
  QR_ORDER_OVERFLOW = 4,
  QR_DIVISION_BY_ZERO = 5,
  QR_FIELD_MISMATCH = 6,
  QR_SYNTAX_ERROR = 7,
  QR_UNBOUND_VARIABLE = 8,
  QR_ARITY_TOO_LARGE = 9,
  QR_ORDER_CAP = 10,
  QR_NOT_NORMAL_WHEN_REQUIRED = 11,
  QR_COSET_MISMATCH = 12,
  QR_SIDE_TOO_LARGE = 13,
  QR_NO_CONVERGENCE = 14,
  QR_NOT_ABELIAN = 15,
  QR_DEGENERACY_NOT_RESOLVED = 16,
  QR_INADMISSIBLE_Q = 17,
  QR_EMPTY_ACROSS_SWEEP = 18,
  QR_NOT_SUBSET = 19,
  QR_INTERNAL = 20
} qr_status;

typedef struct qr_group qr_group;
typedef struct qr_subset qr_subset;

QR_API const char* qr_version(void);
QR_API const char* qr_status_name(qr_status status);
/* Message of the last failed call on this thread ("" if none). */
QR_API const char* qr_last_error(void);
QR_API void qr_string_free(char* s);

/* Solution set of a formula over a field ("13", "3^2"). modulus_csv and
 * params ("a=5,b=2") may be NULL. */
QR_API qr_status qr_eval_json(const char* field, const char* modulus_csv, const char* formula, const char* params,
                              char** out_json);

/* Groups: "add:3^2", "mul:13", "sl2:5", "cyclic:16", "sym:3". */
QR_API qr_status qr_group_create(const char* literal, const char* modulus_csv, qr_group** out);
QR_API void qr_group_free(qr_group* g);
QR_API size_t qr_group_order(const qr_group* g);
QR_API int qr_group_is_abelian(const qr_group* g);

/* Subsets of a group: from a formula over its carrier coordinates, or from
 * element ids. */
QR_API qr_status qr_subset_from_formula(const qr_group* g, const char* formula, const char* params, qr_subset** out);
QR_API qr_status qr_subset_from_ids(const qr_group* g, const uint32_t* ids, size_t count, qr_subset** out);
QR_API void qr_subset_free(qr_subset* s);
QR_API size_t qr_subset_size(const qr_subset* s);

/* Subset eps by the spectral route (method 0) or characters (method 1). */
QR_API qr_status qr_subset_eps(const qr_group* g, const qr_subset* s, int method, double* eps, double* error);
/* Irreducible degrees, ascending; *count receives how many exist even when
 * capacity is too small (then QR_INVALID_ARGUMENT). */
QR_API qr_status qr_irrep_dimensions(const qr_group* g, uint64_t seed, unsigned* out, size_t capacity,
                                     size_t* count);

/* Full analysis of (G, G, xy^-1 in D). *violation is set to 1 when a
 * checked relation fails. */
QR_API qr_status qr_report_json(const qr_group* g, const qr_subset* s, size_t max_index, uint64_t seed,
                                char** out_json, int* violation);

/* Sweep a builtin family (paley, artin_schreier, sl2_trace_square,
 * mult_cubes, complete). Either output may be NULL. */
QR_API qr_status qr_sweep(const char* family, const uint64_t* qs, size_t count, size_t max_index, uint64_t seed,
                          char** out_json, char** out_csv);

/* Suites: gowers, cor25, lemma24, sl2. *passed is 1 when nothing failed. */
QR_API qr_status qr_verify_json(const char* suite, uint64_t seed, char** out_json, int* passed);

QR_API qr_status qr_dim_measure_json(const char* formula, const char* params, const uint64_t* qs, size_t count,
                                     char** out_json);
QR_API qr_status qr_ratio_stability_json(const char* a, const char* b, const char* params, const uint64_t* qs,
                                         size_t count, char** out_json);
QR_API qr_status qr_weak_regularity_json(const char* family, uint64_t q, size_t max_index, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
