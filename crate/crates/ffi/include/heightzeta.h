#ifndef HEIGHTZETA_H
#define HEIGHTZETA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum HzStatus {
  HZ_STATUS_OK = 0,
  HZ_STATUS_NULL_POINTER = 1,
  HZ_STATUS_INVALID_ARGUMENT = 2,
  HZ_STATUS_DOMAIN = 3,
  HZ_STATUS_POLE = 4,
  HZ_STATUS_DIVERGENT = 5,
  HZ_STATUS_ILL_CONDITIONED = 6,
  HZ_STATUS_UNSUPPORTED = 7,
  HZ_STATUS_TOO_LARGE = 8,
  HZ_STATUS_OVERFLOW = 9,
  HZ_STATUS_NUMERICAL = 10,
  HZ_STATUS_IO = 11,
  HZ_STATUS_PANIC = 12,
} HzStatus;

/**
 * An Arakelov bundle over Q.
 */
typedef struct HzBundle HzBundle;

/**
 * A Hirzebruch surface with a height H_{a,b}.
 */
typedef struct HzHirzebruch HzHirzebruch;

/**
 * A value with a certified absolute error.
 */
typedef struct HzValue {
  double re;
  double im;
  double abs_error;
} HzValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or NULL. Valid until the next call
 * into this library on the same thread.
 */
const char *hz_last_error(void);

/**
 * Parse a Gram spec (`I<k>` or `2,1;1,1`) into a bundle.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out_bundle` a valid pointer.
 */
enum HzStatus hz_bundle_parse(const char *spec, struct HzBundle **out_bundle);

/**
 * A bundle from a row-major `rank × rank` Gram matrix of doubles.
 *
 * # Safety
 * `gram` must point to `rank * rank` doubles and `out_bundle` be valid.
 */
enum HzStatus hz_bundle_from_gram(size_t rank, const double *gram, struct HzBundle **out_bundle);

/**
 * # Safety
 * `b` must come from this library and not have been freed; NULL is ignored.
 */
void hz_bundle_free(struct HzBundle *b);

/**
 * # Safety
 * Pointers must be valid.
 */
enum HzStatus hz_bundle_rank(const struct HzBundle *b, size_t *rank);

/**
 * # Safety
 * Pointers must be valid.
 */
enum HzStatus hz_bundle_degree(const struct HzBundle *b, double *degree);

/**
 * h⁰(V) to absolute accuracy `tol`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HzStatus hz_h0(const struct HzBundle *b, double tol, struct HzValue *value);

/**
 * h⁰(V) − h⁰(V^∨) − deg V.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HzStatus hz_rr_defect(const struct HzBundle *b, double *defect);

/**
 * Z(ℙ(V), s) at s = re + i·im.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HzStatus hz_zeta(const struct HzBundle *b,
                      double re,
                      double im,
                      double tol,
                      struct HzValue *value);

/**
 * Residue of Z(ℙ(V), s) at s = rank V.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HzStatus hz_residue(const struct HzBundle *b, double *residue);

/**
 * #{P ∈ ℙ(V)(Q) : H(P) ≤ B} with B a decimal or fraction string.
 *
 * # Safety
 * Pointers must be valid and `bound` NUL-terminated.
 */
enum HzStatus hz_count_points(const struct HzBundle *b, const char *bound, uint64_t *count);

/**
 * F_e with the standard metric on the base.
 *
 * # Safety
 * `out_surface` must be a valid pointer.
 */
enum HzStatus hz_hirzebruch_new(int64_t e, int64_t a, int64_t b, struct HzHirzebruch **out_surface);

/**
 * # Safety
 * `h` must come from this library and not have been freed; NULL is ignored.
 */
void hz_hirzebruch_free(struct HzHirzebruch *h);

/**
 * Points of height ≤ B on the surface.
 *
 * # Safety
 * Pointers must be valid and `bound` NUL-terminated.
 */
enum HzStatus hz_hirzebruch_count(const struct HzHirzebruch *h, const char *bound, uint64_t *count);

/**
 * Location and residue of the dominant pole.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HzStatus hz_hirzebruch_dominant_pole(const struct HzHirzebruch *h, double *s, double *rho);

/**
 * Degree-d sections of ℙ(⊕O(a_i)) → ℙ¹ over F_q by enumeration.
 *
 * # Safety
 * `split` must point to `len` integers and `count` be valid.
 */
enum HzStatus hz_count_sections(uint32_t q,
                                const int64_t *split,
                                size_t len,
                                int64_t d,
                                uint64_t *count);

/**
 * Residue at t = q^{−r} of the specialized motivic Z, as num/den.
 *
 * # Safety
 * `split` must point to `len` integers and the outputs be valid.
 */
enum HzStatus hz_motivic_residue(const int64_t *split,
                                 size_t len,
                                 int64_t q,
                                 int64_t *num,
                                 int64_t *den);

/**
 * Library version as a static string.
 */
const char *hz_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEIGHTZETA_H */
