#ifndef SPHEROID_H
#define SPHEROID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SqStatus {
  SQ_STATUS_OK = 0,
  SQ_STATUS_NULL_POINTER = 1,
  SQ_STATUS_DOMAIN = 2,
  SQ_STATUS_VALIDATION = 3,
  SQ_STATUS_CONVERGENCE = 4,
  SQ_STATUS_RESOLUTION = 5,
  SQ_STATUS_IO = 6,
  SQ_STATUS_PANIC = 7,
  SQ_STATUS_BUFFER_TOO_SMALL = 8,
} SqStatus;

typedef enum SqCoupling {
  SQ_COUPLING_SQUARED = 0,
  SQ_COUPLING_LITERAL = 1,
} SqCoupling;

typedef struct SqLevelTable SqLevelTable;

typedef struct SqOscillator SqOscillator;

typedef struct SqSurface SqSurface;

/**
 * One row of a level table. Free-particle rows have `has_l == 0`.
 */
typedef struct SqLevelRow {
  uint32_t n;
  uint8_t has_l;
  int32_t l;
  double e0;
  double de1;
  double e;
  double de1_err_est;
} SqLevelRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `cap`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `cap` bytes.
 */
size_t sq_last_error_message(char *buf, size_t cap);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum SqStatus sq_surface_new(double lambda, double eps, struct SqSurface **out);

/**
 * # Safety
 * `s` must be null or a handle from [`sq_surface_new`] not yet freed.
 */
void sq_surface_free(struct SqSurface *s);

/**
 * E⁽⁰⁾ of free state n.
 *
 * # Safety
 * `s` must be a live handle and `out` valid for writes.
 */
enum SqStatus sq_free_energy0(const struct SqSurface *s, uint32_t n, double *out);

/**
 * First-order shift of free state n (closed form).
 *
 * # Safety
 * `s` must be a live handle and `out` valid for writes.
 */
enum SqStatus sq_free_shift1(const struct SqSurface *s, uint32_t n, double *out);

/**
 * First-order shift of free state n by quadrature.
 *
 * # Safety
 * `s` must be a live handle and `out` valid for writes.
 */
enum SqStatus sq_free_shift1_quadrature(const struct SqSurface *s, uint32_t n, double *out);

/**
 * # Safety
 * `s` must be a live handle and `out` valid for writes.
 */
enum SqStatus sq_free_level_table(const struct SqSurface *s,
                                  uint32_t n_max,
                                  struct SqLevelTable **out);

/**
 * # Safety
 * `s` must be a live handle and `out` valid for writes.
 */
enum SqStatus sq_oscillator_new(const struct SqSurface *s,
                                double omega,
                                enum SqCoupling coupling,
                                struct SqOscillator **out);

/**
 * # Safety
 * `o` must be null or a handle from [`sq_oscillator_new`] not yet freed.
 */
void sq_oscillator_free(struct SqOscillator *o);

/**
 * E⁽⁰⁾ of oscillator state (n, l).
 *
 * # Safety
 * `o` must be a live handle and `out` valid for writes.
 */
enum SqStatus sq_osc_energy0(const struct SqOscillator *o, uint32_t n, int32_t l, double *out);

/**
 * First-order shift of oscillator state (n, l).
 *
 * # Safety
 * `o` must be a live handle and `out` valid for writes.
 */
enum SqStatus sq_osc_shift1(const struct SqOscillator *o, uint32_t n, int32_t l, double *out);

/**
 * Normalized radial factor φ_{n,l}(χ), χ ∈ [0, π/2).
 *
 * # Safety
 * `o` must be a live handle and `out` valid for writes.
 */
enum SqStatus sq_osc_radial(const struct SqOscillator *o,
                            uint32_t n,
                            int32_t l,
                            double chi,
                            double *out);

/**
 * # Safety
 * `o` must be a live handle and `out` valid for writes.
 */
enum SqStatus sq_osc_level_table(const struct SqOscillator *o,
                                 uint32_t n_max,
                                 struct SqLevelTable **out);

/**
 * # Safety
 * `t` must be null or a live table handle.
 */
size_t sq_level_table_len(const struct SqLevelTable *t);

/**
 * # Safety
 * `t` must be a live table handle and `out` valid for writes.
 */
enum SqStatus sq_level_table_row(const struct SqLevelTable *t,
                                 size_t index,
                                 struct SqLevelRow *out);

/**
 * Write the table as CSV into `buf` (NUL-terminated). `*len` receives the
 * CSV length without the NUL; if `cap` is too small nothing is written and
 * `SQ_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `t` must be a live table handle, `len` valid for writes and `buf` null or
 * valid for `cap` bytes.
 */
enum SqStatus sq_level_table_csv(const struct SqLevelTable *t, char *buf, size_t cap, size_t *len);

/**
 * # Safety
 * `t` must be null or a table handle not yet freed.
 */
void sq_level_table_free(struct SqLevelTable *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHEROID_H */
