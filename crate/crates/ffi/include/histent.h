#ifndef HISTENT_H
#define HISTENT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HistentSide {
  HISTENT_SIDE_A = 0,
  HISTENT_SIDE_B = 1,
} HistentSide;

/*
 Result of every call.
 */
typedef enum HistentStatus {
  HISTENT_STATUS_OK = 0,
  /*
   Malformed input: bad JSON, non-unitary step, unknown label.
   */
  HISTENT_STATUS_INPUT_ERROR = 1,
  /*
   A computed quantity failed a numerical invariant.
   */
  HISTENT_STATUS_NUMERICAL_ERROR = 2,
  HISTENT_STATUS_NULL_POINTER = 3,
  HISTENT_STATUS_OUT_OF_RANGE = 4,
  HISTENT_STATUS_PANIC = 5,
} HistentStatus;

typedef struct HistentDensity HistentDensity;

typedef struct HistentHistory HistentHistory;

/*
 A parsed schedule with its bipartition.
 */
typedef struct HistentSchedule HistentSchedule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. The pointer
 stays valid until the next call into this library on the same thread.
 */
const char *histent_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *histent_version(void);

/*
 Parses a schedule document. `tol <= 0` selects the default 1e-10.

 # Safety
 `json` must be a NUL-terminated UTF-8 string; `out` must be writable.
 */
enum HistentStatus histent_schedule_from_json(const char *json,
                                              double tol,
                                              struct HistentSchedule **out);

/*
 The two-qubit entangler: H on qubit 0, CNOT, computational measurements.

 # Safety
 `out` must be writable.
 */
enum HistentStatus histent_schedule_entangler(struct HistentSchedule **out);

/*
 Three-qubit teleportation with input `√p|0⟩ + √(1−p)|1⟩`.

 # Safety
 `out` must be writable.
 */
enum HistentStatus histent_schedule_teleportation(double p, struct HistentSchedule **out);

/*
 # Safety
 `s` must be a live schedule handle; `dim` and `n_events` writable.
 */
enum HistentStatus histent_schedule_shape(const struct HistentSchedule *s,
                                          size_t *dim,
                                          size_t *n_events);

/*
 Replaces the bipartition: the listed factors form side A, the rest B.

 # Safety
 `s` must be a live schedule handle; `a` must hold `n_a` entries.
 */
enum HistentStatus histent_schedule_set_partition(struct HistentSchedule *s,
                                                  const size_t *a,
                                                  size_t n_a);

/*
 Checks weak consistency (`|Re D(α, β)| ≤ tol` for all `α ≠ β`).

 # Safety
 `s` must be a live schedule handle; outputs writable.
 */
enum HistentStatus histent_schedule_consistency(const struct HistentSchedule *s,
                                                double tol,
                                                bool *consistent,
                                                double *max_abs_re);

/*
 # Safety
 `s` must be NULL or a handle not yet freed.
 */
void histent_schedule_free(struct HistentSchedule *s);

/*
 Enumerates the nonzero histories.

 # Safety
 `s` must be a live schedule handle; `out` writable.
 */
enum HistentStatus histent_history_build(const struct HistentSchedule *s,
                                         struct HistentHistory **out);

/*
 # Safety
 `h` must be a live history handle; `len` writable.
 */
enum HistentStatus histent_history_len(const struct HistentHistory *h, size_t *len);

/*
 # Safety
 `h` must be a live history handle; `p` writable.
 */
enum HistentStatus histent_history_probability(const struct HistentHistory *h, size_t i, double *p);

/*
 Amplitude of history `i`; an input error when a projector in it has
 rank above one.

 # Safety
 `h` must be a live history handle; `re` and `im` writable.
 */
enum HistentStatus histent_history_amplitude(const struct HistentHistory *h,
                                             size_t i,
                                             double *re,
                                             double *im);

/*
 Writes the label of history `i`, e.g. `(00,11)`, snprintf-style: at most
 `cap - 1` bytes plus NUL. `needed` receives the full length without NUL.

 # Safety
 `h` must be a live history handle; `buf` must hold `cap` bytes (may be
 NULL when `cap` is 0); `needed` may be NULL.
 */
enum HistentStatus histent_history_label(const struct HistentHistory *h,
                                         size_t i,
                                         char *buf,
                                         size_t cap,
                                         size_t *needed);

/*
 # Safety
 `h` must be NULL or a handle not yet freed.
 */
void histent_history_free(struct HistentHistory *h);

/*
 `ρ = |Ψ⟩⟨Ψ|` over the histories of `h`.

 # Safety
 `h` must be a live history handle; `out` writable.
 */
enum HistentStatus histent_density_from_history(const struct HistentHistory *h,
                                                struct HistentDensity **out);

/*
 Keeps the listed 1-based measurement times.

 # Safety
 `d` must be a live density handle; `times` must hold `n` entries.
 */
enum HistentStatus histent_density_time_reduce(const struct HistentDensity *d,
                                               const size_t *times,
                                               size_t n,
                                               struct HistentDensity **out);

/*
 Keeps one side of the schedule's bipartition. The result carries no
 partition.

 # Safety
 `d` must be a live density handle; `out` writable.
 */
enum HistentStatus histent_density_space_reduce(const struct HistentDensity *d,
                                                enum HistentSide side,
                                                struct HistentDensity **out);

/*
 # Safety
 `d` must be a live density handle; `dim` writable.
 */
enum HistentStatus histent_density_dim(const struct HistentDensity *d, size_t *dim);

/*
 Entry `(i, j)` in the order of the density's basis.

 # Safety
 `d` must be a live density handle; `re` and `im` writable.
 */
enum HistentStatus histent_density_entry(const struct HistentDensity *d,
                                         size_t i,
                                         size_t j,
                                         double *re,
                                         double *im);

/*
 Writes the label of basis element `i`, with the conventions of
 [`histent_history_label`].

 # Safety
 As for [`histent_history_label`], with `d` a live density handle.
 */
enum HistentStatus histent_density_basis_label(const struct HistentDensity *d,
                                               size_t i,
                                               char *buf,
                                               size_t cap,
                                               size_t *needed);

/*
 Von Neumann entropy in bits.

 # Safety
 `d` must be a live density handle; `s` writable.
 */
enum HistentStatus histent_density_entropy(const struct HistentDensity *d, double *s);

/*
 # Safety
 `d` must be NULL or a handle not yet freed.
 */
void histent_density_free(struct HistentDensity *d);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HISTENT_H */
