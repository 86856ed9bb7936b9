#ifndef LELM_LAB_H
#define LELM_LAB_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define LELM_BOSON 0

#define LELM_FERMION 1

#define LELM_MODE_ONE_COPY 0

#define LELM_MODE_SEPARATE_CHANNEL 1

/**
 * Result codes.
 */
typedef enum LelmStatus {
  LELM_STATUS_OK = 0,
  LELM_STATUS_NULL_POINTER = 1,
  LELM_STATUS_INVALID_ARGUMENT = 2,
  LELM_STATUS_DIMENSION_MISMATCH = 3,
  LELM_STATUS_NOT_UNITARY = 4,
  LELM_STATUS_PARSE_ERROR = 5,
  LELM_STATUS_IO_ERROR = 6,
  LELM_STATUS_PANIC = 7,
} LelmStatus;

/**
 * Opaque apparatus handle.
 */
typedef struct LelmApparatus LelmApparatus;

/**
 * Opaque partition handle.
 */
typedef struct LelmPartition LelmPartition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *lelm_status_message(enum LelmStatus status);

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *lelm_last_error_message(void);

/**
 * L/R Hadamard apparatus for `n` variables.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum LelmStatus lelm_apparatus_hadamard(size_t n, struct LelmApparatus **out);

/**
 * Identity apparatus: each channel measured in the computational basis.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum LelmStatus lelm_apparatus_separate_projective(size_t n, struct LelmApparatus **out);

/**
 * The all-±1/2 optimal apparatus for one variable.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum LelmStatus lelm_apparatus_uopt_n1(struct LelmApparatus **out);

/**
 * Diagonal-basis rotation on the zero-based variables in `vars[0..len]`.
 *
 * # Safety
 * `vars` must point to `len` readable values (or be null with `len == 0`);
 * `out` must be valid for writing one pointer.
 */
enum LelmStatus lelm_apparatus_diagonal(size_t n,
                                        const size_t *vars,
                                        size_t len,
                                        struct LelmApparatus **out);

/**
 * `outer · inner` (inner acts first).
 *
 * # Safety
 * `outer` and `inner` must be live handles; `out` must be valid for writing one pointer.
 */
enum LelmStatus lelm_apparatus_compose(const struct LelmApparatus *outer,
                                       const struct LelmApparatus *inner,
                                       struct LelmApparatus **out);

/**
 * Haar-random apparatus, deterministic in `seed`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum LelmStatus lelm_apparatus_haar(size_t n, uint64_t seed, struct LelmApparatus **out);

/**
 * Builds an apparatus from `data`: `2 * dim * dim` doubles, row-major,
 * interleaved real and imaginary parts, `dim = 2^(n+1)`.
 *
 * # Safety
 * `data` must point to `len` readable doubles; `out` must be valid for writing one pointer.
 */
enum LelmStatus lelm_apparatus_from_matrix(size_t n,
                                           const double *data,
                                           size_t len,
                                           double tolerance,
                                           struct LelmApparatus **out);

/**
 * Loads an apparatus file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writing one pointer.
 */
enum LelmStatus lelm_apparatus_load(const char *path, struct LelmApparatus **out);

/**
 * Writes an apparatus file.
 *
 * # Safety
 * `app` must be a live handle; `path` a NUL-terminated string.
 */
enum LelmStatus lelm_apparatus_save(const struct LelmApparatus *app, const char *path);

/**
 * Releases an apparatus handle. Null is ignored.
 *
 * # Safety
 * `app` must be null or a handle not yet freed.
 */
void lelm_apparatus_free(struct LelmApparatus *app);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `app` must be null or a live handle.
 */
size_t lelm_apparatus_n(const struct LelmApparatus *app);

/**
 * Matrix dimension `2^(n+1)`, or 0 for a null handle.
 *
 * # Safety
 * `app` must be null or a live handle.
 */
size_t lelm_apparatus_dim(const struct LelmApparatus *app);

/**
 * Copies the matrix into `buf` in the layout of [`lelm_apparatus_from_matrix`].
 *
 * # Safety
 * `app` must be a live handle; `buf` must be writable for `len` doubles.
 */
enum LelmStatus lelm_apparatus_copy_matrix(const struct LelmApparatus *app,
                                           double *buf,
                                           size_t len);

/**
 * Amplitude `⟨0| c_j c_i |B⟩` for one-based detectors `i`, `j`.
 *
 * # Safety
 * `app` must be a live handle; `re` and `im` writable.
 */
enum LelmStatus lelm_outcome_amplitude(const struct LelmApparatus *app,
                                       uint32_t stats,
                                       size_t label_index,
                                       size_t i,
                                       size_t j,
                                       double *re,
                                       double *im);

/**
 * Probability of detector pair `{i, j}` (one-based).
 *
 * # Safety
 * `app` must be a live handle; `out` writable.
 */
enum LelmStatus lelm_outcome_probability(const struct LelmApparatus *app,
                                         uint32_t stats,
                                         size_t label_index,
                                         size_t i,
                                         size_t j,
                                         double *out);

/**
 * Mean number of particles detected at one-based detector `i`.
 *
 * # Safety
 * `app` must be a live handle; `out` writable.
 */
enum LelmStatus lelm_expected_click_rate(const struct LelmApparatus *app,
                                         uint32_t stats,
                                         size_t label_index,
                                         size_t i,
                                         double *out);

/**
 * Writes the ASCII name of a Bell label (e.g. `phi+ x psi-`) into `buf`,
 * NUL-terminated. Fails if `len` is too small.
 *
 * # Safety
 * `buf` must be writable for `len` bytes.
 */
enum LelmStatus lelm_label_name(size_t n, size_t label_index, char *buf, size_t len);

/**
 * Single-copy class partition at support threshold `eps` (1e-9 is the usual choice).
 *
 * # Safety
 * `app` must be a live handle; `out` valid for writing one pointer.
 */
enum LelmStatus lelm_partition_new(const struct LelmApparatus *app,
                                   uint32_t stats,
                                   double eps,
                                   struct LelmPartition **out);

/**
 * Joint partition with one copy measured by each apparatus.
 *
 * # Safety
 * `first`, `second` must be live handles; `out` valid for writing one pointer.
 */
enum LelmStatus lelm_two_copy_partition_new(const struct LelmApparatus *first,
                                            const struct LelmApparatus *second,
                                            uint32_t stats,
                                            double eps,
                                            struct LelmPartition **out);

/**
 * Number of classes, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t lelm_partition_class_count(const struct LelmPartition *p);

/**
 * Zero-based class index of a Bell label.
 *
 * # Safety
 * `p` must be a live handle; `out` writable.
 */
enum LelmStatus lelm_partition_class_of(const struct LelmPartition *p,
                                        size_t label_index,
                                        size_t *out);

/**
 * Releases a partition handle. Null is ignored.
 *
 * # Safety
 * `p` must be null or a handle not yet freed.
 */
void lelm_partition_free(struct LelmPartition *p);

/**
 * Haar fuzzing of the class-count ceiling. Writes the largest class count
 * seen and the number of trials above the ceiling for `mode`.
 *
 * # Safety
 * `max_observed` and `violations` must be writable.
 */
enum LelmStatus lelm_bound_campaign(size_t n,
                                    uint32_t stats,
                                    size_t trials,
                                    uint64_t seed,
                                    uint32_t mode,
                                    size_t *max_observed,
                                    size_t *violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LELM_LAB_H */
