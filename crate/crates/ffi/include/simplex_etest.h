#ifndef SIMPLEX_ETEST_H
#define SIMPLEX_ETEST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SetestStatus {
  SETEST_STATUS_OK = 0,
  SETEST_STATUS_NULL_POINTER = 1,
  SETEST_STATUS_INVALID_ARGUMENT = 2,
  SETEST_STATUS_INVALID_COMPOSITION = 3,
  /*
   α ≤ 0 requested for data containing zeros.
   */
  SETEST_STATUS_ALPHA_WITH_ZEROS = 4,
  SETEST_STATUS_NUMERIC = 5,
  SETEST_STATUS_IO = 6,
  SETEST_STATUS_PANIC = 7,
} SetestStatus;

/*
 Opaque handle to a validated, closed dataset (one composition per row).
 */
typedef struct SetestDataset SetestDataset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or NULL. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *setest_last_error(void);

/*
 Builds a dataset from `n` rows of `d` non-negative values in row-major
 order. Each row is closed.

 # Safety
 `values` must point to `n * d` doubles and `out` to a writable handle slot.
 */
enum SetestStatus setest_dataset_new(const double *values,
                                     size_t n,
                                     size_t d,
                                     struct SetestDataset **out);

/*
 # Safety
 `h` must be null or a handle from [`setest_dataset_new`] not yet freed.
 */
void setest_dataset_free(struct SetestDataset *h);

/*
 Number of rows, or 0 for NULL.

 # Safety
 `h` must be null or a live handle.
 */
size_t setest_dataset_len(const struct SetestDataset *h);

/*
 Number of parts, or 0 for NULL.

 # Safety
 `h` must be null or a live handle.
 */
size_t setest_dataset_dim(const struct SetestDataset *h);

/*
 Closes `d` raw values into `out`.

 # Safety
 `raw` and `out` must each point to `d` doubles.
 */
enum SetestStatus setest_close(const double *raw, size_t d, double *out);

/*
 α-metric between two compositions of `d` parts; α = 0 gives the
 Aitchison distance.

 # Safety
 `x` and `y` must point to `d` doubles and `out` to one double.
 */
enum SetestStatus setest_alpha_metric(const double *x,
                                      const double *y,
                                      size_t d,
                                      double alpha,
                                      double *out);

/*
 Two-sample permutation α-EBT. Writes one statistic and one p-value per
 entry of `alphas`.

 # Safety
 `a` and `b` must be live handles, `alphas` must point to `n_alphas`
 doubles, and both output arrays must hold `n_alphas` doubles.
 */
enum SetestStatus setest_permutation_test(const struct SetestDataset *a,
                                          const struct SetestDataset *b,
                                          const double *alphas,
                                          size_t n_alphas,
                                          size_t permutations,
                                          uint64_t seed,
                                          bool standardize,
                                          double *statistics_out,
                                          double *p_values_out);

/*
 Random-projections test. `bonferroni` selects Bonferroni instead of the
 Benjamini–Heller combination.

 # Safety
 `a` and `b` must be live handles and both outputs must point to one double.
 */
enum SetestStatus setest_rpbt_test(const struct SetestDataset *a,
                                   const struct SetestDataset *b,
                                   size_t projections,
                                   uint64_t seed,
                                   bool bonferroni,
                                   double *statistic_out,
                                   double *p_value_out);

/*
 KL(Dir(a) ‖ Dir(b)) for concentration vectors of length `d`.

 # Safety
 `a` and `b` must point to `d` doubles and `out` to one double.
 */
enum SetestStatus setest_kl_dirichlet(const double *a, const double *b, size_t d, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMPLEX_ETEST_H */
