#ifndef FREELIP_H
#define FREELIP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FlStatus {
  FL_STATUS_OK = 0,
  FL_STATUS_NULL_POINTER = 1,
  FL_STATUS_INVALID_METRIC = 2,
  FL_STATUS_INVALID_ARGUMENT = 3,
  FL_STATUS_SOLVER_FAILURE = 4,
  FL_STATUS_PANIC = 5,
} FlStatus;

/**
 * Finite pointed metric space; points are named `0, 1, ...`.
 */
typedef struct FlSpace FlSpace;

/**
 * Rooted tree with vertex `0` as root.
 */
typedef struct FlTree FlTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *fl_last_error_message(void);

/**
 * Validates the row-major `n x n` matrix `dist` and creates a space with
 * base point `base`.
 *
 * # Safety
 * `dist` must be valid for reads of `n * n` doubles and `out` for one
 * pointer write.
 */
enum FlStatus fl_space_new(const double *dist, size_t n, size_t base, struct FlSpace **out);

/**
 * # Safety
 * `space` must be null or a handle from [`fl_space_new`] not yet freed.
 */
void fl_space_free(struct FlSpace *space);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
size_t fl_space_len(const struct FlSpace *space);

/**
 * Norm of `sum coeffs[i] delta(i)` by duality. When `witness` is not null
 * it receives a norming 1-Lipschitz function, one value per point.
 *
 * # Safety
 * `coeffs` must hold one double per point, `out` must be writable, and
 * `witness` must be null or writable for one double per point.
 */
enum FlStatus fl_norm(const struct FlSpace *space,
                      const double *coeffs,
                      double *out,
                      double *witness);

/**
 * Norm as an optimal transport cost.
 *
 * # Safety
 * As for [`fl_norm`] without the witness.
 */
enum FlStatus fl_norm_primal(const struct FlSpace *space, const double *coeffs, double *out);

/**
 * Distance to the free space of `{i : mask[i] != 0}`.
 *
 * # Safety
 * `coeffs` and `mask` must hold one entry per point and `out` must be
 * writable.
 */
enum FlStatus fl_dist_to_subspace(const struct FlSpace *space,
                                  const double *coeffs,
                                  const uint8_t *mask,
                                  double *out);

/**
 * Whether the pairs `(xs[k], ys[k])` are cyclically monotone.
 *
 * # Safety
 * `xs` and `ys` must hold `npairs` indices and `out` must be writable.
 */
enum FlStatus fl_is_cyclically_monotone(const struct FlSpace *space,
                                        const size_t *xs,
                                        const size_t *ys,
                                        size_t npairs,
                                        bool *out);

/**
 * Tree on `n` vertices: vertex `v > 0` hangs from `parents[v]` by an edge
 * of length `lens[v]`; entry `0` of both arrays is ignored.
 *
 * # Safety
 * `parents` and `lens` must hold `n` entries and `out` must be writable.
 */
enum FlStatus fl_tree_new(const size_t *parents, const double *lens, size_t n, struct FlTree **out);

/**
 * # Safety
 * `tree` must be null or a handle from [`fl_tree_new`] not yet freed.
 */
void fl_tree_free(struct FlTree *tree);

/**
 * Norm of `sum coeffs[v] delta(v)` over tree vertices through the L1
 * isometry.
 *
 * # Safety
 * `coeffs` must hold one double per vertex and `out` must be writable.
 */
enum FlStatus fl_tree_norm(const struct FlTree *tree, const double *coeffs, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FREELIP_H */
