#ifndef FAULTLATTICE_H
#define FAULTLATTICE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FlStatus {
  FL_STATUS_OK = 0,
  FL_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The lattice does not have enough crossings for the concentration.
   */
  FL_STATUS_NOT_APPLICABLE = 2,
  FL_STATUS_INTERNAL_ERROR = 3,
  FL_STATUS_NULL_POINTER = 4,
} FlStatus;

/**
 * The result of a full concentration: classical stage plus the contracted
 * graph state and measurement record.
 */
typedef struct FlConcentration FlConcentration;

/**
 * An occupancy grid.
 */
typedef struct FlGrid FlGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *fl_last_error_message(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fl_string_free(char *s);

/**
 * Samples an `size x size` grid with occupation probability `p`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FlStatus fl_grid_sample(size_t size, double p, uint64_t seed, struct FlGrid **out);

/**
 * Parses the text grid format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for writes.
 */
enum FlStatus fl_grid_from_text(const char *text, struct FlGrid **out);

/**
 * Serializes a grid to the text format.
 *
 * # Safety
 * `grid` must be a live handle and `out` valid for writes.
 */
enum FlStatus fl_grid_to_text(const struct FlGrid *grid, char **out);

/**
 * # Safety
 * `grid` must come from this library and not have been freed. NULL is ignored.
 */
void fl_grid_free(struct FlGrid *grid);

/**
 * Side length, or 0 for NULL.
 *
 * # Safety
 * `grid` must be NULL or a live handle.
 */
size_t fl_grid_size(const struct FlGrid *grid);

/**
 * Number of occupied sites, or 0 for NULL.
 *
 * # Safety
 * `grid` must be NULL or a live handle.
 */
size_t fl_grid_occupied_count(const struct FlGrid *grid);

/**
 * Whether site `(row, col)` is occupied; row 0 is the bottom row.
 *
 * # Safety
 * `grid` must be a live handle and `out` valid for writes.
 */
enum FlStatus fl_grid_is_occupied(const struct FlGrid *grid, size_t row, size_t col, bool *out);

/**
 * Runs the classical stage and the measurement contraction, with
 * measurement outcomes derived from `seed`.
 *
 * # Safety
 * `grid` must be a live handle and `out` valid for writes.
 */
enum FlStatus fl_concentrate(const struct FlGrid *grid,
                             uint64_t seed,
                             struct FlConcentration **out);

/**
 * Junction rows of the hexagonal lattice, or 0 for NULL.
 *
 * # Safety
 * `c` must be NULL or a live handle.
 */
size_t fl_concentration_rows(const struct FlConcentration *c);

/**
 * Junction columns of the hexagonal lattice, or 0 for NULL.
 *
 * # Safety
 * `c` must be NULL or a live handle.
 */
size_t fl_concentration_cols(const struct FlConcentration *c);

/**
 * Qubits left in the hexagonal graph state, or 0 for NULL.
 *
 * # Safety
 * `c` must be NULL or a live handle.
 */
size_t fl_concentration_qubit_count(const struct FlConcentration *c);

/**
 * Single-qubit measurements performed, or 0 for NULL.
 *
 * # Safety
 * `c` must be NULL or a live handle.
 */
size_t fl_concentration_measurement_count(const struct FlConcentration *c);

/**
 * JSON with the identified subgraph, the final graph state and the
 * measurement record.
 *
 * # Safety
 * `c` must be a live handle and `out` valid for writes.
 */
enum FlStatus fl_concentration_to_json(const struct FlConcentration *c, char **out);

/**
 * # Safety
 * `c` must come from this library and not have been freed. NULL is ignored.
 */
void fl_concentration_free(struct FlConcentration *c);

/**
 * Checks the concentration of `grid` against a stabilizer simulation.
 * Grids with more than 400 occupied sites are rejected.
 *
 * # Safety
 * `grid` must be a live handle and `passed` valid for writes.
 */
enum FlStatus fl_verify(const struct FlGrid *grid, uint64_t seed, bool *passed);

/**
 * Maximum number of vertex-disjoint left-to-right crossings.
 *
 * # Safety
 * `grid` must be a live handle and `out` valid for writes.
 */
enum FlStatus fl_max_disjoint_crossings(const struct FlGrid *grid, size_t *out);

/**
 * Monte Carlo estimate of the left-to-right crossing probability.
 *
 * # Safety
 * `estimate` and `stderr` must be valid for writes.
 */
enum FlStatus fl_crossing_probability(size_t size,
                                      double p,
                                      size_t trials,
                                      uint64_t seed,
                                      double *estimate,
                                      double *stderr);

/**
 * `alpha - beta * ln(p / (p - p_c - eps))`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FlStatus fl_gamma_epsilon(double alpha, double beta, double p, double eps, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FAULTLATTICE_H */
