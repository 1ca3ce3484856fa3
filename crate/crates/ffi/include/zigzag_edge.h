#ifndef ZIGZAG_EDGE_H
#define ZIGZAG_EDGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZzStatus {
  ZZ_STATUS_OK = 0,
  ZZ_STATUS_NULL_POINTER = 1,
  ZZ_STATUS_INVALID_ARGUMENT = 2,
  ZZ_STATUS_NO_EDGE_STATE = 3,
  ZZ_STATUS_NUMERICAL = 4,
  ZZ_STATUS_BUFFER_TOO_SMALL = 5,
  ZZ_STATUS_PANIC = 6,
} ZzStatus;

typedef enum ZzTruncation {
  ZZ_TRUNCATION_END_ON_A = 0,
  ZZ_TRUNCATION_END_ON_B = 1,
} ZzTruncation;

typedef enum ZzWellShape {
  ZZ_WELL_SHAPE_DISC = 0,
  ZZ_WELL_SHAPE_SMOOTH_BUMP = 1,
} ZzWellShape;

/**
 * Eigenvalues and edge flags of one truncated fiber.
 */
typedef struct ZzBandRow ZzBandRow;

/**
 * Atomic ground state with its hopping coefficient.
 */
typedef struct ZzGroundState ZzGroundState;

typedef struct ZzWindow {
  double kpar;
  double zeta_re;
  double zeta_im;
  double dgap;
  double dmax;
} ZzWindow;

/**
 * Static, NUL-terminated description of a status code.
 */
const char *zz_status_message(enum ZzStatus status);

/**
 * # Safety
 * `out` must be null or point to writable memory for one `ZzWindow`.
 */
enum ZzStatus zz_spectral_window(double kpar, struct ZzWindow *out);

/**
 * Diagonalizes the truncated fiber at `kpar` with `ncells` cells.
 *
 * # Safety
 * `out` must be null or point to writable memory for one pointer.
 */
enum ZzStatus zz_band_row_new(double kpar,
                              uintptr_t ncells,
                              enum ZzTruncation truncation,
                              struct ZzBandRow **out);

/**
 * # Safety
 * `row` must be null or a handle from `zz_band_row_new` not yet freed.
 */
void zz_band_row_free(struct ZzBandRow *row);

/**
 * Number of eigenvalues in the row, 0 for a null handle.
 *
 * # Safety
 * `row` must be null or a live handle.
 */
uintptr_t zz_band_row_len(const struct ZzBandRow *row);

/**
 * Copies ascending eigenvalues and edge flags (+1 left, 0 bulk, -1 right).
 * `flags` may be null.
 *
 * # Safety
 * `row` must be a live handle; `values` (and `flags` when non-null) must hold `len` elements.
 */
enum ZzStatus zz_band_row_copy(const struct ZzBandRow *row,
                               double *values,
                               int32_t *flags,
                               uintptr_t len);

/**
 * Flat-band edge state amplitudes on sublattice A for cells 0..ncells
 * (the B amplitudes vanish). Fails with `NoEdgeState` outside the flat band.
 *
 * # Safety
 * `re` and `im` must hold `ncells` elements each.
 */
enum ZzStatus zz_flat_band_state(double kpar, uintptr_t ncells, double *re, double *im);

/**
 * Winding number (0 or 1) of the lower bulk band's Zak phase.
 *
 * # Safety
 * `winding` must be null or point to one writable `int64_t`.
 */
enum ZzStatus zz_zak_winding(double kpar, uintptr_t npoints, int64_t *winding);

/**
 * Solves the radial ground state of the well at coupling `lambda`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one pointer.
 */
enum ZzStatus zz_ground_state_new(enum ZzWellShape shape,
                                  double r0,
                                  double lambda,
                                  struct ZzGroundState **out);

/**
 * # Safety
 * `gs` must be null or a handle from `zz_ground_state_new` not yet freed.
 */
void zz_ground_state_free(struct ZzGroundState *gs);

/**
 * Ground energy E0, hopping coefficient rho and its quadrature error estimate.
 * Any of the out-pointers may be null.
 *
 * # Safety
 * `gs` must be a live handle; non-null out-pointers must be writable.
 */
enum ZzStatus zz_ground_state_values(const struct ZzGroundState *gs,
                                     double *e0,
                                     double *rho,
                                     double *rho_error);

/**
 * Ground-state profile p0(r), normalized over the plane.
 *
 * # Safety
 * `gs` must be a live handle and `out` writable.
 */
enum ZzStatus zz_ground_state_profile(const struct ZzGroundState *gs, double r, double *out);

#endif  /* ZIGZAG_EDGE_H */
