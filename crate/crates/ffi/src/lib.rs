//! C ABI over the zigzag-edge library.
//!
//! Every call returns a `ZzStatus`; results come back through out-pointers.
//! Handles are opaque and must be released with their `_free` function.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use zigzag_edge::atomic::{ground_state, hopping_rho, AtomicError, AtomicWell, GroundState, WellShape};
use zigzag_edge::lattice::spectral_window;
use zigzag_edge::tightbinding::{band_row, flat_band_state, BandRow, TbError, Truncation};
use zigzag_edge::zak::{zak_phase, ZakError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NoEdgeState = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZzTruncation {
    EndOnA = 0,
    EndOnB = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZzWellShape {
    Disc = 0,
    SmoothBump = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ZzWindow {
    pub kpar: f64,
    pub zeta_re: f64,
    pub zeta_im: f64,
    pub dgap: f64,
    pub dmax: f64,
}

/// Eigenvalues and edge flags of one truncated fiber.
pub struct ZzBandRow(BandRow);

/// Atomic ground state with its hopping coefficient.
pub struct ZzGroundState {
    gs: GroundState,
    rho: f64,
    rho_error: f64,
}

fn guard(f: impl FnOnce() -> ZzStatus) -> ZzStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(ZzStatus::Panic)
}

fn tb_status(e: TbError) -> ZzStatus {
    match e {
        TbError::TooFewCells(_) | TbError::SourceTooLong { .. } => ZzStatus::InvalidArgument,
        TbError::NoEdgeState(_) => ZzStatus::NoEdgeState,
        _ => ZzStatus::Numerical,
    }
}

fn atomic_status(e: AtomicError) -> ZzStatus {
    match e {
        AtomicError::NoBoundState { .. } => ZzStatus::Numerical,
        _ => ZzStatus::InvalidArgument,
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn zz_status_message(status: ZzStatus) -> *const c_char {
    let s: &'static std::ffi::CStr = match status {
        ZzStatus::Ok => c"ok",
        ZzStatus::NullPointer => c"null pointer argument",
        ZzStatus::InvalidArgument => c"invalid argument",
        ZzStatus::NoEdgeState => c"no edge state at this kpar",
        ZzStatus::Numerical => c"numerical failure",
        ZzStatus::BufferTooSmall => c"output buffer too small",
        ZzStatus::Panic => c"internal error",
    };
    s.as_ptr()
}

/// # Safety
/// `out` must be null or point to writable memory for one `ZzWindow`.
#[no_mangle]
pub unsafe extern "C" fn zz_spectral_window(kpar: f64, out: *mut ZzWindow) -> ZzStatus {
    guard(|| {
        if out.is_null() {
            return ZzStatus::NullPointer;
        }
        if !kpar.is_finite() {
            return ZzStatus::InvalidArgument;
        }
        let w = spectral_window(kpar);
        *out = ZzWindow {
            kpar: w.kpar,
            zeta_re: w.zeta.re,
            zeta_im: w.zeta.im,
            dgap: w.dgap,
            dmax: w.dmax,
        };
        ZzStatus::Ok
    })
}

/// Diagonalizes the truncated fiber at `kpar` with `ncells` cells.
///
/// # Safety
/// `out` must be null or point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn zz_band_row_new(
    kpar: f64,
    ncells: usize,
    truncation: ZzTruncation,
    out: *mut *mut ZzBandRow,
) -> ZzStatus {
    guard(|| {
        if out.is_null() {
            return ZzStatus::NullPointer;
        }
        *out = std::ptr::null_mut();
        if !kpar.is_finite() {
            return ZzStatus::InvalidArgument;
        }
        let t = match truncation {
            ZzTruncation::EndOnA => Truncation::EndOnA,
            ZzTruncation::EndOnB => Truncation::EndOnB,
        };
        match band_row(kpar, ncells, t) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(ZzBandRow(r)));
                ZzStatus::Ok
            }
            Err(e) => tb_status(e),
        }
    })
}

/// # Safety
/// `row` must be null or a handle from `zz_band_row_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zz_band_row_free(row: *mut ZzBandRow) {
    if !row.is_null() {
        drop(Box::from_raw(row));
    }
}

/// Number of eigenvalues in the row, 0 for a null handle.
///
/// # Safety
/// `row` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zz_band_row_len(row: *const ZzBandRow) -> usize {
    row.as_ref().map_or(0, |r| r.0.eigenvalues.len())
}

/// Copies ascending eigenvalues and edge flags (+1 left, 0 bulk, -1 right).
/// `flags` may be null.
///
/// # Safety
/// `row` must be a live handle; `values` (and `flags` when non-null) must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn zz_band_row_copy(
    row: *const ZzBandRow,
    values: *mut f64,
    flags: *mut i32,
    len: usize,
) -> ZzStatus {
    guard(|| {
        let (Some(r), false) = (row.as_ref(), values.is_null()) else {
            return ZzStatus::NullPointer;
        };
        let n = r.0.eigenvalues.len();
        if len < n {
            return ZzStatus::BufferTooSmall;
        }
        std::slice::from_raw_parts_mut(values, n).copy_from_slice(&r.0.eigenvalues);
        if !flags.is_null() {
            let f = std::slice::from_raw_parts_mut(flags, n);
            for (d, s) in f.iter_mut().zip(&r.0.flags) {
                *d = s.code();
            }
        }
        ZzStatus::Ok
    })
}

/// Flat-band edge state amplitudes on sublattice A for cells 0..ncells
/// (the B amplitudes vanish). Fails with `NoEdgeState` outside the flat band.
///
/// # Safety
/// `re` and `im` must hold `ncells` elements each.
#[no_mangle]
pub unsafe extern "C" fn zz_flat_band_state(kpar: f64, ncells: usize, re: *mut f64, im: *mut f64) -> ZzStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return ZzStatus::NullPointer;
        }
        if !kpar.is_finite() || ncells == 0 {
            return ZzStatus::InvalidArgument;
        }
        match flat_band_state(&spectral_window(kpar), ncells) {
            Ok(s) => {
                let re = std::slice::from_raw_parts_mut(re, ncells);
                let im = std::slice::from_raw_parts_mut(im, ncells);
                for (i, c) in s.amplitudes.iter().enumerate().take(ncells) {
                    re[i] = c[0].re;
                    im[i] = c[0].im;
                }
                ZzStatus::Ok
            }
            Err(e) => tb_status(e),
        }
    })
}

/// Winding number (0 or 1) of the lower bulk band's Zak phase.
///
/// # Safety
/// `winding` must be null or point to one writable `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn zz_zak_winding(kpar: f64, npoints: usize, winding: *mut i64) -> ZzStatus {
    guard(|| {
        if winding.is_null() {
            return ZzStatus::NullPointer;
        }
        if !kpar.is_finite() {
            return ZzStatus::InvalidArgument;
        }
        match zak_phase(&spectral_window(kpar), npoints) {
            Ok(z) => {
                *winding = z.winding;
                ZzStatus::Ok
            }
            Err(ZakError::InvalidSampling(_)) => ZzStatus::InvalidArgument,
            Err(_) => ZzStatus::Numerical,
        }
    })
}

/// Solves the radial ground state of the well at coupling `lambda`.
///
/// # Safety
/// `out` must be null or point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn zz_ground_state_new(
    shape: ZzWellShape,
    r0: f64,
    lambda: f64,
    out: *mut *mut ZzGroundState,
) -> ZzStatus {
    guard(|| {
        if out.is_null() {
            return ZzStatus::NullPointer;
        }
        *out = std::ptr::null_mut();
        let shape = match shape {
            ZzWellShape::Disc => WellShape::DiscWell,
            ZzWellShape::SmoothBump => WellShape::SmoothBump,
        };
        let well = match AtomicWell::new(shape, r0) {
            Ok(w) => w,
            Err(e) => return atomic_status(e),
        };
        match ground_state(&well, lambda) {
            Ok(gs) => {
                let h = hopping_rho(&gs, &well);
                *out = Box::into_raw(Box::new(ZzGroundState {
                    gs,
                    rho: h.rho,
                    rho_error: h.quadrature_error_estimate,
                }));
                ZzStatus::Ok
            }
            Err(e) => atomic_status(e),
        }
    })
}

/// # Safety
/// `gs` must be null or a handle from `zz_ground_state_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zz_ground_state_free(gs: *mut ZzGroundState) {
    if !gs.is_null() {
        drop(Box::from_raw(gs));
    }
}

/// Ground energy E0, hopping coefficient rho and its quadrature error estimate.
/// Any of the out-pointers may be null.
///
/// # Safety
/// `gs` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn zz_ground_state_values(
    gs: *const ZzGroundState,
    e0: *mut f64,
    rho: *mut f64,
    rho_error: *mut f64,
) -> ZzStatus {
    guard(|| {
        let Some(g) = gs.as_ref() else {
            return ZzStatus::NullPointer;
        };
        if let Some(p) = e0.as_mut() {
            *p = g.gs.e0;
        }
        if let Some(p) = rho.as_mut() {
            *p = g.rho;
        }
        if let Some(p) = rho_error.as_mut() {
            *p = g.rho_error;
        }
        ZzStatus::Ok
    })
}

/// Ground-state profile p0(r), normalized over the plane.
///
/// # Safety
/// `gs` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zz_ground_state_profile(gs: *const ZzGroundState, r: f64, out: *mut f64) -> ZzStatus {
    guard(|| {
        let (Some(g), Some(o)) = (gs.as_ref(), out.as_mut()) else {
            return ZzStatus::NullPointer;
        };
        if !(r >= 0.0) {
            return ZzStatus::InvalidArgument;
        }
        *o = g.gs.p0(r);
        ZzStatus::Ok
    })
}
