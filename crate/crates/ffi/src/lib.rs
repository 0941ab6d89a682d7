//! C ABI over `spheroid-core`.
//!
//! Objects are opaque handles created by `sq_*_new` and released by the
//! matching `sq_*_free`. Every fallible call returns an [`SqStatus`]; on
//! failure the message is kept per thread and read with
//! [`sq_last_error_message`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spheroid_core::free_particle::{self, FreeState};
use spheroid_core::geometry::{Coupling, SurfaceParams};
use spheroid_core::numerics::QuadratureSpec;
use spheroid_core::oscillator::{self, OscEigenstate, OscParams, OscState};
use spheroid_core::table::LevelTable;
use spheroid_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Validation = 3,
    Convergence = 4,
    Resolution = 5,
    Io = 6,
    Panic = 7,
    BufferTooSmall = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqCoupling {
    Squared = 0,
    Literal = 1,
}

/// One row of a level table. Free-particle rows have `has_l == 0`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqLevelRow {
    pub n: u32,
    pub has_l: u8,
    pub l: i32,
    pub e0: f64,
    pub de1: f64,
    pub e: f64,
    pub de1_err_est: f64,
}

pub struct SqSurface(SurfaceParams);
pub struct SqOscillator(OscParams);
pub struct SqLevelTable(LevelTable);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> SqStatus {
    match err {
        Error::Domain(_) => SqStatus::Domain,
        Error::Validation(_) => SqStatus::Validation,
        Error::Convergence { .. } => SqStatus::Convergence,
        Error::Resolution { .. } => SqStatus::Resolution,
        Error::Io(_) => SqStatus::Io,
    }
}

/// Run `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> SqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SqStatus::Ok
        }
        Ok(Err(e)) => {
            let s = status_of(&e);
            set_error(e.to_string());
            s
        }
        Err(_) => {
            set_error("internal panic".to_string());
            SqStatus::Panic
        }
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument".to_string());
            return SqStatus::NullPointer;
        }
    };
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `cap`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn sq_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_surface_new(lambda: f64, eps: f64, out: *mut *mut SqSurface) -> SqStatus {
    nonnull!(out);
    guard(|| {
        let s = SurfaceParams::from_curvature(lambda, eps)?;
        *out = Box::into_raw(Box::new(SqSurface(s)));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from [`sq_surface_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sq_surface_free(s: *mut SqSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// E⁽⁰⁾ of free state n.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_free_energy0(s: *const SqSurface, n: u32, out: *mut f64) -> SqStatus {
    nonnull!(s, out);
    guard(|| {
        *out = free_particle::energy0(n, &(*s).0);
        Ok(())
    })
}

/// First-order shift of free state n (closed form).
///
/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_free_shift1(s: *const SqSurface, n: u32, out: *mut f64) -> SqStatus {
    nonnull!(s, out);
    guard(|| {
        *out = free_particle::shift1_closed(&FreeState::new(n, (*s).0)?)?;
        Ok(())
    })
}

/// First-order shift of free state n by quadrature.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_free_shift1_quadrature(s: *const SqSurface, n: u32, out: *mut f64) -> SqStatus {
    nonnull!(s, out);
    guard(|| {
        let st = FreeState::new(n, (*s).0)?;
        *out = free_particle::shift1_quadrature(&st, &QuadratureSpec::default())?.value;
        Ok(())
    })
}

/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_free_level_table(s: *const SqSurface, n_max: u32, out: *mut *mut SqLevelTable) -> SqStatus {
    nonnull!(s, out);
    guard(|| {
        let t = free_particle::spectrum(n_max, &(*s).0, &QuadratureSpec::default())?;
        *out = Box::into_raw(Box::new(SqLevelTable(t)));
        Ok(())
    })
}

/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_oscillator_new(
    s: *const SqSurface,
    omega: f64,
    coupling: SqCoupling,
    out: *mut *mut SqOscillator,
) -> SqStatus {
    nonnull!(s, out);
    guard(|| {
        let c = match coupling {
            SqCoupling::Squared => Coupling::Squared,
            SqCoupling::Literal => Coupling::Literal,
        };
        *out = Box::into_raw(Box::new(SqOscillator(OscParams::new(omega, (*s).0, c)?)));
        Ok(())
    })
}

/// # Safety
/// `o` must be null or a handle from [`sq_oscillator_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sq_oscillator_free(o: *mut SqOscillator) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// E⁽⁰⁾ of oscillator state (n, l).
///
/// # Safety
/// `o` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_osc_energy0(o: *const SqOscillator, n: u32, l: i32, out: *mut f64) -> SqStatus {
    nonnull!(o, out);
    guard(|| {
        *out = oscillator::energy0(&OscState::new(n, l)?, &(*o).0);
        Ok(())
    })
}

/// First-order shift of oscillator state (n, l).
///
/// # Safety
/// `o` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_osc_shift1(o: *const SqOscillator, n: u32, l: i32, out: *mut f64) -> SqStatus {
    nonnull!(o, out);
    guard(|| {
        let spec = QuadratureSpec::default();
        let e = OscEigenstate::new(OscState::new(n, l)?, (*o).0, &spec)?;
        *out = oscillator::shift_total(&e, &spec)?.value;
        Ok(())
    })
}

/// Normalized radial factor φ_{n,l}(χ), χ ∈ [0, π/2).
///
/// # Safety
/// `o` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_osc_radial(o: *const SqOscillator, n: u32, l: i32, chi: f64, out: *mut f64) -> SqStatus {
    nonnull!(o, out);
    guard(|| {
        let e = OscEigenstate::new(OscState::new(n, l)?, (*o).0, &QuadratureSpec::default())?;
        *out = e.radial(chi)?;
        Ok(())
    })
}

/// # Safety
/// `o` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_osc_level_table(
    o: *const SqOscillator,
    n_max: u32,
    out: *mut *mut SqLevelTable,
) -> SqStatus {
    nonnull!(o, out);
    guard(|| {
        let t = oscillator::level_table(n_max, &(*o).0, &QuadratureSpec::default())?;
        *out = Box::into_raw(Box::new(SqLevelTable(t)));
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a live table handle.
#[no_mangle]
pub unsafe extern "C" fn sq_level_table_len(t: *const SqLevelTable) -> usize {
    if t.is_null() {
        0
    } else {
        (*t).0.rows.len()
    }
}

/// # Safety
/// `t` must be a live table handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sq_level_table_row(t: *const SqLevelTable, index: usize, out: *mut SqLevelRow) -> SqStatus {
    nonnull!(t, out);
    guard(|| {
        let rows = &(*t).0.rows;
        let r =
            rows.get(index).ok_or_else(|| Error::Domain(format!("row {index} out of range (len {})", rows.len())))?;
        *out = SqLevelRow {
            n: r.n,
            has_l: u8::from(r.l.is_some()),
            l: r.l.unwrap_or(0),
            e0: r.e0,
            de1: r.de1,
            e: r.e,
            de1_err_est: r.de1_err_est,
        };
        Ok(())
    })
}

/// Write the table as CSV into `buf` (NUL-terminated). `*len` receives the
/// CSV length without the NUL; if `cap` is too small nothing is written and
/// `SQ_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `t` must be a live table handle, `len` valid for writes and `buf` null or
/// valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn sq_level_table_csv(
    t: *const SqLevelTable,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> SqStatus {
    nonnull!(t, len);
    let csv = (*t).0.to_csv();
    *len = csv.len();
    if buf.is_null() || cap <= csv.len() {
        set_error(format!("buffer of {cap} bytes cannot hold {} bytes of CSV", csv.len() + 1));
        return SqStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(csv.as_ptr().cast::<c_char>(), buf, csv.len());
    *buf.add(csv.len()) = 0;
    set_error(String::new());
    SqStatus::Ok
}

/// # Safety
/// `t` must be null or a table handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sq_level_table_free(t: *mut SqLevelTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}
