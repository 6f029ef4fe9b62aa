//! C ABI over `histent-core`.
//!
//! Every call returns a [`HistentStatus`] and writes results through
//! out-pointers. Handles are opaque and released with the matching
//! `*_free`. After a non-OK status, `histent_last_error` returns the
//! message for the calling thread.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use histent_core::entanglement::{
    density_from_history, space_reduce, time_reduce, HistoryDensity, Side, SpacePartition,
};
use histent_core::history::{build_history_vector, is_consistent_set, HistoryVector};
use histent_core::io::{bundled_fixture, parse_schedule_str, ScheduleFile};
use histent_core::Error;

const DEFAULT_TOL: f64 = 1e-10;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HistentStatus {
    Ok = 0,
    /// Malformed input: bad JSON, non-unitary step, unknown label.
    InputError = 1,
    /// A computed quantity failed a numerical invariant.
    NumericalError = 2,
    NullPointer = 3,
    OutOfRange = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HistentSide {
    A = 0,
    B = 1,
}

/// A parsed schedule with its bipartition.
pub struct HistentSchedule {
    file: ScheduleFile,
}

pub struct HistentHistory {
    hv: HistoryVector,
    partition: Option<SpacePartition>,
}

pub struct HistentDensity {
    rho: HistoryDensity,
    partition: Option<SpacePartition>,
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Range(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type FfiResult = Result<(), Failure>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> FfiResult) -> HistentStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HistentStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            if e.is_numerical() {
                HistentStatus::NumericalError
            } else {
                HistentStatus::InputError
            }
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            HistentStatus::NullPointer
        }
        Ok(Err(Failure::Range(msg))) => {
            set_error(msg);
            HistentStatus::OutOfRange
        }
        Err(_) => {
            set_error("internal panic".into());
            HistentStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> FfiResult {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, n: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if n == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(Failure::Null(what))
    } else {
        Ok(std::slice::from_raw_parts(p, n))
    }
}

fn tol_or_default(tol: f64) -> f64 {
    if tol > 0.0 {
        tol
    } else {
        DEFAULT_TOL
    }
}

fn boxed_schedule(text: &str, overrides: &BTreeMap<String, f64>, tol: f64) -> Result<*mut HistentSchedule, Failure> {
    let file = parse_schedule_str(text, overrides, tol)?;
    Ok(Box::into_raw(Box::new(HistentSchedule { file })))
}

fn check_index(i: usize, len: usize, what: &str) -> FfiResult {
    if i < len {
        Ok(())
    } else {
        Err(Failure::Range(format!("{what} index {i} out of range (length {len})")))
    }
}

unsafe fn write_label(label: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> FfiResult {
    if !needed.is_null() {
        needed.write(label.len());
    }
    if cap > 0 {
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        let n = label.len().min(cap - 1);
        std::ptr::copy_nonoverlapping(label.as_ptr().cast::<c_char>(), buf, n);
        buf.add(n).write(0);
    }
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn histent_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn histent_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a schedule document. `tol <= 0` selects the default 1e-10.
///
/// # Safety
/// `json` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn histent_schedule_from_json(
    json: *const c_char,
    tol: f64,
    out: *mut *mut HistentSchedule,
) -> HistentStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Error::Parse(format!("input is not UTF-8: {e}")))?;
        put(out, boxed_schedule(text, &BTreeMap::new(), tol_or_default(tol))?, "out")
    })
}

/// The two-qubit entangler: H on qubit 0, CNOT, computational measurements.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn histent_schedule_entangler(out: *mut *mut HistentSchedule) -> HistentStatus {
    guard(|| {
        let text = bundled_fixture("entangler").expect("bundled");
        put(out, boxed_schedule(text, &BTreeMap::new(), DEFAULT_TOL)?, "out")
    })
}

/// Three-qubit teleportation with input `√p|0⟩ + √(1−p)|1⟩`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn histent_schedule_teleportation(p: f64, out: *mut *mut HistentSchedule) -> HistentStatus {
    guard(|| {
        let text = bundled_fixture("teleportation").expect("bundled");
        let overrides = BTreeMap::from([("p".to_string(), p)]);
        put(out, boxed_schedule(text, &overrides, DEFAULT_TOL)?, "out")
    })
}

/// # Safety
/// `s` must be a live schedule handle; `dim` and `n_events` writable.
#[no_mangle]
pub unsafe extern "C" fn histent_schedule_shape(
    s: *const HistentSchedule,
    dim: *mut usize,
    n_events: *mut usize,
) -> HistentStatus {
    guard(|| {
        let s = &get(s, "schedule")?.file.schedule;
        put(dim, s.dim(), "dim")?;
        put(n_events, s.n_events(), "n_events")
    })
}

/// Replaces the bipartition: the listed factors form side A, the rest B.
///
/// # Safety
/// `s` must be a live schedule handle; `a` must hold `n_a` entries.
#[no_mangle]
pub unsafe extern "C" fn histent_schedule_set_partition(
    s: *mut HistentSchedule,
    a: *const usize,
    n_a: usize,
) -> HistentStatus {
    guard(|| {
        let file = &mut s.as_mut().ok_or(Failure::Null("schedule"))?.file;
        let a = slice(a, n_a, "a")?.to_vec();
        let factors = file
            .schedule
            .factors()
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("the schedule has no tensor factorization".into()))?;
        let b = (0..factors.len()).filter(|f| !a.contains(f)).collect();
        file.partition = Some(SpacePartition::new(factors, a, b)?);
        Ok(())
    })
}

/// Checks weak consistency (`|Re D(α, β)| ≤ tol` for all `α ≠ β`).
///
/// # Safety
/// `s` must be a live schedule handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn histent_schedule_consistency(
    s: *const HistentSchedule,
    tol: f64,
    consistent: *mut bool,
    max_abs_re: *mut f64,
) -> HistentStatus {
    guard(|| {
        let rep = is_consistent_set(&get(s, "schedule")?.file.schedule, tol_or_default(tol))?;
        put(consistent, rep.consistent, "consistent")?;
        put(max_abs_re, rep.max_real, "max_abs_re")
    })
}

/// # Safety
/// `s` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn histent_schedule_free(s: *mut HistentSchedule) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Enumerates the nonzero histories.
///
/// # Safety
/// `s` must be a live schedule handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn histent_history_build(
    s: *const HistentSchedule,
    out: *mut *mut HistentHistory,
) -> HistentStatus {
    guard(|| {
        let file = &get(s, "schedule")?.file;
        let h = HistentHistory {
            hv: build_history_vector(&file.schedule)?,
            partition: file.partition.clone(),
        };
        put(out, Box::into_raw(Box::new(h)), "out")
    })
}

/// # Safety
/// `h` must be a live history handle; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn histent_history_len(h: *const HistentHistory, len: *mut usize) -> HistentStatus {
    guard(|| put(len, get(h, "history")?.hv.len(), "len"))
}

/// # Safety
/// `h` must be a live history handle; `p` writable.
#[no_mangle]
pub unsafe extern "C" fn histent_history_probability(
    h: *const HistentHistory,
    i: usize,
    p: *mut f64,
) -> HistentStatus {
    guard(|| {
        let hv = &get(h, "history")?.hv;
        check_index(i, hv.len(), "history")?;
        put(p, hv.terms()[i].probability, "p")
    })
}

/// Amplitude of history `i`; an input error when a projector in it has
/// rank above one.
///
/// # Safety
/// `h` must be a live history handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn histent_history_amplitude(
    h: *const HistentHistory,
    i: usize,
    re: *mut f64,
    im: *mut f64,
) -> HistentStatus {
    guard(|| {
        let hv = &get(h, "history")?.hv;
        check_index(i, hv.len(), "history")?;
        let term = &hv.terms()[i];
        let a = term.amplitude.ok_or_else(|| Error::AmplitudeUndefined {
            history: hv.label(&term.index),
        })?;
        put(re, a.re, "re")?;
        put(im, a.im, "im")
    })
}

/// Writes the label of history `i`, e.g. `(00,11)`, snprintf-style: at most
/// `cap - 1` bytes plus NUL. `needed` receives the full length without NUL.
///
/// # Safety
/// `h` must be a live history handle; `buf` must hold `cap` bytes (may be
/// NULL when `cap` is 0); `needed` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn histent_history_label(
    h: *const HistentHistory,
    i: usize,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> HistentStatus {
    guard(|| {
        let hv = &get(h, "history")?.hv;
        check_index(i, hv.len(), "history")?;
        write_label(&hv.label(&hv.terms()[i].index), buf, cap, needed)
    })
}

/// # Safety
/// `h` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn histent_history_free(h: *mut HistentHistory) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `ρ = |Ψ⟩⟨Ψ|` over the histories of `h`.
///
/// # Safety
/// `h` must be a live history handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn histent_density_from_history(
    h: *const HistentHistory,
    out: *mut *mut HistentDensity,
) -> HistentStatus {
    guard(|| {
        let h = get(h, "history")?;
        let d = HistentDensity {
            rho: density_from_history(&h.hv)?,
            partition: h.partition.clone(),
        };
        put(out, Box::into_raw(Box::new(d)), "out")
    })
}

/// Keeps the listed 1-based measurement times.
///
/// # Safety
/// `d` must be a live density handle; `times` must hold `n` entries.
#[no_mangle]
pub unsafe extern "C" fn histent_density_time_reduce(
    d: *const HistentDensity,
    times: *const usize,
    n: usize,
    out: *mut *mut HistentDensity,
) -> HistentStatus {
    guard(|| {
        let d = get(d, "density")?;
        let r = HistentDensity {
            rho: time_reduce(&d.rho, slice(times, n, "times")?)?,
            partition: d.partition.clone(),
        };
        put(out, Box::into_raw(Box::new(r)), "out")
    })
}

/// Keeps one side of the schedule's bipartition. The result carries no
/// partition.
///
/// # Safety
/// `d` must be a live density handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn histent_density_space_reduce(
    d: *const HistentDensity,
    side: HistentSide,
    out: *mut *mut HistentDensity,
) -> HistentStatus {
    guard(|| {
        let d = get(d, "density")?;
        let part = d
            .partition
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("no bipartition available".into()))?;
        let side = match side {
            HistentSide::A => Side::A,
            HistentSide::B => Side::B,
        };
        let r = HistentDensity {
            rho: space_reduce(&d.rho, part, side)?,
            partition: None,
        };
        put(out, Box::into_raw(Box::new(r)), "out")
    })
}

/// # Safety
/// `d` must be a live density handle; `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn histent_density_dim(d: *const HistentDensity, dim: *mut usize) -> HistentStatus {
    guard(|| put(dim, get(d, "density")?.rho.dim(), "dim"))
}

/// Entry `(i, j)` in the order of the density's basis.
///
/// # Safety
/// `d` must be a live density handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn histent_density_entry(
    d: *const HistentDensity,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> HistentStatus {
    guard(|| {
        let rho = &get(d, "density")?.rho;
        check_index(i, rho.dim(), "row")?;
        check_index(j, rho.dim(), "column")?;
        let z = rho.matrix()[(i, j)];
        put(re, z.re, "re")?;
        put(im, z.im, "im")
    })
}

/// Writes the label of basis element `i`, with the conventions of
/// [`histent_history_label`].
///
/// # Safety
/// As for [`histent_history_label`], with `d` a live density handle.
#[no_mangle]
pub unsafe extern "C" fn histent_density_basis_label(
    d: *const HistentDensity,
    i: usize,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> HistentStatus {
    guard(|| {
        let rho = &get(d, "density")?.rho;
        check_index(i, rho.dim(), "basis")?;
        write_label(&rho.basis()[i].display(rho.events()), buf, cap, needed)
    })
}

/// Von Neumann entropy in bits.
///
/// # Safety
/// `d` must be a live density handle; `s` writable.
#[no_mangle]
pub unsafe extern "C" fn histent_density_entropy(d: *const HistentDensity, s: *mut f64) -> HistentStatus {
    guard(|| put(s, get(d, "density")?.rho.entropy()?, "s"))
}

/// # Safety
/// `d` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn histent_density_free(d: *mut HistentDensity) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}
