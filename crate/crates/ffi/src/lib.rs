//! C ABI over `lelm-lab`.
//!
//! Apparatuses and partitions are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`LelmStatus`]; on failure a description is available from
//! [`lelm_last_error_message`] on the same thread. Mode indices are one-based,
//! Bell labels are positions in the lexicographic enumeration
//! (`Φ+ < Φ− < Ψ+ < Ψ−` per variable, variable 0 most significant).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use lelm_lab::apparatus::{self, Apparatus, CMatrix, Complex64};
use lelm_lab::bellcore::{BellLabel, ModeIndex, VarCount};
use lelm_lab::detection::{self, OutcomePair, Statistics};
use lelm_lab::partition::{self, BoundMode, Partition};
use lelm_lab::search::{bound_campaign, CampaignConfig};
use lelm_lab::LabError;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LelmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotUnitary = 4,
    ParseError = 5,
    IoError = 6,
    Panic = 7,
}

pub const LELM_BOSON: u32 = 0;
pub const LELM_FERMION: u32 = 1;

pub const LELM_MODE_ONE_COPY: u32 = 0;
pub const LELM_MODE_SEPARATE_CHANNEL: u32 = 1;

/// Opaque apparatus handle.
pub struct LelmApparatus {
    inner: Apparatus,
}

/// Opaque partition handle.
pub struct LelmPartition {
    inner: Partition,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(LelmStatus, String);

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        let status = match &e {
            LabError::VarCountOutOfRange(_)
            | LabError::InvalidVariable { .. }
            | LabError::InvalidMode { .. }
            | LabError::InvalidConfig(_)
            | LabError::IncompleteTable { .. } => LelmStatus::InvalidArgument,
            LabError::DimensionMismatch { .. } => LelmStatus::DimensionMismatch,
            LabError::NotUnitary { .. } => LelmStatus::NotUnitary,
            LabError::Parse { .. } => LelmStatus::ParseError,
            LabError::Io { .. } => LelmStatus::IoError,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(LelmStatus::InvalidArgument, msg.into())
}

fn null(what: &str) -> Failure {
    Failure(LelmStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard<F>(body: F) -> LelmStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            clear_last_error();
            LelmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside lelm-lab".into());
            LelmStatus::Panic
        }
    }
}

fn var_count(n: usize) -> Result<VarCount, Failure> {
    Ok(VarCount::new(n)?)
}

fn statistics(stats: u32) -> Result<Statistics, Failure> {
    match stats {
        LELM_BOSON => Ok(Statistics::Boson),
        LELM_FERMION => Ok(Statistics::Fermion),
        other => Err(invalid(format!("unknown statistics code {other}"))),
    }
}

fn bound_mode(mode: u32) -> Result<BoundMode, Failure> {
    match mode {
        LELM_MODE_ONE_COPY => Ok(BoundMode::OneCopy),
        LELM_MODE_SEPARATE_CHANNEL => Ok(BoundMode::SeparateChannel),
        other => Err(invalid(format!("unknown bound mode {other}"))),
    }
}

unsafe fn apparatus_ref<'a>(app: *const LelmApparatus, what: &str) -> Result<&'a Apparatus, Failure> {
    // SAFETY: caller passes null or a live handle from this library.
    unsafe { app.as_ref() }.map(|a| &a.inner).ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, per the caller contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn emit_apparatus(out: *mut *mut LelmApparatus, app: Apparatus) -> Result<(), Failure> {
    let handle = Box::into_raw(Box::new(LelmApparatus { inner: app }));
    if out.is_null() {
        // SAFETY: just allocated above.
        drop(unsafe { Box::from_raw(handle) });
        return Err(null("out"));
    }
    // SAFETY: checked non-null.
    unsafe { out.write(handle) };
    Ok(())
}

unsafe fn path_arg(path: *const c_char) -> Result<PathBuf, Failure> {
    if path.is_null() {
        return Err(null("path"));
    }
    // SAFETY: caller passes a NUL-terminated string.
    let s = unsafe { CStr::from_ptr(path) }
        .to_str()
        .map_err(|_| invalid("path is not UTF-8"))?;
    Ok(PathBuf::from(s))
}

fn label_at(n: VarCount, label_index: usize) -> Result<BellLabel, Failure> {
    Ok(BellLabel::from_index(n, label_index)?)
}

fn outcome(n: VarCount, i: usize, j: usize) -> Result<OutcomePair, Failure> {
    Ok(OutcomePair::new(ModeIndex::new(n, i)?, ModeIndex::new(n, j)?))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn lelm_status_message(status: LelmStatus) -> *const c_char {
    let s: &'static CStr = match status {
        LelmStatus::Ok => c"ok",
        LelmStatus::NullPointer => c"null pointer argument",
        LelmStatus::InvalidArgument => c"invalid argument",
        LelmStatus::DimensionMismatch => c"dimension mismatch",
        LelmStatus::NotUnitary => c"matrix is not unitary",
        LelmStatus::ParseError => c"apparatus file parse error",
        LelmStatus::IoError => c"I/O error",
        LelmStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn lelm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// L/R Hadamard apparatus for `n` variables.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_hadamard(n: usize, out: *mut *mut LelmApparatus) -> LelmStatus {
    guard(|| unsafe { emit_apparatus(out, apparatus::hadamard_lr(var_count(n)?)) })
}

/// Identity apparatus: each channel measured in the computational basis.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_separate_projective(n: usize, out: *mut *mut LelmApparatus) -> LelmStatus {
    guard(|| unsafe { emit_apparatus(out, apparatus::projective_separate(var_count(n)?)) })
}

/// The all-±1/2 optimal apparatus for one variable.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_uopt_n1(out: *mut *mut LelmApparatus) -> LelmStatus {
    guard(|| unsafe { emit_apparatus(out, apparatus::uopt_n1()) })
}

/// Diagonal-basis rotation on the zero-based variables in `vars[0..len]`.
///
/// # Safety
/// `vars` must point to `len` readable values (or be null with `len == 0`);
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_diagonal(
    n: usize,
    vars: *const usize,
    len: usize,
    out: *mut *mut LelmApparatus,
) -> LelmStatus {
    guard(|| {
        let vars: &[usize] = if len == 0 {
            &[]
        } else if vars.is_null() {
            return Err(null("vars"));
        } else {
            // SAFETY: caller guarantees `len` readable elements.
            unsafe { std::slice::from_raw_parts(vars, len) }
        };
        let app = apparatus::diagonal_rotation(var_count(n)?, vars)?;
        unsafe { emit_apparatus(out, app) }
    })
}

/// `outer · inner` (inner acts first).
///
/// # Safety
/// `outer` and `inner` must be live handles; `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_compose(
    outer: *const LelmApparatus,
    inner: *const LelmApparatus,
    out: *mut *mut LelmApparatus,
) -> LelmStatus {
    guard(|| unsafe {
        let app = apparatus::compose(apparatus_ref(outer, "outer")?, apparatus_ref(inner, "inner")?)?;
        emit_apparatus(out, app)
    })
}

/// Haar-random apparatus, deterministic in `seed`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_haar(n: usize, seed: u64, out: *mut *mut LelmApparatus) -> LelmStatus {
    guard(|| unsafe { emit_apparatus(out, apparatus::haar_random(var_count(n)?, seed)) })
}

/// Builds an apparatus from `data`: `2 * dim * dim` doubles, row-major,
/// interleaved real and imaginary parts, `dim = 2^(n+1)`.
///
/// # Safety
/// `data` must point to `len` readable doubles; `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_from_matrix(
    n: usize,
    data: *const f64,
    len: usize,
    tolerance: f64,
    out: *mut *mut LelmApparatus,
) -> LelmStatus {
    guard(|| {
        let n = var_count(n)?;
        let dim = n.modes();
        if data.is_null() {
            return Err(null("data"));
        }
        if len != 2 * dim * dim {
            return Err(Failure(
                LelmStatus::DimensionMismatch,
                format!("expected {} doubles, got {len}", 2 * dim * dim),
            ));
        }
        // SAFETY: caller guarantees `len` readable doubles.
        let values = unsafe { std::slice::from_raw_parts(data, len) };
        let u = CMatrix::from_fn(dim, dim, |i, m| {
            let k = 2 * (i * dim + m);
            Complex64::new(values[k], values[k + 1])
        });
        let app = Apparatus::new(n, u, tolerance)?;
        unsafe { emit_apparatus(out, app) }
    })
}

/// Loads an apparatus file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_load(path: *const c_char, out: *mut *mut LelmApparatus) -> LelmStatus {
    guard(|| unsafe {
        let path = path_arg(path)?;
        emit_apparatus(out, apparatus::load_apparatus(&path)?)
    })
}

/// Writes an apparatus file.
///
/// # Safety
/// `app` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_save(app: *const LelmApparatus, path: *const c_char) -> LelmStatus {
    guard(|| unsafe {
        let app = apparatus_ref(app, "app")?;
        let path = path_arg(path)?;
        apparatus::save_apparatus(app, &path)?;
        Ok(())
    })
}

/// Releases an apparatus handle. Null is ignored.
///
/// # Safety
/// `app` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_free(app: *mut LelmApparatus) {
    if !app.is_null() {
        // SAFETY: allocated by `emit_apparatus` and not yet freed.
        drop(unsafe { Box::from_raw(app) });
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `app` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_n(app: *const LelmApparatus) -> usize {
    unsafe { app.as_ref() }.map_or(0, |a| a.inner.n().get())
}

/// Matrix dimension `2^(n+1)`, or 0 for a null handle.
///
/// # Safety
/// `app` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_dim(app: *const LelmApparatus) -> usize {
    unsafe { app.as_ref() }.map_or(0, |a| a.inner.dim())
}

/// Copies the matrix into `buf` in the layout of [`lelm_apparatus_from_matrix`].
///
/// # Safety
/// `app` must be a live handle; `buf` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lelm_apparatus_copy_matrix(app: *const LelmApparatus, buf: *mut f64, len: usize) -> LelmStatus {
    guard(|| {
        let app = unsafe { apparatus_ref(app, "app")? };
        let dim = app.dim();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < 2 * dim * dim {
            return Err(Failure(
                LelmStatus::DimensionMismatch,
                format!("buffer holds {len} doubles, need {}", 2 * dim * dim),
            ));
        }
        // SAFETY: caller guarantees `len` writable doubles.
        let buf = unsafe { std::slice::from_raw_parts_mut(buf, len) };
        for i in 0..dim {
            for m in 0..dim {
                let z = app.entry(i, m);
                let k = 2 * (i * dim + m);
                buf[k] = z.re;
                buf[k + 1] = z.im;
            }
        }
        Ok(())
    })
}

/// Amplitude `⟨0| c_j c_i |B⟩` for one-based detectors `i`, `j`.
///
/// # Safety
/// `app` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn lelm_outcome_amplitude(
    app: *const LelmApparatus,
    stats: u32,
    label_index: usize,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> LelmStatus {
    guard(|| unsafe {
        let app = apparatus_ref(app, "app")?;
        let label = label_at(app.n(), label_index)?;
        let out = outcome(app.n(), i, j)?;
        let amp = detection::outcome_amplitude(app, statistics(stats)?, &label, &out)?;
        write_out(re, amp.re, "re")?;
        write_out(im, amp.im, "im")
    })
}

/// Probability of detector pair `{i, j}` (one-based).
///
/// # Safety
/// `app` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lelm_outcome_probability(
    app: *const LelmApparatus,
    stats: u32,
    label_index: usize,
    i: usize,
    j: usize,
    out: *mut f64,
) -> LelmStatus {
    guard(|| unsafe {
        let app = apparatus_ref(app, "app")?;
        let label = label_at(app.n(), label_index)?;
        let pair = outcome(app.n(), i, j)?;
        let p = detection::outcome_probability(app, statistics(stats)?, &label, &pair)?;
        write_out(out, p, "out")
    })
}

/// Mean number of particles detected at one-based detector `i`.
///
/// # Safety
/// `app` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lelm_expected_click_rate(
    app: *const LelmApparatus,
    stats: u32,
    label_index: usize,
    i: usize,
    out: *mut f64,
) -> LelmStatus {
    guard(|| unsafe {
        let app = apparatus_ref(app, "app")?;
        let label = label_at(app.n(), label_index)?;
        let mode = ModeIndex::new(app.n(), i).map_err(Failure::from)?;
        let r = detection::expected_click_rate(app, statistics(stats)?, &label, mode)?;
        write_out(out, r, "out")
    })
}

/// Writes the ASCII name of a Bell label (e.g. `phi+ x psi-`) into `buf`,
/// NUL-terminated. Fails if `len` is too small.
///
/// # Safety
/// `buf` must be writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn lelm_label_name(n: usize, label_index: usize, buf: *mut c_char, len: usize) -> LelmStatus {
    guard(|| {
        let name = label_at(var_count(n)?, label_index)?.ascii();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if name.len() + 1 > len {
            return Err(invalid(format!("buffer of {len} bytes too small for '{name}'")));
        }
        // SAFETY: `name.len() + 1 <= len` writable bytes.
        unsafe {
            ptr::copy_nonoverlapping(name.as_ptr().cast::<c_char>(), buf, name.len());
            *buf.add(name.len()) = 0;
        }
        Ok(())
    })
}

unsafe fn emit_partition(out: *mut *mut LelmPartition, p: Partition) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    // SAFETY: checked non-null.
    unsafe { out.write(Box::into_raw(Box::new(LelmPartition { inner: p }))) };
    Ok(())
}

fn support_eps(eps: f64) -> Result<f64, Failure> {
    if eps > 0.0 && eps.is_finite() {
        Ok(eps)
    } else {
        Err(invalid(format!("support threshold must be positive, got {eps}")))
    }
}

/// Single-copy class partition at support threshold `eps` (1e-9 is the usual choice).
///
/// # Safety
/// `app` must be a live handle; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_partition_new(
    app: *const LelmApparatus,
    stats: u32,
    eps: f64,
    out: *mut *mut LelmPartition,
) -> LelmStatus {
    guard(|| unsafe {
        let app = apparatus_ref(app, "app")?;
        let table = detection::signature_table_with_eps(app, statistics(stats)?, support_eps(eps)?);
        emit_partition(out, partition::partition_classes(&table)?)
    })
}

/// Joint partition with one copy measured by each apparatus.
///
/// # Safety
/// `first`, `second` must be live handles; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn lelm_two_copy_partition_new(
    first: *const LelmApparatus,
    second: *const LelmApparatus,
    stats: u32,
    eps: f64,
    out: *mut *mut LelmPartition,
) -> LelmStatus {
    guard(|| unsafe {
        let p = partition::two_copy_partition_with_eps(
            apparatus_ref(first, "first")?,
            apparatus_ref(second, "second")?,
            statistics(stats)?,
            support_eps(eps)?,
        )?;
        emit_partition(out, p)
    })
}

/// Number of classes, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lelm_partition_class_count(p: *const LelmPartition) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.inner.class_count())
}

/// Zero-based class index of a Bell label.
///
/// # Safety
/// `p` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lelm_partition_class_of(p: *const LelmPartition, label_index: usize, out: *mut usize) -> LelmStatus {
    guard(|| unsafe {
        let p = p.as_ref().map(|p| &p.inner).ok_or_else(|| null("partition"))?;
        if label_index >= p.n().labels() {
            return Err(invalid(format!("label index {label_index} out of range")));
        }
        write_out(out, p.class_of(label_index), "out")
    })
}

/// Releases a partition handle. Null is ignored.
///
/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lelm_partition_free(p: *mut LelmPartition) {
    if !p.is_null() {
        // SAFETY: allocated by `emit_partition` and not yet freed.
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Haar fuzzing of the class-count ceiling. Writes the largest class count
/// seen and the number of trials above the ceiling for `mode`.
///
/// # Safety
/// `max_observed` and `violations` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lelm_bound_campaign(
    n: usize,
    stats: u32,
    trials: usize,
    seed: u64,
    mode: u32,
    max_observed: *mut usize,
    violations: *mut usize,
) -> LelmStatus {
    guard(|| unsafe {
        let cfg = CampaignConfig::new(var_count(n)?, statistics(stats)?, trials, seed, bound_mode(mode)?)?;
        let report = bound_campaign(&cfg);
        write_out(max_observed, report.max_observed, "max_observed")?;
        write_out(violations, report.violations.len(), "violations")
    })
}
