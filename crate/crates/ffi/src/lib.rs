//! C interface to `ksmooth`.
//!
//! Every function returns a [`KsStatus`]; on failure a description is kept
//! per thread and can be read with [`ks_last_error`]. Objects are opaque
//! handles created by `*_new` functions and released by the matching
//! `*_free`. Bandwidth matrices cross the boundary as `double[3]` holding
//! `{h11, h12, h22}`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ksmooth::classify::{kda_fit, kda_predict, Classifier};
use ksmooth::geometry::geojson::{write_geojson, Layer};
use ksmooth::{
    kdde_grad_at, kde, kde_at, ms_cluster, probability_contours, BandwidthMatrix, KdeResult,
    KsError, MeanShiftConfig, Method, PointSet, SelectorSpec,
};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPositiveDefinite = 3,
    TooFewPoints = 4,
    DegenerateSample = 5,
    NonFinite = 6,
    Numerical = 7,
    Geometry = 8,
    Panic = 9,
}

/// Bandwidth selectors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsMethod {
    NormalScale = 0,
    Plugin = 1,
    Ucv = 2,
    DiagPlugin = 3,
}

/// Grid layout: vertex `(i, j)` sits at `(x0 + i·dx, y0 + j·dy)` and is
/// stored at flat index `j·nx + i`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsGridInfo {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

/// Sample of bivariate points.
pub struct KsPoints(PointSet);

/// Density estimate on a grid.
pub struct KsKde(KdeResult);

/// Fitted discriminant classifier.
pub struct KsClassifier(Classifier);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &KsError) -> KsStatus {
    match e {
        KsError::NotPositiveDefinite { .. } => KsStatus::NotPositiveDefinite,
        KsError::TooFewPoints { .. }
        | KsError::TooFewPointsInClass { .. }
        | KsError::TooFewClasses(_) => KsStatus::TooFewPoints,
        KsError::DegenerateSample(_) => KsStatus::DegenerateSample,
        KsError::NonFinite(_) => KsStatus::NonFinite,
        KsError::NonFiniteObjective | KsError::NumericalUnderflow => KsStatus::Numerical,
        KsError::InvalidGeometry(_) | KsError::InvalidLevel(_) => KsStatus::Geometry,
        _ => KsStatus::InvalidArgument,
    }
}

fn guard<F: FnOnce() -> Result<(), (KsStatus, String)>>(f: F) -> KsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            KsStatus::Panic
        }
    }
}

fn lib<T>(r: ksmooth::Result<T>) -> Result<T, (KsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (KsStatus, String) {
    (KsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn slice<'a, T>(p: *const T, n: usize, what: &str) -> Result<&'a [T], (KsStatus, String)> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: the caller promises `p` points to `n` readable elements.
    Ok(unsafe { std::slice::from_raw_parts(p, n) })
}

unsafe fn slice_mut<'a, T>(
    p: *mut T,
    n: usize,
    what: &str,
) -> Result<&'a mut [T], (KsStatus, String)> {
    if n == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: the caller promises `p` points to `n` writable elements.
    Ok(unsafe { std::slice::from_raw_parts_mut(p, n) })
}

unsafe fn matrix(h: *const f64) -> Result<BandwidthMatrix, (KsStatus, String)> {
    let v = unsafe { slice(h, 3, "bandwidth")? };
    lib(BandwidthMatrix::new(v[0], v[1], v[2]))
}

unsafe fn points<'a>(p: *const KsPoints) -> Result<&'a PointSet, (KsStatus, String)> {
    // SAFETY: non-null handles come from `ks_points_new`.
    unsafe { p.as_ref() }
        .map(|p| &p.0)
        .ok_or_else(|| null("points"))
}

unsafe fn eval_points(
    ex: *const f64,
    ey: *const f64,
    m: usize,
) -> Result<Vec<[f64; 2]>, (KsStatus, String)> {
    let xs = unsafe { slice(ex, m, "eval x")? };
    let ys = unsafe { slice(ey, m, "eval y")? };
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err((
            KsStatus::NonFinite,
            "evaluation points must be finite".into(),
        ));
    }
    Ok(xs.iter().zip(ys).map(|(&x, &y)| [x, y]).collect())
}

/// Message for the most recent failure on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ks_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ks_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies `n` coordinate pairs into a new point set.
///
/// # Safety
/// `xs` and `ys` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_points_new(
    xs: *const f64,
    ys: *const f64,
    n: usize,
    out: *mut *mut KsPoints,
) -> KsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let x = unsafe { slice(xs, n, "xs")? };
        let y = unsafe { slice(ys, n, "ys")? };
        let set = lib(PointSet::new(x.to_vec(), y.to_vec()))?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(KsPoints(set))) };
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`ks_points_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ks_points_free(p: *mut KsPoints) {
    if !p.is_null() {
        // SAFETY: the handle was created by Box::into_raw.
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Number of points, 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ks_points_len(p: *const KsPoints) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.0.len())
}

/// Selects a bandwidth matrix. `deriv_order` is 0 for the density and 1
/// for its gradient (normal scale and plug-in only).
///
/// # Safety
/// `p` must be a live handle and `h_out` must point to 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ks_bandwidth(
    p: *const KsPoints,
    method: KsMethod,
    deriv_order: u32,
    h_out: *mut f64,
) -> KsStatus {
    guard(|| {
        let pts = unsafe { points(p)? };
        let out = unsafe { slice_mut(h_out, 3, "h_out")? };
        let m = match method {
            KsMethod::NormalScale => Method::NormalScale,
            KsMethod::Plugin => Method::Plugin,
            KsMethod::Ucv => Method::Ucv,
            KsMethod::DiagPlugin => Method::DiagPlugin,
        };
        let h = lib(SelectorSpec::new(m, deriv_order as usize).and_then(|s| s.select(pts)))?;
        out.copy_from_slice(&h.upper());
        Ok(())
    })
}

/// Density estimate at `m` points.
///
/// # Safety
/// `ex`, `ey` and `out` must point to `m` doubles; `h` to 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn ks_kde_eval(
    p: *const KsPoints,
    h: *const f64,
    ex: *const f64,
    ey: *const f64,
    m: usize,
    out: *mut f64,
) -> KsStatus {
    guard(|| {
        let pts = unsafe { points(p)? };
        let h = unsafe { matrix(h)? };
        let eval = unsafe { eval_points(ex, ey, m)? };
        let dst = unsafe { slice_mut(out, m, "out")? };
        dst.copy_from_slice(&kde_at(pts, &h, &eval));
        Ok(())
    })
}

/// Density gradient at `m` points.
///
/// # Safety
/// `ex`, `ey`, `out_dx` and `out_dy` must point to `m` doubles; `h` to 3.
#[no_mangle]
pub unsafe extern "C" fn ks_grad_eval(
    p: *const KsPoints,
    h: *const f64,
    ex: *const f64,
    ey: *const f64,
    m: usize,
    out_dx: *mut f64,
    out_dy: *mut f64,
) -> KsStatus {
    guard(|| {
        let pts = unsafe { points(p)? };
        let h = unsafe { matrix(h)? };
        let eval = unsafe { eval_points(ex, ey, m)? };
        let dx = unsafe { slice_mut(out_dx, m, "out_dx")? };
        let dy = unsafe { slice_mut(out_dy, m, "out_dy")? };
        for (k, g) in kdde_grad_at(pts, &h, &eval).into_iter().enumerate() {
            dx[k] = g[0];
            dy[k] = g[1];
        }
        Ok(())
    })
}

/// Density estimate on the default `gridsize × gridsize` grid.
///
/// # Safety
/// `p` must be live, `h` must point to 3 doubles, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_kde_new(
    p: *const KsPoints,
    h: *const f64,
    gridsize: usize,
    out: *mut *mut KsKde,
) -> KsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pts = unsafe { points(p)? };
        let h = unsafe { matrix(h)? };
        let est = lib(kde(pts, &h, gridsize))?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(KsKde(est))) };
        Ok(())
    })
}

/// # Safety
/// `k` must be null or a handle from [`ks_kde_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ks_kde_free(k: *mut KsKde) {
    if !k.is_null() {
        // SAFETY: the handle was created by Box::into_raw.
        drop(unsafe { Box::from_raw(k) });
    }
}

/// # Safety
/// `k` must be live and `info` writable.
#[no_mangle]
pub unsafe extern "C" fn ks_kde_grid(k: *const KsKde, info: *mut KsGridInfo) -> KsStatus {
    guard(|| {
        let est = unsafe { k.as_ref() }.ok_or_else(|| null("kde"))?;
        let dst = unsafe { info.as_mut() }.ok_or_else(|| null("info"))?;
        let g = est.0.field.grid();
        *dst = KsGridInfo {
            x0: g.x0,
            y0: g.y0,
            dx: g.dx,
            dy: g.dy,
            nx: g.nx,
            ny: g.ny,
        };
        Ok(())
    })
}

/// Copies the `nx·ny` grid values into `out`; `len` must equal `nx·ny`.
///
/// # Safety
/// `k` must be live and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ks_kde_values(k: *const KsKde, out: *mut f64, len: usize) -> KsStatus {
    guard(|| {
        let est = unsafe { k.as_ref() }.ok_or_else(|| null("kde"))?;
        let v = est.0.field.values();
        if len != v.len() {
            return Err((
                KsStatus::InvalidArgument,
                format!("buffer holds {len}, grid has {}", v.len()),
            ));
        }
        unsafe { slice_mut(out, len, "out")? }.copy_from_slice(v);
        Ok(())
    })
}

/// Probability contours at the given percents as a GeoJSON
/// FeatureCollection. Release the string with [`ks_string_free`].
///
/// # Safety
/// `k` must be live, `percents` must point to `count` values and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_kde_contours_geojson(
    k: *const KsKde,
    percents: *const u32,
    count: usize,
    out: *mut *mut c_char,
) -> KsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let est = unsafe { k.as_ref() }.ok_or_else(|| null("kde"))?;
        let pc = unsafe { slice(percents, count, "percents")? };
        let set = lib(probability_contours(&est.0, pc))?;
        let text = lib(write_geojson(&Layer::from_contours("contours", &set)))?;
        let c = CString::new(text).map_err(|e| (KsStatus::Geometry, e.to_string()))?;
        // SAFETY: checked non-null above.
        unsafe { *out = c.into_raw() };
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ks_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the string was created by CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Mean shift clustering with default tolerances. Writes one label per
/// point (1-based, 0 for clusters below `min_clust_size`) and the number of
/// clusters.
///
/// # Safety
/// `p` must be live, `h` must point to 3 doubles, `labels` to
/// `ks_points_len(p)` writable `uint32_t`, `n_clusters` writable.
#[no_mangle]
pub unsafe extern "C" fn ks_kms(
    p: *const KsPoints,
    h: *const f64,
    min_clust_size: usize,
    labels: *mut u32,
    n_clusters: *mut usize,
) -> KsStatus {
    guard(|| {
        let pts = unsafe { points(p)? };
        let h = unsafe { matrix(h)? };
        let dst = unsafe { slice_mut(labels, pts.len(), "labels")? };
        let count = unsafe { n_clusters.as_mut() }.ok_or_else(|| null("n_clusters"))?;
        let cfg = MeanShiftConfig {
            min_clust_size,
            ..Default::default()
        };
        let r = lib(ms_cluster(pts, &h, &cfg))?;
        dst.copy_from_slice(&r.labels);
        *count = r.n_clusters();
        Ok(())
    })
}

/// Fits a classifier on `n` points with integer group codes. Classes are
/// ordered by code; predictions use 1-based positions in that order.
///
/// # Safety
/// `xs`, `ys` and `groups` must point to `n` elements; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ks_kda_new(
    xs: *const f64,
    ys: *const f64,
    groups: *const i64,
    n: usize,
    out: *mut *mut KsClassifier,
) -> KsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let x = unsafe { slice(xs, n, "xs")? };
        let y = unsafe { slice(ys, n, "ys")? };
        let g = unsafe { slice(groups, n, "groups")? };
        let labels = g.iter().map(|v| v.to_string()).collect();
        let set = lib(PointSet::new(x.to_vec(), y.to_vec()).and_then(|s| s.with_labels(labels)))?;
        let c = lib(kda_fit(&set))?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(KsClassifier(c))) };
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle from [`ks_kda_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ks_kda_free(c: *mut KsClassifier) {
    if !c.is_null() {
        // SAFETY: the handle was created by Box::into_raw.
        drop(unsafe { Box::from_raw(c) });
    }
}

/// Number of classes, 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ks_kda_num_classes(c: *const KsClassifier) -> usize {
    unsafe { c.as_ref() }.map_or(0, |c| c.0.len())
}

/// Prior and bandwidth of class `k` (0-based).
///
/// # Safety
/// `c` must be live; `prior` writable; `h_out` must point to 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn ks_kda_class(
    c: *const KsClassifier,
    k: usize,
    prior: *mut f64,
    h_out: *mut f64,
) -> KsStatus {
    guard(|| {
        let cl = unsafe { c.as_ref() }.ok_or_else(|| null("classifier"))?;
        let m =
            cl.0.classes
                .get(k)
                .ok_or_else(|| (KsStatus::InvalidArgument, format!("class {k} out of range")))?;
        *unsafe { prior.as_mut() }.ok_or_else(|| null("prior"))? = m.prior;
        unsafe { slice_mut(h_out, 3, "h_out")? }.copy_from_slice(&m.h.upper());
        Ok(())
    })
}

/// Predicted 1-based class for each of `m` points.
///
/// # Safety
/// `ex`, `ey` must point to `m` doubles and `out` to `m` writable `uint32_t`.
#[no_mangle]
pub unsafe extern "C" fn ks_kda_predict(
    c: *const KsClassifier,
    ex: *const f64,
    ey: *const f64,
    m: usize,
    out: *mut u32,
) -> KsStatus {
    guard(|| {
        let cl = unsafe { c.as_ref() }.ok_or_else(|| null("classifier"))?;
        let eval = unsafe { eval_points(ex, ey, m)? };
        unsafe { slice_mut(out, m, "out")? }.copy_from_slice(&kda_predict(&cl.0, &eval));
        Ok(())
    })
}

/// Copies `s` for tests and bindings that need an owned message.
///
/// # Safety
/// `s` must be null or a valid NUL-terminated string.
pub unsafe fn message(s: *const c_char) -> Option<String> {
    if s.is_null() {
        None
    } else {
        // SAFETY: caller guarantees a valid C string.
        Some(unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned())
    }
}
