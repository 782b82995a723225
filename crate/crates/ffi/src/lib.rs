//! C ABI for `penrose-virial`.
//!
//! Every function returns a [`PvStatus`]; on failure a message is stored per
//! thread and can be copied out with [`pv_last_error_message`]. Trees, models
//! and coefficient tables are opaque handles owned by the caller and released
//! with the matching `*_free` function. Exact rationals cross the boundary as
//! NUL-terminated `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use penrose_virial::bounds;
use penrose_virial::coefficients::{self, CoefficientTable, Route};
use penrose_virial::graph::{tree_from_prufer, EdgeSet, LabeledTree, VertexId};
use penrose_virial::models::{tree_weight, WeightModel};
use penrose_virial::penrose::{penrose_completion, verify_partition};
use penrose_virial::splitting::{count_splittable, max_splittability};
use penrose_virial::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SizeOutOfRange = 3,
    CheckFailed = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvRoute {
    GraphBell = 0,
    GraphReversion = 1,
    PenroseTrees = 2,
}

impl From<PvRoute> for Route {
    fn from(r: PvRoute) -> Self {
        match r {
            PvRoute::GraphBell => Route::GraphBell,
            PvRoute::GraphReversion => Route::GraphReversion,
            PvRoute::PenroseTrees => Route::PenroseTrees,
        }
    }
}

/// Labeled tree handle.
pub struct PvTree {
    tree: LabeledTree,
}

/// Interaction model handle.
pub struct PvModel {
    model: WeightModel,
}

/// Coefficient table handle.
pub struct PvCoefficientTable {
    table: CoefficientTable,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PvBoundResult {
    pub u: f64,
    pub t: f64,
    pub c: f64,
    pub alpha: f64,
    pub radius_coeff: f64,
    pub residual_c: f64,
    pub residual_t: f64,
    pub residual_alpha: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PvPartitionSummary {
    pub n: usize,
    pub connected_count: u64,
    pub interval_total: u64,
    pub covered: u64,
    pub violations: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

struct Failure {
    status: PvStatus,
    message: String,
}

impl Failure {
    fn new(status: PvStatus, message: impl Into<String>) -> Self {
        Failure { status, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::SizeOutOfRange { .. } => PvStatus::SizeOutOfRange,
            Error::EquivalenceViolation { .. } | Error::SchemeViolation(_) | Error::NotConverged { .. } => {
                PvStatus::CheckFailed
            }
            _ => PvStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            PvStatus::Ok
        }
        Ok(Err(f)) => {
            set_last_error(f.message);
            f.status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PvStatus::Panic
        }
    }
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: the caller promises `p` is null or points to a live `T`.
    unsafe { p.as_ref() }.ok_or_else(|| Failure::new(PvStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<*mut T, Failure> {
    if p.is_null() {
        Err(Failure::new(PvStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(p)
    }
}

/// Copies `text` plus a NUL into `buf`; `required` (optional) receives the
/// needed size including the NUL.
unsafe fn copy_string(text: &str, buf: *mut c_char, len: usize, required: *mut usize) -> Result<(), Failure> {
    let need = text.len() + 1;
    if !required.is_null() {
        *required = need;
    }
    if buf.is_null() || len < need {
        return Err(Failure::new(PvStatus::BufferTooSmall, format!("need {need} bytes, buffer holds {len}")));
    }
    ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn pv_status_message(status: PvStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        PvStatus::Ok => b"ok\0",
        PvStatus::NullPointer => b"null pointer argument\0",
        PvStatus::InvalidArgument => b"invalid argument\0",
        PvStatus::SizeOutOfRange => b"size outside the supported range\0",
        PvStatus::CheckFailed => b"verification check failed\0",
        PvStatus::BufferTooSmall => b"output buffer too small\0",
        PvStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Size of the last error message on this thread, including the NUL.
#[no_mangle]
pub extern "C" fn pv_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().len() + 1)
}

/// Copies the last error message on this thread into `buf`.
///
/// # Safety
/// `buf` must be valid for `len` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn pv_last_error_message(buf: *mut c_char, len: usize) -> PvStatus {
    let message = LAST_ERROR.with(|e| e.borrow().clone());
    let need = message.len() + 1;
    if buf.is_null() || len < need {
        return PvStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(message.as_ptr().cast::<c_char>(), buf, message.len());
    *buf.add(message.len()) = 0;
    PvStatus::Ok
}

/// Decodes a Prüfer sequence of `len` labels into a tree on `len + 2` vertices.
///
/// # Safety
/// `seq` must be valid for `len` reads (it may be null when `len == 0`);
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_tree_from_prufer(seq: *const u8, len: usize, out: *mut *mut PvTree) -> PvStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let labels: &[u8] = if len == 0 {
            &[]
        } else {
            if seq.is_null() {
                return Err(Failure::new(PvStatus::NullPointer, "seq is null"));
            }
            std::slice::from_raw_parts(seq, len)
        };
        let ids = labels
            .iter()
            .map(|&v| VertexId::new(v as usize, len + 2))
            .collect::<Result<Vec<_>, _>>()?;
        let tree = tree_from_prufer(&ids)?;
        *out = Box::into_raw(Box::new(PvTree { tree }));
        Ok(())
    })
}

/// Builds a spanning tree on `[n]` from `edge_count` pairs stored as
/// `endpoints[2k], endpoints[2k+1]`.
///
/// # Safety
/// `endpoints` must be valid for `2 * edge_count` reads; `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_tree_from_edges(
    n: usize,
    endpoints: *const u8,
    edge_count: usize,
    out: *mut *mut PvTree,
) -> PvStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let flat: &[u8] = if edge_count == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(non_null(endpoints, "endpoints")?, 2 * edge_count)
        };
        let pairs: Vec<(usize, usize)> = flat.chunks(2).map(|p| (p[0] as usize, p[1] as usize)).collect();
        let tree = LabeledTree::new(EdgeSet::from_pairs(n, &pairs)?)?;
        *out = Box::into_raw(Box::new(PvTree { tree }));
        Ok(())
    })
}

/// Releases a tree; null is ignored.
///
/// # Safety
/// `tree` must come from a `pv_tree_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pv_tree_free(tree: *mut PvTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// # Safety
/// `tree` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_tree_vertex_count(tree: *const PvTree, out: *mut usize) -> PvStatus {
    guard(|| {
        let t = non_null(tree, "tree")?;
        *out_ptr(out, "out")? = t.tree.n();
        Ok(())
    })
}

/// Edge bit field, pairs `{i < j}` indexed lexicographically from bit 0.
///
/// # Safety
/// `tree` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_tree_edge_bits(tree: *const PvTree, out: *mut u64) -> PvStatus {
    guard(|| {
        let t = non_null(tree, "tree")?;
        *out_ptr(out, "out")? = t.tree.edges().bits();
        Ok(())
    })
}

/// Bit field of the extra edges of the Penrose completion.
///
/// # Safety
/// `tree` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_tree_penrose_extra_bits(tree: *const PvTree, out: *mut u64) -> PvStatus {
    guard(|| {
        let t = non_null(tree, "tree")?;
        *out_ptr(out, "out")? = penrose_completion(&t.tree).extra.bits();
        Ok(())
    })
}

/// # Safety
/// `tree` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_tree_max_splittability(tree: *const PvTree, out: *mut usize) -> PvStatus {
    guard(|| {
        let t = non_null(tree, "tree")?;
        *out_ptr(out, "out")? = max_splittability(&t.tree);
        Ok(())
    })
}

/// Parses `"onepoint"` or `"lattice:a=<int>"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_model_parse(spec: *const c_char, out: *mut *mut PvModel) -> PvStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let spec = CStr::from_ptr(non_null(spec, "spec")?)
            .to_str()
            .map_err(|_| Failure::new(PvStatus::InvalidArgument, "spec is not UTF-8"))?;
        let model: WeightModel = spec.parse()?;
        *out = Box::into_raw(Box::new(PvModel { model }));
        Ok(())
    })
}

/// # Safety
/// `model` must come from [`pv_model_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pv_model_free(model: *mut PvModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Penrose tree weight as an exact fraction string.
///
/// # Safety
/// Handles must be live; `buf` valid for `len` writes; `required` null or
/// valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_tree_weight(
    model: *const PvModel,
    tree: *const PvTree,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> PvStatus {
    guard(|| {
        let m = non_null(model, "model")?;
        let t = non_null(tree, "tree")?;
        copy_string(&tree_weight(&m.model, &t.tree).to_string(), buf, len, required)
    })
}

/// Computes `b_1..b_nmax` and `β_1..β_nmax` by one route.
///
/// # Safety
/// `model` must be live; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_coefficients_compute(
    model: *const PvModel,
    nmax: usize,
    route: PvRoute,
    parallel: bool,
    out: *mut *mut PvCoefficientTable,
) -> PvStatus {
    guard(|| {
        let m = non_null(model, "model")?;
        let out = out_ptr(out, "out")?;
        let mut tables = coefficients::coefficient_tables(&m.model, nmax, &[route.into()], parallel)?;
        let table = tables.pop().expect("one route requested");
        *out = Box::into_raw(Box::new(PvCoefficientTable { table }));
        Ok(())
    })
}

/// # Safety
/// `table` must be live; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_table_nmax(table: *const PvCoefficientTable, out: *mut usize) -> PvStatus {
    guard(|| {
        let t = non_null(table, "table")?;
        *out_ptr(out, "out")? = t.table.nmax;
        Ok(())
    })
}

unsafe fn table_entry(
    table: *const PvCoefficientTable,
    n: usize,
    pick: impl Fn(&CoefficientTable) -> &[penrose_virial::series::Rational],
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> PvStatus {
    guard(|| {
        let t = non_null(table, "table")?;
        if n == 0 || n > t.table.nmax {
            return Err(Failure::new(PvStatus::InvalidArgument, format!("index {n} outside 1..={}", t.table.nmax)));
        }
        copy_string(&pick(&t.table)[n - 1].to_string(), buf, len, required)
    })
}

/// Cluster coefficient `b_n` (1-based) as a fraction string.
///
/// # Safety
/// As for [`pv_tree_weight`].
#[no_mangle]
pub unsafe extern "C" fn pv_table_b(
    table: *const PvCoefficientTable,
    n: usize,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> PvStatus {
    table_entry(table, n, |t| &t.b, buf, len, required)
}

/// Virial coefficient `β_n` (1-based) as a fraction string.
///
/// # Safety
/// As for [`pv_tree_weight`].
#[no_mangle]
pub unsafe extern "C" fn pv_table_beta(
    table: *const PvCoefficientTable,
    n: usize,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> PvStatus {
    table_entry(table, n, |t| &t.beta, buf, len, required)
}

/// # Safety
/// `table` must come from [`pv_coefficients_compute`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pv_table_free(table: *mut PvCoefficientTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Runs the partition check on `[n]`; returns `CheckFailed` (with `out`
/// filled) when violations are found.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_verify_partition(n: usize, parallel: bool, out: *mut PvPartitionSummary) -> PvStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let report = verify_partition(n, parallel)?;
        *out = PvPartitionSummary {
            n,
            connected_count: report.connected_count,
            interval_total: report.interval_total,
            covered: report.covered,
            violations: report.violations.len(),
        };
        if report.passed() {
            Ok(())
        } else {
            Err(Failure::new(PvStatus::CheckFailed, report.summary()))
        }
    })
}

/// Number of `l`-splittable trees on `[n]`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_count_splittable(n: usize, l: usize, out: *mut u64) -> PvStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = count_splittable(n, l)?;
        Ok(())
    })
}

/// Radius bound at `u`; `CheckFailed` if the two radius formulas disagree.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pv_radius_bound(u: f64, tol: f64, out: *mut PvBoundResult) -> PvStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let r = bounds::radius_bound(u, tol)?;
        *out = PvBoundResult {
            u: r.u,
            t: r.t,
            c: r.c,
            alpha: r.alpha,
            radius_coeff: r.radius_coeff,
            residual_c: r.residual_c,
            residual_t: r.residual_t,
            residual_alpha: r.residual_alpha,
        };
        Ok(())
    })
}
