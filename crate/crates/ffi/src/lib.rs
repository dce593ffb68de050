//! C ABI for the floating-point backend.
//!
//! Spaces and trees are opaque handles created by `fl_space_new` and
//! `fl_tree_new` and released by the matching `_free`. Every fallible call
//! returns an [`FlStatus`]; on failure `fl_last_error_message` describes the
//! error of the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;
use std::sync::Arc;

use freelip::free::{dist_to_subspace, is_cyclically_monotone, norm_dual, norm_primal, FreeElement};
use freelip::metric::{FiniteMetricSpace, PointSet};
use freelip::tree::{godard_transform, RTree, TreeSpace};
use freelip::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidMetric = 2,
    InvalidArgument = 3,
    SolverFailure = 4,
    Panic = 5,
}

/// Finite pointed metric space; points are named `0, 1, ...`.
pub struct FlSpace {
    space: Arc<FiniteMetricSpace<f64>>,
}

/// Rooted tree with vertex `0` as root.
pub struct FlTree {
    space: TreeSpace<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FlStatus {
    match e {
        Error::NotSquare
        | Error::BaseOutOfRange(_)
        | Error::NonzeroDiagonal(_)
        | Error::NegativeDistance { .. }
        | Error::ZeroDistanceDistinctPoints { .. }
        | Error::AsymmetricMatrix { .. }
        | Error::TriangleViolation { .. }
        | Error::NotATree(_) => FlStatus::InvalidMetric,
        Error::LpInfeasible | Error::LpUnbounded | Error::IterationLimit => FlStatus::SolverFailure,
        _ => FlStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), FlStatus>) -> FlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            FlStatus::Panic
        }
    }
}

fn fail(e: Error) -> FlStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> FlStatus {
    set_error(&format!("{what} is null"));
    FlStatus::NullPointer
}

/// # Safety
/// `p` is null or valid for reads of `n` elements.
unsafe fn read<'a, T>(p: *const T, n: usize, what: &str) -> Result<&'a [T], FlStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, n))
}

/// # Safety
/// `s` is null or a live handle from [`fl_space_new`].
unsafe fn space_ref<'a>(s: *const FlSpace) -> Result<&'a FlSpace, FlStatus> {
    s.as_ref().ok_or_else(|| null("space"))
}

/// # Safety
/// `s` is a live handle; `coeffs` is null or holds one value per point.
unsafe fn element(s: &FlSpace, coeffs: *const f64) -> Result<FreeElement<f64>, FlStatus> {
    let c = read(coeffs, s.space.len(), "coeffs")?;
    FreeElement::from_coeffs(&s.space, c.to_vec()).map_err(fail)
}

/// Message for the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Validates the row-major `n x n` matrix `dist` and creates a space with
/// base point `base`.
///
/// # Safety
/// `dist` must be valid for reads of `n * n` doubles and `out` for one
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn fl_space_new(dist: *const f64, n: usize, base: usize, out: *mut *mut FlSpace) -> FlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let total = n.checked_mul(n).ok_or_else(|| fail(Error::InvalidParameter("size overflow".into())))?;
        let d = read(dist, total, "dist")?;
        let names = (0..n).map(|i| i.to_string()).collect();
        let matrix = d.chunks(n.max(1)).take(n).map(|r| r.to_vec()).collect();
        let space = FiniteMetricSpace::validate_metric(names, base, matrix).map_err(fail)?;
        *out = Box::into_raw(Box::new(FlSpace { space: Arc::new(space) }));
        Ok(())
    })
}

/// # Safety
/// `space` must be null or a handle from [`fl_space_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fl_space_free(space: *mut FlSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_space_len(space: *const FlSpace) -> usize {
    space.as_ref().map_or(0, |s| s.space.len())
}

/// Norm of `sum coeffs[i] delta(i)` by duality. When `witness` is not null
/// it receives a norming 1-Lipschitz function, one value per point.
///
/// # Safety
/// `coeffs` must hold one double per point, `out` must be writable, and
/// `witness` must be null or writable for one double per point.
#[no_mangle]
pub unsafe extern "C" fn fl_norm(space: *const FlSpace, coeffs: *const f64, out: *mut f64, witness: *mut f64) -> FlStatus {
    guard(|| {
        let s = space_ref(space)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = norm_dual(&element(s, coeffs)?).map_err(fail)?;
        *out = d.value;
        if !witness.is_null() {
            ptr::copy_nonoverlapping(d.witness.values().as_ptr(), witness, s.space.len());
        }
        Ok(())
    })
}

/// Norm as an optimal transport cost.
///
/// # Safety
/// As for [`fl_norm`] without the witness.
#[no_mangle]
pub unsafe extern "C" fn fl_norm_primal(space: *const FlSpace, coeffs: *const f64, out: *mut f64) -> FlStatus {
    guard(|| {
        let s = space_ref(space)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = norm_primal(&element(s, coeffs)?).map_err(fail)?.value;
        Ok(())
    })
}

/// Distance to the free space of `{i : mask[i] != 0}`.
///
/// # Safety
/// `coeffs` and `mask` must hold one entry per point and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fl_dist_to_subspace(
    space: *const FlSpace,
    coeffs: *const f64,
    mask: *const u8,
    out: *mut f64,
) -> FlStatus {
    guard(|| {
        let s = space_ref(space)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = read(mask, s.space.len(), "mask")?;
        let set = PointSet::new(s.space.len(), (0..m.len()).filter(|&i| m[i] != 0)).map_err(fail)?;
        *out = dist_to_subspace(&element(s, coeffs)?, &set).map_err(fail)?.value;
        Ok(())
    })
}

/// Whether the pairs `(xs[k], ys[k])` are cyclically monotone.
///
/// # Safety
/// `xs` and `ys` must hold `npairs` indices and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_is_cyclically_monotone(
    space: *const FlSpace,
    xs: *const usize,
    ys: *const usize,
    npairs: usize,
    out: *mut bool,
) -> FlStatus {
    guard(|| {
        let s = space_ref(space)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let xs = read(xs, npairs, "xs")?;
        let ys = read(ys, npairs, "ys")?;
        let pairs: Vec<(usize, usize)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        *out = is_cyclically_monotone(&s.space, &pairs).map_err(fail)?.monotone;
        Ok(())
    })
}

/// Tree on `n` vertices: vertex `v > 0` hangs from `parents[v]` by an edge
/// of length `lens[v]`; entry `0` of both arrays is ignored.
///
/// # Safety
/// `parents` and `lens` must hold `n` entries and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_tree_new(parents: *const usize, lens: *const f64, n: usize, out: *mut *mut FlTree) -> FlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if n == 0 {
            return Err(fail(Error::InvalidParameter("a tree has at least one vertex".into())));
        }
        let p = read(parents, n, "parents")?;
        let l = read(lens, n, "lens")?;
        let mut edges = Vec::with_capacity(n - 1);
        for v in 1..n {
            if p[v] >= n {
                return Err(fail(Error::NotATree(format!("parent of {v} out of range"))));
            }
            edges.push((p[v].to_string(), v.to_string(), l[v]));
        }
        let tree = RTree::new("0", &edges).map_err(fail)?;
        let space = TreeSpace::vertices(Arc::new(tree)).map_err(fail)?;
        *out = Box::into_raw(Box::new(FlTree { space }));
        Ok(())
    })
}

/// # Safety
/// `tree` must be null or a handle from [`fl_tree_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fl_tree_free(tree: *mut FlTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Norm of `sum coeffs[v] delta(v)` over tree vertices through the L1
/// isometry.
///
/// # Safety
/// `coeffs` must hold one double per vertex and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_tree_norm(tree: *const FlTree, coeffs: *const f64, out: *mut f64) -> FlStatus {
    guard(|| {
        let t = tree.as_ref().ok_or_else(|| null("tree"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let metric = t.space.metric();
        let c = read(coeffs, metric.len(), "coeffs")?;
        let mu = FreeElement::from_coeffs(metric, c.to_vec()).map_err(fail)?;
        *out = godard_transform(&t.space, &mu).map_err(fail)?.l1_norm();
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::NotSquare), FlStatus::InvalidMetric);
        assert_eq!(status_of(&Error::LpInfeasible), FlStatus::SolverFailure);
        assert_eq!(status_of(&Error::EmptyFamily), FlStatus::InvalidArgument);
    }

    #[test]
    fn error_message_round_trip() {
        set_error("boom");
        let msg = unsafe { CStr::from_ptr(fl_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "boom");
    }
}
