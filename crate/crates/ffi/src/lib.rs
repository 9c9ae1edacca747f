//! C ABI over `simplex_etest`.
//!
//! Every function returns a [`SetestStatus`]. On failure the message is
//! available from [`setest_last_error`] on the same thread. Datasets are
//! opaque handles created by [`setest_dataset_new`] and released by
//! [`setest_dataset_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use simplex_etest::distributions::{kl_dirichlet, DirichletParams};
use simplex_etest::{
    alpha_metric, close, permutation_test, rpbt_test_with, Alpha, Combination, Composition, CompositionalDataset, Error,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetestStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidComposition = 3,
    /// α ≤ 0 requested for data containing zeros.
    AlphaWithZeros = 4,
    Numeric = 5,
    Io = 6,
    Panic = 7,
}

/// Opaque handle to a validated, closed dataset (one composition per row).
pub struct SetestDataset {
    inner: CompositionalDataset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SetestStatus {
    match e {
        Error::DegenerateComposition
        | Error::NegativeComponent { .. }
        | Error::NonFinite { .. }
        | Error::TooFewComponents(_)
        | Error::NotClosed(_)
        | Error::InvalidDataset(_) => SetestStatus::InvalidComposition,
        Error::AlphaWithZeros(_) => SetestStatus::AlphaWithZeros,
        Error::NotPositiveDefinite | Error::Numeric(_) => SetestStatus::Numeric,
        Error::Parse { .. } | Error::Io(_) | Error::Csv(_) | Error::Json(_) => SetestStatus::Io,
        _ => SetestStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SetestStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SetestStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            SetestStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            SetestStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or point to `len` readable doubles.
unsafe fn input<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// # Safety
/// `p` must be null or point to `len` writable doubles.
unsafe fn output<'a>(p: *mut f64, len: usize, what: &'static str) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

/// # Safety
/// `h` must be null or a live handle from [`setest_dataset_new`].
unsafe fn dataset<'a>(h: *const SetestDataset, what: &'static str) -> Result<&'a CompositionalDataset, Failure> {
    h.as_ref().map(|d| &d.inner).ok_or(Failure::Null(what))
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn setest_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a dataset from `n` rows of `d` non-negative values in row-major
/// order. Each row is closed.
///
/// # Safety
/// `values` must point to `n * d` doubles and `out` to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn setest_dataset_new(
    values: *const f64,
    n: usize,
    d: usize,
    out: *mut *mut SetestDataset,
) -> SetestStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let len = n
            .checked_mul(d)
            .ok_or_else(|| Error::InvalidArgument("n * d overflows".into()))?;
        let flat = input(values, len, "values")?;
        if d == 0 {
            return Err(Error::TooFewComponents(0).into());
        }
        let rows: Vec<&[f64]> = flat.chunks(d).collect();
        let inner = CompositionalDataset::from_raw_rows(&rows)?;
        *out = Box::into_raw(Box::new(SetestDataset { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`setest_dataset_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn setest_dataset_free(h: *mut SetestDataset) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of rows, or 0 for NULL.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn setest_dataset_len(h: *const SetestDataset) -> usize {
    h.as_ref().map_or(0, |d| d.inner.len())
}

/// Number of parts, or 0 for NULL.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn setest_dataset_dim(h: *const SetestDataset) -> usize {
    h.as_ref().map_or(0, |d| d.inner.dim())
}

/// Closes `d` raw values into `out`.
///
/// # Safety
/// `raw` and `out` must each point to `d` doubles.
#[no_mangle]
pub unsafe extern "C" fn setest_close(raw: *const f64, d: usize, out: *mut f64) -> SetestStatus {
    guard(|| {
        let c = close(input(raw, d, "raw")?)?;
        output(out, d, "out")?.copy_from_slice(c.values());
        Ok(())
    })
}

/// α-metric between two compositions of `d` parts; α = 0 gives the
/// Aitchison distance.
///
/// # Safety
/// `x` and `y` must point to `d` doubles and `out` to one double.
#[no_mangle]
pub unsafe extern "C" fn setest_alpha_metric(
    x: *const f64,
    y: *const f64,
    d: usize,
    alpha: f64,
    out: *mut f64,
) -> SetestStatus {
    guard(|| {
        let x = Composition::new(input(x, d, "x")?.to_vec())?;
        let y = Composition::new(input(y, d, "y")?.to_vec())?;
        let v = alpha_metric(&x, &y, Alpha::new(alpha)?)?;
        output(out, 1, "out")?[0] = v;
        Ok(())
    })
}

/// Two-sample permutation α-EBT. Writes one statistic and one p-value per
/// entry of `alphas`.
///
/// # Safety
/// `a` and `b` must be live handles, `alphas` must point to `n_alphas`
/// doubles, and both output arrays must hold `n_alphas` doubles.
#[no_mangle]
pub unsafe extern "C" fn setest_permutation_test(
    a: *const SetestDataset,
    b: *const SetestDataset,
    alphas: *const f64,
    n_alphas: usize,
    permutations: usize,
    seed: u64,
    standardize: bool,
    statistics_out: *mut f64,
    p_values_out: *mut f64,
) -> SetestStatus {
    guard(|| {
        let (a, b) = (dataset(a, "a")?, dataset(b, "b")?);
        let alphas = input(alphas, n_alphas, "alphas")?
            .iter()
            .map(|&v| Alpha::new(v))
            .collect::<simplex_etest::Result<Vec<_>>>()?;
        let stats = output(statistics_out, n_alphas, "statistics_out")?;
        let ps = output(p_values_out, n_alphas, "p_values_out")?;
        let r = permutation_test(&[a, b], &alphas, permutations, seed, standardize)?;
        stats.copy_from_slice(&r.statistics);
        ps.copy_from_slice(&r.p_values);
        Ok(())
    })
}

/// Random-projections test. `bonferroni` selects Bonferroni instead of the
/// Benjamini–Heller combination.
///
/// # Safety
/// `a` and `b` must be live handles and both outputs must point to one double.
#[no_mangle]
pub unsafe extern "C" fn setest_rpbt_test(
    a: *const SetestDataset,
    b: *const SetestDataset,
    projections: usize,
    seed: u64,
    bonferroni: bool,
    statistic_out: *mut f64,
    p_value_out: *mut f64,
) -> SetestStatus {
    guard(|| {
        let (a, b) = (dataset(a, "a")?, dataset(b, "b")?);
        let stat = output(statistic_out, 1, "statistic_out")?;
        let p = output(p_value_out, 1, "p_value_out")?;
        let combination = if bonferroni {
            Combination::Bonferroni
        } else {
            Combination::BenjaminiHeller
        };
        let r = rpbt_test_with(a, b, projections, seed, combination)?;
        stat[0] = r.statistics[0];
        p[0] = r.p_values[0];
        Ok(())
    })
}

/// KL(Dir(a) ‖ Dir(b)) for concentration vectors of length `d`.
///
/// # Safety
/// `a` and `b` must point to `d` doubles and `out` to one double.
#[no_mangle]
pub unsafe extern "C" fn setest_kl_dirichlet(a: *const f64, b: *const f64, d: usize, out: *mut f64) -> SetestStatus {
    guard(|| {
        let pa = DirichletParams::new(input(a, d, "a")?.to_vec())?;
        let pb = DirichletParams::new(input(b, d, "b")?.to_vec())?;
        output(out, 1, "out")?[0] = kl_dirichlet(&pa, &pb)?;
        Ok(())
    })
}
