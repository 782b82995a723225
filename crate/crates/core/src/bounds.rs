//! Radius-of-convergence bounds for the virial series.
//!
//! `T1` and `T1'` are summed in double-double arithmetic. Near the edge of
//! the disc `|x| < 1/e` the series needs ~10^5 terms, so coefficients are
//! stored as `c_n = n^n / ((n+1)! e^n)` and summed in `y = e x`.

use std::fmt::Write as _;
use std::sync::RwLock;

use rayon::prelude::*;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Positive-potential radius coefficient at `u = 1` quoted in the literature.
pub const REFERENCE_POSITIVE_ALPHA: f64 = 0.237961;
/// Lebowitz–Penrose radius coefficient at `u = 1` quoted in the literature.
pub const REFERENCE_LP_ALPHA: f64 = 0.144766998;
/// Default solver tolerance.
pub const DEFAULT_TOL: f64 = 1e-13;
/// Most series terms a single evaluation may use.
pub const MAX_TERMS: usize = 20_000_000;

const INV_E: f64 = 0.36787944117144233;
/// Absolute tail bound used inside the solvers.
const INNER_TAIL: f64 = 1e-27;

static SCALED_COEFFS: RwLock<Vec<TwoFloat>> = RwLock::new(Vec::new());

/// `c_1, …, c_len` (index 0 holds `c_1`).
fn scaled_coeffs(len: usize) -> std::sync::RwLockReadGuard<'static, Vec<TwoFloat>> {
    {
        let read = SCALED_COEFFS.read().unwrap();
        if read.len() >= len {
            return read;
        }
    }
    {
        let mut write = SCALED_COEFFS.write().unwrap();
        let target = len.max(write.len() * 2).max(1024);
        if write.is_empty() {
            write.push(TwoFloat::from(0.5) / twofloat::consts::E);
        }
        while write.len() < target {
            // c_n / c_{n-1} = n/(n+1) · exp(m ln(1 + 1/m) - 1), m = n - 1.
            let n = write.len() + 1;
            let m = TwoFloat::from((n - 1) as f64);
            let g = m * (TwoFloat::from(1.0) / m).ln_1p() - 1.0;
            let ratio = g.exp() * (n as f64) / ((n + 1) as f64);
            let next = *write.last().unwrap() * ratio;
            write.push(next);
        }
    }
    SCALED_COEFFS.read().unwrap()
}

#[derive(Debug, Clone, Copy)]
struct T1Values {
    value: TwoFloat,
    derivative: TwoFloat,
}

/// `T1(x)` and `T1'(x)` with each truncation tail below `tail`.
fn t1_pair(x: TwoFloat, tail: f64) -> Result<T1Values> {
    let xf = f64::from(x);
    if !(0.0..INV_E).contains(&xf) {
        return Err(Error::InvalidArgument(format!("x = {xf} lies outside [0, 1/e)")));
    }
    let y = x * twofloat::consts::E;
    let yf = f64::from(y);
    if yf >= 1.0 {
        return Err(Error::NotConverged { x: xf, reason: "x rounds onto the edge of the disc".into() });
    }
    let factor = yf / (1.0 - yf);
    let mut chunk = 4096usize;
    let mut start = 0usize;
    let mut power = TwoFloat::from(1.0);
    let mut s = TwoFloat::from(0.0);
    let mut ds = TwoFloat::from(0.0);
    loop {
        let coeffs = scaled_coeffs(start + chunk);
        for (k, c) in coeffs[start..start + chunk].iter().enumerate() {
            let n = start + k + 1;
            power *= y;
            let term = *c * power;
            s += term;
            ds += term * ((n + 1) as f64);
            let bound = f64::from(term) * (n + 2) as f64 * factor;
            if bound <= tail {
                return Ok(T1Values { value: x + x * s, derivative: ds + 1.0 });
            }
        }
        start += chunk;
        if start >= MAX_TERMS {
            return Err(Error::NotConverged { x: xf, reason: format!("tail still above {tail:e} after {start} terms") });
        }
        chunk = chunk.min(MAX_TERMS - start).max(1);
    }
}

fn check_x(x: f64, tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if !(0.0..INV_E).contains(&x) {
        return Err(Error::InvalidArgument(format!("x = {x} lies outside [0, 1/e)")));
    }
    Ok(())
}

/// `T1(x)` with truncation error below `tol`.
pub fn t1_eval(x: f64, tol: f64) -> Result<f64> {
    check_x(x, tol)?;
    Ok(t1_pair(TwoFloat::from(x), tol)?.value.into())
}

/// `T1'(x)` with truncation error below `tol`.
pub fn t1_prime_eval(x: f64, tol: f64) -> Result<f64> {
    check_x(x, tol)?;
    Ok(t1_pair(TwoFloat::from(x), tol)?.derivative.into())
}

fn bisect_f64(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::Bracket(format!("no sign change on [{lo}, {hi}]: f = {flo}, {fhi}")));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(if -f(lo) <= f(hi) { lo } else { hi });
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn check_u(u: f64, tol: f64) -> Result<()> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::InvalidArgument(format!("u must be positive and finite, got {u}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Root `t ∈ (0, 1)` of `e^{-t} / (1 - t) = 1 + u`, as `-t - ln(1 - t) - ln(1 + u) = 0`.
pub fn solve_t(u: f64, tol: f64) -> Result<f64> {
    check_u(u, tol)?;
    let target = u.ln_1p();
    bisect_f64(0.0, 1.0 - f64::EPSILON, |t| -t - (-t).ln_1p() - target)
}

/// Residual of the `t` equation in logarithmic form.
pub fn residual_t(u: f64, t: f64) -> f64 {
    -t - (-t).ln_1p() - u.ln_1p()
}

/// Smallest positive root of `α e^{-α} = 1 / ((1 + u) e)`.
pub fn solve_alpha(u: f64, tol: f64) -> Result<f64> {
    check_u(u, tol)?;
    bisect_f64(0.0, 1.0, |a| residual_alpha(u, a))
}

/// `α e^{1-α} (1 + u) - 1`.
pub fn residual_alpha(u: f64, alpha: f64) -> f64 {
    alpha * (1.0 - alpha).exp() * (1.0 + u) - 1.0
}

/// `c T1'(uc) - T1(uc)/u - 1` evaluated at `x = uc`.
fn residual_c_at(u: f64, x: TwoFloat) -> Result<TwoFloat> {
    let v = t1_pair(x, INNER_TAIL)?;
    Ok((x * v.derivative - v.value) / u - 1.0)
}

/// Smallest positive root of `u c T1'(uc) - T1(uc) = u`, returned as
/// `(c, residual)` with the residual in the normalized form
/// `c T1'(uc) - T1(uc)/u - 1`.
pub fn solve_c(u: f64, tol: f64) -> Result<(f64, f64)> {
    check_u(u, tol)?;
    let (x, residual) = solve_uc(u)?;
    if residual.abs() > tol {
        return Err(Error::NotConverged { x: f64::from(x), reason: format!("residual {residual:e} above {tol:e}") });
    }
    Ok((f64::from(x / u), residual))
}

fn solve_uc(u: f64) -> Result<(TwoFloat, f64)> {
    // F(x) = x T1'(x) - T1(x) increases from 0 to infinity on [0, 1/e).
    let mut lo = TwoFloat::from(0.0);
    let edge = TwoFloat::from(1.0) / twofloat::consts::E;
    let mut gap = 0.5;
    let mut hi = edge * (1.0 - gap);
    while f64::from(residual_c_at(u, hi)?) <= 0.0 {
        lo = hi;
        gap *= 0.5;
        if gap < 1e-15 {
            return Err(Error::Bracket(format!("u = {u} pushes the root within rounding of 1/e")));
        }
        hi = edge * (1.0 - gap);
    }
    for _ in 0..128 {
        let mid = (lo + hi) * 0.5;
        if mid <= lo || mid >= hi {
            break;
        }
        if f64::from(residual_c_at(u, mid)?) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (rlo, rhi) = (f64::from(residual_c_at(u, lo)?), f64::from(residual_c_at(u, hi)?));
    Ok(if rlo.abs() <= rhi.abs() { (lo, rlo) } else { (hi, rhi) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    pub u: f64,
    pub t: f64,
    pub c: f64,
    pub alpha: f64,
    pub radius_coeff: f64,
    pub residual_c: f64,
    pub residual_t: f64,
    pub residual_alpha: f64,
}

impl BoundResult {
    pub fn equivalence_gap(&self) -> f64 {
        (self.radius_coeff - self.alpha).abs()
    }

    /// `u·c - t e^{-t}`.
    pub fn reparametrization_gap(&self) -> f64 {
        (self.u * self.c - self.t * (-self.t).exp()).abs()
    }

    pub const CSV_HEADER: &'static str = "u,t,c,alpha,radius_coeff,residual_c,residual_alpha";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            sci(self.u),
            sci(self.t),
            sci(self.c),
            sci(self.alpha),
            sci(self.radius_coeff),
            sci(self.residual_c),
            sci(self.residual_alpha)
        )
    }
}

/// Fixed 15-significant-digit scientific notation.
pub fn sci(x: f64) -> String {
    format!("{x:.14e}")
}

/// Solves for `c`, `t` and `α` at `u` and checks `c / (1 + T1(uc)/u) = α`
/// within `10·tol`.
pub fn radius_bound(u: f64, tol: f64) -> Result<BoundResult> {
    check_u(u, tol)?;
    let (x, residual_c) = solve_uc(u)?;
    if residual_c.abs() > tol {
        return Err(Error::NotConverged { x: f64::from(x), reason: format!("c residual {residual_c:e} above {tol:e}") });
    }
    let t1 = t1_pair(x, INNER_TAIL)?.value;
    let c = x / u;
    let radius = c / (t1 / u + 1.0);
    let t = solve_t(u, tol)?;
    let alpha = solve_alpha(u, tol)?;
    let result = BoundResult {
        u,
        t,
        c: c.into(),
        alpha,
        radius_coeff: radius.into(),
        residual_c,
        residual_t: residual_t(u, t),
        residual_alpha: residual_alpha(u, alpha),
    };
    if result.equivalence_gap() > 10.0 * tol {
        return Err(Error::EquivalenceViolation { radius: result.radius_coeff, alpha, tolerance: 10.0 * tol });
    }
    Ok(result)
}

/// `n` points from `a` to `b` equally spaced in `ln u`; a point within
/// rounding of `u = 1` is snapped to exactly 1.
pub fn log_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a > 0.0 && b >= a && a.is_finite() && b.is_finite()) || n == 0 || (n == 1 && a != b) {
        return Err(Error::InvalidArgument(format!("bad grid: [{a}, {b}] with {n} points")));
    }
    let (la, lb) = (a.ln(), b.ln());
    Ok((0..n)
        .map(|k| {
            if k == 0 {
                return a;
            }
            if k == n - 1 {
                return b;
            }
            let l = la + (lb - la) * k as f64 / (n - 1) as f64;
            if l.abs() < 1e-12 {
                1.0
            } else {
                l.exp()
            }
        })
        .collect())
}

/// [`radius_bound`] at every `u`, in input order.
pub fn bounds_grid(us: &[f64], tol: f64, parallel: bool) -> Result<Vec<BoundResult>> {
    if parallel {
        us.par_iter().map(|&u| radius_bound(u, tol)).collect()
    } else {
        us.iter().map(|&u| radius_bound(u, tol)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VirialBoundRow {
    pub n: usize,
    pub bound: f64,
}

/// `|β_{n+1}| / (n+1)! ≤ C^n / (n+1) · ((1 + T1(uc)/u) / c)^n` for
/// `n = 1..=nmax`.
pub fn virial_bound_table(u: f64, temperedness: f64, nmax: usize, tol: f64) -> Result<Vec<VirialBoundRow>> {
    if !(temperedness > 0.0) {
        return Err(Error::InvalidArgument(format!("temperedness must be positive, got {temperedness}")));
    }
    check_u(u, tol)?;
    let (x, _) = solve_uc(u)?;
    let t1 = t1_pair(x, INNER_TAIL)?.value;
    let ratio = f64::from((t1 / u + 1.0) / (x / u)) * temperedness;
    Ok((1..=nmax)
        .map(|n| VirialBoundRow { n, bound: ratio.powi(n as i32) / (n + 1) as f64 })
        .collect())
}

/// Figure-style CSV: `u, groeneveld_bound, lp_bound`, the last column filled
/// only at `u = 1`.
pub fn curve_csv(results: &[BoundResult]) -> String {
    let mut out = String::from("u,groeneveld_bound,lp_bound\n");
    for r in results {
        let lp = if r.u == 1.0 { sci(REFERENCE_LP_ALPHA) } else { String::new() };
        writeln!(out, "{},{},{lp}", sci(r.u), sci(r.radius_coeff)).unwrap();
    }
    out
}
