//! Scalar root bracketing and refinement.

use crate::error::{Error, Result};

/// Brent's method on a bracket `[a, b]` with `f(a)`, `f(b)` of opposite sign
/// (or one of them zero). Stops when the bracket is below `xtol`.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::BracketingFailure(format!(
            "no sign change on [{a}, {b}] (f = {fa:e}, {fb:e})"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::BracketingFailure(format!(
                "non-finite residual at {b}"
            )));
        }
    }
    Err(Error::BracketingFailure("brent did not converge".into()))
}

/// All sign-change roots of `f` on the open interval `(lo, hi)`, found by a
/// uniform scan with `cells` cells and refined with [`brent`].
///
/// The endpoints themselves are never reported; exact zeros at interior
/// grid nodes are.
pub fn scan_roots<F>(mut f: F, lo: f64, hi: f64, cells: usize, xtol: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> f64,
{
    let grid: Vec<f64> = (0..=cells)
        .map(|k| lo + (hi - lo) * k as f64 / cells as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&u| f(u)).collect();
    scan_sampled(&mut f, &grid, &values, xtol)
}

/// Root refinement over pre-sampled values; endpoints excluded.
pub fn scan_sampled<F>(f: &mut F, grid: &[f64], values: &[f64], xtol: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> f64 + ?Sized,
{
    let n = grid.len();
    let mut roots = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let (fa, fb) = (values[k], values[k + 1]);
        if k > 0 && fa == 0.0 {
            roots.push(grid[k]);
            continue;
        }
        if fa == 0.0 || fb == 0.0 || !fa.is_finite() || !fb.is_finite() {
            continue;
        }
        if fa.signum() != fb.signum() {
            roots.push(brent(&mut *f, grid[k], grid[k + 1], xtol)?);
        }
    }
    Ok(roots)
}

/// Bisection for a monotone function on `[lo, hi]`; returns the point where
/// `f` crosses `target`, clamped to the interval.
pub fn invert_monotone<F>(f: F, target: f64, lo: f64, hi: f64, xtol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let (flo, fhi) = (f(lo), f(hi));
    let increasing = fhi >= flo;
    let (mut a, mut b) = (lo, hi);
    if (increasing && target <= flo) || (!increasing && target >= flo) {
        return lo;
    }
    if (increasing && target >= fhi) || (!increasing && target <= fhi) {
        return hi;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol || m == a || m == b {
            return m;
        }
        let below = f(m) < target;
        if below == increasing {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
