//! One-dimensional quadrature used for path and loop integrals.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson quadrature with interval bisection.
///
/// The interval is first split into `panels` equal pieces; each piece is
/// bisected until the Simpson estimate on it agrees with its two halves to
/// within the local share of `tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64, panels: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == panels { b } else { lo + h };
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        let whole = simpson(lo, hi, fa, fm, fb);
        total += refine(&f, lo, hi, fa, fm, fb, whole, tol / panels as f64, MAX_DEPTH)?;
    }
    Ok(total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::QuadratureFailure { tol, estimate: delta });
    }
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure { tol, estimate: delta.abs() / 15.0 });
    }
    Ok(refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Five-point Gauss–Legendre nodes and weights on `[-1, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
];

/// Nodes of the five-point rule mapped to `[0, 1]`, with weights summing to 1.
pub fn gauss_legendre_unit() -> [(f64, f64); 5] {
    GL5.map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
}

/// Composite five-point Gauss–Legendre rule on `n` equal panels.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n.max(1) as f64;
    (0..n.max(1))
        .map(|k| {
            let lo = a + k as f64 * h;
            gauss_legendre_unit().iter().map(|&(t, w)| w * f(lo + t * h)).sum::<f64>() * h
        })
        .sum()
}
