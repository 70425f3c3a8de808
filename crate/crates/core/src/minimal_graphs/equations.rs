//! Pointwise equations of the minimal-graph problem written in terms of
//! `μ = arccoth F` and `C = cosh 2μ`.

use crate::error::{Error, Result};
use crate::jet::{Jet, Real};
use crate::tolerances::{TAU, TAU_SING};

use super::{FirstIntegrals, Sign};

fn require_order(j: &Jet, order: u8, what: &str) -> Result<()> {
    if j.order < order {
        Err(Error::DegreeViolation(format!("{what} needs a jet of order ≥ {order}, got {}", j.order)))
    } else {
        Ok(())
    }
}

/// `(θ_x, θ_y)` forced on the angle of `∇u` by the minimal surface equation
/// and the symmetry of `u_xy`.
pub fn theta_gradient(mu: &Jet, theta: f64) -> Result<(f64, f64)> {
    require_order(mu, 1, "theta_gradient")?;
    let s = (2.0 * mu.value).sinh();
    if s.abs() < TAU_SING {
        return Err(Error::Singularity(format!("sinh 2μ = {s}")));
    }
    let c = (2.0 * mu.value).cosh();
    let (s2, c2) = (2.0 * theta).sin_cos();
    let tx = (s2 * mu.dx - (c + c2) * mu.dy) / s;
    let ty = (-s2 * mu.dy + (c - c2) * mu.dx) / s;
    Ok((tx, ty))
}

/// Coefficients of the second-order relation
/// `coef_cos·cos 2θ + coef_sin·sin 2θ = rhs` and its discriminant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityData {
    pub coef_cos: f64,
    pub coef_sin: f64,
    pub rhs: f64,
    /// `Δ − rhs²`; real angles exist only when this is non-negative.
    pub p: f64,
    /// `coef_cos² + coef_sin²`.
    pub delta: f64,
}

pub fn compatibility_data(mu: &Jet) -> Result<CompatibilityData> {
    require_order(mu, 2, "compatibility_data")?;
    let coef_cos = mu.dxx - mu.dyy;
    let coef_sin = 2.0 * mu.dxy;
    let rhs = (mu.dxx + mu.dyy) * (2.0 * mu.value).cosh();
    let delta = coef_cos * coef_cos + coef_sin * coef_sin;
    Ok(CompatibilityData { coef_cos, coef_sin, rhs, p: delta - rhs * rhs, delta })
}

/// One branch of `(cos 2θ, sin 2θ)` from the second derivatives of μ, over
/// any scalar type so the same expression yields jets of the branch.
pub(crate) fn branch<T: Real>(mxx: T, mxy: T, myy: T, cosh2mu: T, sign: Sign) -> (T, T) {
    let cc = mxx - myy;
    let cs = mxy.scale(2.0);
    let rhs = (mxx + myy) * cosh2mu;
    let delta = cc * cc + cs * cs;
    let root = (delta - rhs * rhs).sqrt().scale(sign.value());
    let cos2 = (cc * rhs - cs * root) / delta;
    let sin2 = (cs * rhs + cc * root) / delta;
    (cos2, sin2)
}

/// The two solutions `(cos 2θ, sin 2θ)` of the second-order relation,
/// `[plus, minus]`.
pub fn two_theta_solutions(mu: &Jet) -> Result<[(f64, f64); 2]> {
    let d = compatibility_data(mu)?;
    if d.delta <= TAU {
        return Err(Error::DegenerateDelta(d.delta));
    }
    // Round-off can push a genuine double root slightly negative.
    if d.p < -TAU * d.delta.max(1.0) {
        return Err(Error::NoRealSolution(d.p));
    }
    let c2 = (2.0 * mu.value).cosh();
    let pick = |s| {
        let (c, s) = branch(mu.dxx, mu.dxy, mu.dyy, c2, s);
        (c, s)
    };
    if d.p <= 0.0 {
        let v = (d.coef_cos * d.rhs / d.delta, d.coef_sin * d.rhs / d.delta);
        return Ok([v, v]);
    }
    Ok([pick(Sign::Plus), pick(Sign::Minus)])
}

/// Jets (order one lower than `mu`'s second derivatives) of a branch's
/// `(cos 2θ, sin 2θ)`. Needs `mu` of order 3 to carry first derivatives.
pub fn branch_jets(mu: &Jet, sign: Sign) -> Result<(Jet, Jet)> {
    require_order(mu, 2, "branch_jets")?;
    let d = compatibility_data(mu)?;
    if d.delta <= TAU {
        return Err(Error::DegenerateDelta(d.delta));
    }
    if d.p <= 0.0 {
        return Err(Error::NoRealSolution(d.p));
    }
    let mx = mu.partial_x();
    let my = mu.partial_y();
    let mxx = mx.partial_x();
    let mxy = mx.partial_y();
    let myy = my.partial_y();
    let c2 = mu.truncate(mxx.order).scale(2.0).cosh();
    Ok(branch(mxx, mxy, myy, c2, sign))
}

/// Residuals of the third-order system satisfied by `C = cosh 2μ` whenever
/// both angle branches integrate.
pub fn c_system_residual(c: &Jet) -> Result<[f64; 4]> {
    require_order(c, 3, "c_system_residual")?;
    if c.value.abs() <= TAU_SING {
        return Err(Error::Singularity(format!("C = {}", c.value)));
    }
    let v = c.value;
    Ok([
        c.dxxx - (c.dx * c.dxx - c.dx * c.dyy + c.dy * c.dxy) / v,
        c.dxxy - c.dx * c.dxy / v,
        c.dxyy - c.dy * c.dxy / v,
        c.dyyy - (c.dy * c.dyy - c.dy * c.dxx + c.dx * c.dxy) / v,
    ])
}

pub fn first_integrals(c: &Jet) -> Result<FirstIntegrals> {
    require_order(c, 2, "first_integrals")?;
    if c.value.abs() <= TAU_SING {
        return Err(Error::Singularity(format!("C = {}", c.value)));
    }
    Ok(FirstIntegrals {
        a1: c.dxy / c.value,
        a2: (c.dxx - c.dyy) / c.value,
        a3: c.value * (c.dxx + c.dyy) - c.dx * c.dx - c.dy * c.dy,
    })
}

/// Expanded minimal surface operator divided by `(1 + |∇u|²)^{3/2}`.
pub fn minimal_residual(u: &Jet) -> f64 {
    debug_assert!(u.order >= 2);
    let (ux, uy) = (u.dx, u.dy);
    let w = 1.0 + ux * ux + uy * uy;
    ((1.0 + uy * uy) * u.dxx - 2.0 * ux * uy * u.dxy + (1.0 + ux * ux) * u.dyy) / (w * w.sqrt())
}

/// Half of Scherk's fifth surface `sinh x · sinh u = cos(y + ψ)` over `x > 0`,
/// with the gradient angle `θ` of `u`.
///
/// `tan θ = tanh x · tan(y + ψ)`; the quadrant is the one for which
/// `∇u = (cos θ, sin θ)/sinh x`, and the value returned is the principal one
/// in `(−π, π]`.
pub fn scherk_closed_form(x: f64, y: f64, psi: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::DomainViolation(format!("Scherk graph needs x > 0, got {x}")));
    }
    let s = y + psi;
    let u = (s.cos() / x.sinh()).asinh();
    let theta = f64::atan2(-x.sinh() * s.sin(), -x.cosh() * s.cos());
    Ok((u, theta))
}

/// Third-order jet of the Scherk graph.
pub fn scherk_u_jet(x: f64, y: f64, psi: f64) -> Result<Jet> {
    if !(x > 0.0) {
        return Err(Error::DomainViolation(format!("Scherk graph needs x > 0, got {x}")));
    }
    let (xj, yj) = Jet::coords(x, y);
    Ok(((yj + Jet::constant(psi)).cos() / xj.sinh()).asinh())
}

/// Jets of `(u_x, u_y) = (cos θ, sin θ)/sinh μ` from jets of `μ` and `θ`.
pub fn graph_gradient_jets(mu: &Jet, theta: &Jet) -> (Jet, Jet) {
    let order = mu.order.min(theta.order);
    let sh = mu.truncate(order).sinh();
    let th = theta.truncate(order);
    (th.cos() / sh, th.sin() / sh)
}
