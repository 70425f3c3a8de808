//! Path integration of `du = (cos θ dx + sin θ dy)/sinh μ`.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quadrature::gauss_legendre_unit;

use super::equations::{branch_jets, graph_gradient_jets, theta_gradient, two_theta_solutions};
use super::{half_angle_near, lift_step, seed_angle, DensityFamily, Sign};

/// How the gradient angle is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaChoice {
    /// A branch of the second-order relation; for families with curved `μ`.
    Branch(Sign),
    /// The angle at the path start; for families with affine `μ`, where the
    /// angle is carried along by the first-order system.
    Phase(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub points: Vec<(f64, f64)>,
    /// Graph values with `u = 0` at the first point.
    pub u: Vec<f64>,
    /// Continuous lift of the gradient angle.
    pub theta: Vec<f64>,
}

const BRANCH_PANEL: f64 = 0.05;
const RK_STEP: f64 = 0.002;

pub fn reconstruct_u(path: &[(f64, f64)], family: &DensityFamily, choice: ThetaChoice) -> Result<Reconstruction> {
    family.validate()?;
    let Some(&first) = path.first() else {
        return Ok(Reconstruction { points: vec![], u: vec![], theta: vec![] });
    };
    match (family.is_degenerate(), choice) {
        (true, ThetaChoice::Phase(theta0)) => integrate_affine(path, family, first, theta0),
        (false, ThetaChoice::Branch(sign)) => integrate_branch(path, family, first, sign),
        (true, _) => Err(Error::ParamViolation(format!("{family:?} has no angle branches; give a phase"))),
        (false, _) => Err(Error::ParamViolation(format!("{family:?} fixes the angle by a branch choice"))),
    }
}

fn integrate_affine(
    path: &[(f64, f64)],
    family: &DensityFamily,
    first: (f64, f64),
    theta0: f64,
) -> Result<Reconstruction> {
    let rate = |x: f64, y: f64, th: f64, dx: f64, dy: f64| -> Result<(f64, f64)> {
        let mu = family.mu_jet(x, y)?;
        let (tx, ty) = theta_gradient(&mu, th)?;
        Ok((tx * dx + ty * dy, (th.cos() * dx + th.sin() * dy) / mu.value.sinh()))
    };
    family.check_domain(first.0, first.1)?;
    let (mut th, mut u) = (theta0, 0.0);
    let mut out = Reconstruction { points: vec![first], u: vec![0.0], theta: vec![theta0] };
    for w in path.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let (dx, dy) = (x1 - x0, y1 - y0);
        let steps = ((dx.hypot(dy) / RK_STEP).ceil() as usize).max(1);
        let h = 1.0 / steps as f64;
        for k in 0..steps {
            let s = k as f64 * h;
            let (xa, ya) = (x0 + s * dx, y0 + s * dy);
            let (xm, ym) = (xa + 0.5 * h * dx, ya + 0.5 * h * dy);
            let (xb, yb) = (xa + h * dx, ya + h * dy);
            let k1 = rate(xa, ya, th, dx, dy)?;
            let k2 = rate(xm, ym, th + 0.5 * h * k1.0, dx, dy)?;
            let k3 = rate(xm, ym, th + 0.5 * h * k2.0, dx, dy)?;
            let k4 = rate(xb, yb, th + h * k3.0, dx, dy)?;
            th += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            u += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        out.points.push((x1, y1));
        out.u.push(u);
        out.theta.push(th);
    }
    Ok(out)
}

/// Branch value of `(cos 2θ, sin 2θ)` and `sinh μ` at a point.
fn branch_at(family: &DensityFamily, x: f64, y: f64, sign: Sign) -> Result<(f64, f64, f64)> {
    let mu = family.mu_jet(x, y)?;
    let pair = two_theta_solutions(&mu)?;
    let (c2, s2) = if sign == Sign::Plus { pair[0] } else { pair[1] };
    Ok((c2, s2, mu.value.sinh()))
}

fn integrate_branch(
    path: &[(f64, f64)],
    family: &DensityFamily,
    first: (f64, f64),
    sign: Sign,
) -> Result<Reconstruction> {
    let (c2, s2, _) = branch_at(family, first.0, first.1, sign)?;
    let (mut th, mut u) = (seed_angle(c2, s2, Sign::Plus), 0.0);
    let mut out = Reconstruction { points: vec![first], u: vec![0.0], theta: vec![th] };
    let nodes = gauss_legendre_unit();
    let mut step_index = 0;
    for w in path.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let (dx, dy) = (x1 - x0, y1 - y0);
        let panels = ((dx.hypot(dy) / BRANCH_PANEL).ceil() as usize).max(1);
        let h = 1.0 / panels as f64;
        for k in 0..panels {
            let (sa, sb) = (k as f64 * h, (k + 1) as f64 * h);
            let (c2, s2, _) = branch_at(family, x0 + sb * dx, y0 + sb * dy, sign)?;
            let th_end = lift_step(th, c2, s2, step_index)?;
            step_index += 1;
            let mut acc = 0.0;
            for &(t, wgt) in &nodes {
                let s = sa + t * h;
                let (c2, s2, sh) = branch_at(family, x0 + s * dx, y0 + s * dy, sign)?;
                let reference = th + t * (th_end - th);
                let a = half_angle_near(c2, s2, reference);
                acc += wgt * (a.cos() * dx + a.sin() * dy) / sh;
            }
            u += acc * h;
            th = th_end;
        }
        out.points.push((x1, y1));
        out.u.push(u);
        out.theta.push(th);
    }
    Ok(out)
}

/// Second-order jet of the graph through `(x, y)` with value `u` and angle
/// `theta`, assembled from the angle's own first derivatives.
pub fn graph_jet(family: &DensityFamily, x: f64, y: f64, u: f64, theta: f64, choice: ThetaChoice) -> Result<Jet> {
    let mu = family.mu_jet(x, y)?;
    let theta_jet = match choice {
        ThetaChoice::Phase(_) => {
            let (tx, ty) = theta_gradient(&mu, theta)?;
            Jet::first_order(theta, tx, ty)
        }
        ThetaChoice::Branch(sign) => {
            let (c, s) = branch_jets(&mu, sign)?;
            let (cv, sv) = (c.value, s.value);
            Jet::first_order(
                theta,
                0.5 * (cv * s.dx - sv * c.dx),
                0.5 * (cv * s.dy - sv * c.dy),
            )
        }
    };
    let (ux, uy) = graph_gradient_jets(&mu, &theta_jet);
    Ok(Jet::second_order(u, ux.value, uy.value, ux.dx, ux.dy, uy.dy))
}

/// A two-leg path from `start` to `end`, `x` first when `x_first`, with
/// `steps` samples per leg.
pub fn staircase_path(start: (f64, f64), end: (f64, f64), steps: usize, x_first: bool) -> Vec<(f64, f64)> {
    let n = steps.max(1);
    let corner = if x_first { (end.0, start.1) } else { (start.0, end.1) };
    let mut out = Vec::with_capacity(2 * n + 1);
    for (a, b) in [(start, corner), (corner, end)] {
        for k in 0..n {
            let s = k as f64 / n as f64;
            out.push((a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1)));
        }
    }
    out.push(end);
    out
}
