//! Calabi's isosystolic Lagrangian `L = 2pq/√((2pq)² − (p² + q² − 1)²)` with a
//! prescribed density `L = 1/sin 2φ`, and the angle system it forces.
//!
//! On the prescribed-density ellipse the gradient is
//! `(p, q) = (cos(θ − φ), cos(θ + φ))/sin 2φ`; closedness of `p dx + q dy` and of
//! the Euler–Lagrange form `ψ` then fix `d(2θ)` as an affine function of
//! `(cos 2θ, sin 2θ)`. Its coefficients and the second-order obstruction are
//! recovered by probing that affine function at three angles, with every
//! spatial derivative carried by jets.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::jet::{Dual, Jet, Real};
use crate::tolerances::TAU_SING;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientPair {
    pub p: f64,
    pub q: f64,
}

impl GradientPair {
    pub fn new(p: f64, q: f64) -> Self {
        GradientPair { p, q }
    }

    /// `p² + q² > 1` and `|p² − q²| < 1`.
    pub fn is_elliptic(&self) -> bool {
        let (p2, q2) = (self.p * self.p, self.q * self.q);
        p2 + q2 > 1.0 && (p2 - q2).abs() < 1.0
    }
}

/// `(2pq)² − (p² + q² − 1)² = (1 − (p − q)²)((p + q)² − 1)`.
pub fn radicand<T: Real>(p: T, q: T) -> T {
    let one = T::cst(1.0);
    let d = p - q;
    let s = p + q;
    (one - d * d) * (s * s - one)
}

fn density<T: Real>(p: T, q: T) -> T {
    (p * q).scale(2.0) / radicand(p, q).sqrt()
}

fn psi<T: Real>(p: T, q: T) -> (T, T) {
    let one = T::cst(1.0);
    let d = radicand(p, q);
    let den = d * d.sqrt();
    let (p2, q2) = (p * p, q * q);
    let nx = (p2 * p2 - q2 * q2 - p2.scale(2.0) + one) * p;
    let ny = -((q2 * q2 - p2 * p2 - q2.scale(2.0) + one) * q);
    (nx / den, ny / den)
}

fn ellipse<T: Real>(phi: T, theta: T) -> (T, T) {
    let s = phi.scale(2.0).sin();
    ((theta - phi).cos() / s, (theta + phi).cos() / s)
}

fn check_radicand(g: &GradientPair) -> Result<f64> {
    let d = radicand(g.p, g.q);
    if d <= TAU_SING {
        return Err(Error::Singularity(format!("radicand {d} at ({}, {})", g.p, g.q)));
    }
    Ok(d)
}

/// The Lagrangian on the elliptic range.
pub fn lagrangian_l(g: GradientPair) -> Result<f64> {
    if !g.is_elliptic() {
        return Err(Error::DomainViolation(format!("({}, {}) is outside the elliptic range", g.p, g.q)));
    }
    check_radicand(&g)?;
    Ok(density(g.p, g.q))
}

/// Band metric `|α dx + β dy|² = α² + β² + 2fαβ` of a level function `F`,
/// with its area density.
pub fn band_metric(f_jet: &Jet) -> Result<(f64, f64)> {
    let (fx, fy) = (f_jet.dx, f_jet.dy);
    if (fx * fy).abs() <= TAU_SING {
        return Err(Error::Singularity(format!("F_x F_y = {}", fx * fy)));
    }
    let f = (1.0 - fx * fx - fy * fy) / (2.0 * fx * fy);
    if f.abs() >= 1.0 {
        return Err(Error::NotPositiveDefinite(f));
    }
    let g = GradientPair::new(fx, fy);
    check_radicand(&g)?;
    Ok((f, density(fx, fy)))
}

fn check_phi(phi: f64) -> Result<()> {
    if phi > 0.0 && phi < FRAC_PI_4 {
        Ok(())
    } else {
        Err(Error::RangeViolation(format!("φ = {phi} is outside (0, π/4)")))
    }
}

/// Point of the prescribed-density ellipse with angle `theta`.
pub fn ellipse_param(phi: f64, theta: f64) -> Result<GradientPair> {
    check_phi(phi)?;
    if !(theta.abs() < FRAC_PI_2 - phi) {
        return Err(Error::RangeViolation(format!("|θ| = {} must be below π/2 − φ", theta.abs())));
    }
    let (p, q) = ellipse(phi, theta);
    Ok(GradientPair { p, q })
}

/// Components of the Euler–Lagrange form `ψ`. Only the radicand is checked,
/// so probes outside the elliptic range remain available.
pub fn psi_components(g: GradientPair) -> Result<(f64, f64)> {
    check_radicand(&g)?;
    Ok(psi(g.p, g.q))
}

/// `dx∧dy` coefficient of `dψ` along a graph `z`; zero exactly when `z`
/// satisfies the Euler–Lagrange equation at the point.
pub fn el_residual(z: &Jet) -> Result<f64> {
    if z.order < 2 {
        return Err(Error::DegreeViolation(format!("el_residual needs order ≥ 2, got {}", z.order)));
    }
    let g = GradientPair::new(z.dx, z.dy);
    if !g.is_elliptic() {
        return Err(Error::DomainViolation(format!("({}, {}) is outside the elliptic range", g.p, g.q)));
    }
    check_radicand(&g)?;
    let (p, q) = (z.partial_x().truncate(1), z.partial_y().truncate(1));
    let (sx, sy) = psi(p, q);
    Ok(sy.dx - sx.dy)
}

/// `(θ_x, θ_y)` and the determinant of the linear system fixing them, from
/// `φ`, its first partials and the angle, over any scalar type.
fn angle_gradient<T: Real>(phi: T, phi_x: T, phi_y: T, theta: T) -> (T, T, T) {
    let by_phi = ellipse(Dual::variable(phi), Dual::constant(theta));
    let by_theta = ellipse(Dual::constant(phi), Dual::variable(theta));
    let (p, q) = (by_phi.0.re, by_phi.1.re);
    let (p_f, q_f, p_t, q_t) = (by_phi.0.eps, by_phi.1.eps, by_theta.0.eps, by_theta.1.eps);
    let by_p = psi(Dual::variable(p), Dual::constant(q));
    let by_q = psi(Dual::constant(p), Dual::variable(q));
    let (s1p, s2p, s1q, s2q) = (by_p.0.eps, by_p.1.eps, by_q.0.eps, by_q.1.eps);

    // q_x − p_y = 0
    let (a11, a12) = (q_t, -p_t);
    let b1 = p_f * phi_y - q_f * phi_x;
    // (ψ_2)_x − (ψ_1)_y = 0
    let a21 = s2p * p_t + s2q * q_t;
    let a22 = -(s1p * p_t + s1q * q_t);
    let b2 = (s1p * p_f + s1q * q_f) * phi_y - (s2p * p_f + s2q * q_f) * phi_x;

    let det = a11 * a22 - a12 * a21;
    let tx = (b1 * a22 - a12 * b2) / det;
    let ty = (a11 * b2 - a21 * b1) / det;
    (tx, ty, det)
}

fn require_phi_jet(phi: &Jet, order: u8) -> Result<()> {
    if phi.order < order {
        return Err(Error::DegreeViolation(format!("needs a φ-jet of order ≥ {order}, got {}", phi.order)));
    }
    check_phi(phi.value)
}

/// Gradient of the angle forced by the prescribed density and the
/// Euler–Lagrange equation.
pub fn theta_gradient_calabi(phi: &Jet, theta: f64) -> Result<(f64, f64)> {
    require_phi_jet(phi, 1)?;
    let (tx, ty, det) = angle_gradient(phi.value, phi.dx, phi.dy, theta);
    if det.abs() <= TAU_SING {
        return Err(Error::SingularSystem(det));
    }
    Ok((tx, ty))
}

/// Coefficients of `d(2θ) = cos 2θ ω₁ + sin 2θ ω₂ + ω₃` as `(dx, dy)` pairs,
/// and of the obstruction `A₁ cos 2θ + A₂ sin 2θ + A₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityData {
    pub omega1: (f64, f64),
    pub omega2: (f64, f64),
    pub omega3: (f64, f64),
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl CompatibilityData {
    /// `d(2θ)` predicted at angle `theta`.
    pub fn predict(&self, theta: f64) -> (f64, f64) {
        let (s, c) = (2.0 * theta).sin_cos();
        (
            c * self.omega1.0 + s * self.omega2.0 + self.omega3.0,
            c * self.omega1.1 + s * self.omega2.1 + self.omega3.1,
        )
    }

    pub fn obstruction(&self, theta: f64) -> f64 {
        let (s, c) = (2.0 * theta).sin_cos();
        self.a1 * c + self.a2 * s + self.a3
    }

    pub fn coefficients(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }
}

type OneForm = (Jet, Jet);

/// Jets of `ω₁, ω₂, ω₃` and of `A₁, A₂, A₃`.
fn extract_jets(phi: &Jet) -> Result<([OneForm; 3], [Jet; 3])> {
    let k = phi.order - 1;
    let (f, fx, fy) = (phi.truncate(k), phi.partial_x(), phi.partial_y());
    let probe = |two_theta: f64| -> Result<OneForm> {
        let (tx, ty, det) = angle_gradient(f, fx, fy, Jet::constant(0.5 * two_theta));
        if det.value.abs() <= TAU_SING {
            return Err(Error::SingularSystem(det.value));
        }
        Ok((tx.scale(2.0), ty.scale(2.0)))
    };
    let (v0, vh, vp) = (probe(0.0)?, probe(FRAC_PI_2)?, probe(PI)?);
    let w3 = ((v0.0 + vp.0).scale(0.5), (v0.1 + vp.1).scale(0.5));
    let w1 = ((v0.0 - vp.0).scale(0.5), (v0.1 - vp.1).scale(0.5));
    let w2 = (vh.0 - w3.0, vh.1 - w3.1);
    let d = |w: &OneForm| w.1.partial_x() - w.0.partial_y();
    let bracket = |a: &OneForm, b: &OneForm| a.0 * b.1 - a.1 * b.0;
    let a = [d(&w1) + bracket(&w3, &w2), d(&w2) + bracket(&w1, &w3), d(&w3) + bracket(&w1, &w2)];
    Ok(([w1, w2, w3], a))
}

pub fn compatibility_extract(phi: &Jet) -> Result<CompatibilityData> {
    require_phi_jet(phi, 2)?;
    let ([w1, w2, w3], [a1, a2, a3]) = extract_jets(phi)?;
    Ok(CompatibilityData {
        omega1: (w1.0.value, w1.1.value),
        omega2: (w2.0.value, w2.1.value),
        omega3: (w3.0.value, w3.1.value),
        a1: a1.value,
        a2: a2.value,
        a3: a3.value,
    })
}

/// Below this the obstruction coefficients count as identically zero.
const ZERO_OBSTRUCTION: f64 = 1e-12;

/// Angles `θ` with `|θ| < π/2 − φ` solving `A₁ cos 2θ + A₂ sin 2θ + A₃ = 0`,
/// in increasing order.
pub fn theta_candidates_from(a: [f64; 3], phi: f64) -> Result<Vec<f64>> {
    if a.iter().all(|v| v.abs() <= ZERO_OBSTRUCTION) {
        return Err(Error::DegenerateAllZero);
    }
    let r = a[0].hypot(a[1]);
    if r <= ZERO_OBSTRUCTION || a[2].abs() > r {
        return Ok(vec![]);
    }
    let base = f64::atan2(a[1], a[0]);
    let spread = (-a[2] / r).clamp(-1.0, 1.0).acos();
    let mut out: Vec<f64> = Vec::with_capacity(2);
    for two in [base - spread, base + spread] {
        let t = 0.5 * two;
        let t = t - PI * ((t + FRAC_PI_2) / PI).floor();
        if t.abs() < FRAC_PI_2 - phi && !out.iter().any(|o| (o - t).abs() < 1e-12) {
            out.push(t);
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// At most two admissible angles from the obstruction at a point.
pub fn two_theta_candidates(phi: &Jet) -> Result<Vec<f64>> {
    let data = compatibility_extract(phi)?;
    theta_candidates_from(data.coefficients(), phi.value)
}

/// `d(2θ)` of a branch of the obstruction, differentiated through the φ-jet,
/// minus the value the angle system prescribes. Needs φ to third order.
pub fn third_order_residual(phi: &Jet, theta: f64) -> Result<[f64; 2]> {
    require_phi_jet(phi, 3)?;
    let ([w1, w2, w3], [a1, a2, a3]) = extract_jets(phi)?;
    let vals = [a1.value, a2.value, a3.value];
    if vals.iter().all(|v| v.abs() <= ZERO_OBSTRUCTION) {
        return Err(Error::DegenerateAllZero);
    }
    let (s, c) = (2.0 * theta).sin_cos();
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let miss = vals[0] * c + vals[1] * s + vals[2];
    if miss.abs() > 1e-8 * scale {
        return Err(Error::RangeViolation(format!("θ = {theta} leaves the obstruction at {miss}")));
    }
    let den = vals[1] * c - vals[0] * s;
    if den.abs() <= 1e-10 * scale {
        return Err(Error::BranchCollision(den));
    }
    let dtwo_x = -(c * a1.dx + s * a2.dx + a3.dx) / den;
    let dtwo_y = -(c * a1.dy + s * a2.dy + a3.dy) / den;
    Ok([
        dtwo_x - (c * w1.0.value + s * w2.0.value + w3.0.value),
        dtwo_y - (c * w1.1.value + s * w2.1.value + w3.1.value),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::SQRT_2;

    /// φ = π/8 + x/10 + y²/50 as a third-order jet.
    fn fixture(x: f64, y: f64) -> Jet {
        let (xj, yj) = Jet::coords(x, y);
        Jet::constant(PI / 8.0) + xj.scale(0.1) + (yj * yj).scale(0.02)
    }

    #[test]
    fn lagrangian_values() {
        assert_relative_eq!(lagrangian_l(GradientPair::new(1.0, 1.0)).unwrap(), 2.0 / 3f64.sqrt(), epsilon = 1e-15);
        let a = lagrangian_l(GradientPair::new(1.1, 0.7)).unwrap();
        let b = lagrangian_l(GradientPair::new(0.7, 1.1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(lagrangian_l(GradientPair::new(-1.1, -0.7)).unwrap(), a);
        assert!(matches!(lagrangian_l(GradientPair::new(0.5, 0.5)), Err(Error::DomainViolation(_))));
        assert!(matches!(lagrangian_l(GradientPair::new(1.5, 0.2)), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn prescribed_density_on_the_ellipse() {
        for &(phi, theta) in &[(0.3, 0.1), (0.6, -0.5), (0.05, 0.04), (0.7, 0.69)] {
            let g = ellipse_param(phi, theta).unwrap();
            assert_relative_eq!(lagrangian_l(g).unwrap(), 1.0 / (2.0 * phi).sin(), epsilon = 1e-12);
            let e = g.p * g.p - 2.0 * (2.0 * phi).cos() * g.p * g.q + g.q * g.q;
            assert_relative_eq!(e, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ellipse_points() {
        let phi = 0.5;
        let g = ellipse_param(phi, 0.0).unwrap();
        assert_relative_eq!(g.p, 1.0 / (2.0 * phi.sin()), epsilon = 1e-15);
        assert_eq!(g.p, g.q);
        let g = ellipse_param(phi, phi).unwrap();
        assert_relative_eq!(g.p, 1.0 / (2.0 * phi).sin(), epsilon = 1e-15);
        assert_relative_eq!(g.q, (2.0 * phi).cos() / (2.0 * phi).sin(), epsilon = 1e-15);
        // limits at the ends of the admissible angle range
        let (p, q) = ellipse(phi, FRAC_PI_2 - phi);
        assert_relative_eq!(p, 1.0, epsilon = 1e-15);
        assert!(q.abs() < 1e-15);
        let (p, q) = ellipse(phi, -(FRAC_PI_2 - phi));
        assert!(p.abs() < 1e-15);
        assert_relative_eq!(q, 1.0, epsilon = 1e-15);
        assert!(matches!(ellipse_param(phi, 1.2), Err(Error::RangeViolation(_))));
        assert!(matches!(ellipse_param(0.9, 0.0), Err(Error::RangeViolation(_))));
    }

    #[test]
    fn elliptic_range_of_the_ellipse() {
        // p² − q² = sin 2θ / sin 2φ, so the ellipse is elliptic exactly for |θ| < φ
        let phi = 0.3;
        assert!(ellipse_param(phi, 0.29).unwrap().is_elliptic());
        let g = ellipse_param(phi, 0.31).unwrap();
        assert!(!g.is_elliptic());
        assert_relative_eq!(g.p * g.p - g.q * g.q, (0.62f64).sin() / (0.6f64).sin(), epsilon = 1e-14);
    }

    #[test]
    fn band_metric_examples() {
        let h = 1.0 / SQRT_2;
        let (f, area) = band_metric(&Jet::first_order(0.0, h, h)).unwrap();
        assert!(f.abs() < 1e-15);
        assert_relative_eq!(area, 1.0, epsilon = 1e-15);
        let (f, area) = band_metric(&Jet::first_order(0.0, 1.0, 1.0)).unwrap();
        assert_relative_eq!(f, -0.5);
        assert_relative_eq!(area, 2.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(band_metric(&Jet::first_order(0.0, 1.0, 0.0)), Err(Error::Singularity(_))));
        assert!(matches!(band_metric(&Jet::first_order(0.0, 0.2, 0.2)), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn psi_examples_and_parity() {
        let (x, y) = psi_components(GradientPair::new(1.0, 1.0)).unwrap();
        let k = 3f64.powf(1.5);
        assert_relative_eq!(x, -1.0 / k, epsilon = 1e-15);
        assert_relative_eq!(y, 1.0 / k, epsilon = 1e-15);
        for &(p, q) in &[(1.2, 0.8), (0.9, 0.95)] {
            let (a, b) = psi_components(GradientPair::new(p, q)).unwrap();
            let (c, d) = psi_components(GradientPair::new(-p, -q)).unwrap();
            assert_relative_eq!(a, -c, epsilon = 1e-15);
            assert_relative_eq!(b, -d, epsilon = 1e-15);
        }
        assert!(matches!(psi_components(GradientPair::new(1.0, 0.0)), Err(Error::Singularity(_))));
    }

    #[test]
    fn psi_is_the_gradient_of_the_lagrangian() {
        // ψ = ½(−L_q dx + L_p dy)
        for &(p, q) in &[(1.2, 0.8), (0.9, 0.95), (1.4, 1.1)] {
            let lp = density(Dual::variable(p), Dual::constant(q)).eps;
            let lq = density(Dual::constant(p), Dual::variable(q)).eps;
            let (x, y) = psi(p, q);
            assert_relative_eq!(x, -0.5 * lq, epsilon = 1e-13);
            assert_relative_eq!(y, 0.5 * lp, epsilon = 1e-13);
        }
    }

    #[test]
    fn euler_lagrange_residual() {
        let (x, y) = Jet::coords(0.3, 0.2);
        let linear = x.scale(1.1) + y.scale(0.8);
        assert_eq!(el_residual(&linear).unwrap(), 0.0);
        let eps = 1e-3;
        let z = linear + (x * x - y * y).scale(eps);
        let r = el_residual(&z).unwrap();
        let r2 = el_residual(&(linear + (x * x - y * y).scale(2.0 * eps))).unwrap();
        assert!(r.abs() > 0.0);
        assert_relative_eq!(r2, 2.0 * r, max_relative = 1e-2);
        assert_relative_eq!(el_residual(&-z).unwrap(), -r, epsilon = 1e-15);
        // divergence of ψ by central differences
        let h = 1e-5;
        let ps = |x: f64, y: f64| {
            let (p, q) = (1.1 + 2.0 * eps * x, 0.8 - 2.0 * eps * y);
            psi(p, q)
        };
        let fd = (ps(0.3 + h, 0.2).1 - ps(0.3 - h, 0.2).1) / (2.0 * h) - (ps(0.3, 0.2 + h).0 - ps(0.3, 0.2 - h).0) / (2.0 * h);
        assert_relative_eq!(r, fd, epsilon = 1e-8);
    }

    #[test]
    fn constant_phi_has_no_angle_motion() {
        let phi = Jet::constant(0.4);
        assert_eq!(theta_gradient_calabi(&phi, 0.2).unwrap(), (0.0, 0.0));
        let d = compatibility_extract(&phi).unwrap();
        assert_eq!(d.coefficients(), [0.0, 0.0, 0.0]);
        assert!(matches!(two_theta_candidates(&phi), Err(Error::DegenerateAllZero)));
        assert!(matches!(third_order_residual(&phi, 0.1), Err(Error::DegenerateAllZero)));
    }

    #[test]
    fn angle_gradient_solves_both_closedness_conditions() {
        let phi = fixture(0.1, -0.2);
        let theta = 0.15;
        let (tx, ty) = theta_gradient_calabi(&phi, theta).unwrap();
        let th = Jet::first_order(theta, tx, ty);
        let (p, q) = ellipse(phi.truncate(1), th);
        assert!((q.dx - p.dy).abs() < 1e-13);
        let (sx, sy) = psi(p, q);
        assert!((sy.dx - sx.dy).abs() < 1e-12);
    }

    #[test]
    fn fixture_coefficients() {
        let d = compatibility_extract(&fixture(0.0, 0.0)).unwrap();
        assert_relative_eq!(d.omega1.0, 0.6 * SQRT_2, epsilon = 1e-13);
        assert_relative_eq!(d.omega1.1, 0.8, epsilon = 1e-13);
        assert_relative_eq!(d.omega2.0, 0.2 * SQRT_2, epsilon = 1e-13);
        assert_relative_eq!(d.omega2.1, -0.4, epsilon = 1e-13);
        assert_relative_eq!(d.omega3.0, -1.4, epsilon = 1e-13);
        assert_relative_eq!(d.omega3.1, -SQRT_2, epsilon = 1e-13);
        assert_relative_eq!(d.a1, 0.96, epsilon = 1e-12);
        assert_relative_eq!(d.a2, 0.08, epsilon = 1e-12);
        assert_relative_eq!(d.a3, -0.36 * SQRT_2, epsilon = 1e-12);
        let c = two_theta_candidates(&fixture(0.0, 0.0)).unwrap();
        assert_eq!(c.len(), 2);
        assert_relative_eq!(c[0], -0.465_412_274_898_475_5, epsilon = 1e-12);
        assert_relative_eq!(c[1], 0.548_553_506_786_916_7, epsilon = 1e-12);
    }

    #[test]
    fn affine_extraction_predicts_held_out_angles() {
        for &(x, y) in &[(0.0, 0.0), (0.3, -0.4), (-0.2, 0.7)] {
            let phi = fixture(x, y);
            let d = compatibility_extract(&phi).unwrap();
            for &t in &[PI / 6.0, -0.3, 1.0] {
                let (tx, ty) = theta_gradient_calabi(&phi, t).unwrap();
                let (px, py) = d.predict(t);
                assert!((2.0 * tx - px).abs() < 1e-12 && (2.0 * ty - py).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn obstruction_is_the_loop_defect() {
        // transport θ around a small circle; the angle fails to close by
        // ½·obstruction·area to leading order
        let phi_at = |x: f64, y: f64| fixture(x, y);
        let (r, n) = (1e-2, 4000);
        let theta0 = 0.2;
        let rate = |t: f64, th: f64| {
            let (x, y) = (r * t.cos(), r * t.sin());
            let (tx, ty) = theta_gradient_calabi(&phi_at(x, y), th).unwrap();
            -tx * r * t.sin() + ty * r * t.cos()
        };
        let h = 2.0 * PI / n as f64;
        let mut th = theta0;
        for k in 0..n {
            let t = k as f64 * h;
            let k1 = rate(t, th);
            let k2 = rate(t + 0.5 * h, th + 0.5 * h * k1);
            let k3 = rate(t + 0.5 * h, th + 0.5 * h * k2);
            let k4 = rate(t + h, th + h * k3);
            th += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        let expected = 0.5 * compatibility_extract(&phi_at(0.0, 0.0)).unwrap().obstruction(theta0) * PI * r * r;
        assert_relative_eq!(th - theta0, expected, max_relative = 0.05);
    }

    #[test]
    fn candidate_solving() {
        let c = theta_candidates_from([1.0, 0.0, 0.0], 0.2).unwrap();
        assert_eq!(c.len(), 2);
        assert_relative_eq!(c[0], -FRAC_PI_4, epsilon = 1e-15);
        assert_relative_eq!(c[1], FRAC_PI_4, epsilon = 1e-15);
        assert!(theta_candidates_from([0.3, 0.4, 0.6], 0.2).unwrap().is_empty());
        assert!(matches!(theta_candidates_from([0.0; 3], 0.2), Err(Error::DegenerateAllZero)));
        // a double root is reported once
        let c = theta_candidates_from([1.0, 0.0, -1.0], 0.2).unwrap();
        assert_eq!(c, vec![0.0]);
        // candidates outside |θ| < π/2 − φ are dropped
        let c = theta_candidates_from([1.0, 0.0, 0.0], 0.9).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn third_order_residual_of_the_fixture() {
        let phi = fixture(0.0, 0.0);
        for t in two_theta_candidates(&phi).unwrap() {
            let r = third_order_residual(&phi, t).unwrap();
            assert!(r.iter().all(|v| v.is_finite()));
            assert!(r[0].abs() + r[1].abs() > 1e-3);
            // first-order stability under a small change of the jet
            let mut bumped = phi;
            bumped.dxy += 1e-6;
            let t2 = two_theta_candidates(&bumped)
                .unwrap()
                .into_iter()
                .min_by(|a, b| (a - t).abs().total_cmp(&(b - t).abs()))
                .unwrap();
            let r2 = third_order_residual(&bumped, t2).unwrap();
            assert!((r2[0] - r[0]).abs() < 1e-3 && (r2[1] - r[1]).abs() < 1e-3);
        }
        assert!(matches!(third_order_residual(&phi, 1.0), Err(Error::RangeViolation(_))));
        assert!(matches!(third_order_residual(&phi.truncate(2), 0.5), Err(Error::DegreeViolation(_))));
    }

    #[test]
    fn branch_derivative_agrees_with_finite_differences() {
        let phi_at = |x: f64, y: f64| fixture(x, y);
        let t0 = two_theta_candidates(&phi_at(0.0, 0.0)).unwrap()[1];
        let near = |x: f64, y: f64| {
            two_theta_candidates(&phi_at(x, y))
                .unwrap()
                .into_iter()
                .min_by(|a, b| (a - t0).abs().total_cmp(&(b - t0).abs()))
                .unwrap()
        };
        let h = 1e-5;
        let gx = (near(h, 0.0) - near(-h, 0.0)) / h; // d(2θ)/dx
        let gy = (near(0.0, h) - near(0.0, -h)) / h;
        let r = third_order_residual(&phi_at(0.0, 0.0), t0).unwrap();
        let (px, py) = compatibility_extract(&phi_at(0.0, 0.0)).unwrap().predict(t0);
        assert_relative_eq!(r[0] + px, gx, epsilon = 1e-6);
        assert_relative_eq!(r[1] + py, gy, epsilon = 1e-6);
    }
}
