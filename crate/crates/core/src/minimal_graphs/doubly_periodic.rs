//! The doubly periodic family on the double cover `z² = a cosh x + c cos y − 1`.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::tolerances::{TAU_QUAD, TAU_SING};

use super::family::check_ac;
use super::{half_angle_near, lift_step, seed_angle, Sign};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abeq {
    pub a: f64,
    pub b: f64,
    pub e: f64,
    pub q: f64,
}

impl Abeq {
    /// `(cos 2θ, sin 2θ)` at height `z` above the point.
    pub fn cos_sin_2theta(&self, z: f64) -> (f64, f64) {
        let n = self.a * self.a + self.b * self.b;
        let qz = self.q * z;
        ((self.a * self.e - self.b * qz) / n, (self.b * self.e + self.a * qz) / n)
    }
}

pub fn abeq_fields(a: f64, c: f64, x: f64, y: f64) -> Result<Abeq> {
    check_ac(a, c)?;
    let (ch, sh) = (x.cosh(), x.sinh());
    let (sy, cy) = y.sin_cos();
    let s = a * ch + c * cy;
    let k = (1.0 - (a - c).powi(2)) * ((a + c).powi(2) - 1.0);
    Ok(Abeq {
        a: c * c + 2.0 * a * c * ch * cy + a * a - 1.0,
        b: 2.0 * a * c * sh * sy,
        e: a * (a * a - c * c - 1.0) * ch + c * (a * a - c * c + 1.0) * cy,
        q: (k * (s + 1.0)).max(0.0).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SurfacePoint {
    /// The point above `(x, y)` on the sheet `sign · z ≥ 0`.
    pub fn on_sheet(a: f64, c: f64, x: f64, y: f64, sheet: Sign) -> Result<Self> {
        let g = a * x.cosh() + c * y.cos() - 1.0;
        if g < 0.0 {
            return Err(Error::domain(x, y, "below the fold of the double cover"));
        }
        Ok(SurfacePoint { x, y, z: sheet.value() * g.sqrt() })
    }

    /// `z² − (a cosh x + c cos y − 1)`.
    pub fn residual(&self, a: f64, c: f64) -> f64 {
        self.z * self.z - (a * self.x.cosh() + c * self.y.cos() - 1.0)
    }
}

/// A path with a continuous lift of `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedAngle {
    pub points: Vec<SurfacePoint>,
    pub theta: Vec<f64>,
    pub branch_sign: Sign,
}

impl LiftedAngle {
    pub fn total_change(&self) -> f64 {
        match (self.theta.first(), self.theta.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }
}

/// Lifts `θ` along `path`, starting from the principal half angle
/// (`Sign::Plus`) or its opposite (`Sign::Minus`).
pub fn lift_theta_along(path: &[SurfacePoint], a: f64, c: f64, seed: Sign) -> Result<LiftedAngle> {
    let mut theta = Vec::with_capacity(path.len());
    for (i, p) in path.iter().enumerate() {
        let (c2, s2) = abeq_fields(a, c, p.x, p.y)?.cos_sin_2theta(p.z);
        let t = match theta.last() {
            None => seed_angle(c2, s2, seed),
            Some(&prev) => lift_step(prev, c2, s2, i - 1)?,
        };
        theta.push(t);
    }
    Ok(LiftedAngle { points: path.to_vec(), theta, branch_sign: seed })
}

/// `√2 (cos θ, sin θ)/z`; on the upper sheet this is
/// `(cos θ, sin θ)/√((a cosh x + c cos y − 1)/2)`.
pub fn zeta_form(point: &SurfacePoint, theta: f64, a: f64, c: f64) -> Result<(f64, f64)> {
    check_ac(a, c)?;
    let g = a * point.x.cosh() + c * point.y.cos() - 1.0;
    if g <= TAU_SING || point.z.abs() <= TAU_SING.sqrt() {
        return Err(Error::FoldSingularity { x: point.x, y: point.y, z: point.z });
    }
    let k = SQRT_2 / point.z;
    Ok((k * theta.cos(), k * theta.sin()))
}

/// Counterclockwise boundary of `|x| ≤ R`, `0 ≤ y ≤ 2π` on the upper sheet,
/// closed (last point equals the first).
pub fn rectangle_loop(a: f64, c: f64, r: f64, per_side: usize) -> Result<Vec<SurfacePoint>> {
    let n = per_side.max(1);
    let corners = [(-r, 0.0), (r, 0.0), (r, 2.0 * PI), (-r, 2.0 * PI), (-r, 0.0)];
    let mut out = Vec::with_capacity(4 * n + 1);
    for w in corners.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        for k in 0..n {
            let s = k as f64 / n as f64;
            out.push(SurfacePoint::on_sheet(a, c, x0 + s * (x1 - x0), y0 + s * (y1 - y0), Sign::Plus)?);
        }
    }
    out.push(out[0]);
    Ok(out)
}

/// The loop cut from the surface by the plane `x = x0` around `y = 0`.
struct Section {
    x0: f64,
    half_width: f64,
    c: f64,
}

impl Section {
    fn new(a: f64, c: f64, x0: f64) -> Result<Self> {
        check_ac(a, c)?;
        let k = (1.0 - a * x0.cosh()) / c;
        if !(k > -1.0 && k < 1.0) {
            return Err(Error::ParamViolation(format!(
                "the plane x = {x0} does not cut a closed loop (cos y* = {k})"
            )));
        }
        Ok(Section { x0, half_width: k.acos(), c })
    }

    fn sinc_half(&self, u: f64) -> f64 {
        if u.abs() < 1e-8 {
            0.5 * self.half_width
        } else {
            (0.5 * self.half_width * u).sin() / u
        }
    }

    /// `z² / sin² t` as a function of `w = cos t`.
    fn h(&self, w: f64) -> f64 {
        2.0 * self.c * self.sinc_half(1.0 + w) * self.sinc_half(1.0 - w)
    }

    fn point(&self, t: f64) -> SurfacePoint {
        let w = t.cos();
        SurfacePoint { x: self.x0, y: self.half_width * w, z: t.sin() * self.h(w).sqrt() }
    }
}

/// Closed sampling of the section loop at `x = x0` by `samples` equal steps
/// of its parameter `t ∈ [0, 2π]`.
pub fn section_loop(a: f64, c: f64, x0: f64, samples: usize) -> Result<Vec<SurfacePoint>> {
    let sec = Section::new(a, c, x0)?;
    let n = samples.max(4);
    Ok((0..=n).map(|k| sec.point(2.0 * PI * k as f64 / n as f64)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodOptions {
    /// Lift samples around the loop; quadrature uses one panel per eight.
    pub samples: usize,
    pub tol: f64,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        PeriodOptions { samples: 512, tol: TAU_QUAD }
    }
}

impl PeriodOptions {
    pub fn refined(self) -> Self {
        PeriodOptions { samples: 2 * self.samples, tol: 0.5 * self.tol }
    }
}

/// Integral of `ζ` over the section loop at `x = x0`.
pub fn period_on_section(a: f64, c: f64, x0: f64, seed: Sign, opts: PeriodOptions) -> Result<f64> {
    period_with_start(a, c, x0, Start::Seed(seed), opts)
}

/// As [`period_on_section`], with `θ` at the loop start taken on the lift
/// closest to `theta_near` (a value carried from another loop).
pub fn period_on_section_near(a: f64, c: f64, x0: f64, theta_near: f64, opts: PeriodOptions) -> Result<f64> {
    period_with_start(a, c, x0, Start::Near(theta_near), opts)
}

enum Start {
    Seed(Sign),
    Near(f64),
}

fn period_with_start(a: f64, c: f64, x0: f64, start: Start, opts: PeriodOptions) -> Result<f64> {
    let sec = Section::new(a, c, x0)?;
    let n = opts.samples.max(8);
    let path: Vec<SurfacePoint> = (0..=n).map(|k| sec.point(2.0 * PI * k as f64 / n as f64)).collect();
    let mut lift = lift_theta_along(&path, a, c, Sign::Plus)?;
    let shift = match start {
        Start::Seed(Sign::Plus) => 0.0,
        Start::Seed(Sign::Minus) => PI,
        Start::Near(t) => PI * ((t - lift.theta[0]) / PI).round(),
    };
    lift.theta.iter_mut().for_each(|t| *t += shift);
    let step = 2.0 * PI / n as f64;
    let reference = |t: f64| {
        let s = (t / step).clamp(0.0, n as f64);
        let i = (s.floor() as usize).min(n - 1);
        let f = s - i as f64;
        (1.0 - f) * lift.theta[i] + f * lift.theta[i + 1]
    };
    let ac = (a, c);
    let integrand = |t: f64| {
        let p = sec.point(t);
        let w = t.cos();
        match abeq_fields(ac.0, ac.1, p.x, p.y) {
            Ok(f) => {
                let (c2, s2) = f.cos_sin_2theta(p.z);
                let th = half_angle_near(c2, s2, reference(t));
                -SQRT_2 * sec.half_width * th.sin() / sec.h(w).sqrt()
            }
            Err(_) => f64::NAN,
        }
    };
    adaptive_simpson(integrand, 0.0, 2.0 * PI, opts.tol, (n / 8).max(1))
}

/// The period `λ_{a,c}` over the loop at `x = 0`.
pub fn period_sigma(a: f64, c: f64, seed: Sign, opts: PeriodOptions) -> Result<f64> {
    period_on_section(a, c, 0.0, seed, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimal_graphs::{compatibility_data, two_theta_solutions, DensityFamily};
    use approx::assert_relative_eq;

    #[test]
    fn abeq_at_the_origin() {
        let f = abeq_fields(1.0, 1.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(f.a, 3.0, epsilon = 1e-14);
        assert_eq!(f.b, 0.0);
        assert_relative_eq!(f.e, 0.0, epsilon = 1e-14);
        assert_relative_eq!(f.q, 3.0, epsilon = 1e-14);
        for &(x, y) in &[(0.0, 1.3), (0.7, 0.0), (-1.1, PI)] {
            assert!(abeq_fields(0.8, 0.5, x, y).unwrap().b.abs() < 1e-15);
        }
        assert!(matches!(abeq_fields(1.5, 0.2, 0.0, 0.0), Err(Error::ParamViolation(_))));
    }

    #[test]
    fn abeq_angles_solve_the_relation() {
        for &(a, c) in &[(1.0, 1.0), (0.8, 0.5), (0.3, 0.9)] {
            for &(x, y) in &[(0.7, 0.3), (-1.4, 2.2), (2.0, -0.6)] {
                let Ok(p) = SurfacePoint::on_sheet(a, c, x, y, Sign::Minus) else { continue };
                let f = abeq_fields(a, c, x, y).unwrap();
                let (c2, s2) = f.cos_sin_2theta(p.z);
                assert_relative_eq!(c2 * c2 + s2 * s2, 1.0, epsilon = 1e-12);
                assert!((f.a * c2 + f.b * s2 - f.e).abs() < 1e-10 * f.e.abs().max(1.0));
            }
        }
    }

    #[test]
    fn upper_sheet_is_the_plus_branch() {
        for &(a, c) in &[(1.0, 1.0), (0.8, 0.5)] {
            let fam = DensityFamily::DoublyPeriodic { a, c };
            for &(x, y) in &[(0.7, 0.3), (-0.4, 1.2), (1.3, 2.5)] {
                let mu = fam.mu_jet(x, y).unwrap();
                let [plus, minus] = two_theta_solutions(&mu).unwrap();
                let f = abeq_fields(a, c, x, y).unwrap();
                let up = f.cos_sin_2theta(SurfacePoint::on_sheet(a, c, x, y, Sign::Plus).unwrap().z);
                let down = f.cos_sin_2theta(SurfacePoint::on_sheet(a, c, x, y, Sign::Minus).unwrap().z);
                assert_relative_eq!(plus.0, up.0, epsilon = 1e-10);
                assert_relative_eq!(plus.1, up.1, epsilon = 1e-10);
                assert_relative_eq!(minus.0, down.0, epsilon = 1e-10);
                assert_relative_eq!(minus.1, down.1, epsilon = 1e-10);
                assert!(compatibility_data(&mu).unwrap().p > 0.0);
            }
        }
    }

    #[test]
    fn zeta_decays_and_guards_the_fold() {
        let (a, c) = (1.0, 1.0);
        let far = SurfacePoint::on_sheet(a, c, 20.0, 0.4, Sign::Plus).unwrap();
        let (zx, zy) = zeta_form(&far, 0.3, a, c).unwrap();
        assert!(zx.hypot(zy) < 1e-3);
        let p = SurfacePoint::on_sheet(a, c, 0.5, 0.5, Sign::Plus).unwrap();
        let (zx, zy) = zeta_form(&p, 0.0, a, c).unwrap();
        assert_eq!(zy, 0.0);
        let g: f64 = 0.5f64.cosh() + 0.5f64.cos() - 1.0;
        assert_relative_eq!(zx, 1.0 / (g / 2.0).sqrt(), epsilon = 1e-14);
        let fold = SurfacePoint { x: 0.0, y: PI / 2.0, z: 0.0 };
        assert!(matches!(zeta_form(&fold, 0.0, a, c), Err(Error::FoldSingularity { .. })));
    }

    #[test]
    fn zeta_integrates_to_zero_around_a_small_loop() {
        let (a, c) = (0.8, 0.5);
        let (x0, y0, r) = (1.0, 0.5, 0.2);
        let start = SurfacePoint::on_sheet(a, c, x0 + r, y0, Sign::Plus).unwrap();
        let f = abeq_fields(a, c, start.x, start.y).unwrap();
        let (c2, s2) = f.cos_sin_2theta(start.z);
        let th0 = seed_angle(c2, s2, Sign::Plus);
        let pull = |t: f64| {
            let (x, y) = (x0 + r * t.cos(), y0 + r * t.sin());
            let p = SurfacePoint::on_sheet(a, c, x, y, Sign::Plus).unwrap();
            let (c2, s2) = abeq_fields(a, c, x, y).unwrap().cos_sin_2theta(p.z);
            let (zx, zy) = zeta_form(&p, half_angle_near(c2, s2, th0), a, c).unwrap();
            -zx * r * t.sin() + zy * r * t.cos()
        };
        let v = adaptive_simpson(pull, 0.0, 2.0 * PI, 1e-11, 16).unwrap();
        assert!(v.abs() < 1e-9, "{v}");
    }

    #[test]
    fn windings_of_the_two_loops() {
        for &(a, c) in &[(1.0, 1.0), (0.8, 0.5)] {
            let g = lift_theta_along(&rectangle_loop(a, c, 8.0, 2000).unwrap(), a, c, Sign::Plus).unwrap();
            assert!((g.total_change() - 2.0 * PI).abs() < 1e-9, "{}", g.total_change());
            let s = lift_theta_along(&section_loop(a, c, 0.0, 400).unwrap(), a, c, Sign::Plus).unwrap();
            assert!(s.total_change().abs() < 1e-12);
            for w in s.theta.windows(2) {
                assert!((w[1] - w[0]).abs() < PI / 4.0);
            }
        }
    }

    #[test]
    fn coarse_paths_are_refused() {
        let path = rectangle_loop(1.0, 1.0, 8.0, 2).unwrap();
        assert!(matches!(lift_theta_along(&path, 1.0, 1.0, Sign::Plus), Err(Error::LiftAmbiguity { .. })));
    }

    #[test]
    fn section_points_lie_on_the_surface() {
        for p in section_loop(0.8, 0.5, 0.3, 64).unwrap() {
            assert!(p.residual(0.8, 0.5).abs() < 1e-14);
        }
        assert!(section_loop(1.0, 1.0, 3.0, 16).is_err());
    }

    #[test]
    fn period_values_and_symmetries() {
        let opts = PeriodOptions::default();
        let l = period_sigma(1.0, 1.0, Sign::Plus, opts).unwrap();
        assert!((l + 12.349).abs() < 1e-3, "{l}");
        let fine = period_sigma(1.0, 1.0, Sign::Plus, opts.refined()).unwrap();
        assert!((l - fine).abs() < 1e-7);
        let neg = period_sigma(1.0, 1.0, Sign::Minus, opts).unwrap();
        assert_relative_eq!(neg, -l, epsilon = 1e-12);
        let l2 = period_sigma(0.8, 0.5, Sign::Plus, opts).unwrap();
        assert!((l2 + 14.699).abs() < 1e-3, "{l2}");
    }

    #[test]
    fn homotopic_loops_carry_the_same_period() {
        let (a, c) = (0.8, 0.5);
        let (s0, s1) = (Section::new(a, c, 0.0).unwrap(), Section::new(a, c, 0.4).unwrap());
        // carry θ from the start of one loop to the start of the other
        let mut path: Vec<SurfacePoint> = (0..=100).map(|k| s0.point(0.5 * PI * k as f64 / 100.0)).collect();
        path.extend((1..=100).map(|k| Section::new(a, c, 0.004 * k as f64).unwrap().point(0.5 * PI)));
        path.extend((0..=100).rev().map(|k| s1.point(0.5 * PI * k as f64 / 100.0)));
        let carried = *lift_theta_along(&path, a, c, Sign::Plus).unwrap().theta.last().unwrap();
        let opts = PeriodOptions::default();
        let l0 = period_sigma(a, c, Sign::Plus, opts).unwrap();
        let l1 = period_on_section_near(a, c, 0.4, carried, opts).unwrap();
        assert!((l1 - l0).abs() < 1e-7, "{l1} {l0}");
    }

    #[test]
    fn jet_of_c_matches_the_surface() {
        let c = DensityFamily::DoublyPeriodic { a: 1.0, c: 1.0 }.c_jet(0.3, 0.2).unwrap();
        let p = SurfacePoint::on_sheet(1.0, 1.0, 0.3, 0.2, Sign::Plus).unwrap();
        assert_relative_eq!(p.z * p.z, c.value - 1.0, epsilon = 1e-14);
    }
}
