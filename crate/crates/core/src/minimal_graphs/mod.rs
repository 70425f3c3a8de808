//! Pairs of inequivalent minimal graphs sharing one area density: the density
//! families, the angle system, first integrals, periods and windings.

mod doubly_periodic;
mod equations;
mod family;
mod reconstruct;

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub use doubly_periodic::{
    abeq_fields, lift_theta_along, period_on_section, period_on_section_near, period_sigma, rectangle_loop, section_loop,
    zeta_form, Abeq, LiftedAngle, PeriodOptions, SurfacePoint,
};
pub use equations::{
    branch_jets, c_system_residual, compatibility_data, first_integrals, graph_gradient_jets,
    minimal_residual, scherk_closed_form, scherk_u_jet, theta_gradient, two_theta_solutions,
    CompatibilityData,
};
pub use family::{density_value, mu_c_from_f, DensityFamily};
pub use reconstruct::{graph_jet, reconstruct_u, staircase_path, Reconstruction, ThetaChoice};

/// Choice of one of two branches or sheets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstIntegrals {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// Wraps an angle into `(−π, π]`.
pub(crate) fn wrap_angle(t: f64) -> f64 {
    let w = (t + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

/// The half angle of `(cos 2θ, sin 2θ)` that continues `prev`, refusing steps
/// of `2θ` of at least `π/2`.
pub(crate) fn lift_step(prev: f64, cos2: f64, sin2: f64, index: usize) -> Result<f64> {
    let jump = wrap_angle(f64::atan2(sin2, cos2) - 2.0 * prev);
    if jump.abs() >= PI / 2.0 {
        return Err(Error::LiftAmbiguity { index, next: index + 1, jump });
    }
    Ok(prev + 0.5 * jump)
}

/// Starting half angle on a chosen sheet: the principal half angle, or that
/// plus `π`.
pub(crate) fn seed_angle(cos2: f64, sin2: f64, seed: Sign) -> f64 {
    let base = 0.5 * f64::atan2(sin2, cos2);
    match seed {
        Sign::Plus => base,
        Sign::Minus => base + PI,
    }
}

/// Half angle of `(cos 2θ, sin 2θ)` nearest to `reference`.
pub(crate) fn half_angle_near(cos2: f64, sin2: f64, reference: f64) -> f64 {
    let base = 0.5 * f64::atan2(sin2, cos2);
    base + PI * ((reference - base) / PI).round()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping_and_lifting() {
        assert_eq!(wrap_angle(3.0 * PI), PI);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-15);
        let t = lift_step(PI - 0.01, (2.0 * PI + 0.04).cos(), (2.0 * PI + 0.04).sin(), 0).unwrap();
        assert!((t - (PI + 0.02)).abs() < 1e-12);
        assert!(matches!(lift_step(0.0, -1.0, 0.0, 3), Err(Error::LiftAmbiguity { index: 3, .. })));
        assert!((half_angle_near(1.0, 0.0, 3.0) - PI).abs() < 1e-15);
        assert!((seed_angle(0.0, 1.0, Sign::Minus) - 1.25 * PI).abs() < 1e-15);
        assert_eq!(Sign::Plus.flip(), Sign::Minus);
    }
}
