//! The four area-density families that admit two inequivalent minimal graphs.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::jet::{Jet, Real};
use crate::tolerances::DOMAIN_MARGIN;

/// An area density `F ≥ 1` from one of the four admissible families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityFamily {
    /// `F ≡ c` on the whole plane, `c > 1`.
    ConstantPlane { c: f64 },
    /// `F = coth x` on the half-plane `x > 0`.
    ScherkFifth,
    /// `F² = (r² + cos²φ)/(r² − sin²φ)` on `r² > sin²φ`, `0 < φ < π/2`.
    HeliCatenoid { phi: f64 },
    /// `F² = (S + 1)/(S − 1)` with `S = a cosh x + c cos y`, on `S > 1`.
    DoublyPeriodic { a: f64, c: f64 },
}

impl DensityFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DensityFamily::ConstantPlane { c } if !(c > 1.0) => {
                Err(Error::ParamViolation(format!("constant density needs c > 1, got {c}")))
            }
            DensityFamily::HeliCatenoid { phi } if !(phi > 0.0 && phi < FRAC_PI_2) => {
                Err(Error::ParamViolation(format!("heli-catenoid needs 0 < φ < π/2, got {phi}")))
            }
            DensityFamily::DoublyPeriodic { a, c } => check_ac(a, c),
            _ => Ok(()),
        }
    }

    /// Whether μ is affine, so that the angle relation carries no information.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, DensityFamily::ConstantPlane { .. } | DensityFamily::ScherkFifth)
    }

    /// Domain membership, shrunk by [`DOMAIN_MARGIN`].
    pub fn check_domain(&self, x: f64, y: f64) -> Result<()> {
        self.validate()?;
        let inside = match *self {
            DensityFamily::ConstantPlane { .. } => true,
            DensityFamily::ScherkFifth => x > DOMAIN_MARGIN,
            DensityFamily::HeliCatenoid { phi } => x * x + y * y - phi.sin().powi(2) > DOMAIN_MARGIN,
            DensityFamily::DoublyPeriodic { a, c } => a * x.cosh() + c * y.cos() - 1.0 > DOMAIN_MARGIN,
        };
        if inside {
            Ok(())
        } else {
            Err(Error::domain(x, y, &format!("not in the domain of {self:?}")))
        }
    }

    /// Jet of `C = cosh 2μ`, where `F = coth μ`.
    pub fn c_jet(&self, x: f64, y: f64) -> Result<Jet> {
        self.check_domain(x, y)?;
        let (xj, yj) = Jet::coords(x, y);
        Ok(match *self {
            DensityFamily::ConstantPlane { c } => Jet::constant((c * c + 1.0) / (c * c - 1.0)),
            DensityFamily::ScherkFifth => xj.scale(2.0).cosh(),
            DensityFamily::HeliCatenoid { phi } => {
                (xj * xj + yj * yj).scale(2.0) + Jet::constant((2.0 * phi).cos())
            }
            DensityFamily::DoublyPeriodic { a, c } => xj.cosh().scale(a) + yj.cos().scale(c),
        })
    }

    /// Jet of `μ = arccoth F`.
    pub fn mu_jet(&self, x: f64, y: f64) -> Result<Jet> {
        match self {
            DensityFamily::ScherkFifth => {
                self.check_domain(x, y)?;
                Ok(Jet::var_x(x))
            }
            _ => Ok(self.c_jet(x, y)?.acosh().scale(0.5)),
        }
    }

    /// Jet of the density `F` itself.
    pub fn density_jet(&self, x: f64, y: f64) -> Result<Jet> {
        let c = self.c_jet(x, y)?;
        let one = Jet::constant(1.0);
        Ok(((c + one) / (c - one)).sqrt())
    }
}

pub(crate) fn check_ac(a: f64, c: f64) -> Result<()> {
    if (a - c).abs() < 1.0 && 1.0 < a + c {
        Ok(())
    } else {
        Err(Error::ParamViolation(format!("doubly periodic family needs |a − c| < 1 < a + c, got a = {a}, c = {c}")))
    }
}

/// Closed-form value of the area density.
pub fn density_value(family: &DensityFamily, x: f64, y: f64) -> Result<f64> {
    family.check_domain(x, y)?;
    Ok(match *family {
        DensityFamily::ConstantPlane { c } => c,
        DensityFamily::ScherkFifth => 1.0 / x.tanh(),
        DensityFamily::HeliCatenoid { phi } => {
            let r2 = x * x + y * y;
            ((r2 + phi.cos().powi(2)) / (r2 - phi.sin().powi(2))).sqrt()
        }
        DensityFamily::DoublyPeriodic { a, c } => {
            let s = a * x.cosh() + c * y.cos();
            ((s + 1.0) / (s - 1.0)).sqrt()
        }
    })
}

/// `μ = arccoth F` and `C = cosh 2μ = (F² + 1)/(F² − 1)`.
pub fn mu_c_from_f(f: f64) -> Result<(f64, f64)> {
    if !(f > 1.0) {
        return Err(Error::DomainViolation(format!("density must exceed 1, got {f}")));
    }
    let mu = 0.5 * ((f + 1.0) / (f - 1.0)).ln();
    let c = (f * f + 1.0) / (f * f - 1.0);
    Ok((mu, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn closed_form_values() {
        let v = density_value(&DensityFamily::ScherkFifth, 1.0, 7.3).unwrap();
        assert_relative_eq!(v, 1.0 / 1f64.tanh(), epsilon = 1e-15);
        let v = density_value(&DensityFamily::HeliCatenoid { phi: FRAC_PI_4 }, 1.0, 0.0).unwrap();
        assert_relative_eq!(v, 3f64.sqrt(), epsilon = 1e-14);
        let v = density_value(&DensityFamily::DoublyPeriodic { a: 1.0, c: 1.0 }, 0.0, 0.0).unwrap();
        assert_relative_eq!(v, 3f64.sqrt(), epsilon = 1e-14);
        let v = density_value(&DensityFamily::ConstantPlane { c: 2.0 }, -4.0, 9.0).unwrap();
        assert_eq!(v, 2.0);
    }

    #[test]
    fn domain_and_parameter_errors() {
        assert!(matches!(
            density_value(&DensityFamily::ScherkFifth, -0.1, 0.0),
            Err(Error::DomainViolation(_))
        ));
        assert!(matches!(
            density_value(&DensityFamily::HeliCatenoid { phi: FRAC_PI_4 }, 0.1, 0.1),
            Err(Error::DomainViolation(_))
        ));
        assert!(matches!(
            density_value(&DensityFamily::DoublyPeriodic { a: 1.0, c: 1.0 }, 0.0, 3.0),
            Err(Error::DomainViolation(_))
        ));
        assert!(matches!(
            density_value(&DensityFamily::DoublyPeriodic { a: 1.5, c: 0.2 }, 0.0, 0.0),
            Err(Error::ParamViolation(_))
        ));
        assert!(matches!(
            density_value(&DensityFamily::ConstantPlane { c: 1.0 }, 0.0, 0.0),
            Err(Error::ParamViolation(_))
        ));
        assert!(matches!(
            density_value(&DensityFamily::HeliCatenoid { phi: 2.0 }, 3.0, 0.0),
            Err(Error::ParamViolation(_))
        ));
    }

    #[test]
    fn mu_and_c_from_density() {
        let (mu, c) = mu_c_from_f(1f64 / 1f64.tanh()).unwrap();
        assert_relative_eq!(mu, 1.0, epsilon = 1e-14);
        assert_relative_eq!(c, 2f64.cosh(), epsilon = 1e-13);
        assert!(mu_c_from_f(1.0).is_err());
        assert!(mu_c_from_f(0.5).is_err());
    }

    #[test]
    fn c_recovers_the_family_generator() {
        let fam = DensityFamily::DoublyPeriodic { a: 0.8, c: 0.5 };
        for &(x, y) in &[(0.3, 0.1), (-1.2, 2.0), (2.5, -3.0)] {
            let f = density_value(&fam, x, y).unwrap();
            let (_, c) = mu_c_from_f(f).unwrap();
            assert_relative_eq!(c, 0.8 * f64::cosh(x) + 0.5 * f64::cos(y), epsilon = 1e-12, max_relative = 1e-12);
        }
        let phi = 0.6;
        let fam = DensityFamily::HeliCatenoid { phi };
        let (x, y) = (0.9, -0.4);
        let (_, c) = mu_c_from_f(density_value(&fam, x, y).unwrap()).unwrap();
        assert_relative_eq!(c, 2.0 * (x * x + y * y) + (2.0 * phi).cos(), epsilon = 1e-12);
    }

    #[test]
    fn jets_agree_with_values() {
        let fam = DensityFamily::HeliCatenoid { phi: 0.5 };
        let f = fam.density_jet(1.1, 0.3).unwrap();
        assert_relative_eq!(f.value, density_value(&fam, 1.1, 0.3).unwrap(), epsilon = 1e-14);
        let mu = fam.mu_jet(1.1, 0.3).unwrap();
        assert_relative_eq!(1.0 / mu.value.tanh(), f.value, epsilon = 1e-13);
        let mu = DensityFamily::ScherkFifth.mu_jet(0.7, 1.0).unwrap();
        assert_eq!((mu.value, mu.dx, mu.dy, mu.dxx), (0.7, 1.0, 0.0, 0.0));
    }
}
