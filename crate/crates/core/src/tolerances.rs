//! Default tolerances shared by the verification routines.

/// Algebraic residuals evaluated on analytic jets.
pub const TAU: f64 = 1e-9;
/// Adaptive Simpson target for loop integrals.
pub const TAU_QUAD: f64 = 1e-8;
/// Spread allowed for first integrals over a probe grid.
pub const TAU_INTEGRAL: f64 = 1e-7;
/// Below this magnitude a denominator is treated as zero.
pub const TAU_SING: f64 = 1e-12;
/// Unit-circle and defining-relation slack for lifted angles.
pub const TAU_ANGLE: f64 = 1e-9;
/// Path independence of reconstructed graphs.
pub const TAU_RECON: f64 = 1e-8;
/// Shrink applied to every open domain.
pub const DOMAIN_MARGIN: f64 = 1e-6;
/// Identity check for floating factorizations of Gram matrices.
pub const TAU_FLOAT_FACTOR: f64 = 1e-10;
/// `|x| = 1` check for energy-density evaluation.
pub const TAU_SPHERE: f64 = 1e-12;

/// A bundle of the tolerances above that callers may override.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub tau: f64,
    pub quad: f64,
    pub integral: f64,
    pub sing: f64,
    pub recon: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tau: TAU, quad: TAU_QUAD, integral: TAU_INTEGRAL, sing: TAU_SING, recon: TAU_RECON }
    }
}
