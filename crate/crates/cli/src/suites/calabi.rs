//! Checks on the prescribed-density system for Calabi's Lagrangian.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use extremals_core::calabi_density::{
    compatibility_extract, el_residual, ellipse_param, lagrangian_l, theta_gradient_calabi, two_theta_candidates,
};
use extremals_core::{Error, Jet, Real};

use crate::report::{Check, MaxTracker};

/// A φ-jet with value in `(0.05, π/4 − 0.05)` and derivatives in `[−1, 1]`.
pub fn random_phi_jet(rng: &mut ChaCha8Rng) -> Jet {
    let mut a = [0.0; 10];
    a[0] = rng.random_range(0.05..FRAC_PI_4 - 0.05);
    for v in a.iter_mut().skip(1) {
        *v = rng.random_range(-1.0..=1.0);
    }
    Jet::from_array(a, 3)
}

/// `L` on the ellipse equals `1/sin 2φ`; linear graphs are extremal; a
/// constant φ has a vanishing obstruction.
pub fn density_checks(samples: usize, seed: u64, tol_density: f64, tol_compat: f64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dens = MaxTracker::new();
    let mut failure = None;
    for _ in 0..samples {
        let phi = rng.random_range(0.0..FRAC_PI_4);
        let theta = rng.random_range(-phi..phi);
        if phi == 0.0 {
            continue;
        }
        match ellipse_param(phi, theta).and_then(lagrangian_l) {
            Ok(l) => dens.update(l - 1.0 / (2.0 * phi).sin(), || format!("φ={phi} θ={theta}")),
            Err(e) => {
                failure.get_or_insert(format!("φ={phi} θ={theta}: {e}"));
            }
        }
    }
    let mut out = vec![match failure {
        Some(w) => Check::error("lagrangian on the ellipse", w),
        None => Check::residual("lagrangian on the ellipse", &dens, tol_density),
    }];

    let mut linear_ok = true;
    let mut witness = None;
    for _ in 0..20 {
        let (x0, y0) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let (p, q) = loop {
            let (p, q): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            if extremals_core::calabi_density::GradientPair::new(p, q).is_elliptic() {
                break (p, q);
            }
        };
        let (x, y) = Jet::coords(x0, y0);
        let z = x.scale(p) + y.scale(q);
        match el_residual(&z) {
            Ok(r) if r == 0.0 => {}
            Ok(r) => {
                linear_ok = false;
                witness.get_or_insert(format!("p={p} q={q}: {r}"));
            }
            Err(e) => {
                linear_ok = false;
                witness.get_or_insert(format!("p={p} q={q}: {e}"));
            }
        }
    }
    out.push(Check::exact("linear graphs are extremal", linear_ok, witness));

    let mut compat = MaxTracker::new();
    let mut failure = None;
    for k in 1..=9 {
        let phi = FRAC_PI_4 * k as f64 / 10.0;
        match compatibility_extract(&Jet::constant(phi)) {
            Ok(d) => {
                for a in d.coefficients() {
                    compat.update(a, || format!("φ={phi}"));
                }
            }
            Err(e) => {
                failure.get_or_insert(format!("φ={phi}: {e}"));
            }
        }
    }
    out.push(match failure {
        Some(w) => Check::error("constant φ is compatible", w),
        None => Check::residual("constant φ is compatible", &compat, tol_compat),
    });
    out
}

/// At most two candidate angles for every random jet.
pub fn branch_count_checks(jets: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut histogram = [0usize; 3];
    let mut excess = 0usize;
    let mut witness = None;
    let mut errors = 0usize;
    for _ in 0..jets {
        let phi = random_phi_jet(&mut rng);
        match two_theta_candidates(&phi) {
            Ok(c) if c.len() <= 2 => histogram[c.len()] += 1,
            Ok(c) => {
                excess += 1;
                witness.get_or_insert(format!("{:?} gives {} candidates", phi.to_array(), c.len()));
            }
            Err(Error::DegenerateAllZero) => histogram[0] += 1,
            Err(e) => {
                errors += 1;
                witness.get_or_insert(format!("{:?}: {e}", phi.to_array()));
            }
        }
    }
    vec![Check::exact("at most two candidate angles", excess == 0 && errors == 0, witness).with_detail(format!(
        "{jets} jets: {} with none, {} with one, {} with two, {errors} errors",
        histogram[0], histogram[1], histogram[2]
    ))]
}

/// `2∇θ` from the angle system against the affine prediction
/// `ω₁ cos 2θ + ω₂ sin 2θ + ω₃` at angles not used by the extraction. Angles
/// are given as fractions of the admissible half-range `π/2 − φ`; the error
/// is scaled by `max(1, |prediction|)`.
pub fn extraction_checks(jets: &[Jet], held_out: &[f64], tol: f64) -> Vec<Check> {
    let mut err = MaxTracker::new();
    let mut failure = None;
    for (i, phi) in jets.iter().enumerate() {
        let data = match compatibility_extract(phi) {
            Ok(d) => d,
            Err(e) => {
                failure.get_or_insert(format!("jet {i}: {e}"));
                continue;
            }
        };
        for &frac in held_out {
            let t = frac * (FRAC_PI_2 - phi.value);
            match theta_gradient_calabi(phi, t) {
                Ok((tx, ty)) => {
                    let (px, py) = data.predict(t);
                    let scale = px.abs().max(py.abs()).max(1.0);
                    err.update((2.0 * tx - px).abs().max((2.0 * ty - py).abs()) / scale, || format!("jet {i} θ={t}"));
                }
                Err(e) => {
                    failure.get_or_insert(format!("jet {i} θ={t}: {e}"));
                }
            }
        }
    }
    vec![match failure {
        Some(w) => Check::error("affine extraction at held-out angles", w),
        None => Check::residual("affine extraction at held-out angles", &err, tol),
    }]
}

pub fn random_jets(count: usize, seed: u64) -> Vec<Jet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_phi_jet(&mut rng)).collect()
}

/// Extraction data of one jet, for the report.
pub fn describe_jet(phi: &Jet) -> Check {
    match (compatibility_extract(phi), two_theta_candidates(phi)) {
        (Ok(d), cands) => {
            let cands = match cands {
                Ok(c) => format!("{c:?}"),
                Err(e) => e.to_string(),
            };
            Check::exact("extraction of the given jet", true, None).with_detail(format!(
                "omega1 {:?}, omega2 {:?}, omega3 {:?}, A ({}, {}, {}), candidates {cands}",
                d.omega1, d.omega2, d.omega3, d.a1, d.a2, d.a3
            ))
        }
        (Err(e), _) => Check::error("extraction of the given jet", e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        assert!(density_checks(200, 1, 1e-10, 1e-12).iter().all(|c| c.passed));
        assert!(branch_count_checks(300, 2).iter().all(|c| c.passed));
        let jets = random_jets(50, 3);
        assert!(extraction_checks(&jets, &[0.37, -0.61, 0.83], 1e-9).iter().all(|c| c.passed));
    }

    #[test]
    fn describes_the_fixture() {
        let (x, y) = Jet::coords(0.0, 0.0);
        let phi = Jet::constant(std::f64::consts::PI / 8.0) + x.scale(0.1) + (y * y).scale(0.02);
        let c = describe_jet(&phi);
        assert!(c.passed);
        assert!(c.detail.unwrap().contains("candidates [-0.46541227489847"));
    }
}
