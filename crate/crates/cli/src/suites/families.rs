//! Checks on the density families: closed forms, first integrals, pairs of
//! graphs, windings and periods.

use std::f64::consts::TAU;

use extremals_core::minimal_graphs::{
    compatibility_data, density_value, first_integrals, c_system_residual, graph_jet, lift_theta_along,
    minimal_residual, period_sigma, rectangle_loop, reconstruct_u, scherk_u_jet, section_loop, two_theta_solutions,
    DensityFamily, PeriodOptions, Sign, ThetaChoice,
};
use extremals_core::tolerances::TAU_QUAD;

use crate::report::{Check, MaxTracker, Table};
use crate::scenario::{Field, Grid};

fn at(x: f64, y: f64) -> String {
    format!("({x}, {y})")
}

/// Closed-form Scherk graphs for each phase: minimal surface residual and
/// the density relation `1 + |∇u|² = coth² x`.
pub fn scherk_checks(grid: &Grid, psis: &[f64], tol_minimal: f64, tol_density: f64) -> Vec<Check> {
    let mut out = Vec::new();
    for &psi in psis {
        let mut minimal = MaxTracker::new();
        let mut density = MaxTracker::new();
        let mut failure = None;
        for (x, y) in grid.points() {
            match scherk_u_jet(x, y, psi) {
                Ok(u) => {
                    minimal.update(minimal_residual(&u), || at(x, y));
                    let f = 1.0 / x.tanh();
                    density.update(1.0 + u.dx * u.dx + u.dy * u.dy - f * f, || at(x, y));
                }
                Err(e) => {
                    failure.get_or_insert(format!("{}: {e}", at(x, y)));
                }
            }
        }
        match failure {
            Some(w) => out.push(Check::error(format!("scherk psi={psi} closed form"), w)),
            None => {
                out.push(Check::residual(format!("scherk psi={psi} minimal_residual"), &minimal, tol_minimal));
                out.push(Check::residual(format!("scherk psi={psi} density"), &density, tol_density));
            }
        }
    }
    out
}

/// The constant values the first integrals take, where known.
pub fn expected_integrals(family: &DensityFamily) -> Option<[f64; 3]> {
    match *family {
        DensityFamily::HeliCatenoid { phi } => Some([0.0, 0.0, 8.0 * (2.0 * phi).cos()]),
        DensityFamily::DoublyPeriodic { a, c } => Some([0.0, 1.0, a * a - c * c]),
        _ => None,
    }
}

/// Spread of the first integrals over the in-domain grid nodes, their
/// distance from the expected constants, and the third-order system.
pub fn first_integral_checks(
    family: &DensityFamily,
    grid: &Grid,
    tol_spread: f64,
    tol_value: f64,
    tol_c_system: f64,
) -> Vec<Check> {
    if let Err(e) = family.validate() {
        return vec![Check::error("first integrals", e)];
    }
    let mut values: Vec<([f64; 3], (f64, f64))> = Vec::new();
    let mut c_sys = MaxTracker::new();
    let mut skipped = 0usize;
    for (x, y) in grid.points() {
        if family.check_domain(x, y).is_err() {
            skipped += 1;
            continue;
        }
        let c = match family.c_jet(x, y) {
            Ok(c) => c,
            Err(e) => return vec![Check::error("first integrals", format!("{}: {e}", at(x, y)))],
        };
        match (first_integrals(&c), c_system_residual(&c)) {
            (Ok(fi), Ok(r)) => {
                values.push(([fi.a1, fi.a2, fi.a3], (x, y)));
                c_sys.update(r.iter().fold(0.0f64, |m, v| m.max(v.abs())), || at(x, y));
            }
            (Err(e), _) | (_, Err(e)) => return vec![Check::error("first integrals", format!("{}: {e}", at(x, y)))],
        }
    }
    let detail = format!("{} nodes, {skipped} outside the domain", values.len());
    let mut out = Vec::new();
    for k in 0..3 {
        let mut spread = MaxTracker::new();
        if let Some((first, _)) = values.first() {
            let base = first[k];
            for (v, (x, y)) in &values {
                spread.update(v[k] - base, || at(*x, *y));
            }
        }
        out.push(Check::residual(format!("integral {} spread", k + 1), &spread, tol_spread).with_detail(detail.clone()));
    }
    if let Some(expected) = expected_integrals(family) {
        let mut dev = MaxTracker::new();
        for (v, (x, y)) in &values {
            for k in 0..3 {
                dev.update(v[k] - expected[k], || at(*x, *y));
            }
        }
        out.push(
            Check::residual("integrals match expected constants", &dev, tol_value)
                .with_detail(format!("expected ({}, {}, {})", expected[0], expected[1], expected[2])),
        );
    }
    out.push(Check::residual("c_system_residual", &c_sys, tol_c_system));
    out
}

/// Largest minus smallest value.
fn variation(v: &[f64]) -> f64 {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

/// Graphs on both branches along a serpentine path through the grid: both
/// have the family's density, and they differ by more than a constant or a
/// sign.
pub fn two_graph_checks(family: &DensityFamily, grid: &Grid, tol_density: f64, min_variation: f64) -> Vec<Check> {
    let path = grid.serpentine();
    let mut graphs = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let name = format!("branch {sign:?} reconstruction");
        let r = match reconstruct_u(&path, family, ThetaChoice::Branch(sign)) {
            Ok(r) => r,
            Err(e) => return vec![Check::error(name, e)],
        };
        let mut density = MaxTracker::new();
        let mut minimal = MaxTracker::new();
        for (((x, y), u), th) in r.points.iter().zip(&r.u).zip(&r.theta) {
            let j = match graph_jet(family, *x, *y, *u, *th, ThetaChoice::Branch(sign)) {
                Ok(j) => j,
                Err(e) => return vec![Check::error(name, format!("{}: {e}", at(*x, *y)))],
            };
            let f = density_value(family, *x, *y).unwrap_or(f64::NAN);
            density.update(1.0 + j.dx * j.dx + j.dy * j.dy - f * f, || at(*x, *y));
            minimal.update(minimal_residual(&j), || at(*x, *y));
        }
        graphs.push((sign, r.u, density, minimal));
    }
    let mut out = Vec::new();
    for (sign, _, density, minimal) in &graphs {
        out.push(Check::residual(format!("branch {sign:?} density"), density, tol_density));
        out.push(Check::residual(format!("branch {sign:?} minimal_residual"), minimal, tol_density));
    }
    let (up, um) = (&graphs[0].1, &graphs[1].1);
    let diff: Vec<f64> = up.iter().zip(um).map(|(a, b)| a - b).collect();
    let sum: Vec<f64> = up.iter().zip(um).map(|(a, b)| a + b).collect();
    for (name, v) in [("difference", diff), ("sum", sum)] {
        let var = variation(&v);
        let mut c = Check::exact(format!("{name} of the graphs is not constant"), var > min_variation, None);
        c.detail = Some(format!("variation {var:e}, threshold {min_variation:e}"));
        out.push(c);
    }
    out
}

/// Planes or Scherk-type graphs from a starting angle; for families whose
/// angle relation is empty.
pub fn phase_graph_checks(family: &DensityFamily, grid: &Grid, phase: f64, tol_density: f64) -> Vec<Check> {
    let path = grid.serpentine();
    let choice = ThetaChoice::Phase(phase);
    let r = match reconstruct_u(&path, family, choice) {
        Ok(r) => r,
        Err(e) => return vec![Check::error("phase reconstruction", e)],
    };
    let mut density = MaxTracker::new();
    let mut minimal = MaxTracker::new();
    for (((x, y), u), th) in r.points.iter().zip(&r.u).zip(&r.theta) {
        match graph_jet(family, *x, *y, *u, *th, choice) {
            Ok(j) => {
                let f = density_value(family, *x, *y).unwrap_or(f64::NAN);
                density.update(1.0 + j.dx * j.dx + j.dy * j.dy - f * f, || at(*x, *y));
                minimal.update(minimal_residual(&j), || at(*x, *y));
            }
            Err(e) => return vec![Check::error("phase reconstruction", format!("{}: {e}", at(*x, *y)))],
        }
    }
    vec![
        Check::residual("phase graph density", &density, tol_density),
        Check::residual("phase graph minimal_residual", &minimal, tol_density),
    ]
}

/// Lifted angle change around the large rectangle (expected `2π`) and the
/// section loop (expected `0`).
pub fn winding_checks(a: f64, c: f64, radius: f64, per_side: usize, samples: usize, tol: f64, tol_section: f64) -> Vec<Check> {
    let label = format!("a={a} c={c}");
    let mut out = Vec::new();
    let outer = rectangle_loop(a, c, radius, per_side).and_then(|p| lift_theta_along(&p, a, c, Sign::Plus));
    match outer {
        Ok(l) => {
            let mut t = MaxTracker::new();
            t.update(l.total_change() - TAU, || format!("total change {}", l.total_change()));
            out.push(Check::residual(format!("{label} rectangle winding"), &t, tol));
        }
        Err(e) => out.push(Check::error(format!("{label} rectangle winding"), e)),
    }
    let inner = section_loop(a, c, 0.0, samples).and_then(|p| lift_theta_along(&p, a, c, Sign::Plus));
    match inner {
        Ok(l) => {
            let mut t = MaxTracker::new();
            t.update(l.total_change(), || format!("total change {}", l.total_change()));
            out.push(Check::residual(format!("{label} section winding"), &t, tol_section));
        }
        Err(e) => out.push(Check::error(format!("{label} section winding"), e)),
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodTolerances {
    pub min_abs: f64,
    pub refinement: f64,
    pub negation: f64,
}

/// The period over the section loop: nonzero, stable under refinement and
/// odd under the sheet choice.
pub fn period_checks(a: f64, c: f64, seed: Sign, samples: usize, tol: PeriodTolerances) -> (Vec<Check>, Option<f64>) {
    let label = format!("a={a} c={c}");
    let opts = PeriodOptions { samples, tol: TAU_QUAD };
    let base = match period_sigma(a, c, seed, opts) {
        Ok(v) => v,
        Err(e) => return (vec![Check::error(format!("{label} period"), e)], None),
    };
    let mut out = Vec::new();
    let mut nonzero = Check::exact(format!("{label} period is nonzero"), base.abs() > tol.min_abs, None);
    nonzero.detail = Some(format!("period {base}, threshold {:e}", tol.min_abs));
    out.push(nonzero);
    match period_sigma(a, c, seed, opts.refined()) {
        Ok(r) => {
            let mut t = MaxTracker::new();
            t.update(r - base, || format!("refined {r}"));
            out.push(Check::residual(format!("{label} period refinement"), &t, tol.refinement));
        }
        Err(e) => out.push(Check::error(format!("{label} period refinement"), e)),
    }
    match period_sigma(a, c, seed.flip(), opts) {
        Ok(f) => {
            let mut t = MaxTracker::new();
            t.update(f + base, || format!("flipped {f}"));
            out.push(Check::residual(format!("{label} period negation"), &t, tol.negation));
        }
        Err(e) => out.push(Check::error(format!("{label} period negation"), e)),
    }
    (out, Some(base))
}

fn field_value(family: &DensityFamily, field: Field, x: f64, y: f64) -> Option<f64> {
    match field {
        Field::Density => density_value(family, x, y).ok(),
        Field::PField => family.mu_jet(x, y).and_then(|mu| compatibility_data(&mu)).map(|d| d.p).ok(),
        Field::Cos2Plus | Field::Cos2Minus => {
            let k = usize::from(field == Field::Cos2Minus);
            family.mu_jet(x, y).and_then(|mu| two_theta_solutions(&mu)).map(|s| s[k].0).ok()
        }
        Field::MinimalResidual => {
            let choice = if family.is_degenerate() { ThetaChoice::Phase(0.0) } else { ThetaChoice::Branch(Sign::Plus) };
            let theta = match choice {
                ThetaChoice::Phase(t) => t,
                ThetaChoice::Branch(s) => {
                    let mu = family.mu_jet(x, y).ok()?;
                    let k = usize::from(s == Sign::Minus);
                    let (c2, s2) = two_theta_solutions(&mu).ok()?[k];
                    0.5 * s2.atan2(c2)
                }
            };
            graph_jet(family, x, y, 0.0, theta, choice).map(|j| minimal_residual(&j)).ok()
        }
    }
}

/// A field sampled on the grid. Nodes where the field is undefined are left
/// empty in the table.
pub fn sample_field(family: &DensityFamily, grid: &Grid, field: Field) -> (Table, Vec<Check>) {
    let mut rows = Vec::new();
    let mut defined = 0usize;
    let mut finite = true;
    let mut min_value = f64::INFINITY;
    for (x, y) in grid.points() {
        let v = field_value(family, field, x, y);
        if let Some(v) = v {
            defined += 1;
            finite &= v.is_finite();
            min_value = min_value.min(v);
        }
        rows.push(vec![x.to_string(), y.to_string(), v.map(|v| v.to_string()).unwrap_or_default()]);
    }
    let total = rows.len();
    let mut checks = vec![Check::exact(format!("{} sampled", field.name()), defined > 0 && finite, None)
        .with_detail(format!("{defined} of {total} nodes defined"))];
    if field == Field::PField && matches!(family, DensityFamily::DoublyPeriodic { .. }) {
        checks.push(
            Check::exact("p_field positive", defined > 0 && min_value > 0.0, None).with_detail(format!("minimum {min_value}")),
        );
    }
    let table = Table {
        name: field.name().to_string(),
        header: vec!["x".into(), "y".into(), "value".into()],
        rows,
    };
    (table, checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(x: (f64, f64), y: (f64, f64), n: usize) -> Grid {
        Grid { x_min: x.0, x_max: x.1, y_min: y.0, y_max: y.1, nx: n, ny: n }
    }

    #[test]
    fn scherk_passes_on_a_small_grid() {
        let checks = scherk_checks(&grid((0.5, 3.0), (0.0, TAU), 6), &[0.0, 1.0], 1e-9, 1e-10);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn constant_density_field_is_constant() {
        let fam = DensityFamily::ConstantPlane { c: 2.0 };
        let (t, checks) = sample_field(&fam, &grid((0.0, 1.0), (0.0, 1.0), 3), Field::Density);
        assert!(checks[0].passed);
        assert!(t.rows.iter().all(|r| r[2] == "2"));
    }

    #[test]
    fn heli_catenoid_field_matches_density() {
        let fam = DensityFamily::HeliCatenoid { phi: std::f64::consts::FRAC_PI_4 };
        let g = grid((-2.0, 2.0), (-2.0, 2.0), 5);
        let (t, _) = sample_field(&fam, &g, Field::Density);
        for row in &t.rows {
            let (x, y): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
            match density_value(&fam, x, y) {
                Ok(v) => assert_eq!(row[2], v.to_string()),
                Err(_) => assert!(row[2].is_empty()),
            }
        }
    }

    #[test]
    fn doubly_periodic_p_field_is_positive() {
        let fam = DensityFamily::DoublyPeriodic { a: 1.0, c: 1.0 };
        let (_, checks) = sample_field(&fam, &grid((0.5, 2.5), (-3.0, 3.0), 7), Field::PField);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn phase_graphs_for_the_constant_family() {
        let fam = DensityFamily::ConstantPlane { c: 1.5 };
        let checks = phase_graph_checks(&fam, &grid((0.0, 1.0), (0.0, 1.0), 4), 0.7, 1e-9);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn inadmissible_pairs_fail_with_the_reason() {
        let checks = winding_checks(1.5, 0.2, 8.0, 100, 100, 1e-3, 1e-6);
        assert!(checks.iter().all(|c| !c.passed));
        assert!(checks[0].witness.as_ref().unwrap().contains("|a − c| < 1"));
    }
}
