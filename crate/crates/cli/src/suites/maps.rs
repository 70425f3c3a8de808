//! Checks on constant-energy maps between spheres.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use extremals_core::constant_energy_maps::{
    construct_map, construct_map_float, energy_density, h_of_g, psd_line_search, solve_h_equals_rm, SolutionSpace,
    SphericalHarmonicMap,
};
use extremals_core::harmonic_algebra::{monomials_of_degree, Poly};

use crate::report::{Check, MaxTracker};

/// A uniformly distributed point of the unit sphere.
pub fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if (0.1..=1.0).contains(&r) {
            return v.iter().map(|t| t / r).collect();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSummary {
    pub basis_dimension: usize,
    pub kernel_dimension: usize,
    pub rank: usize,
    pub lower_bound: i64,
    pub rotation_dimension: usize,
    pub margin: i64,
}

/// The solution space, its certificate and the dimension count.
pub fn kernel_checks(sol: &SolutionSpace) -> (Vec<Check>, KernelSummary) {
    let n = sol.basis.n_ambient;
    let d = sol.basis.dim();
    let sym = d * (d + 1) / 2;
    let target = monomials_of_degree(n, 2 * sol.basis.m).len();
    let summary = KernelSummary {
        basis_dimension: d,
        kernel_dimension: sol.kernel.dimension,
        rank: sol.kernel.rank,
        lower_bound: sym as i64 - target as i64,
        rotation_dimension: n * (n - 1) / 2,
        margin: sol.kernel.dimension as i64 - (n * (n - 1) / 2) as i64,
    };
    let mut out = Vec::new();
    let r_m = Poly::r_squared(n).pow(sol.basis.m);
    let particular = h_of_g(&sol.g0, &sol.basis).map(|p| p == r_m).unwrap_or(false);
    out.push(Check::exact("h(G0) = R^m", particular, None));
    out.push(Check::exact("G0 is positive semidefinite", sol.g0.is_psd(), None));
    out.push(match sol.kernel.verify(&sol.basis) {
        Ok(()) => Check::exact("kernel certificate", true, None),
        Err(e) => Check::error("kernel certificate", e),
    });
    out.push(
        Check::exact("kernel dimension bound", summary.kernel_dimension as i64 >= summary.lower_bound, None).with_detail(format!(
            "kernel {} ≥ {} − {} (rank {})",
            summary.kernel_dimension, sym, target, summary.rank
        )),
    );
    out.push(Check::exact("nonuniqueness count", true, None).with_detail(format!(
        "kernel {} against rotations {}: margin {}",
        summary.kernel_dimension, summary.rotation_dimension, summary.margin
    )));
    (out, summary)
}

fn map_checks(label: &str, map: &SphericalHarmonicMap, float_tol: f64) -> Vec<Check> {
    let identity = match map.sum_of_squares_defect() {
        Some(d) => Check::exact(format!("{label} sum of squares is R^m"), d.is_zero(), (!d.is_zero()).then(|| d.to_string())),
        None => {
            let mut t = MaxTracker::new();
            t.update(map.float_defect(), || "largest coefficient".into());
            Check::residual(format!("{label} sum of squares is R^m"), &t, float_tol)
        }
    };
    vec![
        identity,
        Check::exact(format!("{label} components are harmonic"), map.components_harmonic(), None)
            .with_detail(format!("{} components, exact {}", map.len(), map.is_exact())),
    ]
}

/// The map from `G0` and, when the kernel is nonzero, one from a point
/// found by line search along a kernel direction.
pub fn construct_maps(sol: &SolutionSpace, direction: Option<usize>, float: bool) -> (Vec<Check>, Vec<SphericalHarmonicMap>) {
    let mut checks = Vec::new();
    let mut maps = Vec::new();
    let build = |g| if float { construct_map_float(g, &sol.basis) } else { construct_map(g, &sol.basis) };
    match build(&sol.g0) {
        Ok(m) => {
            checks.extend(map_checks("G0 map", &m, extremals_core::tolerances::TAU_FLOAT_FACTOR));
            checks.push(Check::exact("G0 map has rank many components", m.len() == sol.basis.dim(), None));
            maps.push(m);
        }
        Err(e) => checks.push(Check::error("G0 map", e)),
    }
    let dir = direction.unwrap_or(0);
    if let Some(k) = sol.kernel.basis.get(dir) {
        match psd_line_search(&sol.g0, k) {
            Ok(ls) => match build(&ls.g) {
                Ok(m) => {
                    checks.extend(map_checks("line search map", &m, extremals_core::tolerances::TAU_FLOAT_FACTOR));
                    if let Some(first) = maps.first() {
                        let gap = (first.component_gram() - m.component_gram()).amax();
                        checks.push(
                            Check::exact("line search map differs from the G0 map", gap > 1e-6, None)
                                .with_detail(format!("t = {}, t_max = {}, Gram gap {gap:e}", extremals_core::exact::fmt_rational(&ls.t), ls.t_max)),
                        );
                    }
                    maps.push(m);
                }
                Err(e) => checks.push(Check::error("line search map", e)),
            },
            Err(e) => checks.push(Check::error("line search", e)),
        }
    } else if direction.is_some() {
        checks.push(Check::error("line search", format!("kernel has no direction {dir}")));
    }
    (checks, maps)
}

/// Energy density at random unit points against `m(m + n − 1)`.
pub fn energy_checks(maps: &[SphericalHarmonicMap], points: usize, seed: u64, tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    for (i, map) in maps.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let lambda = map.lambda() as f64;
        let mut t = MaxTracker::new();
        let mut failure = None;
        for _ in 0..points {
            let x = random_unit(&mut rng, map.n_ambient);
            match energy_density(map, &x) {
                Ok(e) => t.update(e - lambda, || format!("{x:?}")),
                Err(e) => {
                    failure.get_or_insert(e.to_string());
                }
            }
        }
        let name = format!("map {i} energy density = {lambda}");
        out.push(match failure {
            Some(w) => Check::error(name, w),
            None => Check::residual(name, &t, tol),
        });
    }
    if let Some(map) = maps.first() {
        let mut off = vec![0.0; map.n_ambient];
        off[0] = 1.5;
        out.push(Check::exact(
            "points off the sphere are rejected",
            matches!(energy_density(map, &off), Err(extremals_core::Error::NotOnSphere(_))),
            None,
        ));
    }
    out
}

pub fn solve(n_ambient: usize, m: u32) -> Result<SolutionSpace, extremals_core::Error> {
    solve_h_equals_rm(n_ambient, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_and_two() {
        let sol = solve(4, 1).unwrap();
        let (checks, s) = kernel_checks(&sol);
        assert!(checks.iter().all(|c| c.passed));
        assert_eq!(s.kernel_dimension, 0);
        let (checks, maps) = construct_maps(&sol, None, false);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert_eq!(maps.len(), 1);
        assert!(energy_checks(&maps, 20, 1, 1e-9).iter().all(|c| c.passed));

        let sol = solve(4, 2).unwrap();
        let (_, s) = kernel_checks(&sol);
        assert_eq!((s.kernel_dimension, s.margin, s.lower_bound), (10, 4, 10));
        let (checks, maps) = construct_maps(&sol, Some(2), true);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert!(maps.iter().all(|m| !m.is_exact()));
    }
}
