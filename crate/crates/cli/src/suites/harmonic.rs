//! Exact checks on harmonic polynomials and the spectral sequences.

use extremals_core::exact::{fmt_rational, int, Rational};
use extremals_core::harmonic_algebra::{
    a_sequence, admissible_lambda, dim_harmonics, dim_harmonics_by_rank, identity_suite, identity_suite_with_offset,
    SpectralParams,
};

use crate::report::Check;

/// The four pairing identities for every `n` and `d ≤ d_max`, and a run with
/// a shifted normalization that must fail.
pub fn identity_checks(ns: &[usize], d_max: u32, trials: usize, seed: u64, offset: i64) -> Vec<Check> {
    let mut out = Vec::new();
    for &n in ns {
        for d in 0..=d_max {
            let name = format!("identities n={n} d={d}");
            match identity_suite(n, d, trials, seed) {
                Ok(r) => {
                    let witness = r.outcomes.iter().find_map(|o| o.witness.clone().map(|w| format!("{}: {w}", o.name)));
                    let counts: Vec<String> = r.outcomes.iter().map(|o| format!("{} {}/{}", o.name, o.passed, o.trials)).collect();
                    out.push(Check::exact(name, r.all_passed(), witness).with_detail(counts.join(", ")));
                }
                Err(e) => out.push(Check::error(name, e)),
            }
        }
    }
    let n = ns.first().copied().unwrap_or(3);
    let d = d_max.clamp(1, 2);
    let name = format!("mutation offset={offset} n={n} d={d} is detected");
    match identity_suite_with_offset(n, d, trials.max(1), seed, offset) {
        Ok(r) => {
            let failing: Vec<&str> = r.outcomes.iter().filter(|o| o.passed < o.trials).map(|o| o.name).collect();
            out.push(Check::exact(name, !r.all_passed(), None).with_detail(format!("failing: {}", failing.join(", "))));
        }
        Err(e) => out.push(Check::error(name, e)),
    }
    out
}

/// For each integer `λ ≤ lambda_max`: the sequence ends in zeros exactly
/// when `λ` is admissible, and turns negative otherwise.
pub fn spectrum_checks(ns: &[usize], k: &Rational, lambda_max: i64) -> Vec<Check> {
    let mut out = Vec::new();
    for &n in ns {
        let mut witness = None;
        let (mut admissible, mut inadmissible) = (0, 0);
        for lambda in 0..=lambda_max {
            let params = SpectralParams::new(n, k.clone(), int(lambda));
            // enough terms for b_m to change sign
            let seq = a_sequence(&params, lambda_max as u32 + 3);
            let ok = match admissible_lambda(&params) {
                Some(m) => {
                    admissible += 1;
                    seq.first_zero == Some(m as usize + 1) && seq.ends_in_zeros() && seq.first_negative.is_none()
                }
                None => {
                    inadmissible += 1;
                    seq.first_negative.is_some() && seq.first_zero.is_none()
                }
            };
            if !ok && witness.is_none() {
                let head: Vec<String> = seq.values.iter().take(6).map(fmt_rational).collect();
                witness = Some(format!("λ={lambda}: [{}]", head.join(", ")));
            }
        }
        out.push(Check::exact(format!("spectral dichotomy n={n} K={}", fmt_rational(k)), witness.is_none(), witness)
            .with_detail(format!("{admissible} admissible, {inadmissible} inadmissible")));
    }
    out
}

/// The dimension formula against the rank of the Laplacian.
pub fn dims_checks(n_max: usize, m_max: u32) -> Vec<Check> {
    let mut mismatch = None;
    let mut count = 0;
    for n in 1..=n_max {
        for m in 0..=m_max {
            count += 1;
            let (formula, rank) = (dim_harmonics(n, m), dim_harmonics_by_rank(n, m));
            if formula != rank && mismatch.is_none() {
                mismatch = Some(format!("N={n} m={m}: formula {formula}, rank {rank}"));
            }
        }
    }
    vec![Check::exact("dimension formula matches Laplacian kernel", mismatch.is_none(), mismatch)
        .with_detail(format!("{count} cases, N ≤ {n_max}, m ≤ {m_max}"))]
}
