//! Exact calculus of harmonic polynomials on `ℝⁿ`: harmonic projection, the
//! degree-raising and degree-lowering pairings, the invariant inner product,
//! and the spectral sequences attached to constant-energy maps.
//!
//! The Laplacian is the geometer's `Δ = −Σ ∂²/∂xᵢ²`.

mod poly;
mod spectral;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, rat, Rational};

pub use poly::{monomials_of_degree, Monomial, Poly};
pub(crate) use poly::monomial_value;
pub use spectral::{
    a_sequence, admissible_lambda, b_coeff, dim_harmonics, dim_harmonics_by_rank, second_moment_constants,
    ASequence, SecondMomentConstants, SpectralParams,
};

/// Geometer's Laplacian `−Σ ∂²/∂xᵢ²`.
pub fn laplacian(p: &Poly) -> Poly {
    -&p.analyst_laplacian()
}

/// A homogeneous harmonic polynomial of a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicElement {
    poly: Poly,
    degree: u32,
}

impl HarmonicElement {
    /// Checks homogeneity of degree `degree` and harmonicity exactly.
    pub fn new(poly: Poly, degree: u32) -> Result<Self> {
        if !poly.is_homogeneous_of(degree) {
            return Err(Error::NotHomogeneous);
        }
        if !poly.analyst_laplacian().is_zero() {
            return Err(Error::DegreeViolation(format!("{poly} is not harmonic")));
        }
        Ok(HarmonicElement { poly, degree })
    }

    pub fn zero(nvars: usize, degree: u32) -> Self {
        HarmonicElement { poly: Poly::zero(nvars), degree }
    }

    /// A linear form `Σ cᵢ xᵢ`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        HarmonicElement { poly: Poly::linear(coeffs), degree: 1 }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HarmonicElement { poly: self.poly.scale(c), degree: self.degree }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert!(self.degree == o.degree || self.is_zero() || o.is_zero());
        let degree = if self.is_zero() { o.degree } else { self.degree };
        HarmonicElement { poly: &self.poly + &o.poly, degree }
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert!(self.degree == o.degree || self.is_zero() || o.is_zero());
        let degree = if self.is_zero() { o.degree } else { self.degree };
        HarmonicElement { poly: &self.poly - &o.poly, degree }
    }

    fn unchecked(poly: Poly, degree: u32) -> Self {
        debug_assert!(poly.is_homogeneous_of(degree));
        HarmonicElement { poly, degree }
    }
}

/// `p = h + R·r` with `h` harmonic, for `p` homogeneous of degree `d`.
pub fn harmonic_decompose(p: &Poly, d: u32) -> Result<(HarmonicElement, Poly)> {
    if !p.is_homogeneous_of(d) {
        return Err(Error::NotHomogeneous);
    }
    let n = p.nvars() as i64;
    let r = Poly::r_squared(p.nvars());
    // h = Σ_j c_j R^j Δ^j p with c_{j+1} = −c_j / (2(j+1)(n + 2d − 2j − 4))
    let mut h = p.clone();
    let mut rest = Poly::zero(p.nvars());
    let mut c = Rational::one();
    let mut lap = p.clone();
    let mut r_pow = Poly::one(p.nvars());
    for j in 0..(d / 2) as i64 {
        c = -c / int(2 * (j + 1) * (n + 2 * d as i64 - 2 * j - 4));
        lap = lap.analyst_laplacian();
        let term = (&r_pow * &lap).scale(&c);
        rest = &rest - &term;
        r_pow = &r_pow * &r;
        h = &h + &(&r * &term);
    }
    Ok((HarmonicElement::unchecked(h, d), rest))
}

fn linear_coeffs(xi: &HarmonicElement) -> Result<Vec<Rational>> {
    if xi.degree != 1 {
        return Err(Error::DegreeViolation(format!("expected a linear form, got degree {}", xi.degree)));
    }
    Ok(xi.poly.linear_coeffs().unwrap_or_else(|| vec![Rational::zero(); xi.nvars()]))
}

/// `f·ξ`, the derivative of `f` along the vector dual to `ξ`.
pub fn dot(f: &HarmonicElement, xi: &HarmonicElement) -> Result<HarmonicElement> {
    let c = linear_coeffs(xi)?;
    let mut out = Poly::zero(f.nvars());
    for (i, ci) in c.iter().enumerate() {
        if !ci.is_zero() {
            out = &out + &f.poly.partial(i).scale(ci);
        }
    }
    Ok(HarmonicElement::unchecked(out, f.degree.saturating_sub(1)))
}

/// `f∨ξ = (n + 2d − 2) ξf − R (f·ξ)`.
pub fn vee(f: &HarmonicElement, xi: &HarmonicElement) -> Result<HarmonicElement> {
    vee_normalized(f, xi, 0)
}

fn vee_normalized(f: &HarmonicElement, xi: &HarmonicElement, offset: i64) -> Result<HarmonicElement> {
    let k = int(f.nvars() as i64 + 2 * f.degree as i64 - 2 + offset);
    let lowered = dot(f, xi)?;
    let r = Poly::r_squared(f.nvars());
    let out = &(&xi.poly * &f.poly).scale(&k) - &(&r * &lowered.poly);
    Ok(HarmonicElement::unchecked(out, f.degree + 1))
}

/// `(α∧β).f = α (f·β) − β (f·α)`.
pub fn so_action(alpha: &HarmonicElement, beta: &HarmonicElement, f: &HarmonicElement) -> Result<HarmonicElement> {
    let fb = dot(f, beta)?;
    let fa = dot(f, alpha)?;
    let out = &(&alpha.poly * &fb.poly) - &(&beta.poly * &fa.poly);
    Ok(HarmonicElement::unchecked(out, f.degree))
}

/// `⟨f, g⟩ = (−Δ)^d (fg) / (2^d d!)`.
pub fn inner(f: &HarmonicElement, g: &HarmonicElement) -> Result<Rational> {
    if f.degree != g.degree {
        return Err(Error::DegreeMismatch(f.degree, g.degree));
    }
    let mut p = &f.poly * &g.poly;
    let mut denom = Rational::one();
    for k in 1..=f.degree as i64 {
        p = p.analyst_laplacian();
        denom *= int(2 * k);
    }
    Ok(p.constant_term() / denom)
}

/// `Σ α! f_α g_α`, which equals [`inner`] on harmonic polynomials.
pub fn apolar(f: &Poly, g: &Poly) -> Rational {
    f.terms().map(|(m, c)| c * g.coefficient(m) * m.factorial()).sum()
}

/// The linear form `Σᵢ ⟨f, g·xᵢ⟩ xᵢ`.
pub fn brace(f: &HarmonicElement, g: &HarmonicElement) -> Result<HarmonicElement> {
    if g.degree != f.degree + 1 {
        return Err(Error::DegreeMismatch(f.degree, g.degree));
    }
    let n = f.nvars();
    let coeffs = (0..n)
        .map(|i| inner(f, &HarmonicElement::unchecked(g.poly.partial(i), f.degree)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HarmonicElement::linear(&coeffs))
}

/// Harmonic projections of the degree-`d` monomials, reduced to a basis of
/// `H_d` (not orthogonalized).
pub fn harmonic_spanning_basis(n: usize, d: u32) -> Vec<HarmonicElement> {
    let mut basis: Vec<HarmonicElement> = Vec::new();
    let mut echelon: Vec<(Monomial, Poly)> = Vec::new();
    for m in monomials_of_degree(n, d) {
        let (h, _) = harmonic_decompose(&Poly::monomial(n, &m.0, Rational::one()), d).expect("homogeneous");
        // reduce against the leading terms collected so far
        let mut v = h.poly.clone();
        for (lead, row) in &echelon {
            let c = v.coefficient(lead);
            if !c.is_zero() {
                v = &v - &row.scale(&c);
            }
        }
        let lead = v.terms().next().map(|(m, c)| (m.clone(), c.clone()));
        if let Some((lead, c)) = lead {
            echelon.push((lead, v.scale(&c.recip())));
            basis.push(h);
        }
    }
    basis
}

/// A pseudo-random polynomial with small rational coefficients.
pub fn random_homogeneous(rng: &mut ChaCha8Rng, n: usize, d: u32) -> Poly {
    Poly::from_terms(
        n,
        monomials_of_degree(n, d).into_iter().map(|m| {
            let num = rng.random_range(-5i64..=5);
            let den = rng.random_range(1i64..=4);
            (m, rat(num, den))
        }),
    )
}

pub fn random_harmonic(rng: &mut ChaCha8Rng, n: usize, d: u32) -> HarmonicElement {
    harmonic_decompose(&random_homogeneous(rng, n, d), d).expect("homogeneous").0
}

pub fn random_linear(rng: &mut ChaCha8Rng, n: usize) -> HarmonicElement {
    HarmonicElement::unchecked(random_homogeneous(rng, n, 1), 1)
}

/// Outcome of one pairing identity over all trials.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub trials: usize,
    /// First failing trial, if any.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub n: usize,
    pub d: u32,
    pub trials: usize,
    pub seed: u64,
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.witness.is_none())
    }

    /// The first failure as an error.
    pub fn into_result(self) -> Result<Self> {
        match self.outcomes.iter().find(|o| o.witness.is_some()) {
            Some(o) => Err(Error::IdentityFailure {
                identity: o.name.to_string(),
                witness: o.witness.clone().unwrap_or_default(),
            }),
            None => Ok(self),
        }
    }
}

pub const IDENTITY_NAMES: [&str; 4] = ["vee_dot_commutator", "dot_vee_commutator", "vee_dot_norm", "adjointness"];

/// Checks the four pairing identities on `trials` random inputs.
pub fn identity_suite(n: usize, d: u32, trials: usize, seed: u64) -> Result<IdentityReport> {
    identity_suite_with_offset(n, d, trials, seed, 0)
}

/// As [`identity_suite`], with the normalization constant of `∨` shifted by
/// `offset`; a nonzero offset must break the identities.
pub fn identity_suite_with_offset(n: usize, d: u32, trials: usize, seed: u64, offset: i64) -> Result<IdentityReport> {
    if n < 3 {
        return Err(Error::ParamViolation(format!("dimension n = {n} must be at least 3")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes: Vec<IdentityOutcome> =
        IDENTITY_NAMES.iter().map(|&name| IdentityOutcome { name, passed: 0, trials, witness: None }).collect();
    let vee = |f: &HarmonicElement, xi: &HarmonicElement| vee_normalized(f, xi, offset);
    let (ni, di) = (n as i64, d as i64);
    for t in 0..trials {
        let f = random_harmonic(&mut rng, n, d);
        let g = random_harmonic(&mut rng, n, d + 1);
        let alpha = random_linear(&mut rng, n);
        let beta = random_linear(&mut rng, n);
        let rot = so_action(&alpha, &beta, &f)?;
        let norm_alpha = inner(&alpha, &alpha)?;

        let lhs1 = dot(&vee(&f, &alpha)?, &beta)?.sub(&dot(&vee(&f, &beta)?, &alpha)?);
        let rhs1 = rot.scale(&int(ni + 2 * di));
        let lhs2 = vee(&dot(&f, &alpha)?, &beta)?.sub(&vee(&dot(&f, &beta)?, &alpha)?);
        let rhs2 = rot.scale(&int(-(ni + 2 * di - 4)));
        let lhs3 = dot(&vee(&f, &alpha)?, &alpha)?.sub(&vee(&dot(&f, &alpha)?, &alpha)?);
        let rhs3 = f.scale(&(int(ni + 2 * di - 2) * &norm_alpha));
        // pairing against a harmonic argument is the apolar pairing
        let lhs4 = apolar(vee(&f, &alpha)?.poly(), g.poly());
        let rhs4 = int(ni + 2 * di - 2) * apolar(f.poly(), dot(&g, &alpha)?.poly());

        let checks = [
            (lhs1.poly() == rhs1.poly(), format!("{} ≠ {}", lhs1.poly(), rhs1.poly())),
            (lhs2.poly() == rhs2.poly(), format!("{} ≠ {}", lhs2.poly(), rhs2.poly())),
            (lhs3.poly() == rhs3.poly(), format!("{} ≠ {}", lhs3.poly(), rhs3.poly())),
            (lhs4 == rhs4, format!("{} ≠ {}", fmt_rational(&lhs4), fmt_rational(&rhs4))),
        ];
        for (o, (ok, msg)) in outcomes.iter_mut().zip(checks) {
            if ok {
                o.passed += 1;
            } else if o.witness.is_none() {
                o.witness = Some(format!("trial {t}: {msg}"));
            }
        }
    }
    Ok(IdentityReport { n, d, trials, seed, outcomes })
}
