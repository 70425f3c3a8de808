//! Harmonic maps `Sⁿ → S^N` of constant energy density built from Gram
//! matrices over an orthogonal basis of the harmonic polynomials `H_m`.
//!
//! A symmetric `G` over the basis `h_β` defines `h(G) = Σ g^{αβ} h_α h_β`.
//! Every positive semidefinite `G` with `h(G) = R^m` factors as `G = SᵀS`,
//! and the components `F = S h` restrict to a harmonic map of the unit
//! sphere with energy density `m(m + n − 1)`.

use std::cell::OnceCell;
use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, ldlt_psd, nullspace, rational_sqrt, rank, round_to, zeros, Ldlt, Matrix, Rational};
use crate::harmonic_algebra::{
    apolar, dim_harmonics, harmonic_spanning_basis, monomial_value, HarmonicElement, Monomial, Poly,
};

/// Pairwise orthogonal basis of `H_m` with exact squared norms.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalBasis {
    pub n_ambient: usize,
    pub m: u32,
    pub elements: Vec<HarmonicElement>,
    pub norms_squared: Vec<Rational>,
}

impl OrthogonalBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Gram–Schmidt over the harmonic projections of the degree-`m` monomials.
pub fn basis_hm(n_ambient: usize, m: u32) -> Result<OrthogonalBasis> {
    if n_ambient < 3 {
        return Err(Error::ParamViolation(format!("ambient dimension {n_ambient} must be at least 3")));
    }
    let mut elements: Vec<HarmonicElement> = Vec::new();
    let mut norms_squared: Vec<Rational> = Vec::new();
    for h in harmonic_spanning_basis(n_ambient, m) {
        let mut v = h;
        for (e, nu) in elements.iter().zip(&norms_squared) {
            let c = apolar(v.poly(), e.poly()) / nu;
            if !c.is_zero() {
                v = v.sub(&e.scale(&c));
            }
        }
        let nu = apolar(v.poly(), v.poly());
        if !nu.is_zero() {
            elements.push(v);
            norms_squared.push(nu);
        }
    }
    debug_assert_eq!(elements.len() as u64, dim_harmonics(n_ambient, m));
    Ok(OrthogonalBasis { n_ambient, m, elements, norms_squared })
}

/// A symmetric matrix of exact rationals with a lazily computed PSD
/// certificate.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    entries: Matrix,
    certificate: OnceCell<std::result::Result<Ldlt, Vec<Rational>>>,
}

impl PartialEq for GramMatrix {
    fn eq(&self, o: &Self) -> bool {
        self.entries == o.entries
    }
}

impl GramMatrix {
    pub fn new(entries: Matrix) -> Result<Self> {
        let d = entries.len();
        if let Some(row) = entries.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: row.len() });
        }
        for i in 0..d {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::ParamViolation(format!("Gram matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(GramMatrix { entries, certificate: OnceCell::new() })
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut e = zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            e[i][i] = v.clone();
        }
        GramMatrix { entries: e, certificate: OnceCell::new() }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    /// `self + t·k`.
    pub fn add_scaled(&self, t: &Rational, k: &GramMatrix) -> Result<GramMatrix> {
        if k.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: k.dim() });
        }
        let e = self
            .entries
            .iter()
            .zip(&k.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + t * y).collect())
            .collect();
        Ok(GramMatrix { entries: e, certificate: OnceCell::new() })
    }

    /// Exact `LDLᵀ` certificate, or `NotPsd` with a vector `w`, `wᵀGw < 0`.
    pub fn psd_certificate(&self) -> Result<&Ldlt> {
        match self.certificate.get_or_init(|| ldlt_psd(&self.entries)) {
            Ok(l) => Ok(l),
            Err(w) => Err(Error::NotPsd { witness: w.iter().map(fmt_rational).collect() }),
        }
    }

    pub fn is_psd(&self) -> bool {
        self.psd_certificate().is_ok()
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| crate::exact::to_f64(&self.entries[i][j]))
    }
}

/// `h(G) = Σ g^{αβ} h_α h_β`.
pub fn h_of_g(g: &GramMatrix, basis: &OrthogonalBasis) -> Result<Poly> {
    if g.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: g.dim() });
    }
    let mut out = Poly::zero(basis.n_ambient);
    for a in 0..g.dim() {
        for b in a..g.dim() {
            let c = g.get(a, b);
            if c.is_zero() {
                continue;
            }
            let c = if a == b { c.clone() } else { c * int(2) };
            out = &out + &(basis.elements[a].poly() * basis.elements[b].poly()).scale(&c);
        }
    }
    Ok(out)
}

/// Basis of `{G : h(G) = 0}` with its dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCertificate {
    pub basis: Vec<GramMatrix>,
    pub dimension: usize,
    /// Rank of `G ↦ h(G)` on symmetric matrices.
    pub rank: usize,
}

impl KernelCertificate {
    /// Rechecks `h(k) = 0` and linear independence exactly.
    pub fn verify(&self, basis: &OrthogonalBasis) -> Result<()> {
        for k in &self.basis {
            if !h_of_g(k, basis)?.is_zero() {
                return Err(Error::IdentityFailure {
                    identity: "kernel".into(),
                    witness: "h(k) is not zero".into(),
                });
            }
        }
        let d = basis.dim();
        let rows: Matrix = self.basis.iter().map(|k| sym_coordinates(k, d)).collect();
        if !rows.is_empty() && rank(&rows) != rows.len() {
            return Err(Error::IdentityFailure {
                identity: "kernel".into(),
                witness: "basis is linearly dependent".into(),
            });
        }
        if self.rank + self.dimension != d * (d + 1) / 2 {
            return Err(Error::DimensionMismatch { expected: d * (d + 1) / 2, got: self.rank + self.dimension });
        }
        Ok(())
    }
}

fn sym_pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|a| (a..d).map(move |b| (a, b))).collect()
}

fn sym_coordinates(g: &GramMatrix, d: usize) -> Vec<Rational> {
    sym_pairs(d).into_iter().map(|(a, b)| g.get(a, b).clone()).collect()
}

/// The particular solution and the kernel of `h(G) = R^m`.
#[derive(Debug, Clone)]
pub struct SolutionSpace {
    pub basis: OrthogonalBasis,
    /// `h(diag(1/ν)) = c R^m`.
    pub c: Rational,
    /// `c⁻¹ diag(1/ν)`, the identity in orthonormal coordinates up to scale.
    pub g0: GramMatrix,
    pub kernel: KernelCertificate,
}

pub fn solve_h_equals_rm(n_ambient: usize, m: u32) -> Result<SolutionSpace> {
    if n_ambient < 4 {
        return Err(Error::ParamViolation(format!("ambient dimension {n_ambient} must be at least 4")));
    }
    let basis = basis_hm(n_ambient, m)?;
    let d = basis.dim();
    let inv_norms: Vec<Rational> = basis.norms_squared.iter().map(|v| v.recip()).collect();
    let unit = h_of_g(&GramMatrix::diagonal(&inv_norms), &basis)?;
    let r_m = Poly::r_squared(n_ambient).pow(m);
    let mut lead = vec![0u32; n_ambient];
    lead[0] = 2 * m;
    let c = unit.coefficient(&Monomial(lead));
    if c.is_zero() || unit != r_m.scale(&c) {
        return Err(Error::IdentityFailure {
            identity: "equivariance".into(),
            witness: format!("{unit}"),
        });
    }
    let g0 = GramMatrix::diagonal(&inv_norms.iter().map(|v| v / &c).collect::<Vec<_>>());

    // columns: h_a h_b (doubled off the diagonal) in monomial coordinates
    let pairs = sym_pairs(d);
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut columns: Vec<Poly> = Vec::with_capacity(pairs.len());
    for &(a, b) in &pairs {
        let mut p = basis.elements[a].poly() * basis.elements[b].poly();
        if a != b {
            p = p.scale(&int(2));
        }
        for (mono, _) in p.terms() {
            let next = rows.len();
            rows.entry(mono.clone()).or_insert(next);
        }
        columns.push(p);
    }
    let mut mat = zeros(rows.len(), pairs.len());
    for (j, p) in columns.iter().enumerate() {
        for (mono, coef) in p.terms() {
            mat[rows[mono]][j] = coef.clone();
        }
    }
    let null = nullspace(&mat, pairs.len());
    let kernel_basis = null
        .iter()
        .map(|v| {
            let mut e = zeros(d, d);
            for (&(a, b), x) in pairs.iter().zip(v) {
                e[a][b] = x.clone();
                e[b][a] = x.clone();
            }
            GramMatrix::new(e)
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel = KernelCertificate { dimension: kernel_basis.len(), rank: pairs.len() - kernel_basis.len(), basis: kernel_basis };
    Ok(SolutionSpace { basis, c, g0, kernel })
}

/// `scale_squared · poly`, with `scale_squared ≥ 0` rational.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledPoly {
    pub scale_squared: Rational,
    pub poly: Poly,
}

impl ScaledPoly {
    pub fn scale(&self) -> f64 {
        crate::exact::to_f64(&self.scale_squared).sqrt()
    }
}

/// Map components: exact scaled rational polynomials, or floating linear
/// combinations of the basis.
#[derive(Debug, Clone, PartialEq)]
pub enum MapComponents {
    Exact(Vec<ScaledPoly>),
    /// Row `k` holds the coefficients of component `k` in the basis.
    Float(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphericalHarmonicMap {
    /// Ambient dimension of the domain, `n + 1`.
    pub n_ambient: usize,
    pub m: u32,
    pub basis: OrthogonalBasis,
    pub components: MapComponents,
}

/// A component flattened to monomial coefficients in floating point.
pub type FloatPoly = Vec<(Monomial, f64)>;

impl SphericalHarmonicMap {
    /// Domain sphere dimension `n`.
    pub fn n(&self) -> usize {
        self.n_ambient - 1
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.components, MapComponents::Exact(_))
    }

    pub fn len(&self) -> usize {
        match &self.components {
            MapComponents::Exact(c) => c.len(),
            MapComponents::Float(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `λ = m(m + n − 1)`.
    pub fn lambda(&self) -> u32 {
        self.m * (self.m + self.n() as u32 - 1)
    }

    /// `Σ F_α² − R^m`, exactly; `None` on the floating path.
    pub fn sum_of_squares_defect(&self) -> Option<Poly> {
        let MapComponents::Exact(c) = &self.components else { return None };
        let mut s = Poly::zero(self.n_ambient);
        for f in c {
            s = &s + &(&f.poly * &f.poly).scale(&f.scale_squared);
        }
        Some(&s - &Poly::r_squared(self.n_ambient).pow(self.m))
    }

    /// Components as floating monomial expansions, scales folded in.
    pub fn float_components(&self) -> Vec<FloatPoly> {
        match &self.components {
            MapComponents::Exact(c) => c
                .iter()
                .map(|f| {
                    let s = f.scale();
                    f.poly.terms().map(|(mo, co)| (mo.clone(), s * crate::exact::to_f64(co))).collect()
                })
                .collect(),
            MapComponents::Float(rows) => rows
                .iter()
                .map(|row| {
                    let mut acc: BTreeMap<Monomial, f64> = BTreeMap::new();
                    for (w, h) in row.iter().zip(&self.basis.elements) {
                        for (mo, co) in h.poly().terms() {
                            *acc.entry(mo.clone()).or_default() += w * crate::exact::to_f64(co);
                        }
                    }
                    acc.into_iter().rev().collect()
                })
                .collect(),
        }
    }

    /// Largest coefficient of `Σ F_α² − R^m` in floating point.
    pub fn float_defect(&self) -> f64 {
        let mut acc: BTreeMap<Monomial, f64> = BTreeMap::new();
        let comps = self.float_components();
        for f in &comps {
            for (a, ca) in f {
                for (b, cb) in f {
                    let e = Monomial(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
                    *acc.entry(e).or_default() += ca * cb;
                }
            }
        }
        for (mo, co) in Poly::r_squared(self.n_ambient).pow(self.m).terms() {
            *acc.entry(mo.clone()).or_default() -= crate::exact::to_f64(co);
        }
        acc.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Whether every component is exactly harmonic; the floating path
    /// inherits harmonicity from the basis.
    pub fn components_harmonic(&self) -> bool {
        match &self.components {
            MapComponents::Exact(c) => c.iter().all(|f| f.poly.analyst_laplacian().is_zero()),
            MapComponents::Float(_) => self.basis.elements.iter().all(|h| h.poly().analyst_laplacian().is_zero()),
        }
    }

    /// Gram matrix `⟨F_α, F_β⟩` of the components, in floating point.
    pub fn component_gram(&self) -> DMatrix<f64> {
        let comps = self.float_components();
        let k = comps.len();
        DMatrix::from_fn(k, k, |i, j| {
            let bmap: BTreeMap<&Monomial, f64> = comps[j].iter().map(|(mo, c)| (mo, *c)).collect();
            comps[i]
                .iter()
                .map(|(mo, c)| c * bmap.get(mo).copied().unwrap_or(0.0) * crate::exact::to_f64(&mo.factorial()))
                .sum()
        })
    }
}

/// Factors `G = SᵀS` and returns the components `S h`. Uses exact `LDLᵀ`
/// with rational squared scales.
pub fn construct_map(g: &GramMatrix, basis: &OrthogonalBasis) -> Result<SphericalHarmonicMap> {
    if g.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: g.dim() });
    }
    let ldlt = g.psd_certificate()?;
    let mut comps = Vec::new();
    for (k, dk) in ldlt.d.iter().enumerate() {
        if dk.is_zero() {
            continue;
        }
        let mut p = Poly::zero(basis.n_ambient);
        for (b, h) in basis.elements.iter().enumerate() {
            let l = &ldlt.l[b][k];
            if !l.is_zero() {
                p = &p + &h.poly().scale(l);
            }
        }
        comps.push(match rational_sqrt(dk) {
            Some(s) => ScaledPoly { scale_squared: Rational::one(), poly: p.scale(&s) },
            None => ScaledPoly { scale_squared: dk.clone(), poly: p },
        });
    }
    let map = SphericalHarmonicMap {
        n_ambient: basis.n_ambient,
        m: basis.m,
        basis: basis.clone(),
        components: MapComponents::Exact(comps),
    };
    match map.sum_of_squares_defect() {
        Some(d) if d.is_zero() => Ok(map),
        Some(d) => Err(Error::IdentityFailure { identity: "sum of squares".into(), witness: format!("{d}") }),
        None => unreachable!(),
    }
}

/// Tolerance for the sum-of-squares identity on the floating path.
pub const FLOAT_IDENTITY_TOL: f64 = crate::tolerances::TAU_FLOAT_FACTOR;

/// Factors `G = SᵀS` through the symmetric eigendecomposition.
pub fn construct_map_float(g: &GramMatrix, basis: &OrthogonalBasis) -> Result<SphericalHarmonicMap> {
    if g.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: g.dim() });
    }
    g.psd_certificate()?;
    let eig = SymmetricEigen::new(g.to_f64());
    let scale = eig.eigenvalues.amax().max(1.0);
    let mut rows = Vec::new();
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam <= 1e-14 * scale {
            continue;
        }
        let s = lam.sqrt();
        rows.push(eig.eigenvectors.column(k).iter().map(|v| s * v).collect());
    }
    let map = SphericalHarmonicMap {
        n_ambient: basis.n_ambient,
        m: basis.m,
        basis: basis.clone(),
        components: MapComponents::Float(rows),
    };
    let defect = map.float_defect();
    if defect >= FLOAT_IDENTITY_TOL {
        return Err(Error::IdentityFailure { identity: "sum of squares".into(), witness: format!("{defect:e}") });
    }
    Ok(map)
}

/// Tolerance on `|x| = 1`.
pub const SPHERE_TOL: f64 = crate::tolerances::TAU_SPHERE;

fn float_eval(f: &FloatPoly, x: &[f64]) -> f64 {
    f.iter().map(|(mo, c)| c * monomial_value(&mo.0, x)).sum()
}

fn float_gradient(f: &FloatPoly, x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            f.iter()
                .filter(|(mo, _)| mo.0[i] > 0)
                .map(|(mo, c)| {
                    let mut e = mo.0.clone();
                    e[i] -= 1;
                    c * mo.0[i] as f64 * monomial_value(&e, x)
                })
                .sum()
        })
        .collect()
}

/// `Σ_α (|∇F_α|² − m² F_α²)` at a unit vector.
pub fn energy_density(map: &SphericalHarmonicMap, x: &[f64]) -> Result<f64> {
    if x.len() != map.n_ambient {
        return Err(Error::DimensionMismatch { expected: map.n_ambient, got: x.len() });
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (r - 1.0).abs() > SPHERE_TOL {
        return Err(Error::NotOnSphere(r));
    }
    let m2 = (map.m * map.m) as f64;
    Ok(map
        .float_components()
        .iter()
        .map(|f| {
            let g = float_gradient(f, x);
            let v = float_eval(f, x);
            g.iter().map(|t| t * t).sum::<f64>() - m2 * v * v
        })
        .sum())
}

/// Result of a search along `G0 + t·k`.
#[derive(Debug, Clone)]
pub struct LineSearch {
    /// Largest `t` with `G0 + t·k ⪰ 0`, in floating point.
    pub t_max: f64,
    pub t: Rational,
    pub g: GramMatrix,
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Bisection on the smallest eigenvalue of `G0 + t·k` for `t > 0`, then a
/// rational `t` near `t_max/2` certified positive definite exactly.
pub fn psd_line_search(g0: &GramMatrix, k: &GramMatrix) -> Result<LineSearch> {
    let a = g0.to_f64();
    let b = k.to_f64();
    let at = |t: f64| min_eigenvalue(&(&a + &b * t));
    let start = at(0.0);
    if start <= 0.0 {
        return Err(Error::NotPositiveDefinite(start));
    }
    let mut hi = 1.0;
    while at(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::ParamViolation("direction stays positive definite; no boundary found".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi {
            break;
        }
    }
    let t_max = lo;
    let mut den = 16;
    loop {
        let t = round_to(t_max / 2.0, den);
        if t.is_positive() {
            let g = g0.add_scaled(&t, k)?;
            if g.psd_certificate().is_ok() {
                return Ok(LineSearch { t_max, t, g });
            }
        }
        den *= 16;
        if den > 1 << 40 {
            return Err(Error::NotPositiveDefinite(at(crate::exact::to_f64(&round_to(t_max / 2.0, den)))));
        }
    }
}

/// Dimension count for nonuniqueness modulo rotations of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonuniquenessReport {
    pub n_ambient: usize,
    pub m: u32,
    pub kernel_dimension: usize,
    /// `dim SO(n + 1)`
    pub rotation_dimension: usize,
    pub margin: i64,
    pub nonunique: bool,
}

pub fn nonuniqueness_report(n_ambient: usize, m: u32) -> Result<NonuniquenessReport> {
    let sol = solve_h_equals_rm(n_ambient, m)?;
    let rotation_dimension = n_ambient * (n_ambient - 1) / 2;
    let margin = sol.kernel.dimension as i64 - rotation_dimension as i64;
    Ok(NonuniquenessReport {
        n_ambient,
        m,
        kernel_dimension: sol.kernel.dimension,
        rotation_dimension,
        margin,
        nonunique: margin > 0,
    })
}
