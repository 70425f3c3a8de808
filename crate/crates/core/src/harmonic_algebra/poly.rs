//! Exact multivariate polynomials with graded-lex monomial order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::exact::{fmt_rational, int, to_f64, Rational};

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `∏ αᵢ!`
    pub fn factorial(&self) -> Rational {
        let mut acc = num_bigint::BigInt::one();
        for &e in &self.0 {
            for k in 2..=e {
                acc *= k;
            }
        }
        Rational::from_integer(acc)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of total degree `d` in `n` variables, in decreasing
/// graded-lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// A polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Poly::from_terms(nvars, [(Monomial(vec![0; nvars]), c)])
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    /// The coordinate `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::from_terms(nvars, [(Monomial(e), Rational::one())])
    }

    /// `R = Σ xᵢ²`.
    pub fn r_squared(nvars: usize) -> Self {
        Poly::from_terms(
            nvars,
            (0..nvars).map(|i| {
                let mut e = vec![0; nvars];
                e[i] = 2;
                (Monomial(e), Rational::one())
            }),
        )
    }

    /// `Σ cᵢ xᵢ`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        Poly::from_terms(
            n,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (Monomial(e), c.clone())
            }),
        )
    }

    pub fn monomial(nvars: usize, exps: &[u32], c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        Poly::from_terms(nvars, [(Monomial(exps.to_vec()), c)])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in decreasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial(vec![0; self.nvars]))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// The common degree of all terms; `None` for the zero polynomial or a
    /// mixed-degree one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let lo = self.terms.keys().next()?.degree();
        (lo == self.terms.keys().next_back()?.degree()).then_some(lo)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.0.clone();
                m2[i] -= 1;
                out.add_term(Monomial(m2), c * int(e as i64));
            }
        }
        out
    }

    /// `Σ ∂²/∂xᵢ²`.
    pub fn analyst_laplacian(&self) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            for i in 0..self.nvars {
                let e = m.0[i];
                if e >= 2 {
                    let mut m2 = m.0.clone();
                    m2[i] -= 2;
                    out.add_term(Monomial(m2), c * int((e * (e - 1)) as i64));
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients of a linear form, `None` unless every term is linear.
    pub fn linear_coeffs(&self) -> Option<Vec<Rational>> {
        if !self.is_homogeneous_of(1) {
            return None;
        }
        Some((0..self.nvars).map(|i| self.partial(i).constant_term()).collect())
    }

    /// Applies `x ↦ σ(x)` with `x_{σ(i)}` in place of `x_i`.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        Poly::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; self.nvars];
                for (i, &v) in m.0.iter().enumerate() {
                    e[sigma[i]] = v;
                }
                (Monomial(e), c.clone())
            }),
        )
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| to_f64(c) * monomial_value(&m.0, x)).sum()
    }

    /// Gradient at a point, in floating point.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.nvars).map(|i| self.partial(i).eval(x)).collect()
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

pub(crate) fn monomial_value(e: &[u32], x: &[f64]) -> f64 {
    e.iter().zip(x).map(|(&k, &v)| v.powi(k as i32)).product()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars, "polynomials in different rings");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let e = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly { (&self).$f(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let coeff = if a.is_integer() { a.numer().to_string() } else { fmt_rational(&a) };
            match (vars.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{coeff}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{coeff}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}
