//! Exact rational linear algebra with a fixed pivoting rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type Matrix = Vec<Vec<Rational>>;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `"num/den"` in lowest terms, with a positive denominator.
pub fn fmt_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    if d.is_zero() {
        None
    } else {
        Some(BigRational::new(n, d))
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Rational from an `f64` by rounding to a multiple of `1/den`.
pub fn round_to(x: f64, den: i64) -> Rational {
    rat((x * den as f64).round() as i64, den)
}

/// Exact square root when `q` is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

/// Reduced row echelon form and pivot columns. The pivot in each column is
/// the first nonzero entry at or below the current row.
pub fn rref(mut m: Matrix) -> (Matrix, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m.clone()).1.len()
}

/// A basis of `{v : m v = 0}`, one vector per free column.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m.clone());
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[row][free].clone();
        }
        out.push(v);
    }
    out
}

pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn quadratic_form(m: &Matrix, v: &[Rational]) -> Rational {
    mat_vec(m, v).iter().zip(v).map(|(a, b)| a * b).sum()
}

/// `m = L·diag(d)·Lᵀ` with `L` unit lower triangular.
#[derive(Debug, Clone, PartialEq)]
pub struct Ldlt {
    pub l: Matrix,
    pub d: Vec<Rational>,
}

/// Exact `LDLᵀ` of a symmetric matrix, succeeding exactly when it is
/// positive semidefinite; otherwise returns `x` with `xᵀ m x < 0`.
pub fn ldlt_psd(m: &Matrix) -> Result<Ldlt, Vec<Rational>> {
    let n = m.len();
    let mut s = m.clone();
    let mut l = identity(n);
    let mut d = vec![Rational::zero(); n];
    for k in 0..n {
        let pivot = s[k][k].clone();
        if pivot.is_negative() {
            let mut w = vec![Rational::zero(); n];
            w[k] = Rational::one();
            return Err(back_substitute(&l, w));
        }
        if pivot.is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !s[j][k].is_zero()) {
                // (e_j + t e_k)ᵀ S (e_j + t e_k) = S_jj + 2t S_jk < 0
                let t = -(s[j][j].clone() + Rational::one()) / (int(2) * &s[j][k]);
                let mut w = vec![Rational::zero(); n];
                w[j] = Rational::one();
                w[k] = t;
                return Err(back_substitute(&l, w));
            }
            continue;
        }
        d[k] = pivot.clone();
        for i in k + 1..n {
            l[i][k] = &s[i][k] / &pivot;
        }
        for i in k + 1..n {
            if s[i][k].is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = &l[i][k] * &s[k][j];
                s[i][j] -= v;
            }
        }
    }
    Ok(Ldlt { l, d })
}

/// Solves `Lᵀ x = w` for unit lower triangular `L`.
fn back_substitute(l: &Matrix, w: Vec<Rational>) -> Vec<Rational> {
    let n = w.len();
    let mut x = w;
    for i in (0..n).rev() {
        let mut acc = x[i].clone();
        for j in i + 1..n {
            acc -= &l[j][i] * &x[j];
        }
        x[i] = acc;
    }
    x
}
