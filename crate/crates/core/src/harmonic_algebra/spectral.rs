//! Spectral coefficients of constant-energy eigenmaps and the dimension of
//! the harmonic spaces.

use num_traits::{One, Signed, Zero};

use crate::exact::{int, rank, zeros, Rational};

use super::poly::{monomials_of_degree, Poly};

/// Domain dimension `n`, curvature `K > 0` and eigenvalue `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralParams {
    pub n: usize,
    pub k: Rational,
    pub lambda: Rational,
}

impl SpectralParams {
    pub fn new(n: usize, k: Rational, lambda: Rational) -> Self {
        SpectralParams { n, k, lambda }
    }
}

/// `b_m(λ) = (λ − m(n + m − 1)K) / ((n + 2m)(n + 2m − 2))`.
pub fn b_coeff(params: &SpectralParams, m: u32) -> Rational {
    let (n, m) = (params.n as i64, m as i64);
    (&params.lambda - int(m * (n + m - 1)) * &params.k) / int((n + 2 * m) * (n + 2 * m - 2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASequence {
    pub values: Vec<Rational>,
    pub first_zero: Option<usize>,
    pub first_negative: Option<usize>,
}

impl ASequence {
    /// Whether every entry from the first zero on is zero.
    pub fn ends_in_zeros(&self) -> bool {
        match self.first_zero {
            Some(i) => self.values[i..].iter().all(Zero::is_zero),
            None => false,
        }
    }
}

/// `A₀ = 1`, `A_{m+1} = b_m(λ)(m + n − 2)(n + 2m)/(m + 1) · A_m`.
pub fn a_sequence(params: &SpectralParams, m_max: u32) -> ASequence {
    let n = params.n as i64;
    let mut values = vec![Rational::one()];
    for m in 0..m_max {
        let mi = m as i64;
        let factor = b_coeff(params, m) * int((mi + n - 2) * (n + 2 * mi)) / int(mi + 1);
        let next = factor * values.last().expect("nonempty");
        values.push(next);
    }
    let first_zero = values.iter().position(Zero::is_zero);
    let first_negative = values.iter().position(Signed::is_negative);
    ASequence { values, first_zero, first_negative }
}

/// The `m ≥ 0` with `λ = m(n + m − 1)K`, if any.
pub fn admissible_lambda(params: &SpectralParams) -> Option<u32> {
    if !params.k.is_positive() || params.lambda.is_negative() {
        return None;
    }
    let n = params.n as i64;
    let mut m = 0i64;
    loop {
        let v = int(m * (n + m - 1)) * &params.k;
        if v == params.lambda {
            return Some(m as u32);
        }
        if v > params.lambda {
            return None;
        }
        m += 1;
    }
}

/// The factor multiplying `λ b₁(λ)` in the second moment, from the recursion
/// and as printed alongside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondMomentConstants {
    /// `(n − 1)(n + 2)/2`
    pub recursion: Rational,
    /// `n(n + 4)/3`
    pub printed: Rational,
}

pub fn second_moment_constants(n: usize) -> SecondMomentConstants {
    let n = n as i64;
    SecondMomentConstants {
        recursion: int((n - 1) * (n + 2)) / int(2),
        printed: int(n * (n + 4)) / int(3),
    }
}

fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `dim H_m(ℝ^N) = dim S^m − dim S^{m−2}`.
pub fn dim_harmonics(n_ambient: usize, m: u32) -> u64 {
    let (n, m) = (n_ambient as i64, m as i64);
    binomial(n + m - 1, m) - binomial(n + m - 3, m - 2)
}

/// The same dimension as the kernel of the Laplacian `S^m → S^{m−2}`,
/// computed by exact rank.
pub fn dim_harmonics_by_rank(n_ambient: usize, m: u32) -> u64 {
    let src = monomials_of_degree(n_ambient, m);
    if m < 2 {
        return src.len() as u64;
    }
    let dst = monomials_of_degree(n_ambient, m - 2);
    let mut mat = zeros(dst.len(), src.len());
    for (j, mono) in src.iter().enumerate() {
        let lap = Poly::monomial(n_ambient, &mono.0, Rational::one()).analyst_laplacian();
        for (i, target) in dst.iter().enumerate() {
            mat[i][j] = lap.coefficient(target);
        }
    }
    (src.len() - rank(&mat)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn params(n: usize, lambda: i64) -> SpectralParams {
        SpectralParams::new(n, int(1), int(lambda))
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_coeff(&params(3, 8), 0), rat(8, 3));
        assert_eq!(b_coeff(&params(3, 8), 1), rat(1, 3));
        assert_eq!(b_coeff(&params(3, 8), 2), int(0));
        assert_eq!(b_coeff(&params(5, 7), 0), rat(7, 15));
    }

    #[test]
    fn a_sequence_examples() {
        let s = a_sequence(&params(3, 8), 5);
        assert_eq!(s.values[..4], [int(1), int(8), rat(40, 3), int(0)]);
        assert_eq!(s.first_zero, Some(3));
        assert!(s.ends_in_zeros());
        assert_eq!(s.first_negative, None);

        let s = a_sequence(&params(3, 0), 4);
        assert!(s.values[1..].iter().all(Zero::is_zero));

        let s = a_sequence(&params(3, 5), 6);
        assert_eq!(s.values[..4], [int(1), int(5), rat(10, 3), int(-2)]);
        assert_eq!(s.first_negative, Some(3));
        assert_eq!(s.first_zero, None);
    }

    #[test]
    fn first_moment_is_lambda() {
        for lambda in [3, 8, 11] {
            assert_eq!(a_sequence(&params(4, lambda), 1).values[1], int(lambda));
        }
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(admissible_lambda(&params(3, 8)), Some(2));
        assert_eq!(admissible_lambda(&params(3, 3)), Some(1));
        assert_eq!(admissible_lambda(&params(3, 7)), None);
        assert_eq!(admissible_lambda(&params(3, 0)), Some(0));
        assert_eq!(admissible_lambda(&SpectralParams::new(3, rat(1, 2), int(4))), Some(2));
        assert_eq!(admissible_lambda(&params(3, -1)), None);
    }

    #[test]
    fn second_moment_constants_differ() {
        let c = second_moment_constants(3);
        assert_eq!(c.recursion, int(5));
        assert_eq!(c.printed, int(7));
        assert_eq!(a_sequence(&params(3, 8), 2).values[2], int(8) * b_coeff(&params(3, 8), 1) * c.recursion);
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dim_harmonics(4, 1), 4);
        assert_eq!(dim_harmonics(4, 2), 9);
        assert_eq!(dim_harmonics(5, 0), 1);
        for n in 3..=5 {
            for m in 0..=4 {
                assert_eq!(dim_harmonics(n, m), dim_harmonics_by_rank(n, m));
            }
        }
        // (k + 2m − 1)(k + m − 2)!/(m!(k − 1)!) for the sphere of dimension k
        let closed = |k: u64, m: u64| {
            let f = |a: u64| (1..=a).product::<u64>();
            (k + 2 * m - 1) * f(k + m - 2) / (f(m) * f(k - 1))
        };
        for k in 3..=5u64 {
            for m in 1..=6u64 {
                assert_eq!(closed(k, m), dim_harmonics(k as usize + 1, m as u32));
            }
        }
    }
}
