//! Cayley-Sylvester dimension oracle and series certification.
//!
//! The dimension of the degree-k invariants of the binary n-ic equals
//! N(n, k, nk/2) - N(n, k, nk/2 - 1) when nk is even and 0 otherwise,
//! where N(n, k, w) counts partitions of w into at most k parts, each
//! at most n. The counts come from a truncated Gaussian binomial DP
//! over exact integers and owe nothing to the modular solver, which is
//! what makes certification meaningful: two rational functions with
//! numerator degree at most deg A and denominator degree at most deg B
//! that agree through degree deg A + deg B are equal, so checking the
//! series against the counted dimensions to that depth settles the
//! result unconditionally.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::assemble::{DenomFactor, InexactDivision, PoincareRational};
use crate::poly::IntPolynomial;

/// Coefficients of the Gaussian binomial [a+b choose b]_q through q^upto.
/// Multiplying in a factor (1 - q^(a+i)) and dividing out (1 - q^i) are
/// both prefix-exact, so the truncation loses nothing.
fn gaussian_binomial_prefix(a: usize, b: usize, upto: usize) -> Vec<BigInt> {
    let (a, b) = if b <= a { (a, b) } else { (b, a) };
    let mut coeffs = vec![BigInt::zero(); upto + 1];
    coeffs[0] = BigInt::one();
    for i in 1..=b {
        for j in (a + i..=upto).rev() {
            let delta = coeffs[j - (a + i)].clone();
            coeffs[j] -= delta;
        }
        for j in i..=upto {
            let delta = coeffs[j - i].clone();
            coeffs[j] += delta;
        }
    }
    coeffs
}

/// Number of partitions of w into at most k parts, each at most n.
pub fn bounded_partitions(n: u32, k: u32, w: i64) -> BigInt {
    if w < 0 {
        return BigInt::zero();
    }
    let w = w as usize;
    if w > (n as usize) * (k as usize) {
        return BigInt::zero();
    }
    gaussian_binomial_prefix(n as usize, k as usize, w)[w].clone()
}

/// Dimension of the space of degree-k invariants of the binary n-ic.
pub fn invariant_dim(n: u32, k: u32) -> BigInt {
    assert!(n >= 1);
    let weight = (n as u64) * (k as u64);
    if weight % 2 != 0 {
        return BigInt::zero();
    }
    let half = (weight / 2) as usize;
    let table = gaussian_binomial_prefix(n as usize, k as usize, half);
    let below = if half == 0 {
        BigInt::zero()
    } else {
        table[half - 1].clone()
    };
    table[half].clone() - below
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionTable {
    pub n: u32,
    pub dims: Vec<BigInt>,
}

pub fn dimension_table(n: u32, count: usize) -> DimensionTable {
    let dims: Vec<BigInt> = (0..count).map(|k| invariant_dim(n, k as u32)).collect();
    DimensionTable { n, dims }
}

/// First upto+1 Taylor coefficients of the assembled series.
pub fn expand_series(series: &PoincareRational, upto: usize) -> Vec<BigInt> {
    series.series(upto + 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Certified { depth: usize },
    Mismatch {
        k: usize,
        expected: BigInt,
        computed: BigInt,
    },
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified { .. })
    }
}

impl fmt::Display for Certification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certification::Certified { depth } => write!(
                f,
                "CERTIFIED through degree {depth}: a rational function with these degree \
                 bounds is determined by that many Taylor coefficients, so the series \
                 equals the generating function of the invariant dimensions"
            ),
            Certification::Mismatch {
                k,
                expected,
                computed,
            } => write!(
                f,
                "MISMATCH at degree {k}: series gives {computed}, dimension count gives {expected}"
            ),
        }
    }
}

/// Compare the series against independently counted dimensions through
/// degree(A) + degree(B).
pub fn certify(series: &PoincareRational) -> Certification {
    let depth = series.numerator.degree().unwrap_or(0) + series.denominator.degree().unwrap_or(0);
    let coefficients = expand_series(series, depth);
    for (k, computed) in coefficients.iter().enumerate() {
        let expected = invariant_dim(series.params.n, k as u32);
        if *computed != expected {
            return Certification::Mismatch {
                k,
                expected,
                computed: computed.clone(),
            };
        }
    }
    Certification::Certified { depth }
}

/// Coefficient of t^k in the numerator of the series rewritten over the
/// requested denominator: A * spec / B, which must divide exactly.
pub fn howe_coefficient(
    series: &PoincareRational,
    denominator_spec: &[DenomFactor],
    k: usize,
) -> Result<BigInt, InexactDivision> {
    let spec = denominator_spec
        .iter()
        .fold(IntPolynomial::one(), |acc, f| acc.mul(&f.poly()));
    match series.numerator.mul(&spec).div_exact(&series.denominator) {
        Ok(numerator) => Ok(numerator.coeff(k)),
        Err(e) => Err(InexactDivision {
            n: series.params.n,
            divisor: series.denominator.clone(),
            remainder: e.remainder,
        }),
    }
}
