//! Dense univariate polynomials over the integers.
//!
//! Coefficients are arbitrary-precision and stored ascending by degree with
//! no trailing zeros, so equality is plain `Vec` equality and the zero
//! polynomial is the empty vector. Sizes in this crate stay in the hundreds
//! of terms, so all arithmetic is schoolbook.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::field::{PrimeField, SIXTEEN_BIT_PRIMES};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial `c * t^exp`.
    pub fn monomial(c: i64, exp: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = BigInt::from(c);
        Self::new(coeffs)
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^k`; zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] -= c;
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Exact quotient `self / divisor`, or the nonzero remainder when the
    /// division does not come out even over the integers.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, DivisionError> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let top = rem.last().unwrap().clone();
            if !top.is_zero() {
                let (q, r) = (&top / lead, &top % lead);
                if !r.is_zero() {
                    return Err(DivisionError {
                        remainder: Self::new(rem),
                    });
                }
                quot[k - dd] = q.clone();
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[k - dd + j] -= &q * c;
                }
            }
            rem.pop();
        }
        let remainder = Self::new(rem);
        if remainder.is_zero() {
            Ok(Self::new(quot))
        } else {
            Err(DivisionError { remainder })
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sum of coefficients, i.e. the value at `t = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Checks `c_{D-k} = sign * c_k` for all `k`, with `D` the degree.
    /// `sign` must be `1` (palindromic) or `-1` (anti-palindromic).
    pub fn is_self_reciprocal(&self, sign: i64) -> bool {
        assert!(sign == 1 || sign == -1);
        if self.is_zero() {
            return true;
        }
        let d = self.coeffs.len() - 1;
        let sign = BigInt::from(sign);
        (0..=d).all(|k| self.coeffs[d - k] == &sign * &self.coeffs[k])
    }

    /// Multiplicity of the root `t = 1`, i.e. the exact power of `(1 - t)`
    /// dividing the polynomial.
    pub fn one_minus_t_multiplicity(&self) -> u32 {
        let one_minus_t = Self::from_coeffs(&[1, -1]);
        let mut mult = 0;
        let mut p = self.clone();
        while !p.is_zero() {
            match p.div_exact(&one_minus_t) {
                Ok(q) => {
                    mult += 1;
                    p = q;
                }
                Err(_) => break,
            }
        }
        mult
    }

    /// Coefficients reduced into canonical residues of the field, index by
    /// degree, without trimming (the reduction of a nonzero leading
    /// coefficient can vanish).
    pub fn reduce_mod(&self, field: &PrimeField) -> Vec<u64> {
        self.coeffs.iter().map(|c| field.from_bigint(c)).collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Inexact polynomial division; carries the offending remainder so the
/// caller can report both sides of the failed identity.
#[derive(Clone, Debug)]
pub struct DivisionError {
    pub remainder: IntPolynomial,
}

impl fmt::Display for DivisionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inexact division, remainder {}", self.remainder)
    }
}

impl std::error::Error for DivisionError {}

/// First `count` Taylor coefficients of `num / den` as a power series.
/// `den` must have constant term 1.
pub fn series_prefix(num: &IntPolynomial, den: &IntPolynomial, count: usize) -> Vec<BigInt> {
    assert!(
        den.coeff(0).is_one(),
        "series division needs constant term 1, got {}",
        den.coeff(0)
    );
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut c = num.coeff(k);
        for j in 1..=k.min(den.degree().unwrap_or(0)) {
            c -= den.coeff(j) * &out[k - j];
        }
        out.push(c);
    }
    out
}

/// Outcome of the exact coprimality test over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coprimality {
    /// A single prime not dividing either leading coefficient gave a
    /// degree-zero gcd, which already proves coprimality over Q.
    Coprime { witness_prime: u64 },
    /// Every tested prime produced a gcd of positive degree; the smallest
    /// degree seen bounds the degree of a genuine common factor.
    SharedFactor { min_gcd_degree: usize },
}

/// Decides whether two nonzero integer polynomials are coprime over the
/// rationals via their gcd modulo word-size primes. A degree-zero modular
/// gcd at a prime dividing neither leading coefficient is conclusive; a
/// positive degree at every tested prime is reported as a shared factor.
pub fn check_coprime(a: &IntPolynomial, b: &IntPolynomial) -> Coprimality {
    assert!(!a.is_zero() && !b.is_zero());
    let mut min_degree = usize::MAX;
    for &modulus in SIXTEEN_BIT_PRIMES.iter() {
        let field = PrimeField::new(modulus).unwrap();
        let am = a.reduce_mod(&field);
        let bm = b.reduce_mod(&field);
        if am.last() == Some(&0) || bm.last() == Some(&0) {
            continue;
        }
        let deg = gcd_degree_mod(am, bm, &field);
        if deg == 0 {
            return Coprimality::Coprime {
                witness_prime: modulus,
            };
        }
        min_degree = min_degree.min(deg);
    }
    Coprimality::SharedFactor {
        min_gcd_degree: min_degree,
    }
}

/// Degree of gcd(a, b) in `F_l[t]` by the Euclidean algorithm. Inputs are
/// coefficient vectors that may carry trailing zeros.
fn gcd_degree_mod(a: Vec<u64>, b: Vec<u64>, field: &PrimeField) -> usize {
    fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
    let mut a = trim(a);
    let mut b = trim(b);
    while !b.is_empty() {
        a = rem_mod(&a, &b, field);
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn rem_mod(a: &[u64], b: &[u64], field: &PrimeField) -> Vec<u64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = field.inv(b[db]);
    while rem.len() > db {
        let top = *rem.last().unwrap();
        if top != 0 {
            let factor = field.mul(top, lead_inv);
            let shift = rem.len() - 1 - db;
            for (j, &c) in b.iter().enumerate() {
                rem[shift + j] = field.sub(rem[shift + j], field.mul(factor, c));
            }
        }
        while rem.last() == Some(&0) {
            rem.pop();
        }
    }
    rem
}

/// Distinctness helper shared by tests; true when the slice has no repeats.
pub fn all_distinct(values: &[u64]) -> bool {
    let mut seen = HashSet::with_capacity(values.len());
    values.iter().all(|v| seen.insert(*v))
}
