//! Assembly of the series P_n(t) = A(t)/B(t) from the computed numerator
//! alpha(t) and the product r(t).
//!
//! ```text
//! odd n          A = alpha              B = r
//! n = 2 mod 4    A = alpha/(1-t)        B = r
//! n = 0 mod 4    A = alpha/((1-t)(1+t^(s-1)))
//!                                       B = r/(1+t^(s-1))
//! ```
//!
//! Every division must be exact; a nonzero remainder is not a bug to
//! paper over but a finding, so it aborts assembly loudly with the
//! remainder attached. The denominator is kept both expanded and as a
//! factor list, the latter being the form worth printing.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::alpha::AlphaPolynomial;
use crate::integrand::{Parameters, Parity};
use crate::poly::{self, Coprimality, IntPolynomial};
use crate::report::CheckReport;

/// One denominator factor, 1 - t^e or 1 + t^e.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DenomFactor {
    OneMinus(u32),
    OnePlus(u32),
}

impl DenomFactor {
    pub fn exponent(&self) -> u32 {
        match *self {
            DenomFactor::OneMinus(e) | DenomFactor::OnePlus(e) => e,
        }
    }

    pub fn poly(&self) -> IntPolynomial {
        let (sign, e) = match *self {
            DenomFactor::OneMinus(e) => (-1, e),
            DenomFactor::OnePlus(e) => (1, e),
        };
        assert!(e > 0, "factor exponent must be positive");
        IntPolynomial::one().add(&IntPolynomial::monomial(sign, e as usize))
    }
}

impl fmt::Display for DenomFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sign, e) = match *self {
            DenomFactor::OneMinus(e) => ('-', e),
            DenomFactor::OnePlus(e) => ('+', e),
        };
        if e == 1 {
            write!(f, "1{sign}t")
        } else {
            write!(f, "1{sign}t^{e}")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseFactorError {
    pub input: String,
}

impl fmt::Display for ParseFactorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse denominator factor {:?}", self.input)
    }
}

impl std::error::Error for ParseFactorError {}

impl FromStr for DenomFactor {
    type Err = ParseFactorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseFactorError {
            input: s.to_string(),
        };
        let rest = s.strip_prefix('1').ok_or_else(err)?;
        let (minus, rest) = match rest.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, rest.strip_prefix('+').ok_or_else(err)?),
        };
        let rest = rest.strip_prefix('t').ok_or_else(err)?;
        let exponent = match rest.strip_prefix('^') {
            Some(digits) => digits.parse::<u32>().map_err(|_| err())?,
            None if rest.is_empty() => 1,
            None => return Err(err()),
        };
        if exponent == 0 {
            return Err(err());
        }
        Ok(if minus {
            DenomFactor::OneMinus(exponent)
        } else {
            DenomFactor::OnePlus(exponent)
        })
    }
}

/// Factored form of B for the given degree. For n divisible by 4 the
/// factor (1+t^(s-1)) is cancelled against r: at s = 2 it is r's own
/// (1+t) factor, otherwise it splits (1-t^(2(s-1))) into (1-t^(s-1)).
pub fn denominator_factors(params: &Parameters) -> Vec<DenomFactor> {
    let n = params.n;
    match params.parity {
        Parity::Odd => (2..n).map(|i| DenomFactor::OneMinus(2 * i)).collect(),
        Parity::Even2 => {
            let mut factors = vec![DenomFactor::OnePlus(1)];
            factors.extend((2..n).map(DenomFactor::OneMinus));
            factors
        }
        Parity::Even4 => {
            let half = params.s - 1;
            if half == 1 {
                return (2..n).map(DenomFactor::OneMinus).collect();
            }
            let mut factors = vec![DenomFactor::OnePlus(1)];
            for i in 2..n {
                factors.push(if i == 2 * half {
                    DenomFactor::OneMinus(half)
                } else {
                    DenomFactor::OneMinus(i)
                });
            }
            factors
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareRational {
    pub params: Parameters,
    pub numerator: IntPolynomial,
    pub denominator: IntPolynomial,
    pub factors: Vec<DenomFactor>,
}

impl PoincareRational {
    /// First `count` Taylor coefficients of A/B.
    pub fn series(&self, count: usize) -> Vec<BigInt> {
        poly::series_prefix(&self.numerator, &self.denominator, count)
    }

    /// Coefficients c_0..c_delta of A; the rest follow by reflection.
    pub fn half_table(&self) -> Vec<BigInt> {
        assert!(
            self.numerator.is_self_reciprocal(1)
                && self.numerator.degree() == Some(2 * self.params.delta as usize),
            "half table requires a palindromic numerator of degree 2*delta"
        );
        (0..=self.params.delta as usize)
            .map(|k| self.numerator.coeff(k))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InexactDivision {
    pub n: u32,
    pub divisor: IntPolynomial,
    pub remainder: IntPolynomial,
}

impl fmt::Display for InexactDivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "numerator for n = {} is not divisible by {} (remainder {}); \
             this would contradict the conjectured lowest-terms shape and deserves a close look",
            self.n, self.divisor, self.remainder
        )
    }
}

impl std::error::Error for InexactDivision {}

fn divide(
    n: u32,
    value: &IntPolynomial,
    divisor: &IntPolynomial,
) -> Result<IntPolynomial, InexactDivision> {
    match value.div_exact(divisor) {
        Ok(quotient) => {
            assert_eq!(quotient.mul(divisor), *value);
            Ok(quotient)
        }
        Err(e) => Err(InexactDivision {
            n,
            divisor: divisor.clone(),
            remainder: e.remainder,
        }),
    }
}

/// Extract A and B from the validated numerator and the product r.
pub fn assemble(
    alpha: &AlphaPolynomial,
    r: &IntPolynomial,
) -> Result<PoincareRational, InexactDivision> {
    let params = alpha.params;
    let one_minus_t = IntPolynomial::from_coeffs(&[1, -1]);
    let numerator = match params.parity {
        Parity::Odd => alpha.poly.clone(),
        Parity::Even2 => divide(params.n, &alpha.poly, &one_minus_t)?,
        Parity::Even4 => {
            let step = divide(params.n, &alpha.poly, &one_minus_t)?;
            let split = DenomFactor::OnePlus(params.s - 1).poly();
            divide(params.n, &step, &split)?
        }
    };
    let factors = denominator_factors(&params);
    let denominator = factors
        .iter()
        .fold(IntPolynomial::one(), |acc, f| acc.mul(&f.poly()));
    if params.parity == Parity::Even4 {
        let split = DenomFactor::OnePlus(params.s - 1).poly();
        assert_eq!(denominator.mul(&split), *r);
    } else {
        assert_eq!(denominator, *r);
    }
    Ok(PoincareRational {
        params,
        numerator,
        denominator,
        factors,
    })
}

/// Everything the assembled series must satisfy, gathered in one report.
pub fn structural_checks(series: &PoincareRational) -> CheckReport {
    let mut report = CheckReport::new();
    let params = &series.params;
    let a = &series.numerator;
    let b = &series.denominator;

    let a0 = a.coeff(0);
    report.push("numerator_constant", a0.is_one(), format!("A(0) = {a0}, expected 1"));
    let b0 = b.coeff(0);
    report.push("denominator_constant", b0.is_one(), format!("B(0) = {b0}, expected 1"));

    let expected = 2 * params.delta as usize;
    report.push(
        "numerator_degree",
        a.degree() == Some(expected),
        format!("degree of A is {:?}, expected {expected}", a.degree()),
    );

    report.push(
        "palindromic_numerator",
        a.is_self_reciprocal(1),
        "coefficients of A must satisfy c_k = c_(2*delta - k)".to_string(),
    );

    let product = series
        .factors
        .iter()
        .fold(IntPolynomial::one(), |acc, f| acc.mul(&f.poly()));
    report.push(
        "factored_denominator",
        product == *b,
        "product of the stored factors must equal the expanded B".to_string(),
    );

    let drop = a.degree().map(|d| d as i64).unwrap_or(0) - b.degree().map(|d| d as i64).unwrap_or(0);
    let want = -(params.n as i64 + 1);
    report.push(
        "degree_drop",
        drop == want,
        format!("degree(A) - degree(B) = {drop}, expected {want}"),
    );

    let pole = b.one_minus_t_multiplicity();
    report.push(
        "pole_order",
        pole == params.n - 2,
        format!("(1-t)-multiplicity of B is {pole}, expected {}", params.n - 2),
    );
    let a_at_one = a.eval_one();
    report.push(
        "numerator_at_one",
        !a_at_one.is_zero(),
        format!("A(1) = {a_at_one}, must be nonzero to keep the pole order"),
    );

    if params.n % 2 == 1 {
        let bad: Vec<usize> = (0..=expected)
            .filter(|&i| (i % 2 == 1 || i == 2) && !a.coeff(i).is_zero())
            .collect();
        report.push(
            "vanishing_pattern",
            bad.is_empty(),
            if bad.is_empty() {
                "c_i = 0 for every odd i and for i = 2".to_string()
            } else {
                format!("c_i should vanish for odd i and i = 2, but not at {bad:?}")
            },
        );
        let c4 = a.coeff(4);
        let law = BigInt::from((params.n - 3) / 6);
        report.push(
            "c4_law",
            c4 == law,
            format!("c_4 = {c4}, expected floor((n-3)/6) = {law}"),
        );
    }

    match poly::check_coprime(a, b) {
        Coprimality::Coprime { witness_prime } => report.push(
            "coprime",
            true,
            format!("gcd(A, B) has degree 0 mod {witness_prime}, so gcd over Q is 1"),
        ),
        Coprimality::SharedFactor { min_gcd_degree } => report.push(
            "coprime",
            false,
            format!(
                "every tested prime shows a common factor of degree >= {min_gcd_degree}"
            ),
        ),
    }

    let prefix = series.series(200);
    let first_negative = prefix.iter().position(|c| c.is_negative());
    report.push(
        "series_nonnegativity",
        first_negative.is_none(),
        match first_negative {
            None => "first 200 series coefficients are nonnegative".to_string(),
            Some(k) => format!("series coefficient at t^{k} is negative: {}", prefix[k]),
        },
    );

    report
}
