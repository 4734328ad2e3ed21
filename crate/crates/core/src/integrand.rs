//! The integrand of the torus integral for binary-form invariants, kept in
//! product form.
//!
//! For a form of degree `n` (with `n = 2s-1` or `n = 2s`), the integrand
//! factors through three polynomials
//!
//! ```text
//! p(z,t) = prod_{i=1}^{s} (1 - t z^e_i)      e_i = 2i-1 (odd n), 2i (even n)
//! q(z,t) = prod_{i=1}^{s} (z^e_i - t)
//! r(t)   = prod_{i=2}^{n-1} (1 - t^{2i})            (odd n)
//!          (1+t) prod_{i=2}^{n-1} (1 - t^i)         (even n)
//! ```
//!
//! together with `phi(z,t) = z^(m-2) (z^2 - 1) r(t)`, where `m` is the
//! z-degree of `p` and `q`. Everything downstream only ever needs point
//! values of `p`, `q`, `phi` in a prime field, so they are never expanded;
//! `r` is the one polynomial kept dense.

use std::fmt;

use crate::field::PrimeField;
use crate::poly::IntPolynomial;

/// Congruence class of `n` that drives degree bookkeeping and assembly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    /// n = 2 mod 4
    Even2,
    /// n = 0 mod 4
    Even4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DomainError {
    pub n: u32,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree n must be at least 3, got {}", self.n)
    }
}

impl std::error::Error for DomainError {}

/// Derived sizes for one degree `n`.
///
/// `s` is the t-degree of `p` and `q`, `m` their z-degree, `d` the degree
/// of `r`, `alpha_deg` the degree of the series numerator before assembly,
/// and `delta` half the degree of the final numerator `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parameters {
    pub n: u32,
    pub s: u32,
    pub m: u32,
    pub d: u32,
    pub alpha_deg: u32,
    pub delta: u32,
    pub parity: Parity,
}

impl Parameters {
    pub fn new(n: u32) -> Result<Self, DomainError> {
        if n < 3 {
            return Err(DomainError { n });
        }
        let odd = n % 2 == 1;
        let s = if odd { (n + 1) / 2 } else { n / 2 };
        let (m, d) = if odd {
            (s * s, 2 * s * (n - 2))
        } else {
            (s * (s + 1), s * (n - 1))
        };
        let (parity, delta) = if odd {
            (Parity::Odd, 2 * s * (s - 2))
        } else if n % 4 == 2 {
            (Parity::Even2, (s * (2 * s - 3) - 1) / 2)
        } else {
            (Parity::Even4, s * (s - 2))
        };
        Ok(Parameters {
            n,
            s,
            m,
            d,
            alpha_deg: d - 2 * s,
            delta,
            parity,
        })
    }

    /// z-exponent of the first factor of `p` and `q`; subsequent factors
    /// step by 2.
    fn first_exponent(&self) -> u32 {
        match self.parity {
            Parity::Odd => 1,
            _ => 2,
        }
    }
}

/// Expanded `r` for one degree, the only dense piece of the integrand.
pub fn build_r(params: &Parameters) -> IntPolynomial {
    let n = params.n as usize;
    let mut r = if params.n % 2 == 1 {
        IntPolynomial::one()
    } else {
        IntPolynomial::from_coeffs(&[1, 1])
    };
    let stretch = if params.n % 2 == 1 { 2 } else { 1 };
    for i in 2..n {
        let mut factor = vec![0i64; stretch * i + 1];
        factor[0] = 1;
        factor[stretch * i] = -1;
        r = r.mul(&IntPolynomial::from_coeffs(&factor));
    }
    debug_assert_eq!(r.degree(), Some(params.d as usize));
    debug_assert!(r.coeff(0) == 1.into());
    r
}

/// The integrand for one degree: parameters plus the expanded `r`.
#[derive(Clone, Debug)]
pub struct Integrand {
    params: Parameters,
    r: IntPolynomial,
}

impl Integrand {
    pub fn new(params: Parameters) -> Self {
        let r = build_r(&params);
        Integrand { params, r }
    }

    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn r(&self) -> &IntPolynomial {
        &self.r
    }

    /// Reduces `r` into the field once, yielding a cheap point evaluator.
    pub fn mod_prime(&self, field: PrimeField) -> FieldIntegrand {
        FieldIntegrand {
            params: self.params,
            field,
            r_mod: self.r.reduce_mod(&field),
        }
    }
}

/// Point evaluation of `p`, `q`, `r`, `phi` in one prime field.
#[derive(Clone, Debug)]
pub struct FieldIntegrand {
    params: Parameters,
    field: PrimeField,
    r_mod: Vec<u64>,
}

impl FieldIntegrand {
    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// `p(z,t)`: the power ladder walks `z^e` through the factor exponents
    /// with one multiply per step.
    pub fn p_at(&self, z: u64, t: u64) -> u64 {
        let f = &self.field;
        let step = f.mul(z, z);
        let mut w = match self.params.first_exponent() {
            1 => z,
            _ => step,
        };
        let mut acc = 1;
        for _ in 0..self.params.s {
            acc = f.mul(acc, f.sub(1, f.mul(t, w)));
            w = f.mul(w, step);
        }
        acc
    }

    /// `q(z,t)`, same ladder with factors `z^e - t`.
    pub fn q_at(&self, z: u64, t: u64) -> u64 {
        let f = &self.field;
        let step = f.mul(z, z);
        let mut w = match self.params.first_exponent() {
            1 => z,
            _ => step,
        };
        let mut acc = 1;
        for _ in 0..self.params.s {
            acc = f.mul(acc, f.sub(w, t));
            w = f.mul(w, step);
        }
        acc
    }

    /// `r(t)` by Horner on the reduced coefficients.
    pub fn r_at(&self, t: u64) -> u64 {
        crate::field::horner(&self.field, &self.r_mod, t)
    }

    /// `phi(z,t) = z^(m-2) (z^2 - 1) r(t)`.
    pub fn phi_at(&self, z: u64, t: u64) -> u64 {
        self.phi_with_r(z, self.r_at(t))
    }

    /// `phi` with `r(t)` precomputed; the solver evaluates many `z` at one
    /// `t`, so `r(t)` is hoisted out of the row loop.
    pub fn phi_with_r(&self, z: u64, r_at_t: u64) -> u64 {
        let f = &self.field;
        let zm2 = f.pow(z, (self.params.m - 2) as u64);
        let ring = f.sub(f.mul(z, z), 1);
        f.mul(f.mul(zm2, ring), r_at_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{sample_distinct, PrimeField, SIXTEEN_BIT_PRIMES};
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn params(n: u32) -> Parameters {
        Parameters::new(n).unwrap()
    }

    #[test]
    fn parameters_small_degrees() {
        let p3 = params(3);
        assert_eq!(
            (p3.s, p3.m, p3.d, p3.alpha_deg, p3.delta, p3.parity),
            (2, 4, 4, 0, 0, Parity::Odd)
        );
        let p5 = params(5);
        assert_eq!(
            (p5.s, p5.m, p5.d, p5.alpha_deg, p5.delta, p5.parity),
            (3, 9, 18, 12, 6, Parity::Odd)
        );
        let p6 = params(6);
        assert_eq!(
            (p6.s, p6.m, p6.d, p6.alpha_deg, p6.delta, p6.parity),
            (3, 12, 15, 9, 4, Parity::Even2)
        );
        let p8 = params(8);
        assert_eq!(
            (p8.s, p8.m, p8.d, p8.alpha_deg, p8.delta, p8.parity),
            (4, 20, 28, 20, 8, Parity::Even4)
        );
        let p20 = params(20);
        assert_eq!(
            (p20.s, p20.m, p20.d, p20.alpha_deg, p20.delta, p20.parity),
            (10, 110, 190, 170, 80, Parity::Even4)
        );
        assert_eq!(Parameters::new(2), Err(DomainError { n: 2 }));
    }

    #[test]
    fn numerator_half_length_matches_table_shape() {
        // delta + 1 entries per half table; spot values for the full range
        // the golden table covers.
        let lens: Vec<u32> = (3..=20).map(|n| params(n).delta + 1).collect();
        assert_eq!(
            lens,
            vec![1, 1, 7, 5, 17, 9, 31, 18, 49, 25, 71, 39, 97, 49, 127, 68, 161, 81]
        );
    }

    #[test]
    fn r_small_cases() {
        assert_eq!(
            build_r(&params(3)),
            IntPolynomial::from_coeffs(&[1, 0, 0, 0, -1])
        );
        // (1+t)(1-t^2)(1-t^3) for n=4
        let r4 = IntPolynomial::from_coeffs(&[1, 1])
            .mul(&IntPolynomial::from_coeffs(&[1, 0, -1]))
            .mul(&IntPolynomial::from_coeffs(&[1, 0, 0, -1]));
        assert_eq!(build_r(&params(4)), r4);
        // (1-t^4)(1-t^6)(1-t^8) for n=5
        let r5 = IntPolynomial::from_coeffs(&[1, 0, 0, 0, -1])
            .mul(&IntPolynomial::from_coeffs(&[1, 0, 0, 0, 0, 0, -1]))
            .mul(&IntPolynomial::from_coeffs(&[1, 0, 0, 0, 0, 0, 0, 0, -1]));
        assert_eq!(build_r(&params(5)), r5);
    }

    #[test]
    fn r_degree_and_constant_term_across_range() {
        for n in 3..=30 {
            let p = params(n);
            let r = build_r(&p);
            assert_eq!(r.degree(), Some(p.d as usize), "degree of r for n={n}");
            assert_eq!(r.coeff(0), 1.into(), "constant term of r for n={n}");
        }
    }

    #[test]
    fn evaluators_match_naive_products() {
        let field = PrimeField::new(65521).unwrap();
        let mut rng = ChaCha8Rng::from_seed([5; 32]);
        for n in [3u32, 5, 6, 8, 11, 14] {
            let ig = Integrand::new(params(n));
            let fi = ig.mod_prime(field);
            let s = ig.params().s;
            for _ in 0..50 {
                let z = field.sample_uniform(&mut rng);
                let t = field.sample_uniform(&mut rng);
                let mut p_naive = 1;
                let mut q_naive = 1;
                for i in 1..=s as u64 {
                    let e = if n % 2 == 1 { 2 * i - 1 } else { 2 * i };
                    let ze = field.pow(z, e);
                    p_naive = field.mul(p_naive, field.sub(1, field.mul(t, ze)));
                    q_naive = field.mul(q_naive, field.sub(ze, t));
                }
                assert_eq!(fi.p_at(z, t), p_naive);
                assert_eq!(fi.q_at(z, t), q_naive);
                assert_eq!(
                    fi.r_at(t),
                    field.from_bigint(&ig.r().eval(&num_bigint::BigInt::from(t)))
                );
            }
        }
    }

    #[test]
    fn evaluator_boundary_values() {
        let field = PrimeField::new(65519).unwrap();
        let ig = Integrand::new(params(5));
        let fi = ig.mod_prime(field);
        // p(0,t) = 1, q(0,t) = (-t)^s
        assert_eq!(fi.p_at(0, 12345), 1);
        assert_eq!(fi.q_at(0, 2), field.from_i64(-8));
        // phi vanishes at z = 0, 1, -1
        assert_eq!(fi.phi_at(0, 7), 0);
        assert_eq!(fi.phi_at(1, 7), 0);
        assert_eq!(fi.phi_at(field.from_i64(-1), 7), 0);
    }

    #[test]
    fn mirror_identities_at_random_points() {
        // z^m p(1/z, t) = q(z, t) and (-t)^s p(z, 1/t) = q(z, t), plus the
        // corresponding sign rules for phi.
        let mut rng = ChaCha8Rng::from_seed([11; 32]);
        for &modulus in &SIXTEEN_BIT_PRIMES {
            let field = PrimeField::new(modulus).unwrap();
            for n in [5u32, 8, 9, 12] {
                let ig = Integrand::new(params(n));
                let fi = ig.mod_prime(field);
                let prm = *ig.params();
                for _ in 0..25 {
                    let z = sample_distinct(&mut rng, 1, &field, &[0]).unwrap()[0];
                    let t = sample_distinct(&mut rng, 1, &field, &[0]).unwrap()[0];
                    let zinv = field.inv(z);
                    let tinv = field.inv(t);
                    let zm = field.pow(z, prm.m as u64);
                    assert_eq!(field.mul(zm, fi.p_at(zinv, t)), fi.q_at(z, t));
                    let neg_t_s = field.pow(field.neg(t), prm.s as u64);
                    assert_eq!(field.mul(neg_t_s, fi.p_at(z, tinv)), fi.q_at(z, t));

                    let z2m2 = field.pow(z, (2 * prm.m - 2) as u64);
                    assert_eq!(
                        field.mul(z2m2, fi.phi_at(zinv, t)),
                        field.neg(fi.phi_at(z, t))
                    );
                    let td = field.pow(t, prm.d as u64);
                    let sign = if n % 2 == 0 { 1 } else { field.from_i64(-1) };
                    assert_eq!(
                        field.mul(td, fi.phi_at(z, tinv)),
                        field.mul(sign, fi.phi_at(z, t))
                    );
                }
            }
        }
    }

    #[test]
    fn torus_product_factorization() {
        // p(z,t) q(z,t) (times (1-t) for even n) = z^m prod_{k=0}^{n} (1 - t z^{n-2k}),
        // checked at random invertible points.
        let mut rng = ChaCha8Rng::from_seed([13; 32]);
        for &modulus in &SIXTEEN_BIT_PRIMES {
            let field = PrimeField::new(modulus).unwrap();
            for n in [3u32, 4, 7, 10] {
                let ig = Integrand::new(params(n));
                let fi = ig.mod_prime(field);
                let prm = *ig.params();
                for _ in 0..25 {
                    let z = sample_distinct(&mut rng, 1, &field, &[0]).unwrap()[0];
                    let t = field.sample_uniform(&mut rng);
                    let zinv = field.inv(z);
                    let mut full = 1;
                    for k in 0..=n {
                        let e = n as i64 - 2 * k as i64;
                        let ze = if e >= 0 {
                            field.pow(z, e as u64)
                        } else {
                            field.pow(zinv, (-e) as u64)
                        };
                        full = field.mul(full, field.sub(1, field.mul(t, ze)));
                    }
                    let mut left = field.mul(fi.p_at(z, t), fi.q_at(z, t));
                    if n % 2 == 0 {
                        left = field.mul(left, field.sub(1, t));
                    }
                    let right = field.mul(field.pow(z, prm.m as u64), full);
                    assert_eq!(left, right);
                }
            }
        }
    }
}
