//! A fully worked degree 5 certificate, kept as literal data.
//!
//! For n = 5 the combination identity phi = a*q + b*p has a closed-form
//! witness pair (a, b) that is small enough to print. This module stores
//! that pair verbatim, together with just enough bivariate arithmetic to
//! re-check the identity over the integers. Nothing here is produced by
//! the modular solver; the point is an independent anchor the solver can
//! be compared against.

use crate::poly::IntPolynomial;

/// Polynomial in z whose coefficients are integer polynomials in t.
/// Index k holds the coefficient of z^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly2 {
    coeffs: Vec<IntPolynomial>,
}

impl Poly2 {
    pub fn from_z_coeffs(coeffs: Vec<IntPolynomial>) -> Self {
        let mut out = Self { coeffs };
        out.trim();
        out
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn z_degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn z_coeff(&self, k: usize) -> IntPolynomial {
        self.coeffs.get(k).cloned().unwrap_or_else(IntPolynomial::zero)
    }

    pub fn z_coeffs(&self) -> &[IntPolynomial] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            coeffs.push(self.z_coeff(k).add(&other.z_coeff(k)));
        }
        Self::from_z_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            coeffs.push(self.z_coeff(k).sub(&other.z_coeff(k)));
        }
        Self::from_z_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![IntPolynomial::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::from_z_coeffs(coeffs)
    }

    /// z^shift * f(1/z, t), defined when shift covers the z-degree.
    pub fn z_mirror(&self, shift: usize) -> Self {
        assert!(
            self.z_degree().map_or(true, |d| d <= shift),
            "mirror shift must cover the z-degree"
        );
        let mut coeffs = vec![IntPolynomial::zero(); shift + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[shift - k] = c.clone();
        }
        Self::from_z_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Number of nonzero monomials c * z^i * t^j.
    pub fn term_count(&self) -> usize {
        use num_traits::Zero;
        self.coeffs
            .iter()
            .map(|c| c.coeffs().iter().filter(|x| !x.is_zero()).count())
            .sum()
    }
}

fn tp(coeffs: &[i64]) -> IntPolynomial {
    IntPolynomial::from_coeffs(coeffs)
}

/// p(z, t) for n = 5: (1 - t z)(1 - t z^3)(1 - t z^5).
pub fn quintic_p() -> Poly2 {
    let mut out = Poly2::from_z_coeffs(vec![tp(&[1])]);
    for e in [1usize, 3, 5] {
        let mut coeffs = vec![IntPolynomial::zero(); e + 1];
        coeffs[0] = tp(&[1]);
        coeffs[e] = tp(&[0, -1]);
        out = out.mul(&Poly2::from_z_coeffs(coeffs));
    }
    out
}

/// q(z, t) for n = 5: (z - t)(z^3 - t)(z^5 - t).
pub fn quintic_q() -> Poly2 {
    let mut out = Poly2::from_z_coeffs(vec![tp(&[1])]);
    for e in [1usize, 3, 5] {
        let mut coeffs = vec![IntPolynomial::zero(); e + 1];
        coeffs[0] = tp(&[0, -1]);
        coeffs[e] = tp(&[1]);
        out = out.mul(&Poly2::from_z_coeffs(coeffs));
    }
    out
}

/// phi(z, t) for n = 5: z^7 (z^2 - 1)(1 - t^4)(1 - t^6)(1 - t^8).
pub fn quintic_phi() -> Poly2 {
    let r = tp(&[1, 0, 0, 0, -1])
        .mul(&tp(&[1, 0, 0, 0, 0, 0, -1]))
        .mul(&tp(&[1, 0, 0, 0, 0, 0, 0, 0, -1]));
    let mut coeffs = vec![IntPolynomial::zero(); 10];
    coeffs[7] = r.neg();
    coeffs[9] = r;
    Poly2::from_z_coeffs(coeffs)
}

/// The printed witness a(z, t), with z-degree 7.
pub fn quintic_a() -> Poly2 {
    Poly2::from_z_coeffs(vec![
        tp(&[1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1]),
        tp(&[0, -1]).mul(&tp(&[1, 0, 1, 0, 0, 0, -1]).mul(&tp(&[1, 0, -1, 0, 0, 0, -1]))),
        tp(&[0, 0, 1]).mul(&tp(&[1, 0, 0, 0, 0, 0, -1, 0, 1])),
        tp(&[0, -1]).mul(&tp(&[1, 0, 0, 0, -1]).mul(&tp(&[1, 0, 0, 0, 0, 0, -1, 0, -1]))),
        tp(&[0, 0, 1]).mul(&tp(&[1, 0, 0, 0, -1]).mul(&tp(&[1, 0, 1, 0, 0, 0, 0, 0, -1]))),
        tp(&[0, 0, 0, 0, 0, -1]).mul(&tp(&[1, 0, -1, 0, 0, 0, 0, 0, 1])),
        tp(&[0, 0, 1]).mul(&tp(&[1, 0, 0, 0, 1, 0, -1]).mul(&tp(&[1, 0, 0, 0, -1, 0, -1]))),
        tp(&[0, 0, 0, -1]).mul(&tp(&[1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1])),
    ])
}

/// The printed witness b(z, t): equals -z^7 a(1/z, t).
pub fn quintic_b() -> Poly2 {
    Poly2::from_z_coeffs(vec![
        tp(&[0, 0, 0, 1]).mul(&tp(&[1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1])),
        tp(&[0, 0, -1]).mul(&tp(&[1, 0, 0, 0, 1, 0, -1]).mul(&tp(&[1, 0, 0, 0, -1, 0, -1]))),
        tp(&[0, 0, 0, 0, 0, 1]).mul(&tp(&[1, 0, -1, 0, 0, 0, 0, 0, 1])),
        tp(&[0, 0, -1]).mul(&tp(&[1, 0, 0, 0, -1]).mul(&tp(&[1, 0, 1, 0, 0, 0, 0, 0, -1]))),
        tp(&[0, 1]).mul(&tp(&[1, 0, 0, 0, -1]).mul(&tp(&[1, 0, 0, 0, 0, 0, -1, 0, -1]))),
        tp(&[0, 0, -1]).mul(&tp(&[1, 0, 0, 0, 0, 0, -1, 0, 1])),
        tp(&[0, 1]).mul(&tp(&[1, 0, 1, 0, 0, 0, -1]).mul(&tp(&[1, 0, -1, 0, 0, 0, -1]))),
        tp(&[-1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -1]),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureReport {
    pub combination_holds: bool,
    pub mirror_holds: bool,
    pub phi_terms: usize,
    pub combination_terms: usize,
    pub witness_terms: usize,
}

/// Re-check the stored certificate from scratch over the integers.
pub fn check_quintic_certificate() -> FixtureReport {
    let a = quintic_a();
    let b = quintic_b();
    let combination = a.mul(&quintic_q()).add(&b.mul(&quintic_p()));
    let mirrored = a.z_mirror(7).neg();
    FixtureReport {
        combination_holds: combination == quintic_phi(),
        mirror_holds: mirrored == b,
        phi_terms: quintic_phi().term_count(),
        combination_terms: combination.term_count(),
        witness_terms: a.term_count() + b.term_count(),
    }
}
