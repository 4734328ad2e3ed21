//! Prime-field arithmetic and the exact linear-algebra kit built on it:
//! dense Gaussian elimination, Lagrange interpolation from point values,
//! deterministic seeded sampling, and symmetric Chinese-remainder lifting
//! back to arbitrary-precision integers.
//!
//! Moduli are odd primes below `2^31`, so every product fits comfortably in
//! a double word and a single Barrett reduction with one conditional
//! subtraction normalizes it.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::RngCore;

use crate::poly::IntPolynomial;

/// The seven largest primes below `2^16`, in descending order. Their product
/// is about `5.2e33`, enough symmetric-lift headroom for coefficients of 30
/// decimal digits or so.
pub const SIXTEEN_BIT_PRIMES: [u64; 7] = [65521, 65519, 65497, 65479, 65449, 65447, 65437];

/// Largest admissible modulus; keeps `a * b` under `2^62` so the Barrett
/// estimate is off by at most one subtraction.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    OutOfRange(u64),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(m) => write!(f, "{m} is not prime"),
            FieldError::OutOfRange(m) => {
                write!(f, "modulus {m} outside the supported odd range 3..=2^31-1")
            }
        }
    }
}

impl std::error::Error for FieldError {}

/// Arithmetic modulo one odd prime, with canonical residues in `[0, l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    modulus: u64,
    barrett: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self, FieldError> {
        if modulus < 3 || modulus > MAX_MODULUS || modulus % 2 == 0 {
            return Err(FieldError::OutOfRange(modulus));
        }
        if !is_prime_u64(modulus) {
            return Err(FieldError::NotPrime(modulus));
        }
        Ok(PrimeField {
            modulus,
            // floor(2^64 / l); equal to this expression because l does not
            // divide 2^64.
            barrett: u64::MAX / modulus,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.modulus && b < self.modulus);
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.modulus && b < self.modulus);
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.modulus);
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.modulus && b < self.modulus);
        let x = (a as u128) * (b as u128);
        let q = (x * (self.barrett as u128)) >> 64;
        let mut r = x - q * (self.modulus as u128);
        while r >= self.modulus as u128 {
            r -= self.modulus as u128;
        }
        r as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        debug_assert!(base < self.modulus);
        let mut acc = 1 % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0, "inverse of zero");
        self.pow(a, self.modulus - 2)
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        let m = self.modulus as i128;
        (((x as i128 % m) + m) % m) as u64
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        let mut r = x % &m;
        if r.is_negative() {
            r += &m;
        }
        r.to_u64().unwrap()
    }

    /// Uniform residue drawn by rejection on raw 64-bit words, so the
    /// distribution depends only on the generator's output stream.
    pub fn sample_uniform<R: RngCore + ?Sized>(&self, rng: &mut R) -> u64 {
        let zone = (u64::MAX / self.modulus) * self.modulus;
        loop {
            let x = rng.next_u64();
            if x < zone {
                return x % self.modulus;
            }
        }
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs; the fixed witness set is
/// exhaustive for this range.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    base %= m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// How moduli are chosen for a multi-prime run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimePolicy {
    /// The built-in seven 16-bit primes, always all of them.
    Paper,
    /// Primes descending from `2^bits - 1`, taken until two consecutive
    /// cumulative lifts agree (at least two).
    Auto { bits: u32 },
}

impl PrimePolicy {
    pub fn label(&self) -> &'static str {
        match self {
            PrimePolicy::Paper => "paper",
            PrimePolicy::Auto { .. } => "auto",
        }
    }
}

/// The moduli actually used by a run, with the policy that selected them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSet {
    policy: PrimePolicy,
    fields: Vec<PrimeField>,
}

impl PrimeSet {
    pub fn paper() -> Self {
        let fields = SIXTEEN_BIT_PRIMES
            .iter()
            .map(|&m| PrimeField::new(m).unwrap())
            .collect();
        PrimeSet {
            policy: PrimePolicy::Paper,
            fields,
        }
    }

    /// Records the moduli a run actually used under the given policy.
    pub fn from_used(policy: PrimePolicy, fields: Vec<PrimeField>) -> Self {
        let moduli: Vec<u64> = fields.iter().map(|f| f.modulus()).collect();
        assert!(
            crate::poly::all_distinct(&moduli),
            "duplicate modulus in {moduli:?}"
        );
        if policy == PrimePolicy::Paper {
            assert_eq!(moduli, SIXTEEN_BIT_PRIMES, "fixed-policy set must be exact");
        }
        PrimeSet { policy, fields }
    }

    pub fn policy(&self) -> PrimePolicy {
        self.policy
    }

    pub fn fields(&self) -> &[PrimeField] {
        &self.fields
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.fields.iter().map(|f| f.modulus()).collect()
    }
}

/// Primes strictly below `2^bits`, largest first, for the auto policy.
pub fn descending_primes(bits: u32) -> impl Iterator<Item = PrimeField> {
    assert!((2..=31).contains(&bits), "bits must be in 2..=31");
    let top = (1u64 << bits) - 1;
    (3..=top)
        .rev()
        .filter(|&c| c % 2 == 1)
        .filter(|&c| is_prime_u64(c))
        .map(|c| PrimeField::new(c).unwrap())
}

/// A dense square system `rows * x = rhs` over one prime field.
#[derive(Clone, Debug)]
pub struct ModMatrix {
    pub rows: Vec<Vec<u64>>,
    pub rhs: Vec<u64>,
}

impl ModMatrix {
    pub fn new(dim: usize) -> Self {
        ModMatrix {
            rows: vec![vec![0; dim]; dim],
            rhs: vec![0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    /// Not invertible mod the prime. With randomly sampled evaluation points
    /// this signals an unlucky draw; the caller resamples.
    Singular,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Singular => write!(f, "matrix is singular mod the prime"),
        }
    }
}

impl std::error::Error for SolveError {}

/// Gaussian elimination with first-nonzero pivoting. The field is exact, so
/// any nonzero pivot is as good as any other; the solution is verified by
/// re-multiplication against the original system before it is returned.
pub fn solve_linear(field: &PrimeField, system: &ModMatrix) -> Result<Vec<u64>, SolveError> {
    let k = system.dim();
    assert!(system.rows.len() == k && system.rows.iter().all(|r| r.len() == k));
    let mut a = system.rows.clone();
    let mut b = system.rhs.clone();

    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| a[r][col] != 0)
            .ok_or(SolveError::Singular)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = field.inv(a[col][col]);
        for j in col..k {
            a[col][j] = field.mul(a[col][j], inv);
        }
        b[col] = field.mul(b[col], inv);
        for r in col + 1..k {
            let factor = a[r][col];
            if factor == 0 {
                continue;
            }
            for j in col..k {
                let t = field.mul(factor, a[col][j]);
                a[r][j] = field.sub(a[r][j], t);
            }
            let t = field.mul(factor, b[col]);
            b[r] = field.sub(b[r], t);
        }
    }

    let mut x = vec![0; k];
    for i in (0..k).rev() {
        let mut acc = b[i];
        for j in i + 1..k {
            acc = field.sub(acc, field.mul(a[i][j], x[j]));
        }
        x[i] = acc;
    }

    for (row, want) in system.rows.iter().zip(&system.rhs) {
        let mut acc = 0;
        for (c, v) in row.iter().zip(&x) {
            acc = field.add(acc, field.mul(*c, *v));
        }
        assert_eq!(acc, *want, "residual check failed after elimination");
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InterpolateError {
    DuplicateNode(u64),
    NodeCountMismatch { expected: usize, got: usize },
}

impl fmt::Display for InterpolateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterpolateError::DuplicateNode(t) => write!(f, "duplicate interpolation node {t}"),
            InterpolateError::NodeCountMismatch { expected, got } => {
                write!(f, "need exactly {expected} nodes, got {got}")
            }
        }
    }
}

impl std::error::Error for InterpolateError {}

/// Coefficients (ascending, length `degree + 1`, not trimmed) of the unique
/// polynomial of degree at most `degree` through the given `(node, value)`
/// pairs, by Lagrange's formula. Verified by re-evaluation at every node.
pub fn interpolate(
    field: &PrimeField,
    nodes: &[(u64, u64)],
    degree: usize,
) -> Result<Vec<u64>, InterpolateError> {
    if nodes.len() != degree + 1 {
        return Err(InterpolateError::NodeCountMismatch {
            expected: degree + 1,
            got: nodes.len(),
        });
    }
    let mut seen = HashSet::with_capacity(nodes.len());
    for &(t, _) in nodes {
        if !seen.insert(t) {
            return Err(InterpolateError::DuplicateNode(t));
        }
    }

    // master(x) = prod (x - node_i), built incrementally; the descending
    // sweep lets the multiply by (x - t) run in place.
    let mut master = vec![0u64; nodes.len() + 1];
    master[0] = 1;
    for (i, &(t, _)) in nodes.iter().enumerate() {
        let neg_t = field.neg(t);
        for j in (0..=i + 1).rev() {
            let prev = if j > 0 { master[j - 1] } else { 0 };
            master[j] = field.add(prev, field.mul(neg_t, master[j]));
        }
    }

    let mut out = vec![0u64; degree + 1];
    for &(t, v) in nodes {
        // Synthetic division: basis(x) = master(x) / (x - t), monic of
        // degree `degree`.
        let mut basis = vec![0u64; degree + 1];
        let mut carry = master[degree + 1];
        for j in (0..=degree).rev() {
            basis[j] = carry;
            carry = field.add(master[j], field.mul(t, carry));
        }
        debug_assert_eq!(carry, 0, "node is a root of the master polynomial");
        let denom = horner(field, &basis, t);
        let w = field.mul(v, field.inv(denom));
        for (o, &c) in out.iter_mut().zip(&basis) {
            *o = field.add(*o, field.mul(w, c));
        }
    }

    for &(t, v) in nodes {
        assert_eq!(
            horner(field, &out, t),
            v,
            "interpolant fails to reproduce a node value"
        );
    }
    Ok(out)
}

pub fn horner(field: &PrimeField, coeffs: &[u64], x: u64) -> u64 {
    let mut acc = 0;
    for &c in coeffs.iter().rev() {
        acc = field.add(field.mul(acc, x), c);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrtError {
    LengthMismatch { lengths: Vec<usize> },
}

impl fmt::Display for CrtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrtError::LengthMismatch { lengths } => {
                write!(f, "residue vectors differ in length: {lengths:?}")
            }
        }
    }
}

impl std::error::Error for CrtError {}

/// Combines per-prime coefficient vectors into one integer polynomial, each
/// coefficient being the unique representative in `(-M/2, M/2]` for `M` the
/// product of the moduli.
pub fn crt_lift(residues: &[Vec<u64>], primes: &[PrimeField]) -> Result<IntPolynomial, CrtError> {
    assert!(!primes.is_empty() && residues.len() == primes.len());
    let len = residues[0].len();
    if residues.iter().any(|r| r.len() != len) {
        return Err(CrtError::LengthMismatch {
            lengths: residues.iter().map(Vec::len).collect(),
        });
    }

    let product: BigInt = primes
        .iter()
        .fold(BigInt::one(), |acc, f| acc * BigInt::from(f.modulus()));
    let half = &product / 2;
    let mut bases = Vec::with_capacity(primes.len());
    for field in primes {
        let others = &product / BigInt::from(field.modulus());
        let inv = field.inv(field.from_bigint(&others));
        bases.push(others * BigInt::from(inv));
    }

    let mut coeffs = Vec::with_capacity(len);
    for j in 0..len {
        let mut acc = BigInt::zero();
        for (r, base) in residues.iter().zip(&bases) {
            acc += BigInt::from(r[j]) * base;
        }
        acc %= &product;
        if acc.is_negative() {
            acc += &product;
        }
        if acc > half {
            acc -= &product;
        }
        coeffs.push(acc);
    }
    Ok(IntPolynomial::new(coeffs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleError {
    InsufficientFieldSize { needed: u64, modulus: u64 },
}

impl fmt::Display for SampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleError::InsufficientFieldSize { needed, modulus } => {
                write!(f, "need {needed} distinct residues but the field has only {modulus}")
            }
        }
    }
}

impl std::error::Error for SampleError {}

/// Draws `count` pairwise-distinct residues avoiding `forbidden`, by
/// rejection. Deterministic given the generator state.
pub fn sample_distinct<R: RngCore + ?Sized>(
    rng: &mut R,
    count: usize,
    field: &PrimeField,
    forbidden: &[u64],
) -> Result<Vec<u64>, SampleError> {
    let excluded: HashSet<u64> = forbidden.iter().copied().collect();
    let needed = count as u64 + excluded.len() as u64;
    if needed > field.modulus() {
        return Err(SampleError::InsufficientFieldSize {
            needed,
            modulus: field.modulus(),
        });
    }
    let mut chosen = Vec::with_capacity(count);
    let mut used = excluded;
    while chosen.len() < count {
        let x = field.sample_uniform(rng);
        if used.insert(x) {
            chosen.push(x);
        }
    }
    Ok(chosen)
}
