//! Exact computation of the Poincare series of the invariant ring of binary
//! forms, as a rational function A(t)/B(t) in lowest terms.
//!
//! The pipeline: evaluate a conjectural Bezout identity for the torus
//! integrand at random points over several word-size prime fields, solve
//! small linear systems for the values of the series numerator, interpolate
//! and lift the coefficients to the integers by the Chinese remainder
//! theorem, assemble the rational function, and finally certify it against
//! the classical Cayley-Sylvester dimension count, which is independent of
//! every conjecture and random choice involved.

pub mod alpha;
pub mod assemble;
pub mod cli;
pub mod field;
pub mod fixture;
pub mod integrand;
pub mod oracle;
pub mod poly;
pub mod report;
