//! Recovery of the series numerator alpha(t) by modular sampling.
//!
//! For each working prime the engine picks alpha_deg + 1 values of tau,
//! solves an (m-1) x (m-1) linear system at each to obtain alpha(tau)
//! mod ell, interpolates the coefficient vector, and finally lifts the
//! per-prime vectors to signed integers by the Chinese remainder theorem.
//! The lifted polynomial must then survive a battery of structural
//! checks before anyone is allowed to see it.
//!
//! All randomness is drawn from ChaCha8 streams keyed by (seed, prime
//! index, node index, purpose), so a run is reproducible for a given
//! seed regardless of thread count, and no two sampling sites ever share
//! a stream.

use std::fmt;
use std::time::{Duration, Instant};

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rayon::prelude::*;

use crate::field::{
    crt_lift, descending_primes, interpolate, sample_distinct, solve_linear, ModMatrix,
    PrimeField, PrimePolicy, PrimeSet, SampleError, SolveError,
};
use crate::integrand::{FieldIntegrand, Integrand, Parameters, Parity};
use crate::poly::IntPolynomial;
use crate::report::CheckReport;

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub seed: u64,
    pub primes: PrimePolicy,
    /// How many fresh z-sample sets to try at one tau before giving up on it.
    pub max_resample_retries: u32,
    /// How many singular tau values may be replaced per prime.
    pub max_tau_replacements: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 42,
            primes: PrimePolicy::Paper,
            max_resample_retries: 5,
            max_tau_replacements: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaError {
    /// The modulus cannot accommodate the required number of distinct samples.
    FieldTooSmall { modulus: u64, needed: u64 },
    /// One tau stayed singular through every allotted z-resample.
    SingularAtNode { modulus: u64, tau: u64, attempts: u32 },
    /// Too many tau values had to be thrown out for one prime.
    ExhaustedReplacements { modulus: u64, replacements: u32 },
    /// The automatic prime supply ran dry before the lift stabilized.
    PrimesExhausted { bits: u32 },
    /// The lifted polynomial failed a structural check.
    ValidationFailed { n: u32, report: CheckReport },
}

impl fmt::Display for AlphaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaError::FieldTooSmall { modulus, needed } => write!(
                f,
                "modulus {modulus} is too small: {needed} distinct sample points are required"
            ),
            AlphaError::SingularAtNode {
                modulus,
                tau,
                attempts,
            } => write!(
                f,
                "system stayed singular at tau = {tau} mod {modulus} through {attempts} z-sample sets"
            ),
            AlphaError::ExhaustedReplacements {
                modulus,
                replacements,
            } => write!(
                f,
                "gave up mod {modulus} after replacing {replacements} singular tau values"
            ),
            AlphaError::PrimesExhausted { bits } => write!(
                f,
                "ran out of {bits}-bit primes before two consecutive lifts agreed"
            ),
            AlphaError::ValidationFailed { n, report } => {
                writeln!(f, "computed numerator for n = {n} fails validation:")?;
                write!(f, "{report}")
            }
        }
    }
}

impl std::error::Error for AlphaError {}

/// Everything the solver did for one prime, kept for reporting and replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaTrace {
    pub prime: u64,
    /// (tau, alpha(tau)) pairs actually used, in interpolation order.
    pub node_values: Vec<(u64, u64)>,
    /// Coefficients of alpha mod the prime, length alpha_deg + 1.
    pub coefficients: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaPolynomial {
    pub poly: IntPolynomial,
    pub params: Parameters,
    pub traces: Vec<AlphaTrace>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PhaseTimings {
    pub sampling: Duration,
    pub solves: Duration,
    pub interpolation: Duration,
    pub crt: Duration,
}

impl PhaseTimings {
    pub fn absorb(&mut self, other: &PhaseTimings) {
        self.sampling += other.sampling;
        self.solves += other.solves;
        self.interpolation += other.interpolation;
        self.crt += other.crt;
    }

    pub fn total(&self) -> Duration {
        self.sampling + self.solves + self.interpolation + self.crt
    }
}

const STREAM_TAU: u64 = 1;
const STREAM_SOLVE: u64 = 2;
const STREAM_TAU_REPLACE: u64 = 3;

fn substream(seed: u64, prime_index: usize, node_index: u64, purpose: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(prime_index as u64).to_le_bytes());
    key[16..24].copy_from_slice(&node_index.to_le_bytes());
    key[24..32].copy_from_slice(&purpose.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// The (m-1) x (m-1) system whose solution vector holds the z-coefficients
/// of the combination witness at t = tau; entry 0 is alpha(tau).
/// Row j, built from sample point zeta_j, reads
/// sum_k x_k (zeta^k q(zeta, tau) - zeta^(m-2-k) p(zeta, tau)) = phi(zeta, tau).
pub fn build_system(fi: &FieldIntegrand, tau: u64, zetas: &[u64]) -> ModMatrix {
    let f = *fi.field();
    let k = fi.params().m as usize - 1;
    assert_eq!(zetas.len(), k, "need m - 1 sample points");
    let r_tau = fi.r_at(tau);
    let mut system = ModMatrix::new(k);
    for (j, &zeta) in zetas.iter().enumerate() {
        let p = fi.p_at(zeta, tau);
        let q = fi.q_at(zeta, tau);
        let mut power = 1;
        let mut powers = vec![0u64; k];
        for slot in powers.iter_mut() {
            *slot = power;
            power = f.mul(power, zeta);
        }
        for col in 0..k {
            system.rows[j][col] = f.sub(f.mul(powers[col], q), f.mul(powers[k - 1 - col], p));
        }
        system.rhs[j] = fi.phi_with_r(zeta, r_tau);
    }
    system
}

fn sample_failure(modulus: u64, err: SampleError) -> AlphaError {
    let SampleError::InsufficientFieldSize { needed, .. } = err;
    AlphaError::FieldTooSmall {
        modulus,
        needed: needed as u64,
    }
}

/// alpha(tau) mod the field's prime, resampling the z-points on singularity.
pub fn alpha_at(
    fi: &FieldIntegrand,
    tau: u64,
    rng: &mut ChaCha8Rng,
    max_resample_retries: u32,
) -> Result<u64, AlphaError> {
    let k = fi.params().m as usize - 1;
    let modulus = fi.field().modulus();
    let attempts = max_resample_retries.max(1);
    for _ in 0..attempts {
        let zetas =
            sample_distinct(rng, k, fi.field(), &[0]).map_err(|e| sample_failure(modulus, e))?;
        match solve_linear(fi.field(), &build_system(fi, tau, &zetas)) {
            Ok(solution) => return Ok(solution[0]),
            Err(SolveError::Singular) => continue,
        }
    }
    Err(AlphaError::SingularAtNode {
        modulus,
        tau,
        attempts,
    })
}

fn trace_mod_prime(
    integrand: &Integrand,
    field: PrimeField,
    config: &SolverConfig,
    prime_index: usize,
    timings: &mut PhaseTimings,
) -> Result<AlphaTrace, AlphaError> {
    let params = integrand.params();
    let modulus = field.modulus();
    let node_count = params.alpha_deg as usize + 1;
    let needed = node_count.max(params.m as usize) as u64;
    if modulus < needed {
        return Err(AlphaError::FieldTooSmall { modulus, needed });
    }

    let started = Instant::now();
    let mut tau_rng = substream(config.seed, prime_index, 0, STREAM_TAU);
    let taus = sample_distinct(&mut tau_rng, node_count, &field, &[])
        .map_err(|e| sample_failure(modulus, e))?;
    timings.sampling += started.elapsed();

    let started = Instant::now();
    let fi = integrand.mod_prime(field);
    let first_pass: Vec<Result<u64, AlphaError>> = taus
        .par_iter()
        .enumerate()
        .map(|(j, &tau)| {
            let mut rng = substream(config.seed, prime_index, j as u64, STREAM_SOLVE);
            alpha_at(&fi, tau, &mut rng, config.max_resample_retries)
        })
        .collect();

    let mut node_values = Vec::with_capacity(node_count);
    let mut used = taus.clone();
    let mut replacements = 0;
    for (j, outcome) in first_pass.into_iter().enumerate() {
        match outcome {
            Ok(value) => node_values.push((taus[j], value)),
            Err(AlphaError::SingularAtNode { .. }) => loop {
                if replacements == config.max_tau_replacements {
                    return Err(AlphaError::ExhaustedReplacements {
                        modulus,
                        replacements,
                    });
                }
                replacements += 1;
                let mut draw_rng =
                    substream(config.seed, prime_index, replacements as u64, STREAM_TAU_REPLACE);
                let tau = sample_distinct(&mut draw_rng, 1, &field, &used)
                    .map_err(|e| sample_failure(modulus, e))?[0];
                used.push(tau);
                let mut solve_rng = substream(
                    config.seed,
                    prime_index,
                    (node_count + replacements as usize) as u64,
                    STREAM_SOLVE,
                );
                match alpha_at(&fi, tau, &mut solve_rng, config.max_resample_retries) {
                    Ok(value) => {
                        node_values.push((tau, value));
                        break;
                    }
                    Err(AlphaError::SingularAtNode { .. }) => continue,
                    Err(other) => return Err(other),
                }
            },
            Err(other) => return Err(other),
        }
    }
    timings.solves += started.elapsed();

    let started = Instant::now();
    let coefficients = interpolate(&field, &node_values, params.alpha_deg as usize)
        .expect("nodes are distinct and counted");
    timings.interpolation += started.elapsed();

    Ok(AlphaTrace {
        prime: modulus,
        node_values,
        coefficients,
    })
}

/// Full solve for one prime; pass the prime's position in the working set
/// so its random streams stay disjoint from every other prime's.
pub fn alpha_mod_prime(
    integrand: &Integrand,
    field: PrimeField,
    config: &SolverConfig,
    prime_index: usize,
) -> Result<AlphaTrace, AlphaError> {
    let mut timings = PhaseTimings::default();
    trace_mod_prime(integrand, field, config, prime_index, &mut timings)
}

fn lift(
    traces: &[AlphaTrace],
    fields: &[PrimeField],
    timings: &mut PhaseTimings,
) -> IntPolynomial {
    let started = Instant::now();
    let residues: Vec<Vec<u64>> = traces.iter().map(|t| t.coefficients.clone()).collect();
    let lifted = crt_lift(&residues, fields).expect("per-prime vectors share one length");
    timings.crt += started.elapsed();
    lifted
}

/// Structural checks the lifted numerator must satisfy. These hold for
/// every valid alpha, so a failure means a wrong lift, not bad luck.
pub fn validate_alpha(params: &Parameters, poly: &IntPolynomial) -> CheckReport {
    use num_traits::{One, Zero};
    let mut report = CheckReport::new();

    let constant = poly.coeff(0);
    report.push(
        "constant_term",
        constant.is_one(),
        format!("alpha(0) = {constant}, expected 1"),
    );

    let expected_degree = params.alpha_deg as usize;
    let degree = poly.degree();
    report.push(
        "degree",
        degree == Some(expected_degree),
        match degree {
            Some(d) => format!("degree {d}, expected {expected_degree}"),
            None => format!("zero polynomial, expected degree {expected_degree}"),
        },
    );

    let sign: i64 = if params.n % 2 == 1 { 1 } else { -1 };
    let word = if sign == 1 { "symmetric" } else { "antisymmetric" };
    report.push(
        "reciprocal_symmetry",
        poly.is_self_reciprocal(sign),
        format!("coefficients must be {word} under c_k -> c_(D - k)"),
    );

    if params.n % 2 == 0 {
        let at_one = poly.eval_one();
        report.push(
            "vanishes_at_one",
            at_one.is_zero(),
            format!("alpha(1) = {at_one}, expected 0"),
        );
    }

    if params.parity == Parity::Even4 {
        let factor = IntPolynomial::one().add(&IntPolynomial::monomial(1, params.s as usize - 1));
        let outcome = poly
            .div_exact(&IntPolynomial::from_coeffs(&[1, -1]))
            .and_then(|q| q.div_exact(&factor));
        report.push(
            "cyclotomic_divisibility",
            outcome.is_ok(),
            match outcome {
                Ok(_) => format!("alpha / (1 - t) is divisible by 1 + t^{}", params.s - 1),
                Err(_) => format!(
                    "alpha is not divisible by (1 - t)(1 + t^{})",
                    params.s - 1
                ),
            },
        );
    }

    report
}

pub fn compute_alpha(
    integrand: &Integrand,
    config: &SolverConfig,
) -> Result<AlphaPolynomial, AlphaError> {
    compute_alpha_timed(integrand, config).map(|(alpha, _)| alpha)
}

pub fn compute_alpha_timed(
    integrand: &Integrand,
    config: &SolverConfig,
) -> Result<(AlphaPolynomial, PhaseTimings), AlphaError> {
    let mut timings = PhaseTimings::default();
    let (poly, traces) = match config.primes {
        PrimePolicy::Paper => {
            let set = PrimeSet::paper();
            let mut traces = Vec::with_capacity(set.fields().len());
            for (index, &field) in set.fields().iter().enumerate() {
                traces.push(trace_mod_prime(
                    integrand,
                    field,
                    config,
                    index,
                    &mut timings,
                )?);
            }
            let poly = lift(&traces, set.fields(), &mut timings);
            (poly, traces)
        }
        PrimePolicy::Auto { bits } => {
            let mut fields: Vec<PrimeField> = Vec::new();
            let mut traces: Vec<AlphaTrace> = Vec::new();
            let mut previous: Option<IntPolynomial> = None;
            let mut stable = None;
            for field in descending_primes(bits) {
                let index = fields.len();
                fields.push(field);
                traces.push(trace_mod_prime(
                    integrand,
                    field,
                    config,
                    index,
                    &mut timings,
                )?);
                let lifted = lift(&traces, &fields, &mut timings);
                if fields.len() >= 2 && previous.as_ref() == Some(&lifted) {
                    stable = Some(lifted);
                    break;
                }
                previous = Some(lifted);
            }
            match stable {
                Some(poly) => (poly, traces),
                None => return Err(AlphaError::PrimesExhausted { bits }),
            }
        }
    };

    let report = validate_alpha(integrand.params(), &poly);
    if !report.passed() {
        return Err(AlphaError::ValidationFailed {
            n: integrand.params().n,
            report,
        });
    }

    Ok((
        AlphaPolynomial {
            poly,
            params: *integrand.params(),
            traces,
        },
        timings,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SIXTEEN_BIT_PRIMES;
    use crate::fixture;
    use crate::poly::IntPolynomial;

    fn integrand(n: u32) -> Integrand {
        Integrand::new(Parameters::new(n).unwrap())
    }

    fn paper_field(index: usize) -> PrimeField {
        PrimeField::new(SIXTEEN_BIT_PRIMES[index]).unwrap()
    }

    #[test]
    fn fixture_system_solution_matches_the_printed_witness() {
        let field = paper_field(0);
        let fi = integrand(5).mod_prime(field);
        let tau = 7;
        let zetas: Vec<u64> = (2..10).collect();
        let system = build_system(&fi, tau, &zetas);
        let solution = solve_linear(&field, &system).unwrap();
        let expected: Vec<u64> = fixture::quintic_a()
            .z_coeffs()
            .iter()
            .map(|c| {
                let coeffs: Vec<u64> = c.reduce_mod(&field);
                crate::field::horner(&field, &coeffs, tau)
            })
            .collect();
        assert_eq!(solution, expected);
    }

    #[test]
    fn alpha_at_known_value() {
        let field = paper_field(0);
        let fi = integrand(5).mod_prime(field);
        let mut rng = substream(42, 0, 0, STREAM_SOLVE);
        let value = alpha_at(&fi, 2, &mut rng, 5).unwrap();
        let alpha = IntPolynomial::from_coeffs(&[1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(value, field.from_bigint(&alpha.eval(&2.into())));
    }

    #[test]
    fn tau_one_is_always_singular() {
        let field = paper_field(0);
        let fi = integrand(5).mod_prime(field);
        let mut rng = substream(42, 0, 0, STREAM_SOLVE);
        let err = alpha_at(&fi, 1, &mut rng, 3).unwrap_err();
        assert_eq!(
            err,
            AlphaError::SingularAtNode {
                modulus: field.modulus(),
                tau: 1,
                attempts: 3
            }
        );
    }

    #[test]
    fn minus_one_is_also_singular() {
        let field = paper_field(1);
        let fi = integrand(6).mod_prime(field);
        let mut rng = substream(9, 1, 0, STREAM_SOLVE);
        assert!(alpha_at(&fi, field.modulus() - 1, &mut rng, 2).is_err());
    }

    #[test]
    fn quintic_alpha_mod_one_prime() {
        let field = paper_field(0);
        let trace = alpha_mod_prime(&integrand(5), field, &SolverConfig::default(), 0).unwrap();
        let alpha = IntPolynomial::from_coeffs(&[1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(trace.coefficients, alpha.reduce_mod(&field));
        assert_eq!(trace.node_values.len(), 13);
    }

    #[test]
    fn small_odd_and_even_numerators() {
        let config = SolverConfig::default();
        assert_eq!(
            compute_alpha(&integrand(3), &config).unwrap().poly,
            IntPolynomial::one()
        );
        assert_eq!(
            compute_alpha(&integrand(4), &config).unwrap().poly,
            IntPolynomial::from_coeffs(&[1, 0, -1])
        );
        assert_eq!(
            compute_alpha(&integrand(5), &config).unwrap().poly,
            IntPolynomial::from_coeffs(&[1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1])
        );
    }

    #[test]
    fn runs_are_reproducible_and_seed_independent_in_value() {
        let integrand = integrand(6);
        let a = compute_alpha(&integrand, &SolverConfig::default()).unwrap();
        let b = compute_alpha(&integrand, &SolverConfig::default()).unwrap();
        assert_eq!(a, b);
        let other = SolverConfig {
            seed: 1337,
            ..SolverConfig::default()
        };
        let c = compute_alpha(&integrand, &other).unwrap();
        assert_eq!(a.poly, c.poly);
        assert_ne!(a.traces, c.traces);
    }

    #[test]
    fn cross_prime_agreement_with_a_fresh_prime() {
        let integrand = integrand(8);
        let run = compute_alpha(&integrand, &SolverConfig::default()).unwrap();
        let fresh_field = PrimeField::new(65437).unwrap();
        let fresh = alpha_mod_prime(
            &integrand,
            fresh_field,
            &SolverConfig {
                seed: 777,
                ..SolverConfig::default()
            },
            6,
        )
        .unwrap();
        assert_eq!(run.poly.reduce_mod(&fresh_field), fresh.coefficients);
    }

    #[test]
    fn singular_tau_values_are_replaced_and_the_answer_survives() {
        let field = paper_field(0);
        let bad = [1u64, field.modulus() - 1];
        let seed = (0u64..)
            .find(|&s| {
                let mut rng = substream(s, 0, 0, STREAM_TAU);
                sample_distinct(&mut rng, 13, &field, &[])
                    .unwrap()
                    .iter()
                    .any(|t| bad.contains(t))
            })
            .unwrap();
        let config = SolverConfig {
            seed,
            ..SolverConfig::default()
        };
        let trace = alpha_mod_prime(&integrand(5), field, &config, 0).unwrap();
        assert!(trace.node_values.iter().all(|(t, _)| !bad.contains(t)));
        let alpha = IntPolynomial::from_coeffs(&[1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(trace.coefficients, alpha.reduce_mod(&field));
    }

    /// In a field this small, almost every 8-point z-sample contains a pair
    /// (zeta, 1/zeta), whose rows are proportional by the mirror identity.
    /// The engine cannot work here and must say so instead of looping.
    #[test]
    fn a_field_without_enough_usable_samples_fails_cleanly() {
        let field = PrimeField::new(17).unwrap();
        let err = alpha_mod_prime(&integrand(5), field, &SolverConfig::default(), 0).unwrap_err();
        assert!(matches!(
            err,
            AlphaError::FieldTooSmall { modulus: 17, .. }
                | AlphaError::ExhaustedReplacements { modulus: 17, .. }
        ));
    }

    #[test]
    fn too_small_field_is_rejected() {
        let field = PrimeField::new(11).unwrap();
        let err = alpha_mod_prime(&integrand(5), field, &SolverConfig::default(), 0).unwrap_err();
        assert_eq!(
            err,
            AlphaError::FieldTooSmall {
                modulus: 11,
                needed: 13
            }
        );
    }

    #[test]
    fn auto_policy_stops_once_the_lift_stabilizes() {
        let config = SolverConfig {
            primes: PrimePolicy::Auto { bits: 16 },
            ..SolverConfig::default()
        };
        let run = compute_alpha(&integrand(5), &config).unwrap();
        assert_eq!(
            run.poly,
            IntPolynomial::from_coeffs(&[1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1])
        );
        assert_eq!(run.traces.len(), 2);
        assert_eq!(run.traces[0].prime, 65521);
        assert_eq!(run.traces[1].prime, 65519);
    }

    #[test]
    fn validation_catches_a_broken_lift() {
        let params = Parameters::new(5).unwrap();
        let good = IntPolynomial::from_coeffs(&[1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1]);
        assert!(validate_alpha(&params, &good).passed());

        let shifted = IntPolynomial::from_coeffs(&[2, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1]);
        let report = validate_alpha(&params, &shifted);
        assert!(!report.passed());
        let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
        assert_eq!(failed, ["constant_term", "reciprocal_symmetry"]);

        let asymmetric = IntPolynomial::from_coeffs(&[1, 0, 5, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1]);
        assert!(!validate_alpha(&params, &asymmetric).passed());

        let even_params = Parameters::new(6).unwrap();
        let not_vanishing = IntPolynomial::from_coeffs(&[1, 0, 0, 0, 1, -1, -1, 0, 0, -1]);
        let report = validate_alpha(&even_params, &not_vanishing);
        assert!(report
            .failures()
            .any(|c| c.name == "vanishes_at_one"));
    }

    #[test]
    fn failure_modes_have_readable_messages() {
        let text = AlphaError::FieldTooSmall {
            modulus: 11,
            needed: 13,
        }
        .to_string();
        assert!(text.contains("11"));
        assert!(text.contains("13"));
        let text = AlphaError::SingularAtNode {
            modulus: 65521,
            tau: 1,
            attempts: 5,
        }
        .to_string();
        assert!(text.contains("tau = 1"));
    }
}
