//! Command-line front end: single entries, table files, certification
//! against the dimension oracle, the built-in degree 5 certificate, and
//! re-verification of previously written files.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage error,
//! 3 I/O error.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::alpha::{compute_alpha_timed, AlphaError, PhaseTimings, SolverConfig};
use crate::assemble::{assemble, structural_checks, DenomFactor, InexactDivision, PoincareRational};
use crate::field::PrimePolicy;
use crate::fixture;
use crate::integrand::{Integrand, Parameters, Parity};
use crate::oracle;
use crate::poly::IntPolynomial;
use crate::report::CheckReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "poincare",
    version,
    about = "Poincare series of the invariants of binary forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one numerator half-table and its denominator
    Compute {
        /// Degree of the binary form
        #[arg(long)]
        n: u32,
        /// Output format: text or json
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        emit: String,
        #[command(flatten)]
        run: RunOptions,
    },
    /// Compute a range of entries and write a table file
    Table {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        /// Write the table here (JSON, with a .txt twin); stdout if absent
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: RunOptions,
    },
    /// Check one entry against independently counted dimensions
    Certify {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        run: RunOptions,
    },
    /// Re-check the built-in degree 5 worked certificate
    Fixture5 {
        /// Also print term counts for both sides of the identity
        #[arg(long)]
        verbose: bool,
    },
    /// Recompute the entries of a table file and compare
    Verify {
        /// Table file written by the table subcommand
        #[arg(long)]
        against: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args)]
struct RunOptions {
    /// Seed for all sample-point streams
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Prime supply: the seven fixed 16-bit primes, or auto
    #[arg(long, default_value = "paper", value_parser = ["paper", "auto"])]
    primes: String,
    /// Bit size for --primes auto (descending from 2^bits - 1)
    #[arg(long, default_value_t = 31)]
    prime_bits: u32,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Refuse degrees above this bound
    #[arg(long, default_value_t = 30)]
    max_n: u32,
    /// Print per-phase wall times to stderr; tables also record per-entry times
    #[arg(long)]
    bench: bool,
}

struct Resolved {
    config: SolverConfig,
    jobs: usize,
    max_n: u32,
    bench: bool,
    cache: Option<PathBuf>,
}

fn resolve(run: &RunOptions) -> Result<Resolved, String> {
    if !(2..=31).contains(&run.prime_bits) {
        return Err(format!("--prime-bits must be in 2..=31, got {}", run.prime_bits));
    }
    if run.jobs == 0 {
        return Err("--jobs must be at least 1".to_string());
    }
    let primes = match run.primes.as_str() {
        "paper" => PrimePolicy::Paper,
        _ => PrimePolicy::Auto {
            bits: run.prime_bits,
        },
    };
    Ok(Resolved {
        config: SolverConfig {
            seed: run.seed,
            primes,
            ..SolverConfig::default()
        },
        jobs: run.jobs,
        max_n: run.max_n,
        bench: run.bench,
        cache: std::env::var_os("POINCARE_CACHE_DIR").map(PathBuf::from),
    })
}

fn check_degree(n: u32, max_n: u32) -> Result<(), String> {
    if n < 3 {
        Err(format!("degree must be at least 3, got {n}"))
    } else if n > max_n {
        Err(format!("degree {n} exceeds --max-n {max_n}"))
    } else {
        Ok(())
    }
}

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
        .install(work)
}

/// One table entry in its interchange shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub n: u32,
    pub s: u32,
    pub delta: u32,
    pub half: Vec<BigInt>,
    pub kind: String,
    pub factors: Vec<DenomFactor>,
    pub seed: u64,
    pub primes: Vec<u64>,
}

fn kind_name(parity: Parity) -> &'static str {
    match parity {
        Parity::Odd => "odd",
        Parity::Even2 => "even2",
        Parity::Even4 => "even4",
    }
}

/// JSON value for an integer, falling back to a decimal string outside
/// the 53-bit range that consumers can hold losslessly.
fn int_json(x: &BigInt) -> Value {
    let safe: BigInt = (BigInt::one() << 53) - 1;
    if x.magnitude() <= safe.magnitude() {
        Value::from(x.to_i64().expect("within i64"))
    } else {
        Value::from(x.to_string())
    }
}

fn u64_json(x: u64) -> Value {
    int_json(&BigInt::from(x))
}

fn int_from_json(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(num) => num
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("non-integer number {num}")),
        Value::String(s) => s.parse::<BigInt>().map_err(|_| format!("bad integer {s:?}")),
        other => Err(format!("expected integer, got {other}")),
    }
}

fn u64_from_json(v: &Value) -> Result<u64, String> {
    int_from_json(v)?
        .to_u64()
        .ok_or_else(|| format!("integer out of u64 range: {v}"))
}

fn u32_from_json(v: &Value) -> Result<u32, String> {
    int_from_json(v)?
        .to_u32()
        .ok_or_else(|| format!("integer out of u32 range: {v}"))
}

fn field<'v>(map: &'v Map<String, Value>, key: &str) -> Result<&'v Value, String> {
    map.get(key).ok_or_else(|| format!("missing field {key:?}"))
}

impl Entry {
    pub fn from_series(series: &PoincareRational, seed: u64, primes: Vec<u64>) -> Self {
        let params = &series.params;
        Entry {
            n: params.n,
            s: params.s,
            delta: params.delta,
            half: series.half_table(),
            kind: kind_name(params.parity).to_string(),
            factors: series.factors.clone(),
            seed,
            primes,
        }
    }

    /// The appendix-style line `A[n] = [c0,c1,...]`.
    pub fn text_line(&self) -> String {
        let joined: Vec<String> = self.half.iter().map(BigInt::to_string).collect();
        format!("A[{}] = [{}]", self.n, joined.join(","))
    }

    pub fn denominator_line(&self) -> String {
        let joined: String = self.factors.iter().map(|f| format!("({f})")).collect();
        format!("B[{}] = {}", self.n, joined)
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("n".into(), Value::from(self.n));
        map.insert("s".into(), Value::from(self.s));
        map.insert("delta".into(), Value::from(self.delta));
        map.insert(
            "half".into(),
            Value::Array(self.half.iter().map(int_json).collect()),
        );
        let mut denom = Map::new();
        denom.insert("kind".into(), Value::from(self.kind.clone()));
        denom.insert(
            "factors".into(),
            Value::Array(
                self.factors
                    .iter()
                    .map(|f| Value::from(f.to_string()))
                    .collect(),
            ),
        );
        map.insert("denominator".into(), Value::Object(denom));
        map.insert("seed".into(), u64_json(self.seed));
        map.insert(
            "primes".into(),
            Value::Array(self.primes.iter().map(|&p| u64_json(p)).collect()),
        );
        Value::Object(map)
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let map = v.as_object().ok_or("entry must be an object")?;
        let denom = field(map, "denominator")?
            .as_object()
            .ok_or("denominator must be an object")?;
        let half = field(map, "half")?
            .as_array()
            .ok_or("half must be an array")?
            .iter()
            .map(int_from_json)
            .collect::<Result<Vec<_>, _>>()?;
        let factors = field(denom, "factors")?
            .as_array()
            .ok_or("factors must be an array")?
            .iter()
            .map(|f| {
                f.as_str()
                    .ok_or_else(|| format!("factor must be a string, got {f}"))
                    .and_then(|s| s.parse::<DenomFactor>().map_err(|e| e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Entry {
            n: u32_from_json(field(map, "n")?)?,
            s: u32_from_json(field(map, "s")?)?,
            delta: u32_from_json(field(map, "delta")?)?,
            half,
            kind: field(denom, "kind")?
                .as_str()
                .ok_or("kind must be a string")?
                .to_string(),
            factors,
            seed: u64_from_json(field(map, "seed")?)?,
            primes: field(map, "primes")?
                .as_array()
                .ok_or("primes must be an array")?
                .iter()
                .map(u64_from_json)
                .collect::<Result<Vec<_>, _>>()?,
        })
    }

    /// Rebuild the full rational function, checking the entry against the
    /// parameters its n dictates.
    pub fn reconstruct(&self) -> Result<PoincareRational, String> {
        let params = Parameters::new(self.n).map_err(|e| e.to_string())?;
        if self.s != params.s || self.delta != params.delta {
            return Err(format!(
                "entry n = {} declares s = {}, delta = {}, but the degree dictates s = {}, delta = {}",
                self.n, self.s, self.delta, params.s, params.delta
            ));
        }
        if self.kind != kind_name(params.parity) {
            return Err(format!(
                "entry n = {} declares kind {:?}, expected {:?}",
                self.n,
                self.kind,
                kind_name(params.parity)
            ));
        }
        let delta = params.delta as usize;
        if self.half.len() != delta + 1 {
            return Err(format!(
                "entry n = {} has {} half coefficients, expected {}",
                self.n,
                self.half.len(),
                delta + 1
            ));
        }
        let full: Vec<BigInt> = (0..=2 * delta)
            .map(|k| self.half[k.min(2 * delta - k)].clone())
            .collect();
        let numerator = IntPolynomial::new(full);
        let denominator = self
            .factors
            .iter()
            .fold(IntPolynomial::one(), |acc, f| acc.mul(&f.poly()));
        Ok(PoincareRational {
            params,
            numerator,
            denominator,
            factors: self.factors.clone(),
        })
    }
}

#[derive(Clone, Debug)]
pub enum PipelineError {
    Alpha(AlphaError),
    Assembly(InexactDivision),
    Structural { n: u32, report: CheckReport },
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Alpha(e) => write!(f, "{e}"),
            PipelineError::Assembly(e) => write!(f, "{e}"),
            PipelineError::Structural { n, report } => {
                writeln!(f, "assembled series for n = {n} fails structural checks:")?;
                write!(f, "{report}")
            }
        }
    }
}

impl std::error::Error for PipelineError {}

pub struct EntryOutcome {
    pub entry: Entry,
    pub series: PoincareRational,
    pub timings: PhaseTimings,
    pub check_time: Duration,
    pub from_cache: bool,
    pub wall: Duration,
}

fn cache_file(dir: &Path, n: u32) -> PathBuf {
    dir.join(format!("v{VERSION}")).join(format!("n{n}.json"))
}

fn load_cached(dir: &Path, n: u32) -> Option<EntryOutcome> {
    let started = Instant::now();
    let text = std::fs::read_to_string(cache_file(dir, n)).ok()?;
    let value: Value = serde_json::from_str(&text).ok()?;
    let entry = Entry::from_json(&value).ok()?;
    if entry.n != n {
        return None;
    }
    let series = entry.reconstruct().ok()?;
    let check_started = Instant::now();
    if !structural_checks(&series).passed() {
        return None;
    }
    Some(EntryOutcome {
        entry,
        series,
        timings: PhaseTimings::default(),
        check_time: check_started.elapsed(),
        from_cache: true,
        wall: started.elapsed(),
    })
}

fn store_cached(dir: &Path, entry: &Entry) {
    let path = cache_file(dir, entry.n);
    let write = || -> std::io::Result<()> {
        std::fs::create_dir_all(path.parent().expect("cache file has a parent"))?;
        std::fs::write(&path, format!("{:#}\n", entry.to_json()))
    };
    if let Err(e) = write() {
        eprintln!("warning: cannot write cache entry {}: {e}", path.display());
    }
}

/// Full pipeline for one degree: solve, assemble, check, and package.
/// A populated cache short-circuits the solve; cached entries are
/// re-checked structurally before being trusted.
pub fn compute_entry(
    n: u32,
    config: &SolverConfig,
    cache: Option<&Path>,
) -> Result<EntryOutcome, PipelineError> {
    assert!(n >= 3, "degree below 3 must be rejected upstream");
    if let Some(dir) = cache {
        if let Some(outcome) = load_cached(dir, n) {
            return Ok(outcome);
        }
    }
    let wall_started = Instant::now();
    let params = Parameters::new(n).expect("n >= 3");
    let integrand = Integrand::new(params);
    let (alpha, timings) =
        compute_alpha_timed(&integrand, config).map_err(PipelineError::Alpha)?;
    let series = assemble(&alpha, integrand.r()).map_err(PipelineError::Assembly)?;
    let check_started = Instant::now();
    let report = structural_checks(&series);
    let check_time = check_started.elapsed();
    if !report.passed() {
        return Err(PipelineError::Structural { n, report });
    }
    let primes = alpha.traces.iter().map(|t| t.prime).collect();
    let entry = Entry::from_series(&series, config.seed, primes);
    if let Some(dir) = cache {
        store_cached(dir, &entry);
    }
    Ok(EntryOutcome {
        entry,
        series,
        timings,
        check_time,
        from_cache: false,
        wall: wall_started.elapsed(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableFile {
    pub version: String,
    pub seed: u64,
    pub policy: PrimePolicy,
    pub entries: Vec<Entry>,
    /// Per-entry wall time in milliseconds, recorded only under --bench.
    pub wall_millis: Option<Vec<(u32, u128)>>,
}

impl TableFile {
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("version".into(), Value::from(self.version.clone()));
        map.insert("seed".into(), u64_json(self.seed));
        let mut primes = Map::new();
        match self.policy {
            PrimePolicy::Paper => {
                primes.insert("policy".into(), Value::from("paper"));
            }
            PrimePolicy::Auto { bits } => {
                primes.insert("policy".into(), Value::from("auto"));
                primes.insert("bits".into(), Value::from(bits));
            }
        }
        map.insert("primes".into(), Value::Object(primes));
        map.insert(
            "entries".into(),
            Value::Array(self.entries.iter().map(Entry::to_json).collect()),
        );
        if let Some(walls) = &self.wall_millis {
            map.insert(
                "timings".into(),
                Value::Array(
                    walls
                        .iter()
                        .map(|&(n, ms)| {
                            let mut t = Map::new();
                            t.insert("n".into(), Value::from(n));
                            t.insert("millis".into(), u64_json(ms as u64));
                            Value::Object(t)
                        })
                        .collect(),
                ),
            );
        }
        Value::Object(map)
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let map = v.as_object().ok_or("table file must be an object")?;
        let primes = field(map, "primes")?
            .as_object()
            .ok_or("primes must be an object")?;
        let policy = match field(primes, "policy")?.as_str() {
            Some("paper") => PrimePolicy::Paper,
            Some("auto") => PrimePolicy::Auto {
                bits: u32_from_json(field(primes, "bits")?)?,
            },
            other => return Err(format!("unknown prime policy {other:?}")),
        };
        let entries = field(map, "entries")?
            .as_array()
            .ok_or("entries must be an array")?
            .iter()
            .map(Entry::from_json)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TableFile {
            version: field(map, "version")?
                .as_str()
                .ok_or("version must be a string")?
                .to_string(),
            seed: u64_from_json(field(map, "seed")?)?,
            policy,
            entries,
            wall_millis: None,
        })
    }

    pub fn text_lines(&self) -> String {
        let mut out = String::new();
        for entry in &self.entries {
            out.push_str(&entry.text_line());
            out.push('\n');
        }
        out
    }
}

fn print_bench(timings: &PhaseTimings, check: Duration) {
    eprintln!("sampling      {:>12.3?}", timings.sampling);
    eprintln!("solves        {:>12.3?}", timings.solves);
    eprintln!("interpolation {:>12.3?}", timings.interpolation);
    eprintln!("crt           {:>12.3?}", timings.crt);
    eprintln!("certify       {:>12.3?}", check);
}

fn usage_error(message: &str) -> i32 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn cmd_compute(n: u32, emit: &str, run: &RunOptions) -> i32 {
    let opts = match resolve(run) {
        Ok(o) => o,
        Err(m) => return usage_error(&m),
    };
    if let Err(m) = check_degree(n, opts.max_n) {
        return usage_error(&m);
    }
    let outcome = with_pool(opts.jobs, || {
        compute_entry(n, &opts.config, opts.cache.as_deref())
    });
    match outcome {
        Ok(out) => {
            if emit == "json" {
                println!("{:#}", out.entry.to_json());
            } else {
                println!("{}", out.entry.text_line());
                println!("{}", out.entry.denominator_line());
            }
            if opts.bench {
                print_bench(&out.timings, out.check_time);
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_MATH
        }
    }
}

fn cmd_table(from: u32, to: u32, out: Option<&Path>, run: &RunOptions) -> i32 {
    let opts = match resolve(run) {
        Ok(o) => o,
        Err(m) => return usage_error(&m),
    };
    if from > to {
        return usage_error(&format!("--from {from} exceeds --to {to}"));
    }
    if let Err(m) = check_degree(from, opts.max_n).and(check_degree(to, opts.max_n)) {
        return usage_error(&m);
    }
    let results: Vec<Result<EntryOutcome, PipelineError>> = with_pool(opts.jobs, || {
        (from..=to)
            .into_par_iter()
            .map(|n| compute_entry(n, &opts.config, opts.cache.as_deref()))
            .collect()
    });
    let mut outcomes = Vec::with_capacity(results.len());
    for (n, result) in (from..=to).zip(results) {
        match result {
            Ok(outcome) => outcomes.push(outcome),
            Err(e) => {
                eprintln!("entry n = {n} failed: {e}");
                return EXIT_MATH;
            }
        }
    }
    let table = TableFile {
        version: VERSION.to_string(),
        seed: opts.config.seed,
        policy: opts.config.primes,
        entries: outcomes.iter().map(|o| o.entry.clone()).collect(),
        wall_millis: opts
            .bench
            .then(|| outcomes.iter().map(|o| (o.entry.n, o.wall.as_millis())).collect()),
    };
    if opts.bench {
        let mut total = PhaseTimings::default();
        let mut check = Duration::default();
        for o in &outcomes {
            total.absorb(&o.timings);
            check += o.check_time;
        }
        print_bench(&total, check);
        for o in &outcomes {
            let origin = if o.from_cache { " (cached)" } else { "" };
            eprintln!("n = {:<2} {:>10.3?}{origin}", o.entry.n, o.wall);
        }
    }
    match out {
        Some(path) => {
            let json_text = format!("{:#}\n", table.to_json());
            if let Err(e) = std::fs::write(path, json_text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_IO;
            }
            let mut text_path = path.with_extension("txt");
            if text_path == path {
                text_path = path.with_extension("table.txt");
            }
            if let Err(e) = std::fs::write(&text_path, table.text_lines()) {
                eprintln!("cannot write {}: {e}", text_path.display());
                return EXIT_IO;
            }
            EXIT_OK
        }
        None => {
            print!("{}", table.text_lines());
            EXIT_OK
        }
    }
}

fn cmd_certify(n: u32, run: &RunOptions) -> i32 {
    let opts = match resolve(run) {
        Ok(o) => o,
        Err(m) => return usage_error(&m),
    };
    if let Err(m) = check_degree(n, opts.max_n) {
        return usage_error(&m);
    }
    let outcome = with_pool(opts.jobs, || {
        compute_entry(n, &opts.config, opts.cache.as_deref())
    });
    let out = match outcome {
        Ok(out) => out,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_MATH;
        }
    };
    let certify_started = Instant::now();
    let verdict = oracle::certify(&out.series);
    let certify_time = certify_started.elapsed();
    println!("n = {n}: {verdict}");
    if opts.bench {
        print_bench(&out.timings, out.check_time + certify_time);
    }
    if verdict.is_certified() {
        EXIT_OK
    } else {
        EXIT_MATH
    }
}

fn cmd_fixture5(verbose: bool) -> i32 {
    let report = fixture::check_quintic_certificate();
    if verbose {
        println!(
            "phi has {} terms; a*q + b*p expands to {} terms; the witness pair (a, b) carries {}",
            report.phi_terms, report.combination_terms, report.witness_terms
        );
    }
    if report.combination_holds && report.mirror_holds {
        println!("fixture holds: a*q + b*p = phi and b is the negated mirror of a");
        EXIT_OK
    } else {
        println!(
            "fixture FAILS: combination {}, mirror {}",
            report.combination_holds, report.mirror_holds
        );
        EXIT_MATH
    }
}

fn cmd_verify(against: &Path, jobs: usize) -> i32 {
    if jobs == 0 {
        return usage_error("--jobs must be at least 1");
    }
    let text = match std::fs::read_to_string(against) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", against.display());
            return EXIT_IO;
        }
    };
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("cannot parse {}: {e}", against.display());
            return EXIT_IO;
        }
    };
    let table = match TableFile::from_json(&value) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("malformed table file {}: {e}", against.display());
            return EXIT_IO;
        }
    };
    let policy = table.policy;
    let results: Vec<(u32, Result<Entry, String>)> = with_pool(jobs, || {
        table
            .entries
            .par_iter()
            .map(|entry| {
                if entry.n < 3 {
                    return (entry.n, Err("degree below 3".to_string()));
                }
                let config = SolverConfig {
                    seed: entry.seed,
                    primes: policy,
                    ..SolverConfig::default()
                };
                let fresh = compute_entry(entry.n, &config, None)
                    .map(|o| o.entry)
                    .map_err(|e| e.to_string());
                (entry.n, fresh)
            })
            .collect()
    });
    let mut failures = 0;
    for ((n, fresh), stored) in results.into_iter().zip(&table.entries) {
        match fresh {
            Ok(fresh) => {
                let same = fresh.half == stored.half
                    && fresh.factors == stored.factors
                    && fresh.kind == stored.kind
                    && fresh.delta == stored.delta;
                if same {
                    println!("n = {n}: ok");
                } else {
                    println!("n = {n}: DIFFERS from a fresh computation");
                    failures += 1;
                }
            }
            Err(e) => {
                println!("n = {n}: recomputation failed: {e}");
                failures += 1;
            }
        }
    }
    if failures == 0 {
        println!("verified {} entries", table.entries.len());
        EXIT_OK
    } else {
        EXIT_MATH
    }
}

/// Parse std::env::args and dispatch; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match &cli.command {
        Command::Compute { n, emit, run } => cmd_compute(*n, emit, run),
        Command::Table { from, to, out, run } => cmd_table(*from, *to, out.as_deref(), run),
        Command::Certify { n, run } => cmd_certify(*n, run),
        Command::Fixture5 { verbose } => cmd_fixture5(*verbose),
        Command::Verify { against, jobs } => cmd_verify(against, *jobs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn outcome(n: u32) -> EntryOutcome {
        compute_entry(n, &SolverConfig::default(), None).unwrap()
    }

    #[test]
    fn text_lines_match_the_appendix_style() {
        let out = outcome(5);
        assert_eq!(out.entry.text_line(), "A[5] = [1,0,0,0,0,0,-1]");
        assert_eq!(out.entry.denominator_line(), "B[5] = (1-t^4)(1-t^6)(1-t^8)");
    }

    #[test]
    fn entry_json_round_trip() {
        let out = outcome(6);
        let json = out.entry.to_json();
        assert_eq!(json["denominator"]["kind"], "even2");
        assert_eq!(json["half"][0], 1);
        let back = Entry::from_json(&json).unwrap();
        assert_eq!(back, out.entry);
        let series = back.reconstruct().unwrap();
        assert_eq!(series, out.series);
    }

    #[test]
    fn big_integers_become_decimal_strings() {
        let table_max: BigInt = "206054755643582".parse().unwrap();
        assert!(int_json(&table_max).is_number());
        assert_eq!(int_from_json(&int_json(&table_max)).unwrap(), table_max);
        let small = BigInt::from(-7);
        assert_eq!(int_json(&small), Value::from(-7));
        let edge = BigInt::from((1i64 << 53) - 1);
        assert!(int_json(&edge).is_number());
        for over in [BigInt::from(1i64 << 53), BigInt::from(-(1i64 << 53))] {
            let json = int_json(&over);
            assert!(json.is_string());
            assert_eq!(int_from_json(&json).unwrap(), over);
        }
    }

    #[test]
    fn reconstruct_rejects_inconsistent_entries() {
        let mut entry = outcome(5).entry;
        entry.s = 9;
        assert!(entry.reconstruct().unwrap_err().contains("dictates"));
        let mut entry = outcome(5).entry;
        entry.half.pop();
        assert!(entry.reconstruct().unwrap_err().contains("half"));
        let mut entry = outcome(5).entry;
        entry.kind = "even4".to_string();
        assert!(entry.reconstruct().unwrap_err().contains("kind"));
    }

    #[test]
    fn table_file_round_trip() {
        let entries: Vec<Entry> = [3u32, 4, 5]
            .iter()
            .map(|&n| outcome(n).entry)
            .collect();
        let table = TableFile {
            version: VERSION.to_string(),
            seed: 42,
            policy: PrimePolicy::Paper,
            entries,
            wall_millis: None,
        };
        let back = TableFile::from_json(&table.to_json()).unwrap();
        assert_eq!(back, table);
        assert_eq!(
            table.text_lines(),
            "A[3] = [1]\nA[4] = [1]\nA[5] = [1,0,0,0,0,0,-1]\n"
        );
        let auto = TableFile {
            policy: PrimePolicy::Auto { bits: 20 },
            ..table
        };
        let back = TableFile::from_json(&auto.to_json()).unwrap();
        assert_eq!(back.policy, PrimePolicy::Auto { bits: 20 });
    }

    #[test]
    fn entries_know_which_primes_served() {
        let out = outcome(4);
        assert_eq!(out.entry.primes.len(), 7);
        assert_eq!(out.entry.primes[0], 65521);
        assert!(!out.from_cache);
        assert!(out.entry.half.iter().all(|c| !c.is_zero() || true));
    }
}
