//! Command-line front end. Every command is deterministic in its arguments;
//! structured output is JSON, human-readable summaries go to stdout.
//!
//! Exit codes: 0 success, 1 the checked property fails (with a witness),
//! 2 usage, parse or I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::construction::{build_query_plan_with, PlanConfig, QueryPlan};
use crate::decode::{answer_queries, Decoder, MarkedSet, Syndrome};
use crate::error::{Error, Result};
use crate::verify::{
    baseline_search, bounds_report, find_collision, BaselineConfig, BaselineReport, WorkCap,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "parity-search", version, about = "Non-adaptive parity search plans: build, verify, answer, decode")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecoderArg {
    Brute,
    Algebraic,
}

impl From<DecoderArg> for Decoder {
    fn from(d: DecoderArg) -> Self {
        match d {
            DecoderArg::Brute => Decoder::Brute,
            DecoderArg::Algebraic => Decoder::Algebraic,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the moment-vector plan for n items and at most d marked.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Field degree; defaults to the least m with n < 2^m.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively check that a plan separates all sets of size <= d.
    Verify {
        plan: PathBuf,
        /// Defaults to the plan's own d.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = WorkCap::DEFAULT.0)]
        work_cap: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the parity answers for a marked set.
    Answer {
        plan: PathBuf,
        /// Comma-separated 1-based items, e.g. 3,17.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the marked set from a 0/1 answer string.
    Decode {
        plan: PathBuf,
        #[arg(long)]
        syndrome: String,
        #[arg(long, value_enum, default_value = "brute")]
        decoder: DecoderArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hide a marked set, answer the plan's queries, decode, and record the session.
    Simulate {
        plan: PathBuf,
        #[arg(long, conflicts_with = "set")]
        seed: Option<u64>,
        #[arg(long)]
        set: Option<String>,
        #[arg(long, value_enum, default_value = "algebraic")]
        decoder: DecoderArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Store per-phase wall times in the record (makes it non-reproducible).
        #[arg(long)]
        record_timings: bool,
    },
    /// Compare the entropy lower bound with the constructed plan size.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for separating uniformly random plans.
    Baseline {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        max_f: Option<usize>,
        #[arg(long, default_value_t = WorkCap::DEFAULT.0)]
        work_cap: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    n: usize,
    d: usize,
    f: usize,
    separating: bool,
    witness: Option<[MarkedSet; 2]>,
}

#[derive(Debug, Serialize)]
struct AnswerRecord {
    set: MarkedSet,
    syndrome: Syndrome,
}

#[derive(Debug, Serialize)]
struct DecodeRecord {
    syndrome: Syndrome,
    decoder: Decoder,
    decoded: Option<MarkedSet>,
}

#[derive(Debug, Serialize)]
pub struct PlanReference {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct PhaseTimings {
    pub answer_us: u128,
    pub decode_us: u128,
}

/// One simulated search: hidden set, its answers, and the decoder's verdict.
#[derive(Debug, Serialize)]
pub struct SessionRecord {
    pub plan: PlanReference,
    pub n: usize,
    pub d: usize,
    pub f: usize,
    pub seed: Option<u64>,
    pub hidden: MarkedSet,
    pub syndrome: Syndrome,
    pub decoder: Decoder,
    pub decoded: Option<MarkedSet>,
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<PhaseTimings>,
}

#[derive(Debug, Serialize)]
struct BaselineFile {
    #[serde(flatten)]
    report: BaselineReport,
    constructed_f: Option<usize>,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn emit(out: &mut dyn Write, path: Option<&Path>, json: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, json)?,
        None => out.write_all(json.as_bytes())?,
    }
    Ok(())
}

fn load_plan(path: &Path) -> Result<(QueryPlan, Vec<u8>)> {
    let bytes = fs::read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::MalformedPlan(e.to_string()))?;
    Ok((QueryPlan::from_json(text)?, bytes))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Construct { n, d, m, out: path } => {
            let plan = build_query_plan_with(n, d, &PlanConfig { m, ..Default::default() })?;
            let field_m = plan.field().map_or(0, |f| f.degree()) as usize;
            emit(out, path.as_deref(), &plan.to_json())?;
            if path.is_some() {
                writeln!(out, "n = {n}, d = {d}, m = {field_m}, f = {}, dm = {}", plan.f(), d * field_m)?;
                if plan.within_theorem_hypothesis() == Some(false) {
                    writeln!(out, "note: d*m > n, outside the dm <= n < 2^m hypothesis")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { plan, d, work_cap, out: path } => {
            let (plan, _) = load_plan(&plan)?;
            let d = d.unwrap_or(plan.d());
            let collision = find_collision(&plan, d, WorkCap(work_cap))?;
            let report = VerifyReport {
                n: plan.n(),
                d,
                f: plan.f(),
                separating: collision.is_none(),
                witness: collision.clone().map(|(x, y)| [x, y]),
            };
            if let Some(p) = &path {
                fs::write(p, to_json(&report))?;
            }
            match collision {
                None => {
                    writeln!(out, "SEPARATING")?;
                    Ok(EXIT_OK)
                }
                Some((x, y)) => {
                    writeln!(out, "NOT SEPARATING")?;
                    writeln!(out, "X = {x}")?;
                    writeln!(out, "Y = {y}")?;
                    Ok(EXIT_PROPERTY_FAILED)
                }
            }
        }
        Command::Answer { plan, set, out: path } => {
            let (plan, _) = load_plan(&plan)?;
            let set = MarkedSet::parse(&set)?;
            let syndrome = answer_queries(&plan, &set)?;
            writeln!(out, "{syndrome}")?;
            if let Some(p) = &path {
                fs::write(p, to_json(&AnswerRecord { set, syndrome }))?;
            }
            Ok(EXIT_OK)
        }
        Command::Decode { plan, syndrome, decoder, out: path } => {
            let (plan, _) = load_plan(&plan)?;
            let syndrome = Syndrome::parse(&syndrome)?;
            let decoder = Decoder::from(decoder);
            let decoded = decoder.decode(&plan, &syndrome)?;
            match &decoded {
                Some(x) => writeln!(out, "{x}")?,
                None => writeln!(out, "NO MATCH")?,
            }
            let found = decoded.is_some();
            if let Some(p) = &path {
                fs::write(p, to_json(&DecodeRecord { syndrome, decoder, decoded }))?;
            }
            Ok(if found { EXIT_OK } else { EXIT_PROPERTY_FAILED })
        }
        Command::Simulate { plan: plan_path, seed, set, decoder, out: path, record_timings } => {
            let (plan, bytes) = load_plan(&plan_path)?;
            let (hidden, seed) = match set {
                Some(s) => (MarkedSet::parse(&s)?, None),
                None => {
                    let seed = seed.unwrap_or(0);
                    (sample_hidden(plan.n(), plan.d(), seed), Some(seed))
                }
            };
            let decoder = Decoder::from(decoder);
            let t0 = Instant::now();
            let syndrome = answer_queries(&plan, &hidden)?;
            let t1 = Instant::now();
            let decoded = decoder.decode(&plan, &syndrome)?;
            let t2 = Instant::now();
            let timings = PhaseTimings { answer_us: (t1 - t0).as_micros(), decode_us: (t2 - t1).as_micros() };
            let matched = decoded.as_ref() == Some(&hidden);

            writeln!(out, "hidden   {hidden}")?;
            writeln!(out, "syndrome {syndrome}")?;
            match &decoded {
                Some(x) => writeln!(out, "decoded  {x} ({decoder})")?,
                None => writeln!(out, "decoded  NO MATCH ({decoder})")?,
            }
            writeln!(out, "{}", if matched { "MATCH" } else { "MISMATCH" })?;
            writeln!(out, "answer {:>8} us   decode {:>8} us", timings.answer_us, timings.decode_us)?;

            let record = SessionRecord {
                plan: PlanReference { path: plan_path.display().to_string(), sha256: hex_digest(&bytes) },
                n: plan.n(),
                d: plan.d(),
                f: plan.f(),
                seed,
                hidden,
                syndrome,
                decoder,
                decoded,
                matched,
                timings: record_timings.then_some(timings),
            };
            if let Some(p) = &path {
                fs::write(p, to_json(&record))?;
            }
            Ok(if matched { EXIT_OK } else { EXIT_PROPERTY_FAILED })
        }
        Command::Bounds { n, d, out: path } => {
            let report = bounds_report(n, d)?;
            write!(out, "{}", report.table())?;
            if let Some(p) = &path {
                fs::write(p, to_json(&report))?;
            }
            Ok(EXIT_OK)
        }
        Command::Baseline { n, d, seed, trials, max_f, work_cap, out: path } => {
            let config = BaselineConfig { trials_per_f: trials, max_f, work_cap: WorkCap(work_cap) };
            let report = baseline_search(n, d, seed, &config)?;
            let constructed_f = if d == 0 {
                Some(0)
            } else {
                build_query_plan_with(n, d, &PlanConfig::default()).ok().map(|p| p.f())
            };
            write!(out, "{}", report.table())?;
            if let Some(f) = constructed_f {
                writeln!(out, "constructed f = {f}")?;
            }
            if let Some(p) = &path {
                fs::write(p, to_json(&BaselineFile { report, constructed_f }))?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Seeded hidden set: size uniform in `0..=min(d, n)`, then a uniform subset of that size.
pub fn sample_hidden(n: usize, d: usize, seed: u64) -> MarkedSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.gen_range(0..=d.min(n));
    MarkedSet::new(sample(&mut rng, n, size).into_iter().map(|i| i + 1).collect())
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
