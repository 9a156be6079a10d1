use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hyperwz::algebra::{parse_rational, Symbol, Q};
use hyperwz::database::{builtin, lookup, Entry};
use hyperwz::hyperterm::TheoremSpec;
use hyperwz::oracle::{check_theorem_at, check_theorem_numeric, NumericReport, OracleError, PrecisionConfig};
use hyperwz::prover::{choose_shift, prove_and_extend_with, replay, DEFAULT_MAX_ORDER};
use hyperwz::schema::{parse_spec, parse_transcript, parse_verify, transcript_json, SpecDoc};
use hyperwz::telescope::{verify_certificate, wz_pair};

/// Mathematical failure: the proof, identity or check did not go through.
const FAILURE: u8 = 1;
/// Unreadable input or unusable arguments.
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "hyperwz", version, about = "WZ-style proofs of non-terminating hypergeometric summation theorems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prove a built-in theorem or a theorem file and print the transcript.
    Prove(ProveArgs),
    /// Check a WZ certificate exactly.
    Verify {
        /// JSON file with `certificate` and either `term` or `theorem` plus `shift`.
        file: PathBuf,
    },
    /// Re-check a saved transcript without searching for anything.
    Replay {
        file: PathBuf,
    },
    /// Compare both sides numerically at random admissible parameters.
    Check(CheckArgs),
    /// List the built-in theorems.
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ProveArgs {
    /// Built-in theorem name or path to a theorem JSON file.
    theorem: String,
    /// Write the structured transcript to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip the domain extensions configured for the theorem.
    #[arg(long)]
    no_extend: bool,
    /// Extend the domain in PARAM, optionally TIMES unit steps (PARAM or PARAM:TIMES).
    #[arg(long, value_name = "PARAM[:TIMES]")]
    extend: Option<String>,
    /// Largest recurrence order searched when extending.
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// Print the structured transcript instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Built-in theorem name or path to a theorem JSON file.
    theorem: String,
    #[arg(long, default_value_t = 5)]
    samples: usize,
    /// Mantissa bits; the tolerance is 2^(-bits/2).
    #[arg(long, default_value_t = 128)]
    bits: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check at one point instead of sampling, e.g. `a=-3,b=1,c=5`.
    #[arg(long, value_name = "ASSIGNMENTS")]
    at: Option<String>,
    /// Skip the numeric replay of the WZ certificate.
    #[arg(long)]
    no_certificate: bool,
    #[arg(long)]
    json: bool,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: USAGE, message: message.to_string() }
}

fn failure(message: impl ToString) -> Failure {
    Failure { code: FAILURE, message: message.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// A database entry, or a file treated as an entry without overrides.
fn resolve(theorem: &str) -> Result<Entry, Failure> {
    if let Some(e) = lookup(theorem) {
        return Ok(e);
    }
    let path = Path::new(theorem);
    if !path.exists() {
        let names: Vec<String> = builtin().into_iter().map(|e| e.spec.name).collect();
        return Err(usage(format!("unknown theorem {theorem:?}; built-ins are {}", names.join(", "))));
    }
    let spec = parse_spec(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(Entry { spec, shift: None, extensions: None, numeric_only: None })
}

fn parse_extension(s: &str) -> Result<(Symbol, u32), Failure> {
    let (name, times) = match s.split_once(':') {
        Some((n, t)) => (n, t.parse::<u32>().map_err(|_| usage(format!("bad extension count in {s:?}")))?),
        None => (s, 1),
    };
    let p = Symbol::new(name.trim());
    if !p.is_parameter() {
        return Err(usage(format!("{name:?} is not a parameter")));
    }
    Ok((p, times))
}

fn parse_point(s: &str) -> Result<BTreeMap<Symbol, Q>, Failure> {
    let mut out = BTreeMap::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| usage(format!("expected name=value, got {part:?}")))?;
        let v = parse_rational(value.trim())
            .ok()
            .and_then(|r| r.as_constant())
            .ok_or_else(|| usage(format!("{value:?} is not a rational number")))?;
        let p = Symbol::new(name.trim());
        if !p.is_parameter() {
            return Err(usage(format!("{name:?} is not a parameter")));
        }
        out.insert(p, v);
    }
    Ok(out)
}

fn prove(args: ProveArgs) -> Result<(), Failure> {
    let entry = resolve(&args.theorem)?;
    if let Some(reason) = entry.numeric_only {
        return Err(failure(format!("{} is configured for numeric checking only: {reason}", entry.spec.name)));
    }
    let extension = match (&args.extend, args.no_extend) {
        (Some(_), true) => return Err(usage("--extend and --no-extend exclude each other")),
        (Some(e), false) => Some(parse_extension(e)?),
        (None, true) => None,
        (None, false) => entry.extensions.clone(),
    };
    let tr = prove_and_extend_with(&entry.spec, entry.shift.clone(), extension, args.max_order);
    if args.json {
        println!("{}", transcript_json(&tr));
    } else {
        print!("{tr}");
    }
    if let Some(out) = &args.out {
        fs::write(out, transcript_json(&tr) + "\n").map_err(|e| usage(format!("{}: {e}", out.display())))?;
    }
    if tr.is_proved() {
        Ok(())
    } else {
        Err(failure("not proved"))
    }
}

fn verify(file: &Path) -> Result<(), Failure> {
    let (f, c) = parse_verify(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    match verify_certificate(&f, &c) {
        Ok(true) => {
            println!("certificate verified: F(n,k) - F(n+1,k) = G(n,k+1) - G(n,k) with G = F*({c})");
            Ok(())
        }
        Ok(false) => Err(failure("certificate does not satisfy the WZ relation")),
        Err(e) => Err(usage(e)),
    }
}

fn replay_file(file: &Path) -> Result<(), Failure> {
    let tr = parse_transcript(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    replay(&tr).map_err(failure)?;
    if tr.is_proved() {
        match tr.conditions() {
            Some(c) if !c.is_empty() => println!("transcript of {} replays; proved under {c}", tr.spec.name),
            _ => println!("transcript of {} replays; proved", tr.spec.name),
        }
        Ok(())
    } else {
        println!("transcript of {} replays as a failed proof", tr.spec.name);
        Err(failure("the transcript records a failed proof"))
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::Divergent(_) => failure(e),
        _ => usage(e),
    }
}

fn check(args: CheckArgs) -> Result<(), Failure> {
    let entry = resolve(&args.theorem)?;
    let cfg = PrecisionConfig::new(args.bits).map_err(usage)?;
    if args.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let report: NumericReport = match &args.at {
        Some(at) => check_theorem_at(&entry.spec, &parse_point(at)?, cfg).map_err(oracle_failure)?,
        None => {
            let wz = if args.no_certificate { None } else { certificate(&entry) };
            let pair = wz.as_ref().map(|(f, c)| (f, c));
            check_theorem_numeric(&entry.spec, args.samples, cfg, args.seed, pair).map_err(oracle_failure)?
        }
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    } else {
        print!("{report}");
    }
    if report.passed() {
        Ok(())
    } else {
        Err(failure("numeric check failed"))
    }
}

fn certificate(entry: &Entry) -> Option<(hyperwz::hyperterm::HyperTerm, hyperwz::algebra::RationalFunction)> {
    let (p, s) = entry.shift.clone().or_else(|| choose_shift(&entry.spec).ok())?;
    let f = entry.spec.wz_term(&p, s).ok()?;
    let c = wz_pair(&f).ok()??;
    Some((f, c.c))
}

#[derive(Serialize)]
struct Listing {
    shape: String,
    numeric_only: Option<&'static str>,
    #[serde(flatten)]
    spec: SpecDoc,
}

fn statement(spec: &TheoremSpec) -> String {
    let list = |xs: &[hyperwz::algebra::Polynomial]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    format!("{}[{}; {}; {}] = {}", spec.shape(), list(&spec.upper), list(&spec.lower), spec.z, spec.rhs())
}

fn list(json: bool) {
    let all = builtin();
    if json {
        let docs: Vec<Listing> = all
            .iter()
            .map(|e| Listing { shape: e.spec.shape(), numeric_only: e.numeric_only, spec: SpecDoc::from_spec(&e.spec) })
            .collect();
        println!("{}", serde_json::to_string_pretty(&docs).expect("listings serialize"));
        return;
    }
    for e in &all {
        let conditions: Vec<String> = e.spec.conditions.iter().map(ToString::to_string).collect();
        let when = if conditions.is_empty() { String::new() } else { format!("  for {}", conditions.join(", ")) };
        println!("{:<10} {}{when}", e.spec.name, statement(&e.spec));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Prove(args) => prove(args),
        Command::Verify { file } => verify(&file),
        Command::Replay { file } => replay_file(&file),
        Command::Check(args) => check(args),
        Command::List { json } => {
            list(json);
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hyperwz: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
