//! `tcc`: batch front end for the Todorcevic-ordering toolkit.
//!
//! Exit codes: 0 success, 1 validation failure, 2 precondition mismatch,
//! 3 oracle violation, 4 budget exhaustion.

mod config;
mod input;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tcc_core::antichain::{antichain_report, is_antichain, ladder, max_antichain, DEFAULT_BUDGET};
use tcc_core::condition::{random_condition_with, RandomParams};
use tcc_core::oracle::{BuiltinKind, BuiltinOracle, CheckedOracle, DecompositionOracle, ExternalOracle, OracleError};
use tcc_core::order::{orthogonal, verify_witness, Side};
use tcc_core::refuter::{refute, verify_violation, Outcome, RefuteError, RefuterConfig};
use tcc_core::sigma::{coverage_check, signature, SigmaError};
use tcc_core::{Caps, RawCondition, Stem};

use config::RefuteFile;

pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Failure::new(1, message)
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Failure::new(2, message)
    }

    fn oracle(e: OracleError) -> Self {
        Failure::new(3, e.to_string())
    }
}

/// Text output plus the exit code to leave with.
struct Done {
    out: String,
    code: u8,
}

impl Done {
    fn ok(out: String) -> Self {
        Done { out, code: 0 }
    }
}

#[derive(Parser)]
#[command(
    name = "tcc",
    version,
    about = "Conditions of the Todorcevic ordering: checks, colorings, antichains and the refuter"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct CapArgs {
    /// Longest node allowed
    #[arg(long, default_value_t = 8)]
    height: usize,
    /// Entries must be below this (unbounded when absent)
    #[arg(long)]
    width: Option<u64>,
}

impl CapArgs {
    fn caps(self) -> Caps {
        Caps::new(Some(self.height), self.width)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check every condition of a file
    Validate {
        file: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Compatibility of the two conditions in a file
    Compat {
        file: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// One (k,n,m) signature line per condition
    Classify {
        file: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Colors of every pair and the coverage verdict (one signature class)
    Color {
        file: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Maximum antichain of the file's conditions
    Antichain {
        file: PathBuf,
        /// Branch-and-bound node budget for families above 40 conditions
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Instead check that the whole file is an antichain
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Diagonalize against a claimed bounded decomposition
    Refute(RefuteArgs),
    /// Write a condition file
    Gen(GenArgs),
}

#[derive(clap::Args)]
struct RefuteArgs {
    /// builtin:<constant|sig-k|sig-n|sig-m|sig-sum|random:SEED> or exec:<path>
    #[arg(long)]
    oracle: Option<String>,
    /// Extra argument for an exec oracle (repeatable)
    #[arg(long = "oracle-arg", allow_hyphen_values = true)]
    oracle_args: Vec<String>,
    /// Class bounds of a builtin oracle, e.g. 4,4
    #[arg(long, value_delimiter = ',')]
    bounds: Option<Vec<usize>>,
    /// TOML file with any of the settings below
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long)]
    width: Option<u64>,
    /// Stem the search starts at
    #[arg(long)]
    start: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long)]
    search_budget: Option<u64>,
    #[arg(long)]
    ladder_max: Option<u64>,
    #[arg(long)]
    random_count: Option<usize>,
    #[arg(long)]
    probe_depth: Option<usize>,
    #[arg(long)]
    probe_width: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Ladder,
    Random,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    kind: GenKind,
    /// Ladder size
    #[arg(long, default_value_t = 4)]
    size: u64,
    /// Ladder stem
    #[arg(long, default_value = "^")]
    stem: String,
    /// Number of random conditions
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = RandomParams::default().max_limits)]
    max_limits: usize,
    #[arg(long, default_value_t = RandomParams::default().max_rays_per_limit)]
    max_rays: usize,
    #[arg(long, default_value_t = RandomParams::default().max_explicit)]
    max_explicit: usize,
    /// Longest random node
    #[arg(long = "node-height", default_value_t = RandomParams::default().height)]
    node_height: usize,
    /// Random entries are below this
    #[arg(long = "node-width", default_value_t = RandomParams::default().width)]
    node_width: u64,
    #[arg(long, default_value_t = RandomParams::default().max_index_from)]
    max_index_from: u64,
    #[arg(long, default_value_t = RandomParams::default().max_suffix_len)]
    max_suffix_len: usize,
    #[command(flatten)]
    caps: CapArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { file, caps } => cmd_validate(&file, caps.caps()),
        Command::Compat { file, caps } => cmd_compat(&file, caps.caps()),
        Command::Classify { file, caps } => cmd_classify(&file, caps.caps()),
        Command::Color { file, caps } => cmd_color(&file, caps.caps()),
        Command::Antichain {
            file,
            budget,
            check,
            caps,
        } => cmd_antichain(&file, budget, check, caps.caps()),
        Command::Refute(args) => cmd_refute(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match result {
        Ok(done) => {
            print!("{}", done.out);
            ExitCode::from(done.code)
        }
        Err(f) => {
            eprintln!("tcc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_validate(path: &Path, caps: Caps) -> Result<Done, Failure> {
    let mut out = String::new();
    let (mut valid, mut invalid) = (0, 0);
    for line in input::read_lines(path)? {
        let checked = line
            .text
            .parse::<RawCondition>()
            .and_then(|raw| raw.validate(&caps).map(|_| raw))
            .and_then(|raw| tcc_core::Condition::new(raw, &caps));
        match checked {
            Ok(c) => {
                valid += 1;
                writeln!(out, "{}: OK {c}", line.number).unwrap();
            }
            Err(e) => {
                invalid += 1;
                writeln!(out, "{}", input::describe(path, &line, &e)).unwrap();
            }
        }
    }
    writeln!(out, "valid={valid} invalid={invalid}").unwrap();
    Ok(Done {
        out,
        code: if invalid == 0 { 0 } else { 1 },
    })
}

fn cmd_compat(path: &Path, caps: Caps) -> Result<Done, Failure> {
    let family = input::read_conditions(path, &caps)?;
    let [f, g] = family.as_slice() else {
        return Err(Failure::precondition(format!(
            "compat needs exactly 2 conditions, found {}",
            family.len()
        )));
    };
    Ok(Done::ok(match orthogonal(f, g) {
        None => "COMPAT\n".into(),
        Some(w) => {
            if !verify_witness(f, g, &w) {
                return Err(Failure::validation(format!(
                    "witness {} failed re-verification",
                    w.point
                )));
            }
            let side = match w.isolated_in {
                Side::First => "first",
                Side::Second => "second",
            };
            format!("ORTHO witness={} isolated-in={side}\n", w.point)
        }
    }))
}

fn cmd_classify(path: &Path, caps: Caps) -> Result<Done, Failure> {
    let family = input::read_conditions(path, &caps)?;
    Ok(Done::ok(family.iter().map(|f| format!("{}\n", signature(f))).collect()))
}

fn cmd_color(path: &Path, caps: Caps) -> Result<Done, Failure> {
    let family = input::read_conditions(path, &caps)?;
    let report = coverage_check(&family).map_err(|e| match e {
        SigmaError::SignatureMismatch(a, b) => Failure::precondition(format!("SignatureMismatch: {a} vs {b}")),
        e => Failure::validation(e.to_string()),
    })?;
    let mut out = String::new();
    for (&(i, j), colors) in &report.colors {
        let verdict = if orthogonal(&family[i], &family[j]).is_some() {
            "ORTHO"
        } else {
            "COMPAT"
        };
        let colors = if colors.is_empty() {
            "-".to_string()
        } else {
            colors.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        };
        writeln!(out, "{i} {j} {verdict} {colors}").unwrap();
    }
    let signature = report.signature.map_or("-".to_string(), |s| s.to_string());
    writeln!(
        out,
        "COVERAGE {} signature={signature} pairs={} orthogonal={} uncolored={} families={}",
        if report.ok() { "ok" } else { "FAIL" },
        report.pairs,
        report.orthogonal_pairs,
        report.violations.len(),
        report.family_counts.map(|c| c.to_string()).join("/"),
    )
    .unwrap();
    Ok(Done {
        out,
        code: if report.ok() { 0 } else { 1 },
    })
}

fn cmd_antichain(path: &Path, budget: u64, check: bool, caps: Caps) -> Result<Done, Failure> {
    let family = input::read_conditions(path, &caps)?;
    if check {
        let report = is_antichain(&family);
        return Ok(Done {
            code: if report.is_antichain { 0 } else { 1 },
            out: report.to_string(),
        });
    }
    let result = max_antichain(&family, budget);
    Ok(Done {
        code: if result.exact { 0 } else { 4 },
        out: antichain_report(&family, &result),
    })
}

enum OracleSpec {
    Builtin(BuiltinKind),
    Exec(String),
}

fn parse_oracle(spec: &str) -> Result<OracleSpec, Failure> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        BuiltinKind::parse(name)
            .map(OracleSpec::Builtin)
            .ok_or_else(|| Failure::precondition(format!("unknown builtin oracle {name:?}")))
    } else if let Some(path) = spec.strip_prefix("exec:") {
        Ok(OracleSpec::Exec(path.to_string()))
    } else {
        Err(Failure::precondition(format!(
            "oracle must be builtin:<name> or exec:<path>, got {spec:?}"
        )))
    }
}

fn cmd_refute(args: RefuteArgs) -> Result<Done, Failure> {
    let file = match &args.config {
        Some(p) => RefuteFile::load(p)?,
        None => RefuteFile::default(),
    };
    let mut config = RefuterConfig {
        caps: Caps::new(
            Some(args.height.or(file.height).unwrap_or(8)),
            args.width.or(file.width),
        ),
        ..RefuterConfig::default()
    };
    if let Some(s) = args.start.or(file.start) {
        config.start = s
            .parse::<Stem>()
            .map_err(|e| Failure::precondition(format!("bad start stem {s:?}: {e}")))?;
    }
    config.seed = args.seed.or(file.seed).unwrap_or(config.seed);
    config.max_rounds = args.max_rounds.or(file.max_rounds).unwrap_or(config.max_rounds);
    config.search_budget = args
        .search_budget
        .or(file.search_budget)
        .unwrap_or(config.search_budget);
    let u = &mut config.universe;
    u.ladder_max = args.ladder_max.or(file.ladder_max).unwrap_or(u.ladder_max);
    u.random_count = args.random_count.or(file.random_count).unwrap_or(u.random_count);
    u.probe_depth = args.probe_depth.or(file.probe_depth).unwrap_or(u.probe_depth);
    u.probe_width = args.probe_width.or(file.probe_width).unwrap_or(u.probe_width);

    let spec = args
        .oracle
        .or(file.oracle)
        .ok_or_else(|| Failure::precondition("no oracle given (--oracle)"))?;
    let bounds = args.bounds.or(file.bounds);
    match parse_oracle(&spec)? {
        OracleSpec::Builtin(kind) => {
            let bounds = bounds.ok_or_else(|| Failure::precondition("builtin oracles need --bounds"))?;
            let mut oracle = BuiltinOracle::new(kind, bounds).map_err(|e| Failure::precondition(e.to_string()))?;
            run_refuter(&mut oracle, &config)
        }
        OracleSpec::Exec(path) => {
            let oracle_args = if args.oracle_args.is_empty() {
                file.oracle_args.unwrap_or_default()
            } else {
                args.oracle_args
            };
            let mut oracle = ExternalOracle::spawn(&path, &oracle_args).map_err(Failure::oracle)?;
            if let Some(b) = bounds {
                if b != oracle.bounds() {
                    return Err(Failure::precondition(format!(
                        "oracle announced bounds {:?}, expected {b:?}",
                        oracle.bounds()
                    )));
                }
            }
            let done = run_refuter(&mut oracle, &config)?;
            oracle.close().map_err(Failure::oracle)?;
            Ok(done)
        }
    }
}

fn run_refuter(oracle: &mut dyn DecompositionOracle, config: &RefuterConfig) -> Result<Done, Failure> {
    let mut checked = CheckedOracle::new(oracle).map_err(Failure::oracle)?;
    let report = match refute(&mut checked, config) {
        Ok(r) => r,
        Err(RefuteError::Oracle(e)) => return Err(Failure::oracle(e)),
        Err(e @ RefuteError::BudgetExhausted { .. }) => return Err(Failure::new(4, e.to_string())),
        Err(e) => return Err(Failure::validation(e.to_string())),
    };
    let code = match &report.outcome {
        Outcome::Violation { class, bound, members } => {
            let verified = verify_violation(&mut checked, *class, *bound, members).map_err(|e| match e {
                RefuteError::Oracle(e) => Failure::oracle(e),
                e => Failure::validation(e.to_string()),
            })?;
            if !verified {
                return Err(Failure::new(
                    3,
                    format!("OracleViolation: class {class} antichain did not re-verify\n{report}"),
                ));
            }
            0
        }
        Outcome::BudgetExhausted { .. } => 4,
    };
    Ok(Done {
        out: report.to_string(),
        code,
    })
}

fn cmd_gen(args: GenArgs) -> Result<Done, Failure> {
    let caps = args.caps.caps();
    let mut out = String::new();
    match args.kind {
        GenKind::Ladder => {
            if args.size == 0 {
                return Err(Failure::precondition("InvalidParams: ladder size must be at least 1"));
            }
            let stem: Stem = args
                .stem
                .parse()
                .map_err(|e| Failure::precondition(format!("bad stem {:?}: {e}", args.stem)))?;
            let family = ladder(&stem, args.size, &caps).map_err(|e| Failure::precondition(e.to_string()))?;
            writeln!(out, "# ladder size={} stem={stem}", args.size).unwrap();
            for f in family {
                writeln!(out, "{f}").unwrap();
            }
        }
        GenKind::Random => {
            let params = RandomParams {
                max_limits: args.max_limits,
                max_rays_per_limit: args.max_rays,
                max_explicit: args.max_explicit,
                height: args.node_height,
                width: args.node_width,
                max_index_from: args.max_index_from,
                max_suffix_len: args.max_suffix_len,
            };
            params.validate().map_err(|e| Failure::precondition(e.to_string()))?;
            writeln!(out, "# random seed={} count={}", args.seed, args.count).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            for _ in 0..args.count {
                let f = random_condition_with(&params, &mut rng).map_err(|e| Failure::precondition(e.to_string()))?;
                f.check_caps(&caps).map_err(|e| Failure::precondition(e.to_string()))?;
                writeln!(out, "{f}").unwrap();
            }
        }
    }
    Ok(Done::ok(out))
}
