//! Command-line front end. Every subcommand prints JSON (or CSV for
//! `sweep`) on stdout and logs on stderr.
//!
//! Exit codes: 0 ok, 2 invalid input, 3 not found or cap hit.
//!
//! `--config FILE` reads `key=value` lines, one per flag (`q=101`,
//! `find-threshold=true`); flags given on the command line win.
//! `CHERN_WORKERS` sets the number of worker threads.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::geometry::{build_resolution, log_chern_closed, log_chern_pair, ArrangementParams, Family, MAX_COMPONENTS, ResolvedConfiguration};
use crate::girstmair::{bad_set, verify_girstmair};
use crate::nefcheck::{min_nef_q, nef_report};
use crate::numtheory::{primes_between, DedekindData};
use crate::partitions::{sample_assignment, PartitionProblem, Requirement, SearchOptions, Strategy};
use crate::pipeline::{run_pipeline, sweep, to_sorted_json, PipelineRequest, Status};
use crate::prank::{prank_report, CyclicCoverData};
use crate::rational::parse_decimal;
use crate::rootcover::{chern_of_cover, BranchAssignment};

#[derive(Debug, Parser)]
#[command(name = "chernslope", version, about = "Chern slopes of cyclic covers of line arrangements in characteristic p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dedekind sum, continued fraction and c(a,q) for one residue.
    #[command(args_override_self = true)]
    Dedekind {
        #[arg(long)]
        q: i64,
        #[arg(long)]
        a: i64,
    },
    /// Bad and good residues mod a prime, with the bound checks.
    #[command(args_override_self = true)]
    Badset {
        #[arg(long)]
        q: i64,
        /// Neighbourhood constant, as a decimal or fraction.
        #[arg(long = "c", default_value = "1")]
        constant: String,
    },
    /// The resolved configuration and its log Chern numbers.
    #[command(args_override_self = true)]
    Arrangement {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Chern numbers of the cover for a configuration and an assignment.
    #[command(args_override_self = true)]
    Cover {
        /// JSON file with a resolved configuration (`-` for stdin).
        #[arg(long)]
        configuration: PathBuf,
        /// JSON file with `{"q": .., "nus": {"S1": .., ...}}`.
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Samples a branch assignment at a prime q.
    #[command(args_override_self = true)]
    Search {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        q: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_tries: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Conditioned)]
        strategy: StrategyArg,
        /// Require every node residue to be good, or only nonzero multiplicities.
        #[arg(long, value_enum, default_value_t = RequireArg::Asymptotic)]
        require: RequireArg,
    },
    /// Parameters for a target slope, and optionally one sampled cover.
    #[command(args_override_self = true)]
    Slope {
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "0.01")]
        eps: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value = "APRIME")]
        family: Family,
        /// Prime for the sampled cover; chosen automatically when absent.
        #[arg(long)]
        q: Option<i64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1_000)]
        max_tries: u64,
        /// Report only the parameters.
        #[arg(long)]
        no_sample: bool,
    },
    /// Genus and p-rank bound of a cyclic cover of the line.
    #[command(args_override_self = true)]
    Prank {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: u64,
        /// Comma separated branch multiplicities.
        #[arg(long, value_delimiter = ',', required = true)]
        mults: Vec<u64>,
    },
    /// Intersection numbers entering the nef check.
    #[command(args_override_self = true)]
    Nef {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, required_unless_present = "find_threshold")]
        q: Option<i64>,
        /// Report the smallest prime where every value is nonnegative.
        #[arg(long)]
        find_threshold: bool,
        #[arg(long, default_value_t = 1_000_003)]
        q_max: i64,
    },
    /// One CSV row per prime in a range.
    #[command(args_override_self = true)]
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        q_min: i64,
        #[arg(long)]
        q_max: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_tries: u64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, default_value = "A0")]
    family: Family,
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    e: u64,
    /// Number of tangent sections (family A, A0).
    #[arg(long)]
    d: Option<u64>,
    #[arg(long, default_value_t = 0)]
    g: u64,
    #[arg(long, default_value_t = 0)]
    u: u64,
    #[arg(long, default_value_t = 0)]
    w: u64,
    /// Number of section pairs (family APRIME).
    #[arg(long)]
    l: Option<u64>,
}

impl ParamArgs {
    fn params(&self) -> Result<ArrangementParams> {
        let missing = |f: &str| Error::Domain(format!("--{f} is required for family {}", self.family));
        let params = match self.family {
            Family::A0 => ArrangementParams::a0(self.p, self.r, self.e, self.d.ok_or_else(|| missing("d"))?, self.g),
            Family::A => ArrangementParams::a(
                self.p,
                self.r,
                self.e,
                self.d.ok_or_else(|| missing("d"))?,
                self.g,
                self.u,
                self.w,
            ),
            Family::APrime => {
                let l = match (self.l, self.d) {
                    (Some(l), _) => l,
                    (None, Some(d)) if d % 2 == 0 => d / 2,
                    _ => return Err(missing("l")),
                };
                ArrangementParams::aprime(self.p, self.r, self.e, l)
            }
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Uniform,
    Conditioned,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RequireArg {
    Asymptotic,
    Valid,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) | Error::CapExceeded(_) => 3,
        _ => 2,
    }
}

/// `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", n + 1)))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Moves `--config FILE` out of `args` and splices its entries in right after
/// the subcommand, so later command-line flags override them.
fn expand_config(mut args: Vec<String>) -> Result<Vec<String>> {
    let pos = args.iter().position(|a| a == "--config" || a.starts_with("--config="));
    let Some(pos) = pos else { return Ok(args) };
    let path = if let Some(p) = args[pos].strip_prefix("--config=") {
        let p = p.to_string();
        args.remove(pos);
        p
    } else {
        if pos + 1 >= args.len() {
            return Err(Error::Parse("--config needs a file".into()));
        }
        args.remove(pos);
        args.remove(pos)
    };
    let text = fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    let mut injected = Vec::new();
    for (k, v) in parse_config(&text)? {
        match v.as_str() {
            "true" => injected.push(format!("--{k}")),
            "false" => {}
            _ => injected.push(format!("--{k}={v}")),
        }
    }
    let sub = args
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map(|i| i + 2)
        .unwrap_or(args.len());
    args.splice(sub..sub, injected);
    Ok(args)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit<T: serde::Serialize>(value: &T) -> Result<()> {
    let text = to_sorted_json(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Parse(e.to_string())),
        _ => Ok(()),
    }
}

fn configure_workers() {
    if let Some(n) = std::env::var("CHERN_WORKERS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not set worker count: {e}");
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run(args: Vec<String>) -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .try_init();
    configure_workers();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Dedekind { q, a } => {
            emit(&DedekindData::new(q, a)?)?;
        }
        Command::Badset { q, constant } => {
            let c = parse_decimal(&constant)?;
            let set = bad_set(q, &c)?;
            let bounds = verify_girstmair(q, &c)?;
            emit(&json!({
                "q": q,
                "C": crate::rational::display(&c),
                "bad": set.members,
                "good": set.good(),
                "bounds": bounds,
            }))?;
        }
        Command::Arrangement { params } => {
            let params = params.params()?;
            let count = params.component_count();
            if count.is_none_or(|n| n > MAX_COMPONENTS) {
                return Err(Error::CapExceeded(format!(
                    "configuration has {count:?} components, above {MAX_COMPONENTS}"
                )));
            }
            let config = build_resolution(&params)?;
            emit(&json!({
                "params": params,
                "component_count": count,
                "t2": config.t2(),
                "log_chern": log_chern_pair(&config),
                "closed_form": log_chern_closed(&params)?,
                "configuration": config,
            }))?;
        }
        Command::Cover { configuration, assignment } => {
            let config: ResolvedConfiguration = read_json(&configuration)?;
            let assign: BranchAssignment = read_json(&assignment)?;
            emit(&chern_of_cover(&config, &assign)?)?;
        }
        Command::Search {
            params,
            q,
            seed,
            max_tries,
            strategy,
            require,
        } => {
            let params = params.params()?;
            let problem = PartitionProblem::new(q, params)?;
            let opts = SearchOptions {
                seed,
                max_tries,
                strategy: match strategy {
                    StrategyArg::Uniform => Strategy::Uniform,
                    StrategyArg::Conditioned => Strategy::Conditioned,
                },
                requirement: match require {
                    RequireArg::Asymptotic => Requirement::Asymptotic,
                    RequireArg::Valid => Requirement::Valid,
                },
            };
            let outcome = sample_assignment(&problem, &opts)?;
            let invariants = match outcome.found() {
                Some(f) => Some(chern_of_cover(&build_resolution(&params)?, &f.assignment)?),
                None => None,
            };
            let code = if invariants.is_some() { 0 } else { 3 };
            emit(&json!({ "outcome": outcome, "invariants": invariants }))?;
            return Ok(code);
        }
        Command::Slope {
            target,
            eps,
            p,
            family,
            q,
            seed,
            max_tries,
            no_sample,
        } => {
            let mut req = PipelineRequest::new(parse_decimal(&target)?, parse_decimal(&eps)?, p, family, q, seed);
            req.max_tries = max_tries;
            req.sample = !no_sample;
            let report = run_pipeline(&req)?;
            emit(&report)?;
            return Ok(report.status.exit_code());
        }
        Command::Prank { q, p, mults } => {
            let data = CyclicCoverData::new(q, p, mults)?;
            emit(&prank_report(&data))?;
        }
        Command::Nef {
            params,
            q,
            find_threshold,
            q_max,
        } => {
            let params = params.params()?;
            let q = if find_threshold {
                min_nef_q(&params, q_max)?
            } else {
                q.expect("clap enforces --q")
            };
            emit(&nef_report(&params, q)?)?;
        }
        Command::Sweep {
            params,
            q_min,
            q_max,
            seed,
            max_tries,
            output,
        } => {
            let params = params.params()?;
            let qs: Vec<i64> = primes_between(q_min, q_max)
                .into_iter()
                .filter(|&q| q as u64 != params.p)
                .collect();
            let rows = sweep(&params, &qs, seed, max_tries)?;
            let sink: Box<dyn Write> = match &output {
                Some(path) => Box::new(
                    fs::File::create(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                ),
                None => Box::new(std::io::stdout()),
            };
            let mut w = csv::Writer::from_writer(sink);
            for row in &rows {
                w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
            }
            w.flush().map_err(|e| Error::Parse(e.to_string()))?;
            if rows.iter().any(|r| r.status != Status::Ok) {
                return Ok(3);
            }
        }
    }
    Ok(0)
}
