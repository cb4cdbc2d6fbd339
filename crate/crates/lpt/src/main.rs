use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use lpt::bench::{parse_range, run_bench, write_csv};
use lpt::check::{check_dump, check_run};
use lpt::demo::run_demo;
use lpt::dump::{RunReport, TrackingDump};
use lpt::io::{effective_vocabulary, load_spec, load_trace, read_file};
use lpt::sim::{simulate, Mode, PolicyKind, SimConfig};
use lpt_core::oracle::DEFAULT_ENUMERATION_CAP;
use lpt_core::{format, Digest, DigestKind, EngineState, Formula, FormulaTree};
use serde_json::{json, Value};

/// Live progress tracking for finite-trace LTL specifications.
///
/// Diagnostics go to stderr; set LPT_LOG (error, warn, info, debug) to
/// change their level.
#[derive(Parser)]
#[command(name = "lpt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a specification and print its syntax tree as JSON.
    Parse { spec: PathBuf },
    /// Track a trace file and print tracking dumps as JSON lines.
    Track {
        spec: PathBuf,
        trace: PathBuf,
        /// Resolve open entries on the complete trace at the end.
        #[arg(long)]
        finalize: bool,
        /// Print one report per update instead of only the last.
        #[arg(long)]
        per_step: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock time in reports.
        #[arg(long)]
        timing: bool,
        /// Exit with code 3 when the evaluation count exceeds 2^L·|ρ|².
        #[arg(long)]
        strict: bool,
    },
    /// Check tracking soundness, lock-in and terminal completeness against
    /// brute-force semantics.
    OracleCheck {
        spec: PathBuf,
        trace: PathBuf,
        /// Longest continuation to enumerate.
        #[arg(long, default_value_t = 4)]
        horizon: usize,
        /// Validate this tracking dump instead of the engine's own run.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Maximum continuations per query.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// Print the key-collection signatures and compare with the reference.
    DemoKeys,
    /// Run gridworld episodes scored by a reward machine.
    RmSim {
        spec: PathBuf,
        #[arg(long, default_value_t = 5)]
        grid: usize,
        #[arg(long, default_value_t = 2)]
        episodes: usize,
        /// Actions per episode.
        #[arg(long, default_value_t = 40)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = PolicyKind::Novelty)]
        policy: PolicyKind,
        #[arg(long, value_enum, default_value_t = Mode::Random)]
        mode: Mode,
        /// Target for the goal policy, 64 lowercase hex digits.
        #[arg(long)]
        goal_digest: Option<String>,
        /// `signature` (timing erased) or `state`.
        #[arg(long, default_value = "signature")]
        digest: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        base: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare evaluation counts with 2^L·|ρ|² on random instances.
    Bench {
        #[arg(long, default_value = "0-4")]
        heights: String,
        #[arg(long, default_value = "1-20")]
        lengths: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with code 3 when any trial exceeds the bound.
        #[arg(long)]
        strict: bool,
    },
}

enum Failure {
    /// A check ran and found a problem.
    Check(String),
    Input(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Input(m) | Failure::Invariant(m) => m,
        }
    }
}

fn input<E: std::fmt::Display>(context: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", context.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(input(p))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn write_line(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string(value).expect("reports serialize");
    writeln!(out, "{text}").map_err(|e| Failure::Input(format!("write failed: {e}")))
}

fn ast(f: &Formula) -> Value {
    let mut node = json!({ "type": f.kind().name() });
    if let Some(name) = f.atom_name() {
        node["name"] = json!(name);
    }
    let args: Vec<Value> = f.arguments().into_iter().map(ast).collect();
    if !args.is_empty() {
        node["args"] = Value::Array(args);
    }
    node
}

fn cmd_parse(spec: &Path) -> Result<(), Failure> {
    let formula = load_spec(spec, None).map_err(input(spec))?;
    let tree = FormulaTree::build(&formula);
    let report = json!({
        "formula": format(&formula),
        "ast": ast(&formula),
        "nodes": tree.len(),
        "height": tree.height(),
    });
    write_line(&mut io::stdout().lock(), &report)
}

struct TrackArgs<'a> {
    spec: &'a Path,
    trace: &'a Path,
    finalize: bool,
    per_step: bool,
    out: Option<&'a Path>,
    timing: bool,
    strict: bool,
}

fn cmd_track(args: TrackArgs<'_>) -> Result<(), Failure> {
    let trace = load_trace(args.trace).map_err(input(args.trace))?;
    let formula = load_spec(args.spec, trace.vocabulary()).map_err(input(args.spec))?;
    let mut out = output(args.out)?;
    let mut state = EngineState::for_formula(&formula);
    let started = Instant::now();
    let report = |state: &EngineState| {
        let mut r = RunReport::from_state(state);
        if args.timing {
            r.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
        }
        r
    };
    for labels in trace.steps() {
        state
            .step(labels.clone())
            .map_err(|e| Failure::Invariant(e.to_string()))?;
        state
            .check_invariants()
            .map_err(|e| Failure::Invariant(e.to_string()))?;
        if args.per_step {
            write_line(&mut out, &report(&state))?;
        }
    }
    if args.finalize {
        state.finalize().map_err(|e| Failure::Invariant(e.to_string()))?;
        state
            .check_invariants()
            .map_err(|e| Failure::Invariant(e.to_string()))?;
    }
    let last = report(&state);
    if !args.per_step || args.finalize {
        write_line(&mut out, &last)?;
    }
    out.flush().map_err(|e| Failure::Input(e.to_string()))?;
    if !last.within_bound {
        let message = format!(
            "evaluation count {} exceeds 2^L·|ρ|² = {}",
            last.eval_count, last.bound_value
        );
        if args.strict {
            return Err(Failure::Invariant(message));
        }
        log::warn!("{message}");
    }
    Ok(())
}

fn cmd_oracle_check(
    spec: &Path,
    trace_path: &Path,
    horizon: usize,
    dump: Option<&Path>,
    cap: u64,
) -> Result<(), Failure> {
    let trace = load_trace(trace_path).map_err(input(trace_path))?;
    let formula = load_spec(spec, trace.vocabulary()).map_err(input(spec))?;
    let vocabulary = effective_vocabulary(&formula, &trace);
    let report = match dump {
        Some(path) => {
            let text = read_file(path).map_err(input(path))?;
            let dump: TrackingDump = serde_json::from_str(&text)
                .or_else(|_| {
                    // accept a `track` report line as well
                    serde_json::from_str::<RunReport>(text.lines().last().unwrap_or("")).map(|r| r.dump)
                })
                .map_err(input(path))?;
            check_dump(&formula, &trace, &dump, &vocabulary, horizon, cap).map_err(input(path))?
        }
        None => check_run(&formula, &trace, &vocabulary, horizon, cap).map_err(input(spec))?,
    };
    write_line(&mut io::stdout().lock(), &report)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} violation(s); see the report",
            report.violations.len()
        )))
    }
}

fn cmd_demo_keys() -> Result<(), Failure> {
    let outcome = run_demo();
    let mut out = io::stdout().lock();
    for line in &outcome.lines {
        writeln!(out, "{line}").map_err(|e| Failure::Input(e.to_string()))?;
    }
    if outcome.ok {
        Ok(())
    } else {
        Err(Failure::Check("signatures differ from the reference".into()))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LPT_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Parse { spec } => cmd_parse(&spec),
        Command::Track {
            spec,
            trace,
            finalize,
            per_step,
            out,
            timing,
            strict,
        } => cmd_track(TrackArgs {
            spec: &spec,
            trace: &trace,
            finalize,
            per_step,
            out: out.as_deref(),
            timing,
            strict,
        }),
        Command::OracleCheck {
            spec,
            trace,
            horizon,
            dump,
            cap,
        } => cmd_oracle_check(&spec, &trace, horizon, dump.as_deref(), cap),
        Command::DemoKeys => cmd_demo_keys(),
        Command::RmSim {
            spec,
            grid,
            episodes,
            steps,
            policy,
            mode,
            goal_digest,
            digest,
            seed,
            base,
            out,
        } => (|| {
            let formula = load_spec(&spec, None).map_err(input(&spec))?;
            let digest: DigestKind = digest.parse().map_err(Failure::Input)?;
            let goal = goal_digest
                .map(|g| g.parse::<Digest>())
                .transpose()
                .map_err(|e| Failure::Input(format!("--goal-digest: {e}")))?;
            let config = SimConfig {
                grid,
                episodes,
                steps,
                policy,
                goal,
                digest,
                mode,
                seed,
                base,
            };
            let report = simulate(&formula, &config).map_err(|e| Failure::Input(e.to_string()))?;
            let mut out = output(out.as_deref())?;
            for record in &report.records {
                write_line(&mut out, record)?;
            }
            let total: f64 = report.episodes.iter().map(|e| e.total_reward).sum();
            write_line(
                &mut out,
                &json!({ "type": "summary", "episodes": episodes, "total_reward": total }),
            )?;
            out.flush().map_err(|e| Failure::Input(e.to_string()))
        })(),
        Command::Bench {
            heights,
            lengths,
            trials,
            seed,
            out,
            strict,
        } => (|| {
            let heights = parse_range(&heights).map_err(|e| Failure::Input(format!("--heights: {e}")))?;
            let lengths = parse_range(&lengths).map_err(|e| Failure::Input(format!("--lengths: {e}")))?;
            let cells = run_bench(&heights, &lengths, trials, seed);
            let out = output(out.as_deref())?;
            write_csv(&cells, out).map_err(|e| Failure::Input(e.to_string()))?;
            let over: usize = cells.iter().map(|c| c.violations).sum();
            let total: usize = cells.iter().map(|c| c.row.trials).sum();
            if over > 0 {
                let message = format!("{over} of {total} trials exceed 2^L·|ρ|²");
                if strict {
                    return Err(Failure::Invariant(message));
                }
                log::warn!("{message}");
            }
            Ok(())
        })(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
