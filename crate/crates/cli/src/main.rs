//! `picomp`: parse, explore, verify and generate extended pi-calculus models.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use picomp_core::authority::{ObjectId, OperationId, UserId};
use picomp_core::generator::{compose_model, CompositionConfig, GenError};
use picomp_core::io::{export_lts, load_aidb, load_wsdb, ExportFormat};
use picomp_core::semantics::build_lts_with;
use picomp_core::syntax::free_names;
use picomp_core::verify::{find_deadlocks, lts_bisimilar, reachable, simulate, Equivalence, Reachability, StatePredicate, Trace};
use picomp_core::{build_lts, parse_model, render_model, ExplorationMode, Limits, Lts, ModelFile, SignalId};

#[derive(Parser)]
#[command(name = "picomp", version, about = "Extended pi-calculus workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model and print it in canonical layout.
    Fmt {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Parse and validate a model (declarations, guardedness).
    Check { file: PathBuf },
    /// Build the transition system of a model's main process.
    Lts {
        file: PathBuf,
        #[command(flatten)]
        explore: Explore,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report stuck states that are not congruent to 0 (closed mode).
    Deadlocks {
        file: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Search for a state satisfying a predicate and print a shortest trace.
    Reach {
        file: PathBuf,
        /// nil | can-fire(PATTERN) | active(AGENT[,N]) | match(LHS,RHS)
        #[arg(long)]
        pred: String,
        #[command(flatten)]
        explore: Explore,
        #[arg(long)]
        json: bool,
    },
    /// Run one seeded random execution.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        open: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide (weak by default) bisimilarity of two models' main processes.
    Bisim {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        strong: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Generate a composition model from service and authority databases.
    Generate {
        #[arg(long)]
        wsdb: PathBuf,
        #[arg(long)]
        aidb: PathBuf,
        #[arg(long)]
        user: String,
        /// Compose the service groups with `;` instead of `|`.
        #[arg(long)]
        literal_seq: bool,
        /// Failure signal number used by handlers.
        #[arg(long, default_value_t = 1)]
        signal: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Query the authority database.
    Authz {
        #[arg(long)]
        aidb: PathBuf,
        #[arg(long)]
        user: String,
        #[arg(long, requires = "obj")]
        op: Option<String>,
        #[arg(long, requires = "op")]
        obj: Option<String>,
    },
}

#[derive(Args, Clone, Copy)]
struct LimitArgs {
    #[arg(long, default_value_t = 100_000)]
    max_states: usize,
    #[arg(long, default_value_t = 10_000)]
    max_depth: usize,
}

impl From<LimitArgs> for Limits {
    fn from(a: LimitArgs) -> Self {
        Limits { max_states: a.max_states, max_depth: a.max_depth }
    }
}

#[derive(Args, Clone, Copy)]
struct Explore {
    #[arg(long, conflicts_with = "closed")]
    open: bool,
    #[arg(long)]
    closed: bool,
    #[command(flatten)]
    limits: LimitArgs,
}

impl Explore {
    fn mode(&self) -> ExplorationMode {
        if self.open {
            ExplorationMode::Open
        } else {
            ExplorationMode::Closed
        }
    }
}

/// Result of a command that checks something.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Verdict {
    Holds = 0,
    Fails = 1,
    Unknown = 2,
}

const USAGE_OR_INPUT_ERROR: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_OR_INPUT_ERROR),
            };
        }
    };
    match run(cli.command) {
        Ok(v) => ExitCode::from(v as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_OR_INPUT_ERROR)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_model(path: &Path) -> Result<ModelFile> {
    let text = read(path)?;
    parse_model(&text).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn explore(m: &ModelFile, mode: ExplorationMode, limits: Limits) -> Result<Lts> {
    Ok(build_lts(&m.main, &m.defs, mode, limits)?)
}

fn print_trace(lts_or_none: Option<&Lts>, trace: &Trace, json: bool) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(trace)?);
        return Ok(());
    }
    let initial = lts_or_none.and_then(|l| l.witness(&trace.initial));
    match initial {
        Some(p) => println!("   {}  {p}", trace.initial.short()),
        None => println!("   {}", trace.initial.short()),
    }
    for (i, step) in trace.steps.iter().enumerate() {
        println!("{:>3} --{}--> {}  {}", i + 1, step.label, step.state.short(), step.term);
    }
    Ok(())
}

fn run(command: Command) -> Result<Verdict> {
    match command {
        Command::Fmt { file, output } => {
            let m = load_model(&file)?;
            emit(&render_model(&m), output.as_deref())?;
            Ok(Verdict::Holds)
        }
        Command::Check { file } => {
            let m = load_model(&file)?;
            m.defs.check_resolved(&m.main)?;
            println!(
                "ok: {} agents, {} channels, {} signals",
                m.defs.len(),
                m.channels.len(),
                m.signals.len()
            );
            Ok(Verdict::Holds)
        }
        Command::Lts { file, explore: ex, dot, json, output } => {
            let m = load_model(&file)?;
            let lts = explore(&m, ex.mode(), ex.limits.into())?;
            if dot || json {
                let format = if dot { ExportFormat::Dot } else { ExportFormat::Json };
                emit(&export_lts(&lts, format), output.as_deref())?;
            } else {
                let summary = format!(
                    "states: {}\ntransitions: {}\ntruncated: {}\n",
                    lts.states.len(),
                    lts.transitions.len(),
                    lts.truncated
                );
                emit(&summary, output.as_deref())?;
            }
            if lts.truncated {
                eprintln!("warning: exploration stopped at the limits; {} states left unexpanded", lts.frontier.len());
            }
            Ok(Verdict::Holds)
        }
        Command::Deadlocks { file, limits } => {
            let m = load_model(&file)?;
            let lts = explore(&m, ExplorationMode::Closed, limits.into())?;
            let dead = find_deadlocks(&lts)?;
            for d in &dead {
                println!("{}  {}", d.short(), lts.states[d]);
            }
            Ok(if !dead.is_empty() {
                Verdict::Fails
            } else if lts.truncated {
                eprintln!("no deadlock among {} explored states; exploration was truncated", lts.states.len());
                Verdict::Unknown
            } else {
                println!("no deadlocks in {} states", lts.states.len());
                Verdict::Holds
            })
        }
        Command::Reach { file, pred, explore: ex, json } => {
            let pred = StatePredicate::parse(&pred).map_err(|e| anyhow!(e))?;
            let m = load_model(&file)?;
            let lts = explore(&m, ex.mode(), ex.limits.into())?;
            Ok(match reachable(&lts, &pred) {
                Reachability::Found(trace) => {
                    print_trace(Some(&lts), &trace, json)?;
                    Verdict::Holds
                }
                Reachability::NotFound => {
                    println!("unreachable ({} states)", lts.states.len());
                    Verdict::Fails
                }
                Reachability::Unknown => {
                    println!("not found within {} states; exploration was truncated", lts.states.len());
                    Verdict::Unknown
                }
            })
        }
        Command::Simulate { file, seed, steps, open, json } => {
            let m = load_model(&file)?;
            let mode = if open { ExplorationMode::Open } else { ExplorationMode::Closed };
            let trace = simulate(&m.main, &m.defs, mode, seed, steps)?;
            if !json {
                println!("   {}  {}", trace.initial.short(), m.main);
            }
            if json {
                print_trace(None, &trace, true)?;
            } else {
                for (i, step) in trace.steps.iter().enumerate() {
                    println!("{:>3} --{}--> {}  {}", i + 1, step.label, step.state.short(), step.term);
                }
            }
            Ok(Verdict::Holds)
        }
        Command::Bisim { first, second, strong, limits } => {
            let (a, b) = (load_model(&first)?, load_model(&second)?);
            let mut names: BTreeSet<_> = free_names(&a.main, &a.defs)?;
            names.extend(free_names(&b.main, &b.defs)?);
            let limits: Limits = limits.into();
            let la = build_lts_with(&a.main, &a.defs, ExplorationMode::Open, limits, &names)?;
            let lb = build_lts_with(&b.main, &b.defs, ExplorationMode::Open, limits, &names)?;
            if la.truncated || lb.truncated {
                println!("unknown: a state space exceeds the exploration limits");
                return Ok(Verdict::Unknown);
            }
            let eq = if strong { Equivalence::Strong } else { Equivalence::Weak };
            let same = lts_bisimilar(&la, &lb, eq);
            println!("{}", if same { "bisimilar" } else { "not bisimilar" });
            Ok(if same { Verdict::Holds } else { Verdict::Fails })
        }
        Command::Generate { wsdb, aidb, user, literal_seq, signal, output } => {
            let services = load_wsdb(&read(&wsdb)?).with_context(|| wsdb.display().to_string())?;
            let authority = load_aidb(&read(&aidb)?).with_context(|| aidb.display().to_string())?;
            let cfg = CompositionConfig {
                services: services.services,
                channels: services.channels,
                authority,
                requester_user: UserId::new(user),
                failure_signal: SignalId::new(signal)?,
                literal_seq,
            };
            match compose_model(&cfg) {
                Ok(m) => {
                    emit(&render_model(&m), output.as_deref())?;
                    Ok(Verdict::Holds)
                }
                Err(e @ GenError::UnauthorizedService(_)) => {
                    eprintln!("{e}");
                    Ok(Verdict::Fails)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Authz { aidb, user, op, obj } => {
            let m = load_aidb(&read(&aidb)?).with_context(|| aidb.display().to_string())?;
            let u = UserId::new(user);
            if let (Some(op), Some(obj)) = (op, obj) {
                let ok = m.authorize(&u, &OperationId::new(op.as_str()), &ObjectId::new(obj.as_str()))?;
                println!("{}", if ok { "authorized" } else { "unauthorized" });
                return Ok(if ok { Verdict::Holds } else { Verdict::Fails });
            }
            let join = |items: Vec<String>| items.join(", ");
            println!("roles: {}", join(m.roles_of(&u)?.iter().map(|r| r.to_string()).collect()));
            println!("goals: {}", join(m.goals_of(&u)?.iter().map(|o| o.to_string()).collect()));
            println!("operations: {}", join(m.ops_of(&u)?.iter().map(|o| o.to_string()).collect()));
            let view = m.service_view(&u)?;
            println!("service view: {} pairs", view.len());
            for (r, g) in &view.pairs {
                println!("  ({r}, {g})");
            }
            Ok(Verdict::Holds)
        }
    }
}
