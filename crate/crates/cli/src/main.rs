//! `rp2`: classify immersed bouquets in the projective plane.
//!
//! Exit codes: 0 success, 1 domain error (invalid diagram, mismatched loop
//! counts, limits), 2 unreadable or malformed input, 3 fuzz violation.

mod svg;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rp2_core::fuzz::{self, FuzzConfig};
use rp2_core::{
    enumerate_classes, equiv, format_script, from_json, invariants, parse_script, realize, to_json, validate,
    BouquetDiagram, Error, InvariantTuple,
};

#[derive(Parser)]
#[command(name = "rp2", version, about = "Regular-homotopy classes of bouquet immersions in RP^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check generic position; prints one `VIOLATION:` line per problem.
    Validate { path: PathBuf },
    /// Print the invariant tuple of a diagram.
    Invariants { path: PathBuf },
    /// Decide whether two diagrams are regularly homotopic.
    Equiv { a: PathBuf, b: PathBuf },
    /// Build a diagram with the given invariant tuple.
    Realize {
        tuple: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List every invariant tuple for `n` loops.
    Enumerate {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply random regular moves and check that the invariants never change.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        max_loops: usize,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Replay a move script instead of running a campaign.
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Where to write the replay script of the first failure.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a diagram as static SVG.
    RenderSvg {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Domain(String),
    Input(String),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Input(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Read a file, or standard input for `-`.
fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_diagram(path: &Path) -> Result<BouquetDiagram, Failure> {
    Ok(from_json(read_input(path)?.trim())?)
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_validate(path: &Path) -> CmdResult {
    let d = read_diagram(path)?;
    match validate(&d) {
        Ok(()) => Ok(()),
        Err(violations) => {
            for v in &violations {
                println!("VIOLATION: {v}");
            }
            Err(Failure::Domain(format!("{} violation(s)", violations.len())))
        }
    }
}

fn cmd_invariants(path: &Path) -> CmdResult {
    let d = read_diagram(path)?;
    println!("{}", invariants(&d)?);
    Ok(())
}

fn cmd_equiv(a: &Path, b: &Path) -> CmdResult {
    let (da, db) = (read_diagram(a)?, read_diagram(b)?);
    if equiv(&da, &db)? {
        println!("EQUIVALENT");
    } else {
        let diff = invariants(&da)?.differing_components(&invariants(&db)?);
        println!("DISTINCT ({})", diff.join(", "));
    }
    Ok(())
}

fn cmd_realize(tuple: &str, out: Option<&Path>) -> CmdResult {
    let t: InvariantTuple = tuple.parse().map_err(|e: Error| Failure::Input(e.to_string()))?;
    emit(out, &format!("{}\n", to_json(&realize(&t)?)))
}

fn cmd_enumerate(n: usize, out: Option<&Path>) -> CmdResult {
    let mut text = String::new();
    for t in enumerate_classes(n)? {
        text.push_str(&t.to_string());
        text.push('\n');
    }
    emit(out, &text)
}

fn cmd_replay(script: &Path) -> CmdResult {
    let script = parse_script(&read_input(script)?)?;
    let r = fuzz::replay(&script, None)?;
    match r.violation {
        None => {
            println!("replayed {} steps; invariants preserved", script.steps.len());
            Ok(())
        }
        Some((step, before, after)) => {
            println!("VIOLATION at step {step}: {before} -> {after}");
            Err(Failure::Violation)
        }
    }
}

fn cmd_fuzz(config: FuzzConfig, out: Option<&Path>) -> CmdResult {
    println!("fuzz seed={} steps={} trials={}", config.seed, config.steps, config.trials);
    let report = fuzz::run(&config);
    println!("trials={} moves={} failures={}", report.trials, report.moves_applied, report.failures.len());
    let Some(first) = report.failures.first() else {
        println!("PASS");
        return Ok(());
    };
    for f in &report.failures {
        println!("FAILURE {f}");
    }
    let script = format!("# {first}\n{}", format_script(&first.script));
    match out {
        Some(p) => {
            fs::write(p, &script)?;
            println!("replay script written to {}", p.display());
        }
        None => {
            println!("REPLAY SCRIPT");
            print!("{script}");
        }
    }
    Err(Failure::Violation)
}

fn cmd_render(path: &Path, out: Option<&Path>) -> CmdResult {
    let d = read_diagram(path)?;
    emit(out, &svg::render(&d)?)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Invariants { path } => cmd_invariants(&path),
        Command::Equiv { a, b } => cmd_equiv(&a, &b),
        Command::Realize { tuple, out } => cmd_realize(&tuple, out.as_deref()),
        Command::Enumerate { n, out } => cmd_enumerate(n, out.as_deref()),
        Command::Fuzz { replay: Some(script), .. } => cmd_replay(&script),
        Command::Fuzz { seed, steps, trials, max_loops, threads, replay: None, out } => {
            cmd_fuzz(FuzzConfig { seed, steps, trials, max_loops, threads }, out.as_deref())
        }
        Command::RenderSvg { path, out } => cmd_render(&path, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation) => ExitCode::from(3),
    }
}
