use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dynlang::algebra::{Dfa, FiniteMonoid};
use dynlang::bench::{self, Problem, Scenario};
use dynlang::regular::EngineKind;
use dynlang::script::parse_script;

#[derive(Parser)]
#[command(name = "dynlang", version, about = "Work-metered dynamic language membership benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a script or a random workload and report per-operation work.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Write the CSV report here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Print a JSON summary (per-op count, mean and max work).
        #[arg(long)]
        json: bool,
    },
    /// Run the workload at several sizes and fit the expected work shape.
    Scale {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Comma-separated domain sizes (at least three).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long, value_parser = parse_problem)]
    problem: Problem,
    /// Domain size.
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Number of random operations (ignored with --script).
    #[arg(long, default_value_t = 1000)]
    ops: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Number of bracket types for dyckk and dyck-range.
    #[arg(long, default_value_t = 2)]
    types: usize,
    /// Monoid table file for range-eval and starfree.
    #[arg(long)]
    monoid: Option<PathBuf>,
    /// Automaton file for regular.
    #[arg(long)]
    dfa: Option<PathBuf>,
    #[arg(long)]
    regex: Option<String>,
    /// auto, hierarchy or starfree.
    #[arg(long, default_value = "auto", value_parser = parse_engine)]
    engine: EngineKind,
    /// Operation script, one op per line.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Check every operation against the brute-force oracle.
    #[arg(long)]
    verify: bool,
    /// Fraction of cells filled before the workload starts.
    #[arg(long, default_value_t = 0.0)]
    fill: f64,
    /// Percent weights of sets, resets and queries, e.g. 45,45,10.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    mix: Option<Vec<u32>>,
}

fn parse_problem(s: &str) -> Result<Problem, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Problem::ALL.iter().map(|p| p.name()).collect();
        format!("unknown problem `{s}`, expected one of {}", names.join(", "))
    })
}

fn parse_engine(s: &str) -> Result<EngineKind, String> {
    s.parse().map_err(|_| format!("unknown engine `{s}`, expected auto, hierarchy or starfree"))
}

impl ScenarioArgs {
    fn build(&self) -> Result<Scenario> {
        let mut s = Scenario::new(self.problem, self.n);
        s.ops = self.ops;
        s.seed = self.seed;
        s.epsilon = self.epsilon;
        s.types = self.types;
        s.regex = self.regex.clone();
        s.engine = self.engine;
        s.verify = self.verify;
        s.fill = self.fill;
        if let Some(path) = &self.monoid {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            s.monoid = Some(text.parse::<FiniteMonoid>().with_context(|| format!("parsing {}", path.display()))?);
        }
        if let Some(path) = &self.dfa {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            s.dfa = Some(Dfa::from_json(&text).with_context(|| format!("parsing {}", path.display()))?);
        }
        if let Some(path) = &self.script {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            s.script = Some(parse_script(&text).with_context(|| format!("parsing {}", path.display()))?);
        }
        if let Some(m) = &self.mix {
            s.mix = bench::OpMix {
                set: m[0],
                reset: m[1],
                query: m[2],
            };
        }
        if !(0.0..=1.0).contains(&s.fill) {
            bail!("--fill must lie in [0, 1]");
        }
        if s.epsilon <= 0.0 {
            bail!("--epsilon must be positive");
        }
        Ok(s)
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(args: &ScenarioArgs, csv: Option<&PathBuf>, json: bool) -> Result<ExitCode> {
    let report = bench::run(&args.build()?)?;
    match csv {
        Some(path) => fs::write(path, report.to_csv()).with_context(|| format!("writing {}", path.display()))?,
        None if !json => emit(&report.to_csv())?,
        None => {}
    }
    if json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&report.summary_json())?))?;
    }
    if let Some(d) = &report.divergence {
        eprintln!("divergence: {d}");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn scale(args: &ScenarioArgs, sizes: &[usize], json: bool) -> Result<ExitCode> {
    let rep = bench::scale(&args.build()?, sizes)?;
    if json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&rep)?))?;
        return Ok(ExitCode::SUCCESS);
    }
    let mut out = String::from("n,change_mean,change_max,query_mean,query_max\n");
    for s in &rep.sizes {
        out.push_str(&format!("{},{:.2},{},{:.2},{}\n", s.n, s.change_mean, s.change_max, s.query_mean, s.query_max));
    }
    out.push_str(&format!("# {}: {}\n", rep.problem, rep.change_fit));
    emit(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { scenario, csv, json } => run(scenario, csv.as_ref(), *json),
        Command::Scale { scenario, sizes, json } => scale(scenario, sizes, *json),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
