use std::io::Write;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Parser, Subcommand, ValueEnum};

use holonomy_cli::{exit_code, explain, list_scenarios, load, run, CliError, RunOptions, EXIT_INPUT, VERBS};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Parser, Debug)]
#[command(name = "holonomy", version, about = "Run holonomy scenarios and emit reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Scenario file, or the name of a bundled scenario.
    #[arg(long)]
    scenario: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Let pure sweeps run in parallel; results are merged in order.
    #[arg(long)]
    parallel: bool,
    /// Float comparison tolerance, overriding the scenario's.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every request in the scenario.
    Run(RunArgs),
    /// Check bundle cocycle and compatibility identities.
    ValidateBundle(RunArgs),
    /// Parallel transport along paths.
    Transport(RunArgs),
    /// Holonomy of loops, with thin-invariance sweeps.
    Holonomy(RunArgs),
    /// Check gerbe cocycle relations.
    ValidateGerbe(RunArgs),
    /// Surface holonomy of closed 2-chains.
    SurfaceHolonomy(RunArgs),
    /// Homomorphism laws of surface holonomy on generated 2-loops.
    TwoHolonomy(RunArgs),
    /// Transport in the loop space along homotopies.
    LoopTransport(RunArgs),
    /// Local subgroupoid of a transport on a finite site.
    BuildLocalSubgroupoid(RunArgs),
    /// Holonomy groupoid of a local subgroupoid.
    Globalise(RunArgs),
    /// Gerbe data through to the holonomy groupoid.
    #[command(name = "theorem-1")]
    Theorem1(RunArgs),
    /// Double groupoid and crossed module sweeps.
    DoubleCheck(RunArgs),
    /// Describe what a verb computes.
    Explain {
        verb: Option<String>,
        /// List the verbs.
        #[arg(long)]
        list: bool,
    },
    /// List the bundled scenarios.
    ListScenarios,
}

fn execute(args: &RunArgs, verb: Option<&str>) -> anyhow::Result<i32> {
    let scenario = load(&args.scenario)?;
    let opts = RunOptions {
        verb: verb.map(str::to_string),
        parallel: args.parallel,
        tolerance: args.tolerance,
    };
    let report = run(&scenario, &opts)?;
    let text = match args.format {
        Format::Text => report.text(),
        Format::Structured => report.structured(),
    };
    match &args.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(exit_code(&report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(a) => execute(a, None),
        Command::ValidateBundle(a) => execute(a, Some("validate-bundle")),
        Command::Transport(a) => execute(a, Some("transport")),
        Command::Holonomy(a) => execute(a, Some("holonomy")),
        Command::ValidateGerbe(a) => execute(a, Some("validate-gerbe")),
        Command::SurfaceHolonomy(a) => execute(a, Some("surface-holonomy")),
        Command::TwoHolonomy(a) => execute(a, Some("two-holonomy")),
        Command::LoopTransport(a) => execute(a, Some("loop-transport")),
        Command::BuildLocalSubgroupoid(a) => execute(a, Some("build-local-subgroupoid")),
        Command::Globalise(a) => execute(a, Some("globalise")),
        Command::Theorem1(a) => execute(a, Some("theorem-1")),
        Command::DoubleCheck(a) => execute(a, Some("double-check")),
        Command::Explain { verb, list } => {
            if *list || verb.is_none() {
                for (v, _) in VERBS {
                    println!("{v}");
                }
                Ok(0)
            } else {
                explain(verb.as_deref().unwrap_or_default())
                    .map(|t| {
                        println!("{t}");
                        0
                    })
                    .map_err(Into::into)
            }
        }
        Command::ListScenarios => list_scenarios().map(|t| {
            print!("{t}");
            0
        }).map_err(Into::into),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<CliError>().is_some() { EXIT_INPUT } else { 1 };
            ExitCode::from(code as u8)
        }
    }
}
