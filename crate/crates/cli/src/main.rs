use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use liezal::family::builtin;
use liezal::liegroup::GroupInstance;
use liezal_cli::run::scan_verdict;
use liezal_cli::{run_scenario, CliError, Overrides, Payload, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "liezal",
    version,
    about = "Normal-families scenarios on complex Lie groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its reports.
    Run {
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Points per real axis of the region grid.
        #[arg(long)]
        grid: Option<usize>,
        /// Cauchy tolerance for the convergence check.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the shipped families.
    ListFamilies,
    /// List the group instances.
    ListGroups,
}

fn run(config: PathBuf, overrides: Overrides) -> Result<(), CliError> {
    let mut cfg = ScenarioConfig::load(&config)?;
    cfg.apply(&overrides);
    let out = run_scenario(&cfg)?;
    println!("task: {}", cfg.task.as_str());
    if let Some(v) = scan_verdict(&out.bundle.payload) {
        println!("verdict: {}", v.as_str());
    }
    match &out.bundle.payload {
        Payload::Zalcman(p) => {
            println!("max witness defect: {:e}", p.max_witness_defect);
            if let Some(c) = &p.convergence {
                println!("cauchy: {}", c.cauchy);
            }
            println!("rho tends to zero: {}", p.rho_trend.tends_to_zero);
        }
        Payload::ExpVerify(p) => {
            for c in &p.checks {
                println!(
                    "{:<26} {:>10.3e} (tol {:.0e}) {}",
                    c.name,
                    c.max_residual,
                    c.tolerance,
                    if c.passed { "ok" } else { "FAILED" }
                );
            }
            println!(
                "structure constant: {} (upper bound {})",
                p.structure_constant.sampled_max, p.structure_constant.upper_bound
            );
        }
        Payload::MartyScan(_) => {}
    }
    println!("report: {}", out.report_path.display());
    println!("elapsed: {:.3} s", out.timing.elapsed_seconds);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            output_dir,
            grid,
            tolerance,
            seed,
        } => run(
            config,
            Overrides {
                output_dir,
                grid,
                tolerance,
                seed,
            },
        ),
        Command::ListFamilies => {
            for (name, group, desc) in builtin::describe() {
                println!("{name:<18} {group:<18} {desc}");
            }
            Ok(())
        }
        Command::ListGroups => {
            for name in GroupInstance::NAMES {
                let size = match name {
                    "sl2" => "dim = 2 (matrix size)",
                    "gl" => "dim = matrix size n",
                    _ => "dim = complex dimension m",
                };
                println!("{name:<10} {size}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
