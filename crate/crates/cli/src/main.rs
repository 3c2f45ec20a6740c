use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lagrangian_cli::{invalid_report, run_scenario, run_suite, Kind, RunOptions, Scenario};

#[derive(Parser)]
#[command(name = "lagrangian", version, about = "Maslov, Hörmander and mean-curvature scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Override every scenario's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report file, or report directory for `suite`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Multiply all numerical tolerances.
    #[arg(long, global = true, default_value_t = 1.0)]
    tolerance_scale: f64,
    /// Scenarios run in parallel (`suite` only).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Maslov index and liftability of a loop of Lagrangian planes.
    Maslov { scenario: PathBuf },
    /// Hörmander index of four Lagrangian planes.
    Hormander { scenario: PathBuf },
    /// Čech cocycle and pairing of two sections over a loop.
    Cech { scenario: PathBuf },
    /// Mean curvature, β periods and Maslov classes of a sampled immersion.
    Surface { scenario: PathBuf },
    /// Instance-level consistency with the LH conjecture.
    Fomenko { scenario: PathBuf },
    /// Every `*.json` scenario in a directory.
    Suite { dir: PathBuf },
}

fn single(kind: Kind, path: &Path, flags: &Flags, opts: &RunOptions) -> ExitCode {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario").to_string();
    let (report, output_path) = match Scenario::from_file(path, Some(kind)) {
        Ok(s) => (run_scenario(&s, &name, opts), s.output_path),
        Err(e) => (invalid_report(&name, Some(kind), e, opts), None),
    };
    let target = flags.out.clone().or(output_path.map(PathBuf::from));
    match target {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, report.to_json()) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(1);
            }
            println!("{}", report.summary_line());
        }
        None => print!("{}", report.to_json()),
    }
    ExitCode::from(report.status.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = &cli.flags;
    if !(flags.tolerance_scale.is_finite() && flags.tolerance_scale > 0.0) {
        eprintln!("--tolerance-scale must be a positive number");
        return ExitCode::from(2);
    }
    let opts = RunOptions { seed: flags.seed, tolerance_scale: flags.tolerance_scale, jobs: flags.jobs };
    let (kind, path) = match &cli.command {
        Command::Maslov { scenario } => (Kind::Maslov, scenario),
        Command::Hormander { scenario } => (Kind::Hormander, scenario),
        Command::Cech { scenario } => (Kind::Cech, scenario),
        Command::Surface { scenario } => (Kind::Surface, scenario),
        Command::Fomenko { scenario } => (Kind::Fomenko, scenario),
        Command::Suite { dir } => {
            let out = flags.out.clone().unwrap_or_else(|| dir.join("reports"));
            return match run_suite(dir, &out, &opts) {
                Ok((summary, reports)) => {
                    print!("{}", summary.table(&reports));
                    ExitCode::from(if summary.all_passed() { 0 } else { 1 })
                }
                Err(e) => {
                    eprintln!("suite {}: {e}", dir.display());
                    ExitCode::from(2)
                }
            };
        }
    };
    single(kind, path, flags, &opts)
}
