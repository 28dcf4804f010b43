use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use cavity_ks::runner::{self, JobConfig, ReferenceSource, EXIT_RUNTIME};
use clap::{Parser, Subcommand};

/// Kohn–Sham energies of atoms in a spherical cavity.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Job file (INI with [system], [grid], [run]).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `out` in the job file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for scans.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Absolute energy tolerance (hartree) for reference comparison.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the single point of a job file.
    Run,
    /// Solve every radius and mode of a job file.
    Scan,
    /// Compare an energies CSV with a reference table.
    Compare {
        /// Energies CSV written by `scan`.
        computed: PathBuf,
        /// Reference CSV; defaults to the job file's reference or the bundled tables.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Write radial density profiles.
    Density,
    /// Write local potential profiles.
    Potentials,
}

fn job(cli: &Cli) -> Result<JobConfig> {
    let path = cli.config.as_deref().context("--config is required for this subcommand")?;
    let mut config = runner::load_config(path).with_context(|| format!("reading {}", path.display()))?;
    if cli.tolerance.is_some() {
        config.tolerance = cli.tolerance;
    }
    Ok(config)
}

fn out_dir(cli: &Cli, config: Option<&JobConfig>) -> PathBuf {
    cli.out.clone().or_else(|| config.and_then(|c| c.out.clone())).unwrap_or_else(|| PathBuf::from("."))
}

fn report(outcome: &runner::ScanOutcome) {
    for row in &outcome.rows {
        match &row.outcome {
            Ok(p) => println!("{} {} {:<9} r_c = {:<6} E = {:.6}  ({} iterations)", row.system, row.term, row.mode, row.r_c, p.energy.total, p.iterations),
            Err(e) => eprintln!("{} {} {} r_c = {}: FAILED: {e}", row.system, row.term, row.mode, row.r_c),
        }
    }
    if let Some(c) = &outcome.comparison {
        println!("{} of {} reference rows within tolerance", c.passed(), c.rows.len());
    }
}

fn written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Run | Command::Scan => {
            let config = job(cli)?;
            let jobs = if matches!(cli.command, Command::Run) {
                if config.points().len() != 1 {
                    bail!("run takes exactly one radius and one mode; use scan for {} points", config.points().len());
                }
                1
            } else {
                cli.jobs
            };
            let outcome = runner::scan(&config, jobs)?;
            report(&outcome);
            written(&runner::write_scan(&out_dir(cli, Some(&config)), &outcome)?);
            Ok(outcome.exit_code())
        }
        Command::Compare { computed, reference } => {
            let config = cli.config.as_ref().map(|_| job(cli)).transpose()?;
            let source = match (reference, config.as_ref().and_then(|c| c.reference.clone())) {
                (Some(p), _) => ReferenceSource::File(p.clone()),
                (None, Some(s)) => s,
                (None, None) => ReferenceSource::Bundled,
            };
            let text = std::fs::read_to_string(computed).with_context(|| format!("reading {}", computed.display()))?;
            let rows = runner::parse_energies_csv(&text)?;
            let tolerance = cli.tolerance.or(config.as_ref().and_then(|c| c.tolerance));
            let comparison = runner::compare(&rows, &runner::load_reference(&source)?, tolerance);
            let dir = out_dir(cli, config.as_ref());
            std::fs::create_dir_all(&dir)?;
            let path = dir.join("comparison.csv");
            std::fs::write(&path, comparison.to_csv())?;
            println!("{} of {} reference rows within tolerance", comparison.passed(), comparison.rows.len());
            written(&[path]);
            Ok(comparison.exit_code())
        }
        Command::Density | Command::Potentials => {
            let config = job(cli)?;
            let dir = out_dir(cli, Some(&config));
            let paths = if matches!(cli.command, Command::Density) {
                runner::write_densities(&config, &dir, cli.jobs)?
            } else {
                runner::write_potentials(&config, &dir, cli.jobs)?
            };
            written(&paths);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = execute(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        EXIT_RUNTIME
    });
    ExitCode::from(code as u8)
}
