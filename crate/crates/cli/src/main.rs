use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gme_cli::{load_config, run, thread_count, CliError, Mode, THREADS_ENV};

#[derive(Parser, Debug)]
#[command(name = "gme", version, about = "Gravitational field and entanglement phases of light pulses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; overrides `output` in the config. Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads, capped by GME_THREADS.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Total metric perturbation on an x-z grid.
    FieldGrid(Common),
    /// Relative-phase integrand on a z-t grid.
    IntegrandGrid(Common),
    /// Relative phases of the LR and RL branches.
    Phase(Common),
    /// Witness expectation from the relative phases.
    Witness(Common),
    /// Relative phase and witness over a parameter range.
    Sweep(Common),
    /// SI feasibility report.
    Estimate(Common),
}

impl Command {
    fn split(&self) -> (Mode, &Common) {
        match self {
            Command::FieldGrid(c) => (Mode::FieldGrid, c),
            Command::IntegrandGrid(c) => (Mode::IntegrandGrid, c),
            Command::Phase(c) => (Mode::Phase, c),
            Command::Witness(c) => (Mode::Witness, c),
            Command::Sweep(c) => (Mode::Sweep, c),
            Command::Estimate(c) => (Mode::Estimate, c),
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let (mode, common) = cli.command.split();
    let cfg = load_config(&common.config)?;
    if cfg.mode != mode {
        return Err(CliError::Validation(format!(
            "config mode `{}` does not match subcommand `{}`",
            cfg.mode.name(),
            mode.name()
        )));
    }
    let env = std::env::var(THREADS_ENV).ok();
    if let Some(n) = thread_count(common.threads, env.as_deref())? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    }
    if let Ok(warnings) = cfg.params.validate() {
        for w in warnings {
            eprintln!("warning: {w}");
        }
    }

    let out = run(&cfg)?;
    let target = common.output.clone().or_else(|| cfg.output.clone());
    match &target {
        Some(path) => std::fs::write(path, &out.csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout()
            .lock()
            .write_all(out.csv.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}")))?,
    }
    if let Some(summary) = &out.summary {
        eprint!("{summary}");
    }
    if !out.converged {
        return Err(CliError::Convergence(
            "quadrature did not reach the requested tolerance; best estimates were written".into(),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
