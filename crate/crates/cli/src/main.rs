use std::path::PathBuf;
use std::process::ExitCode;

use braggstack_cli::verify::VerifyOptions;
use braggstack_cli::{load_config, CliError, RunContext};
use clap::{Parser, Subcommand};

/// Probe reflection, transmission and absorption of atoms in a 1D optical
/// lattice probed near the Bragg angle.
#[derive(Parser, Debug)]
#[command(name = "braggstack", version)]
struct Cli {
    /// TOML run configuration; defaults are used for anything omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, value_name = "N", env = "BRAGGSTACK_THREADS")]
    threads: Option<usize>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// R, T, A and reflection phase over the detuning grid.
    Spectrum,
    /// Spectra for a family of lattice wavelength offsets.
    ScanLattice,
    /// Peak reflectivity against atom number.
    ScanAtoms,
    /// Probe intensity through the lattice at one detuning.
    Profile,
    /// Bloch phase and density of states of the lattice cell.
    Bands,
    /// Powers at the detectors for the configured incident power.
    Powers,
    /// Seeded self-checks of the transfer-matrix engine.
    Verify {
        #[arg(long, default_value_t = VerifyOptions::default().cases)]
        cases: usize,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = load_config(cli.config.as_deref())?;
    let ctx = RunContext {
        config,
        out: cli.out,
        svg: cli.svg,
    };
    let written = match cli.command {
        Command::Spectrum => ctx.spectrum()?,
        Command::ScanLattice => ctx.scan_lattice()?,
        Command::ScanAtoms => ctx.scan_atoms()?,
        Command::Profile => ctx.profile()?,
        Command::Bands => ctx.bands()?,
        Command::Powers => ctx.powers()?,
        Command::Verify { cases, seed } => {
            ctx.verify(VerifyOptions { cases, seed })?;
            Vec::new()
        }
    };
    for p in written {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let config_path = cli.config.clone();
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Config { .. }) => {
            let path = config_path.map(|p| p.display().to_string()).unwrap_or_default();
            eprintln!("error: {path}: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
