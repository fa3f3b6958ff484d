//! `shg-sweep`: pump-power sweeps of the dual-ported SHG noise model.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Parser;
use shg_noise::sweep::{emit_csv, run_sweep, write_csv, Mode, SweepConfig};

/// Sweep the external pump power and write spectra, twin-beam and entanglement
/// figures as CSV. Flags override values from the config file.
#[derive(Debug, Parser)]
#[command(name = "shg-sweep", version)]
struct Args {
    /// JSON sweep configuration; defaults to the KNbO3 reference resonator.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// dual_port, ring, bs_dual or bs_ring.
    #[arg(long)]
    mode: Option<Mode>,

    /// Lowest pump power (W).
    #[arg(long)]
    pmin: Option<f64>,

    /// Highest pump power (W).
    #[arg(long)]
    pmax: Option<f64>,

    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,

    /// Sideband angular frequency (rad/s).
    #[arg(long)]
    omega: Option<f64>,

    /// Noise solver route: general or coefficients.
    #[arg(long)]
    solver: Option<String>,

    /// Print the effective configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

impl Args {
    fn config(&self) -> Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => SweepConfig::load(path)?,
            None => SweepConfig::default(),
        };
        if let Some(mode) = self.mode {
            cfg.mode = mode;
        }
        if let Some(p) = self.pmin {
            cfg.p_min = p;
        }
        if let Some(p) = self.pmax {
            cfg.p_max = p;
        }
        if let Some(n) = self.points {
            cfg.n_points = n;
        }
        if let Some(omega) = self.omega {
            cfg.omega = omega;
        }
        if let Some(solver) = &self.solver {
            cfg.solver = solver.clone();
        }
        Ok(cfg)
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let cfg = args.config()?;

    if args.print_config {
        println!("{}", cfg.to_json()?);
        return Ok(());
    }

    let rows = run_sweep(&cfg)?;
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        log::warn!(
            "{failed} of {} points failed; see the status column",
            rows.len()
        );
    }

    match &args.out {
        Some(path) => {
            emit_csv(&rows, path)?;
            log::info!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_csv(&rows, &mut lock).context("writing CSV to stdout")?;
            lock.flush()?;
        }
    }
    Ok(())
}
