//! Pump-power sweeps over a named scenario.

pub mod config;
pub mod scenario;
pub mod table;

use rayon::prelude::*;

use crate::error::Result;
use crate::network::{solver_registry, FreeSpectralRanges, NoiseSolver};
use crate::registry::Registry;

pub use config::{Mode, SweepConfig};
pub use scenario::{scenario_registry, Scenario, SweepContext};
pub use table::{emit_csv, load_csv, read_csv, write_csv, COLUMNS};

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p_in: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    pub s_x1: f64,
    pub s_y1: f64,
    pub s_x2: f64,
    pub s_y2: f64,
    pub c_x: f64,
    pub c_y: f64,
    pub var_sum: f64,
    pub var_diff: f64,
    /// Optimal gain of the intensity-sum (`g ~ -1`) branch.
    pub g_opt: f64,
    pub v_epr: f64,
    pub v_dgcz: f64,
    /// `ok`, or the error that stopped this point.
    pub status: String,
}

impl SweepRow {
    pub const OK: &'static str = "ok";

    pub fn failed(p_in: f64, reason: String) -> Self {
        let nan = f64::NAN;
        Self {
            p_in,
            eps1: nan,
            eps2: nan,
            zeta1: nan,
            zeta2: nan,
            s_x1: nan,
            s_y1: nan,
            s_x2: nan,
            s_y2: nan,
            c_x: nan,
            c_y: nan,
            var_sum: nan,
            var_diff: nan,
            g_opt: nan,
            v_epr: nan,
            v_dgcz: nan,
            status: reason,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Self::OK
    }
}

/// Runs `config` with the built-in scenarios and solvers.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_sweep_with(config, &scenario_registry(), &solver_registry())
}

/// Runs `config` against caller-supplied registries. Configuration errors abort;
/// per-point failures are recorded in the row's status and the sweep continues.
/// Rows come back in grid order.
pub fn run_sweep_with(
    config: &SweepConfig,
    scenarios: &Registry<dyn Scenario>,
    solvers: &Registry<dyn NoiseSolver>,
) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let scenario = scenarios.get(config.mode.as_str())?;
    let ctx = SweepContext {
        crystal: config.crystal,
        cavity: config.cavity,
        fsr: FreeSpectralRanges::new(&config.crystal, config.cavity.la)?,
        omega: config.omega,
        solver: solvers.get(&config.solver)?,
    };
    Ok(config
        .power_grid()
        .into_par_iter()
        .map(|p_in| {
            scenario.evaluate(&ctx, p_in).unwrap_or_else(|e| {
                log::warn!("P_in = {p_in} W: {e}");
                SweepRow::failed(p_in, e.to_string())
            })
        })
        .collect())
}
