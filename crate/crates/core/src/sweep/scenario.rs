//! Named sources a sweep can evaluate at one pump power.

use crate::coupling::CrystalSpec;
use crate::entanglement::{
    beamsplitter_mix, epr_dgcz, twin_beam, EntanglementResult, TwinBeamResult,
};
use crate::error::Result;
use crate::mean_field::{
    intensity_ratio, solve_conversion, zero_power_intensity_ratio, CavitySpec, OperatingPoint,
};
use crate::network::{FreeSpectralRanges, NoiseReport, NoiseSolver};
use crate::registry::{Named, Registry};

use super::config::Mode;
use super::SweepRow;

/// Fixed inputs shared by every point of a sweep.
pub struct SweepContext<'a> {
    pub crystal: CrystalSpec,
    pub cavity: CavitySpec,
    pub fsr: FreeSpectralRanges,
    pub omega: f64,
    pub solver: &'a dyn NoiseSolver,
}

impl SweepContext<'_> {
    /// Steady state and output noise of one resonator.
    pub fn source(&self, cavity: &CavitySpec, p_in: f64) -> Result<(OperatingPoint, NoiseReport)> {
        let op = solve_conversion(cavity, self.crystal.n1 / self.crystal.n2, p_in)?;
        let report = self
            .solver
            .solve(cavity, &self.fsr, (op.zeta1, op.zeta2), self.omega)?;
        Ok((op, report))
    }
}

pub trait Scenario: Named + Send + Sync {
    fn evaluate(&self, ctx: &SweepContext<'_>, p_in: f64) -> Result<SweepRow>;
}

fn assemble(
    p_in: f64,
    op: &OperatingPoint,
    report: &NoiseReport,
    twin: &TwinBeamResult,
    ent: &EntanglementResult,
) -> SweepRow {
    SweepRow {
        p_in,
        eps1: op.eps1,
        eps2: op.eps2,
        zeta1: op.zeta1,
        zeta2: op.zeta2,
        s_x1: report.s_x1,
        s_y1: report.s_y1,
        s_x2: report.s_x2,
        s_y2: report.s_y2,
        c_x: report.c_x,
        c_y: report.c_y,
        var_sum: twin.var_sum,
        var_diff: twin.var_diff,
        g_opt: twin.g_opt_minus,
        v_epr: ent.v_epr,
        v_dgcz: ent.v_dgcz,
        status: SweepRow::OK.to_owned(),
    }
}

/// Both outputs of a single resonator. When the intensity ratio is undefined
/// (inactive backward pass) the variances are still reported; the gain is NaN.
fn single_resonator(ctx: &SweepContext<'_>, cavity: &CavitySpec, p_in: f64) -> Result<SweepRow> {
    let (op, report) = ctx.source(cavity, p_in)?;
    let ratio = if op.p_in == 0.0 {
        zero_power_intensity_ratio(cavity)
    } else {
        intensity_ratio(&op).ok()
    };
    let twin = match ratio {
        Some(r) => twin_beam(&report, r)?,
        None => TwinBeamResult {
            g_opt_plus: f64::NAN,
            g_opt_minus: f64::NAN,
            ..twin_beam(&report, 1.0)?
        },
    };
    let ent = epr_dgcz(&report)?;
    Ok(assemble(p_in, &op, &report, &twin, &ent))
}

/// Two identical resonators at half power each, output 1 of each mixed on a
/// 50/50 beamsplitter. Spectra columns hold the mixed outputs `a` and `b`;
/// conversion columns describe one source.
fn mixed_pair(ctx: &SweepContext<'_>, cavity: &CavitySpec, p_in: f64) -> Result<SweepRow> {
    let (op, report) = ctx.source(cavity, 0.5 * p_in)?;
    let mix = beamsplitter_mix(report.port1(), report.port1())?;
    let mixed = NoiseReport {
        omega: ctx.omega,
        ..mix.mixed
    };
    let twin = twin_beam(&mixed, 1.0)?;
    Ok(assemble(p_in, &op, &mixed, &twin, &mix.entanglement))
}

pub struct DualPort;
pub struct Ring;
pub struct BeamsplitterDual;
pub struct BeamsplitterRing;

impl Named for DualPort {
    fn name(&self) -> &'static str {
        Mode::DualPort.as_str()
    }
}

impl Scenario for DualPort {
    fn evaluate(&self, ctx: &SweepContext<'_>, p_in: f64) -> Result<SweepRow> {
        single_resonator(ctx, &ctx.cavity, p_in)
    }
}

impl Named for Ring {
    fn name(&self) -> &'static str {
        Mode::Ring.as_str()
    }
}

impl Scenario for Ring {
    fn evaluate(&self, ctx: &SweepContext<'_>, p_in: f64) -> Result<SweepRow> {
        single_resonator(ctx, &ctx.cavity.into_ring(), p_in)
    }
}

impl Named for BeamsplitterDual {
    fn name(&self) -> &'static str {
        Mode::BsDual.as_str()
    }
}

impl Scenario for BeamsplitterDual {
    fn evaluate(&self, ctx: &SweepContext<'_>, p_in: f64) -> Result<SweepRow> {
        mixed_pair(ctx, &ctx.cavity, p_in)
    }
}

impl Named for BeamsplitterRing {
    fn name(&self) -> &'static str {
        Mode::BsRing.as_str()
    }
}

impl Scenario for BeamsplitterRing {
    fn evaluate(&self, ctx: &SweepContext<'_>, p_in: f64) -> Result<SweepRow> {
        mixed_pair(ctx, &ctx.cavity.into_ring(), p_in)
    }
}

/// All four built-in scenarios, keyed by [`Mode`] name.
pub fn scenario_registry() -> Registry<dyn Scenario> {
    let mut r: Registry<dyn Scenario> = Registry::new("mode");
    r.register(Box::new(DualPort));
    r.register(Box::new(Ring));
    r.register(Box::new(BeamsplitterDual));
    r.register(Box::new(BeamsplitterRing));
    r
}
