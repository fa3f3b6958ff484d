use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coupling::CrystalSpec;
use crate::error::{ensure, Error, Result};
use crate::mean_field::CavitySpec;
use crate::propagation::require_real_coupling;

/// Which source a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Both harmonic outputs of one dual-ported resonator.
    #[default]
    DualPort,
    /// Single-pass ring resonator (`E_NL2 = 0`); output 1 carries the harmonic.
    Ring,
    /// Two dual-ported resonators, each pumped with `P_in / 2`, one output of
    /// each mixed on a 50/50 beamsplitter.
    BsDual,
    /// Two ring resonators, each pumped with `P_in / 2`, mixed on a beamsplitter.
    BsRing,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::DualPort, Mode::Ring, Mode::BsDual, Mode::BsRing];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::DualPort => "dual_port",
            Mode::Ring => "ring",
            Mode::BsDual => "bs_dual",
            Mode::BsRing => "bs_ring",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "mode",
                name: s.to_owned(),
                available: Mode::ALL.map(Mode::as_str).join(", "),
            })
    }
}

fn default_solver() -> String {
    "general".to_owned()
}

/// A pump-power sweep. Powers in W, `omega` in rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub crystal: CrystalSpec,
    pub cavity: CavitySpec,
    pub p_min: f64,
    pub p_max: f64,
    pub n_points: usize,
    #[serde(default)]
    pub omega: f64,
    #[serde(default)]
    pub mode: Mode,
    /// Noise solver route, `general` or `coefficients`.
    #[serde(default = "default_solver")]
    pub solver: String,
}

impl Default for SweepConfig {
    /// KNbO3 dual-ported reference resonator, 0 to 1 W in 5 mW steps.
    fn default() -> Self {
        Self {
            crystal: CrystalSpec::knbo3(),
            cavity: CavitySpec::dual_port_reference(),
            p_min: 0.0,
            p_max: 1.0,
            n_points: 201,
            omega: 0.0,
            mode: Mode::DualPort,
            solver: default_solver(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.crystal.validate()?;
        require_real_coupling(&self.crystal)?;
        self.cavity.validate()?;
        ensure(self.p_min.is_finite() && self.p_min >= 0.0, || {
            format!("p_min must be >= 0, got {}", self.p_min)
        })?;
        ensure(self.p_max.is_finite() && self.p_max >= self.p_min, || {
            format!(
                "p_max must be >= p_min, got {} < {}",
                self.p_max, self.p_min
            )
        })?;
        ensure(self.n_points >= 1, || {
            "n_points must be at least 1".to_owned()
        })?;
        ensure(self.n_points == 1 || self.p_max > self.p_min, || {
            format!("{} points need p_max > p_min", self.n_points)
        })?;
        ensure(self.omega.is_finite(), || {
            format!("omega must be finite, got {}", self.omega)
        })
    }

    /// Evenly spaced pump powers; a single point sits at `p_min`.
    pub fn power_grid(&self) -> Vec<f64> {
        if self.n_points == 1 {
            return vec![self.p_min];
        }
        let step = (self.p_max - self.p_min) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| {
                if i + 1 == self.n_points {
                    self.p_max
                } else {
                    self.p_min + step * i as f64
                }
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }
}
