//! Linearized quantum-noise model of intracavity second-harmonic generation in a
//! dual-ported, singly resonant cavity.
//!
//! The pipeline runs bottom-up:
//!
//! * [`coupling`]: Boyd-Kleinman focusing factor and the single-pass conversion
//!   coefficient `E_NL`.
//! * [`mean_field`]: self-consistent conversion efficiencies and normalized
//!   interaction lengths `zeta` as functions of pump power.
//! * [`propagation`]: the 4x4 quadrature transfer matrix of one crystal pass.
//! * [`network`]: the resonator model, output quadratures and squeezing spectra,
//!   computed both by a general matrix solve and by closed-form coefficients.
//! * [`entanglement`]: twin-beam variances, EPR and DGCZ criteria, beamsplitter mixing.
//! * [`sweep`]: named scenarios, power sweeps and CSV output.
//!
//! ```
//! use shg_noise::network::{FreeSpectralRanges, GeneralSolver, NoiseSolver};
//! use shg_noise::{epr_dgcz, solve_conversion, to_db, CavitySpec, CrystalSpec};
//!
//! let crystal = CrystalSpec::knbo3();
//! let cavity = CavitySpec::dual_port_reference();
//! let op = solve_conversion(&cavity, crystal.n1 / crystal.n2, 0.5)?;
//! let fsr = FreeSpectralRanges::new(&crystal, cavity.la)?;
//! let report = GeneralSolver.solve(&cavity, &fsr, (op.zeta1, op.zeta2), 0.0)?;
//! assert!(to_db(report.s_x1) < -1.5);
//! assert!(epr_dgcz(&report)?.v_epr < 1.0);
//! # Ok::<(), shg_noise::Error>(())
//! ```

pub mod constants;
pub mod coupling;
pub mod entanglement;
pub mod error;
pub mod mean_field;
pub mod network;
pub mod propagation;
pub mod quadrature;
pub mod registry;
pub mod sweep;

pub use coupling::{boyd_kleinman_h, compute_enl, optimal_waist, CouplingResult, CrystalSpec};
pub use entanglement::{beamsplitter_mix, epr_dgcz, twin_beam, EntanglementResult, TwinBeamResult};
pub use error::{Error, Result};
pub use mean_field::{intensity_ratio, solve_conversion, CavitySpec, OperatingPoint};
pub use network::{noise_report, output_coefficients, NoiseReport, OutputCoefficients};
pub use propagation::{transfer_matrix, QuadTransfer};
pub use sweep::{run_sweep, Mode, SweepConfig, SweepRow};

/// Converts a normalized noise power to decibels, `10 log10(s)`.
pub fn to_db(s: f64) -> f64 {
    10.0 * s.log10()
}

/// Inverse of [`to_db`].
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
