//! Classical steady state of the resonator: conversion efficiencies of the two
//! crystal passes and the normalized interaction lengths they imply.
//!
//! With `s = sqrt(eps1)` and single-pass depletions `q_k = sqrt(eps_k E_NLk P_in)`:
//!
//! ```text
//! s    = 4 T11 sqrt(E_NL1 P_in) / [2 - sqrt(1-T11) sqrt(1-T12) (2 - L13 - L14 - q1 - q2)]^2
//! eps2 = (E_NL2/E_NL1) (1-T12)^2 (1-L13)^2 eps1 (1 - q1)^2
//! zeta_k = sqrt((n1/n2) q_k)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

const DAMPING: f64 = 0.5;
const STEP_TOL: f64 = 1e-14;
const MAX_ITER: usize = 200;

/// Mirror transmittances, lumped losses and single-pass conversion coefficients
/// of the unfolded resonator. `T_ij`/`L_ij` refer to frequency `i` (1 fundamental,
/// 2 harmonic) at position `j` (mirrors 1, 2; loss ports 3, 4).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    pub t11: f64,
    pub t12: f64,
    pub t21: f64,
    pub t22: f64,
    pub l13: f64,
    pub l14: f64,
    pub l23: f64,
    pub l24: f64,
    /// One-way air path (m).
    pub la: f64,
    /// Conversion coefficient of the forward pass (1/W).
    pub enl1: f64,
    /// Conversion coefficient of the backward pass (1/W).
    pub enl2: f64,
}

impl CavitySpec {
    /// The dual-ported reference resonator: 1% input coupler, 0.5% loss per
    /// pass, harmonic fully transmitted at both mirrors.
    pub fn dual_port_reference() -> Self {
        Self {
            t11: 0.01,
            t12: 0.0,
            t21: 1.0,
            t22: 1.0,
            l13: 0.005,
            l14: 0.005,
            l23: 0.0,
            l24: 0.0,
            la: 0.0,
            enl1: 0.015,
            enl2: 0.015,
        }
    }

    /// Same resonator with the backward pass switched off (`E_NL2 = 0`).
    pub fn into_ring(self) -> Self {
        Self { enl2: 0.0, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let coefficients = [
            ("t11", self.t11),
            ("t12", self.t12),
            ("t21", self.t21),
            ("t22", self.t22),
            ("l13", self.l13),
            ("l14", self.l14),
            ("l23", self.l23),
            ("l24", self.l24),
        ];
        for (name, v) in coefficients {
            ensure((0.0..=1.0).contains(&v), || {
                format!("{name} must lie in [0, 1], got {v}")
            })?;
        }
        ensure(self.la.is_finite() && self.la >= 0.0, || {
            format!("air path must be non-negative, got {}", self.la)
        })?;
        ensure(
            self.enl1.is_finite() && self.enl2.is_finite() && self.enl1 >= 0.0 && self.enl2 >= 0.0,
            || {
                format!(
                    "conversion coefficients must be non-negative, got {} {}",
                    self.enl1, self.enl2
                )
            },
        )
    }

    /// True when `T21 = T22 = 1`, `L23 = L24 = 0` and `T12 = 0`.
    pub fn is_restricted(&self) -> bool {
        self.restriction_violation().is_none()
    }

    pub(crate) fn restriction_violation(&self) -> Option<String> {
        let mut bad = Vec::new();
        if self.t21 != 1.0 {
            bad.push(format!("t21={}", self.t21));
        }
        if self.t22 != 1.0 {
            bad.push(format!("t22={}", self.t22));
        }
        if self.l23 != 0.0 {
            bad.push(format!("l23={}", self.l23));
        }
        if self.l24 != 0.0 {
            bad.push(format!("l24={}", self.l24));
        }
        if self.t12 != 0.0 {
            bad.push(format!("t12={}", self.t12));
        }
        (!bad.is_empty()).then(|| bad.join(", "))
    }
}

/// Steady state at one pump power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// External pump power (W).
    pub p_in: f64,
    /// `P21 / P_in`, harmonic after the forward pass.
    pub eps1: f64,
    /// `P22 / P_in`, harmonic after the backward pass.
    pub eps2: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    /// Fractional single-pass pump depletion `sqrt(eps1 E_NL1 P_in)`.
    pub depletion: f64,
}

impl OperatingPoint {
    pub fn unpumped() -> Self {
        Self {
            p_in: 0.0,
            eps1: 0.0,
            eps2: 0.0,
            zeta1: 0.0,
            zeta2: 0.0,
            depletion: 0.0,
        }
    }
}

struct Conversion<'a> {
    cavity: &'a CavitySpec,
    p_in: f64,
}

impl Conversion<'_> {
    fn eps2(&self, eps1: f64) -> f64 {
        let c = self.cavity;
        if c.enl2 == 0.0 {
            return 0.0;
        }
        let q1 = (eps1 * c.enl1 * self.p_in).sqrt();
        c.enl2 / c.enl1 * (1.0 - c.t12).powi(2) * (1.0 - c.l13).powi(2) * eps1 * (1.0 - q1).powi(2)
    }

    /// Right-hand side of the `sqrt(eps1)` equation.
    fn rhs(&self, s: f64) -> f64 {
        let c = self.cavity;
        let eps1 = s * s;
        let q1 = (eps1 * c.enl1 * self.p_in).sqrt();
        let q2 = (self.eps2(eps1) * c.enl2 * self.p_in).sqrt();
        let round_trip = (1.0 - c.t11).sqrt() * (1.0 - c.t12).sqrt();
        let den = 2.0 - round_trip * (2.0 - c.l13 - c.l14 - q1 - q2);
        4.0 * c.t11 * (c.enl1 * self.p_in).sqrt() / (den * den)
    }

    fn residual(&self, s: f64) -> f64 {
        s - self.rhs(s)
    }

    /// Undepleted estimate, exact as `P_in -> 0`.
    fn seed(&self) -> f64 {
        let c = self.cavity;
        let round_trip = (1.0 - c.t11).sqrt() * (1.0 - c.t12).sqrt();
        let den = 2.0 - round_trip * (2.0 - c.l13 - c.l14);
        4.0 * c.t11 * (c.enl1 * self.p_in).sqrt() / (den * den)
    }

    /// Largest admissible `s`: a single pass cannot convert more than the full
    /// intracavity power, and `eps1 <= 1`.
    fn s_max(&self) -> f64 {
        let cap = 1.0 / (self.cavity.enl1 * self.p_in).sqrt();
        cap.min(1.0)
    }

    fn damped_iteration(&self) -> Option<f64> {
        let s_max = self.s_max();
        let mut s = self.seed().min(s_max);
        for _ in 0..MAX_ITER {
            let next = ((1.0 - DAMPING) * s + DAMPING * self.rhs(s)).clamp(0.0, s_max);
            if !next.is_finite() {
                return None;
            }
            if (next - s).abs() < STEP_TOL {
                return Some(next);
            }
            s = next;
        }
        None
    }

    fn bisection(&self) -> Option<f64> {
        let (mut lo, mut hi) = (0.0, self.s_max());
        if self.residual(lo) > 0.0 || self.residual(hi) < 0.0 {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.residual(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < STEP_TOL {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// Residual `sqrt(eps1) - rhs(sqrt(eps1))` of the forward-pass conversion
/// equation with `eps2` eliminated.
pub fn conversion_residual(cavity: &CavitySpec, p_in: f64, eps1: f64) -> f64 {
    Conversion { cavity, p_in }.residual(eps1.sqrt())
}

/// Solves for the steady-state conversion efficiencies at pump power `p_in` (W).
/// `index_ratio` is `n1 / n2`.
pub fn solve_conversion(
    cavity: &CavitySpec,
    index_ratio: f64,
    p_in: f64,
) -> Result<OperatingPoint> {
    cavity.validate()?;
    ensure(p_in.is_finite() && p_in >= 0.0, || {
        format!("pump power must be >= 0, got {p_in}")
    })?;
    ensure(index_ratio.is_finite() && index_ratio > 0.0, || {
        format!("index ratio must be positive, got {index_ratio}")
    })?;
    if p_in == 0.0 || cavity.enl1 == 0.0 || cavity.t11 == 0.0 {
        return Ok(OperatingPoint {
            p_in,
            ..OperatingPoint::unpumped()
        });
    }

    let conv = Conversion { cavity, p_in };
    let s = match conv.damped_iteration() {
        Some(s) => s,
        None => {
            log::debug!("damped iteration stalled at P_in = {p_in}; bisecting");
            conv.bisection()
                .ok_or_else(|| Error::FixedPointNotConverged {
                    residual: conv.residual(conv.seed().min(conv.s_max())),
                })?
        }
    };
    let residual = conv.residual(s);
    if residual.is_nan() || residual.abs() >= 1e-12 {
        return Err(Error::FixedPointNotConverged { residual });
    }

    let eps1 = s * s;
    let eps2 = conv.eps2(eps1);
    let q1 = (eps1 * cavity.enl1 * p_in).sqrt();
    let q2 = (eps2 * cavity.enl2 * p_in).sqrt();
    Ok(OperatingPoint {
        p_in,
        eps1,
        eps2,
        zeta1: (index_ratio * q1).sqrt(),
        zeta2: (index_ratio * q2).sqrt(),
        depletion: q1,
    })
}

/// Intensity ratio of the two harmonic outputs, `I1 / I2 = eps1 / eps2`.
pub fn intensity_ratio(op: &OperatingPoint) -> Result<f64> {
    if op.eps2 > 0.0 {
        Ok(op.eps1 / op.eps2)
    } else {
        Err(Error::UndefinedIntensityRatio)
    }
}

/// `lim_{P_in -> 0} eps1 / eps2`, or `None` when the backward pass is inactive.
pub fn zero_power_intensity_ratio(cavity: &CavitySpec) -> Option<f64> {
    let scale = cavity.enl2 / cavity.enl1 * (1.0 - cavity.t12).powi(2) * (1.0 - cavity.l13).powi(2);
    (scale > 0.0 && scale.is_finite()).then(|| 1.0 / scale)
}
