//! Twin-beam intensity correlations, EPR and DGCZ criteria, and the comparison
//! source built by mixing two squeezed beams on a 50/50 beamsplitter.

use crate::coupling::golden_section_max;
use crate::error::{ensure, Result};
use crate::network::{NoiseReport, PortSpectra};

/// Optimal-gain intensity-difference (`g ~ +1`) and intensity-sum (`g ~ -1`)
/// noise, normalized to the shot noise of the combined detected power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinBeamResult {
    pub g_opt_plus: f64,
    pub g_opt_minus: f64,
    pub var_diff: f64,
    pub var_sum: f64,
}

/// Normalized variance of `I1 - g I2` for intensity ratio `I1 / I2`.
pub fn intensity_variance(report: &NoiseReport, ratio: f64, g: f64) -> f64 {
    let NoiseReport {
        s_x1, s_x2, c_x, ..
    } = *report;
    (ratio * s_x1 + g * g * s_x2 - g * ratio.sqrt() * c_x) / (ratio + g * g)
}

/// Minimizes the intensity-difference and intensity-sum noise over the
/// electronic gain. Branches are labelled by the sign of the gain they reach.
pub fn twin_beam(report: &NoiseReport, ratio: f64) -> Result<TwinBeamResult> {
    ensure(ratio.is_finite() && ratio > 0.0, || {
        format!("intensity ratio must be positive and finite, got {ratio}")
    })?;
    let NoiseReport {
        s_x1, s_x2, c_x, ..
    } = *report;
    let root = ratio.sqrt();
    if c_x == 0.0 {
        let var = intensity_variance(report, ratio, root);
        return Ok(TwinBeamResult {
            g_opt_plus: root,
            g_opt_minus: -root,
            var_diff: var,
            var_sum: var,
        });
    }
    let spread = ((s_x1 - s_x2).powi(2) + c_x * c_x).sqrt();
    let lower = 0.5 * (s_x1 + s_x2 - spread);
    let upper = 0.5 * (s_x1 + s_x2 + spread);
    // The "+spread" gain has the sign of C_X and attains the lower eigenvalue.
    let g_low = root * (s_x1 - s_x2 + spread) / c_x;
    let g_high = root * (s_x1 - s_x2 - spread) / c_x;
    Ok(if c_x < 0.0 {
        TwinBeamResult {
            g_opt_plus: g_high,
            g_opt_minus: g_low,
            var_diff: upper,
            var_sum: lower,
        }
    } else {
        TwinBeamResult {
            g_opt_plus: g_low,
            g_opt_minus: g_high,
            var_diff: lower,
            var_sum: upper,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementResult {
    /// Inference gain for the amplitude quadratures.
    pub g_x: f64,
    /// Inference gain for the phase quadratures.
    pub g_y: f64,
    /// Product of the inference variances; below 1 the EPR paradox is shown.
    pub v_epr: f64,
    /// DGCZ sum at `a = 1`, scaled so that below 1 means inseparable.
    pub v_dgcz: f64,
}

/// `<|X21 - g X22|^2>` per unit noise.
pub fn inference_variance_x(report: &NoiseReport, g: f64) -> f64 {
    report.s_x1 + g * g * report.s_x2 - g * report.c_x
}

/// `<|Y21 - g Y22|^2>` per unit noise.
pub fn inference_variance_y(report: &NoiseReport, g: f64) -> f64 {
    report.s_y1 + g * g * report.s_y2 - g * report.c_y
}

pub fn epr_dgcz(report: &NoiseReport) -> Result<EntanglementResult> {
    ensure(report.s_x2 > 0.0 && report.s_y2 > 0.0, || {
        format!(
            "port 2 spectra must be positive, got {} {}",
            report.s_x2, report.s_y2
        )
    })?;
    let NoiseReport {
        s_x1,
        s_y1,
        s_x2,
        s_y2,
        c_x,
        c_y,
        ..
    } = *report;
    Ok(EntanglementResult {
        g_x: c_x / (2.0 * s_x2),
        g_y: c_y / (2.0 * s_y2),
        v_epr: (s_x1 * s_x2 - 0.25 * c_x * c_x) * (s_y1 * s_y2 - 0.25 * c_y * c_y) / (s_x2 * s_y2),
        v_dgcz: dgcz_at(report, 1.0),
    })
}

/// DGCZ sum for scale parameter `a > 0`, normalized by `2 (a^2 + 1/a^2)`.
pub fn dgcz_at(report: &NoiseReport, a: f64) -> f64 {
    let a2 = a * a;
    let x = a2 * report.s_x1 + report.s_x2 / a2 + report.c_x;
    let y = a2 * report.s_y1 + report.s_y2 / a2 - report.c_y;
    (x + y) / (2.0 * (a2 + 1.0 / a2))
}

/// Minimizes [`dgcz_at`] over `a` in `[0.1, 10]`; returns `(a, V_DGCZ)`.
/// Used to check that `a = 1` is (close to) optimal.
pub fn dgcz_scan(report: &NoiseReport) -> Result<(f64, f64)> {
    let (ln_a, neg) = golden_section_max(
        |ln_a| Ok(-dgcz_at(report, ln_a.exp())),
        0.1f64.ln(),
        10f64.ln(),
        1e-10,
    )?;
    Ok((ln_a.exp(), -neg))
}

/// Outputs of a 50/50 beamsplitter fed by two independent squeezed beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamsplitterResult {
    /// Spectra and correlations of outputs `a` (port 1) and `b` (port 2).
    pub mixed: NoiseReport,
    pub entanglement: EntanglementResult,
    /// `(V_EPR, V_DGCZ) = (4 Sx^2 Sy^2 / (Sx + Sy)^2, Sx)` when both inputs
    /// have the same spectra.
    pub equal_source: Option<(f64, f64)>,
}

/// Mixed-output spectra `S_Xa = S_Xb = (S_X1 + S_Y2)/2`,
/// `S_Ya = S_Yb = (S_Y1 + S_X2)/2`, `C_Xab = S_X1 - S_Y2`, `C_Yab = S_Y1 - S_X2`.
pub fn mixed_spectra(source1: PortSpectra, source2: PortSpectra) -> NoiseReport {
    let s_x = 0.5 * (source1.s_x + source2.s_y);
    let s_y = 0.5 * (source1.s_y + source2.s_x);
    NoiseReport {
        s_x1: s_x,
        s_y1: s_y,
        s_x2: s_x,
        s_y2: s_y,
        c_x: source1.s_x - source2.s_y,
        c_y: source1.s_y - source2.s_x,
        omega: 0.0,
    }
}

pub fn beamsplitter_mix(source1: PortSpectra, source2: PortSpectra) -> Result<BeamsplitterResult> {
    for s in [source1, source2] {
        ensure(s.s_x > 0.0 && s.s_y > 0.0, || {
            format!("spectra must be positive, got {s:?}")
        })?;
    }
    let mixed = mixed_spectra(source1, source2);
    let entanglement = epr_dgcz(&mixed)?;
    let equal_source = (source1 == source2).then(|| {
        let PortSpectra { s_x, s_y } = source1;
        (4.0 * s_x * s_x * s_y * s_y / (s_x + s_y).powi(2), s_x)
    });
    Ok(BeamsplitterResult {
        mixed,
        entanglement,
        equal_source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::from_db;
    use proptest::prelude::*;

    fn sample() -> NoiseReport {
        NoiseReport {
            s_x1: 0.62,
            s_y1: 3.5,
            s_x2: 0.64,
            s_y2: 3.4,
            c_x: -0.74,
            c_y: 4.9,
            omega: 0.0,
        }
    }

    #[test]
    fn vacuum_is_classical() {
        let v = NoiseReport::vacuum(0.0);
        let t = twin_beam(&v, 1.0).unwrap();
        assert_eq!((t.var_diff, t.var_sum), (1.0, 1.0));
        let e = epr_dgcz(&v).unwrap();
        assert_eq!((e.v_epr, e.v_dgcz), (1.0, 1.0));
    }

    #[test]
    fn sum_branch_gain_is_negative_for_anticorrelated_outputs() {
        let t = twin_beam(&sample(), 1.05).unwrap();
        assert!(t.g_opt_minus < 0.0 && t.g_opt_plus > 0.0);
        assert!(t.var_sum < 1.0 && t.var_diff > 1.0);
        let direct = intensity_variance(&sample(), 1.05, t.g_opt_minus);
        assert!((direct - t.var_sum).abs() < 1e-12);
        let direct = intensity_variance(&sample(), 1.05, t.g_opt_plus);
        assert!((direct - t.var_diff).abs() < 1e-12);
    }

    #[test]
    fn twin_beam_rejects_bad_ratio() {
        assert!(twin_beam(&sample(), 0.0).is_err());
        assert!(twin_beam(&sample(), f64::NAN).is_err());
    }

    #[test]
    fn dgcz_minimum_near_unit_scale_for_symmetric_ports() {
        let mut r = sample();
        r.s_x2 = r.s_x1;
        r.s_y2 = r.s_y1;
        let (a, v) = dgcz_scan(&r).unwrap();
        assert!((a - 1.0).abs() < 1e-4);
        assert!((v - epr_dgcz(&r).unwrap().v_dgcz).abs() < 1e-12);
    }

    #[test]
    fn vacuum_through_beamsplitter() {
        let r = beamsplitter_mix(PortSpectra::vacuum(), PortSpectra::vacuum()).unwrap();
        assert_eq!(r.entanglement.v_epr, 1.0);
        assert_eq!(r.entanglement.v_dgcz, 1.0);
        assert_eq!(r.equal_source, Some((1.0, 1.0)));
    }

    #[test]
    fn nonideal_squeezers_fail_epr_at_two_db() {
        let s_x = from_db(-2.0);
        let s = PortSpectra {
            s_x,
            s_y: 2.2 / s_x,
        };
        let r = beamsplitter_mix(s, s).unwrap();
        assert!(
            (r.entanglement.v_epr - 1.1).abs() < 0.05,
            "{}",
            r.entanglement.v_epr
        );
        let (closed_epr, closed_dgcz) = r.equal_source.unwrap();
        assert!((closed_epr - r.entanglement.v_epr).abs() < 1e-12);
        assert!((closed_dgcz - r.entanglement.v_dgcz).abs() < 1e-12);
    }

    #[test]
    fn unequal_sources_have_no_closed_form() {
        let r = beamsplitter_mix(
            PortSpectra { s_x: 0.5, s_y: 3.0 },
            PortSpectra { s_x: 0.6, s_y: 2.5 },
        )
        .unwrap();
        assert!(r.equal_source.is_none());
        assert!(
            beamsplitter_mix(PortSpectra { s_x: 0.0, s_y: 1.0 }, PortSpectra::vacuum()).is_err()
        );
    }

    fn report_strategy() -> impl Strategy<Value = NoiseReport> {
        (
            0.1f64..3.0,
            0.3f64..8.0,
            0.1f64..3.0,
            0.3f64..8.0,
            -1.0f64..1.0,
            -1.0f64..1.0,
        )
            .prop_map(|(s_x1, s_y1, s_x2, s_y2, kx, ky)| NoiseReport {
                s_x1,
                s_y1,
                s_x2,
                s_y2,
                c_x: 1.9 * kx * (s_x1 * s_x2).sqrt(),
                c_y: 1.9 * ky * (s_y1 * s_y2).sqrt(),
                omega: 0.0,
            })
    }

    proptest! {
        #[test]
        fn inference_gains_are_stationary(r in report_strategy()) {
            let e = epr_dgcz(&r).unwrap();
            let h = 1e-5;
            let dx = (inference_variance_x(&r, e.g_x + h) - inference_variance_x(&r, e.g_x - h)) / (2.0 * h);
            let dy = (inference_variance_y(&r, e.g_y + h) - inference_variance_y(&r, e.g_y - h)) / (2.0 * h);
            prop_assert!(dx.abs() < 1e-8 && dy.abs() < 1e-8);
            let product = inference_variance_x(&r, e.g_x) * inference_variance_y(&r, e.g_y);
            prop_assert!((product - e.v_epr).abs() < 1e-10 * product.max(1.0));
        }

        #[test]
        fn twin_beam_gain_is_a_minimizer(r in report_strategy(), ratio in 0.5f64..2.0) {
            let t = twin_beam(&r, ratio).unwrap();
            let best = if r.c_x < 0.0 { t.g_opt_minus } else { t.g_opt_plus };
            let v = intensity_variance(&r, ratio, best);
            prop_assert!(v <= intensity_variance(&r, ratio, best + 0.01) + 1e-13);
            prop_assert!(v <= intensity_variance(&r, ratio, best - 0.01) + 1e-13);
            prop_assert!((intensity_variance(&r, ratio, t.g_opt_minus) - t.var_sum).abs() < 1e-12);
            prop_assert!((intensity_variance(&r, ratio, t.g_opt_plus) - t.var_diff).abs() < 1e-12);
        }

        #[test]
        fn symmetric_mixing(s_x in 0.05f64..1.0, p in 1.0f64..4.0) {
            let s = PortSpectra { s_x, s_y: p / s_x };
            let r = beamsplitter_mix(s, s).unwrap();
            prop_assert_eq!(r.mixed.s_x1, r.mixed.s_x2);
            prop_assert_eq!(r.mixed.s_y1, r.mixed.s_y2);
            let (closed, dgcz) = r.equal_source.unwrap();
            prop_assert!((closed - r.entanglement.v_epr).abs() < 1e-12 * closed.max(1.0));
            prop_assert!((dgcz - s_x).abs() < 1e-14);
            prop_assert!((r.entanglement.v_dgcz - s_x).abs() < 1e-14);
        }

        #[test]
        fn epr_invariant_under_port_swap_for_equal_ports(s_x in 0.1f64..2.0, s_y in 0.5f64..5.0, k in -0.9f64..0.9) {
            let r = NoiseReport { s_x1: s_x, s_y1: s_y, s_x2: s_x, s_y2: s_y, c_x: 2.0 * k * s_x, c_y: -2.0 * k * s_y, omega: 0.0 };
            let swapped = NoiseReport { s_x1: r.s_x2, s_y1: r.s_y2, s_x2: r.s_x1, s_y2: r.s_y1, ..r };
            let a = epr_dgcz(&r).unwrap().v_epr;
            let b = epr_dgcz(&swapped).unwrap().v_epr;
            prop_assert!((a - b).abs() < 1e-14);
        }
    }
}
