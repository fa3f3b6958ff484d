//! Nonlinear coupling of a focused Gaussian fundamental in a chi(2) crystal.
//!
//! The single-pass conversion coefficient is
//!
//! ```text
//! E_NL = 2 w1^2 d^2 / (eps0 c^3 n1^2 n2) * Lc^2 / (pi w^2) * |h|^2
//! h    = int_{-1/2}^{1/2} dxi exp(i dk Lc xi) / (1 + i (Lc / zR1) xi)
//! ```
//!
//! with `zR1 = pi n1 w^2 / lambda1` the Rayleigh length of the fundamental.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::error::{ensure, Error, Result};
use crate::quadrature;

/// Relative tolerance for the focusing integral.
pub const H_REL_TOL: f64 = 1e-10;
const H_ABS_TOL: f64 = 1e-14;

/// Search bracket for [`optimal_waist`], in metres.
const WAIST_BRACKET: (f64, f64) = (1e-6, 1e-3);

/// Material and geometry constants of the nonlinear crystal (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrystalSpec {
    /// Effective second-order susceptibility (m/V).
    pub d: f64,
    /// Refractive index at the fundamental.
    pub n1: f64,
    /// Refractive index at the harmonic.
    pub n2: f64,
    /// Crystal length (m).
    pub lc: f64,
    /// Fundamental vacuum wavelength (m).
    pub lambda1: f64,
    /// Phase mismatch `2 k1 - k2` (1/m).
    pub dk: f64,
    /// Fundamental waist, 1/e^2 intensity radius (m).
    pub w: f64,
}

impl CrystalSpec {
    /// KNbO3 at 860 nm, 1 cm long, phase matched, focused to 21.1 um.
    pub fn knbo3() -> Self {
        Self {
            d: 11e-12,
            n1: 2.2,
            n2: 2.2,
            lc: 0.01,
            lambda1: 860e-9,
            dk: 0.0,
            w: 21.1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.d,
            self.n1,
            self.n2,
            self.lc,
            self.lambda1,
            self.dk,
            self.w,
        ];
        ensure(all.iter().all(|v| v.is_finite()), || {
            format!("crystal parameters must be finite: {self:?}")
        })?;
        ensure(self.d >= 0.0, || {
            format!("d must be non-negative, got {}", self.d)
        })?;
        ensure(self.lc > 0.0, || {
            format!("crystal length must be positive, got {}", self.lc)
        })?;
        ensure(self.w > 0.0, || {
            format!("waist must be positive, got {}", self.w)
        })?;
        ensure(self.lambda1 > 0.0, || {
            format!("wavelength must be positive, got {}", self.lambda1)
        })?;
        ensure(self.n1 >= 1.0 && self.n2 >= 1.0, || {
            format!(
                "refractive indices must be >= 1, got n1={} n2={}",
                self.n1, self.n2
            )
        })
    }

    /// Fundamental angular frequency `2 pi c / lambda1`.
    pub fn omega1(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.lambda1
    }

    /// Rayleigh length of the fundamental, `pi n1 w^2 / lambda1`.
    pub fn rayleigh_length(&self) -> f64 {
        PI * self.n1 * self.w * self.w / self.lambda1
    }

    /// Focusing parameter `Lc / zR1`.
    pub fn focus(&self) -> f64 {
        self.lc / self.rayleigh_length()
    }

    /// Waist giving the requested `Lc / zR1`.
    pub fn waist_for_focus(&self, focus: f64) -> f64 {
        (self.lc * self.lambda1 / (PI * self.n1 * focus)).sqrt()
    }

    pub fn with_waist(mut self, w: f64) -> Self {
        self.w = w;
        self
    }

    /// Plane-wave prefactor `2 w1^2 d^2 / (eps0 c^3 n1^2 n2)` (1/W per m^2 of
    /// `Lc^2 / (pi w^2)`).
    fn plane_wave_factor(&self) -> f64 {
        let w1 = self.omega1();
        2.0 * w1 * w1 * self.d * self.d
            / (EPSILON_0 * SPEED_OF_LIGHT.powi(3) * self.n1 * self.n1 * self.n2)
    }
}

/// Result of [`compute_enl`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingResult {
    /// Complex focusing factor.
    pub h: Complex64,
    /// Single-pass conversion coefficient `P2 / P1^2` (1/W).
    pub enl: f64,
    /// Magnitude of the coupling constant for photon-flux normalized amplitudes.
    pub kappa_mag: f64,
    /// `arg(h)`.
    pub phi_h: f64,
}

/// Boyd-Kleinman focusing factor `h(dk Lc, Lc / zR1)`.
pub fn boyd_kleinman_h(dk_lc: f64, focus: f64) -> Result<Complex64> {
    boyd_kleinman_h_tol(dk_lc, focus, H_REL_TOL)
}

/// [`boyd_kleinman_h`] with an explicit relative tolerance.
pub fn boyd_kleinman_h_tol(dk_lc: f64, focus: f64, rel_tol: f64) -> Result<Complex64> {
    ensure(dk_lc.is_finite() && focus.is_finite(), || {
        format!("non-finite focusing arguments dk_lc={dk_lc} focus={focus}")
    })?;
    ensure(focus >= 0.0, || {
        format!("focus must be non-negative, got {focus}")
    })?;
    let integrand =
        |xi: f64| Complex64::new(0.0, dk_lc * xi).exp() / Complex64::new(1.0, focus * xi);
    Ok(quadrature::integrate(integrand, -0.5, 0.5, rel_tol, H_ABS_TOL)?.value)
}

/// Dimensionless figure of merit `(Lc / zR1) |h|^2`, proportional to `E_NL` at
/// fixed crystal length and wavelength.
pub fn focusing_figure(dk_lc: f64, focus: f64) -> Result<f64> {
    Ok(focus * boyd_kleinman_h(dk_lc, focus)?.norm_sqr())
}

pub fn compute_enl(spec: &CrystalSpec) -> Result<CouplingResult> {
    spec.validate()?;
    let h = boyd_kleinman_h(spec.dk * spec.lc, spec.focus())?;
    let enl = spec.plane_wave_factor() * spec.lc * spec.lc / (PI * spec.w * spec.w) * h.norm_sqr();
    let kappa_mag =
        (2.0 * spec.n1 * HBAR * spec.omega1() * enl / (spec.n2 * spec.lc * spec.lc)).sqrt();
    Ok(CouplingResult {
        h,
        enl,
        kappa_mag,
        phi_h: h.arg(),
    })
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
/// Returns `(x, f(x))`.
pub(crate) fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a).abs() < tol {
            let x = 0.5 * (a + b);
            if x - lo < 2.0 * tol || hi - x < 2.0 * tol {
                return Err(Error::OptimizationFailed(format!(
                    "maximum sits on the search bracket edge at {x}"
                )));
            }
            return Ok((x, f(x)?));
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Err(Error::OptimizationFailed(format!(
        "golden-section search did not narrow below {tol} (bracket [{a}, {b}])"
    )))
}

/// Waist maximizing `E_NL` for the crystal's material constants. The waist stored
/// in `spec` is ignored; with `fix_dk_zero` the phase mismatch is taken as zero.
pub fn optimal_waist(spec: &CrystalSpec, fix_dk_zero: bool) -> Result<f64> {
    let mut probe = *spec;
    if fix_dk_zero {
        probe.dk = 0.0;
    }
    probe.validate()?;
    let objective = |ln_w: f64| compute_enl(&probe.with_waist(ln_w.exp())).map(|c| c.enl);
    let (ln_w, _) =
        golden_section_max(objective, WAIST_BRACKET.0.ln(), WAIST_BRACKET.1.ln(), 1e-9)?;
    Ok(ln_w.exp())
}

/// Location of the maximum of [`focusing_figure`] over phase mismatch and focusing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocusOptimum {
    pub dk_lc: f64,
    pub focus: f64,
    pub figure: f64,
}

impl FocusOptimum {
    /// `zR1 / Lc` at the optimum.
    pub fn rayleigh_ratio(&self) -> f64 {
        1.0 / self.focus
    }
}

/// Maximizes [`focusing_figure`] over `dk_lc` in `dk_range` and `Lc/zR1` in
/// `focus_range`: a coarse grid of `grid x grid` points followed by repeated
/// zoomed grids around the incumbent.
pub fn global_focus_optimum(
    dk_range: (f64, f64),
    focus_range: (f64, f64),
    grid: usize,
) -> Result<FocusOptimum> {
    ensure(grid >= 3, || {
        format!("grid must have at least 3 points, got {grid}")
    })?;
    ensure(
        dk_range.1 > dk_range.0 && focus_range.1 > focus_range.0 && focus_range.0 >= 0.0,
        || format!("bad search ranges {dk_range:?} {focus_range:?}"),
    )?;
    let scan = |(d0, d1): (f64, f64), (f0, f1): (f64, f64), n: usize| -> Result<FocusOptimum> {
        let mut best = FocusOptimum {
            dk_lc: f64::NAN,
            focus: f64::NAN,
            figure: f64::NEG_INFINITY,
        };
        for i in 0..n {
            let dk_lc = d0 + (d1 - d0) * i as f64 / (n - 1) as f64;
            for j in 0..n {
                let focus = f0 + (f1 - f0) * j as f64 / (n - 1) as f64;
                let figure = focusing_figure(dk_lc, focus)?;
                if figure > best.figure {
                    best = FocusOptimum {
                        dk_lc,
                        focus,
                        figure,
                    };
                }
            }
        }
        Ok(best)
    };

    let mut best = scan(dk_range, focus_range, grid)?;
    let mut half_dk = (dk_range.1 - dk_range.0) / (grid - 1) as f64;
    let mut half_focus = (focus_range.1 - focus_range.0) / (grid - 1) as f64;
    for _ in 0..30 {
        let dk = (
            (best.dk_lc - half_dk).max(dk_range.0),
            (best.dk_lc + half_dk).min(dk_range.1),
        );
        let fo = (
            (best.focus - half_focus).max(focus_range.0),
            (best.focus + half_focus).min(focus_range.1),
        );
        best = scan(dk, fo, 11)?;
        half_dk *= 0.4;
        half_focus *= 0.4;
    }
    Ok(best)
}
