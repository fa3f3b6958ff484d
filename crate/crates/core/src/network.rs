//! Quantum noise of the resonator outputs.
//!
//! The unfolded cavity is: input coupler (mirror 1) -> crystal pass 1 -> loss
//! port 3 -> mirror 2 -> crystal pass 2 -> loss port 4 -> back to mirror 1.
//! Vacuum enters at the two mirrors and at the two loss ports; each entry point
//! contributes a 4-vector `(u1j, u2j, v1j, v2j)` of unit-variance, mutually
//! uncorrelated quadrature noise. Every linear map here therefore has 16
//! columns, grouped by entry point `j = 1..4`.
//!
//! Two routes to the output spectra are kept side by side:
//!
//! * the general route ([`solve_intracavity`], [`output_quadratures`]) inverts
//!   the round-trip resolvent and works for any mirror and loss settings;
//! * the closed-form route ([`output_coefficients`], [`noise_report`]) is valid
//!   when the harmonic is fully transmitted at both mirrors, only the
//!   fundamental is lossy, and mirror 2 is a perfect fundamental reflector.
//!
//! On their common domain they agree to rounding error; the test suite relies
//! on that.

use nalgebra::{Matrix4, SMatrix};
use num_complex::Complex64;

use crate::constants::SPEED_OF_LIGHT;
use crate::coupling::CrystalSpec;
use crate::error::{ensure, Error, Result};
use crate::mean_field::CavitySpec;
use crate::propagation::{transfer_matrix, QuadTransfer};
use crate::registry::{Named, Registry};

/// Linear map from the 16 vacuum inputs to a quadrature 4-vector.
pub type NoiseMap = SMatrix<Complex64, 4, 16>;

/// Resolvents with a 1-norm condition number above this are treated as singular.
const MAX_CONDITION: f64 = 1e13;

/// Round-trip free spectral ranges `c / (2 n_i Lc + 2 La)` (Hz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSpectralRanges {
    pub nu1: f64,
    pub nu2: f64,
}

impl FreeSpectralRanges {
    pub fn new(crystal: &CrystalSpec, la: f64) -> Result<Self> {
        crystal.validate()?;
        ensure(la.is_finite() && la >= 0.0, || {
            format!("air path must be >= 0, got {la}")
        })?;
        Ok(Self {
            nu1: SPEED_OF_LIGHT / (2.0 * crystal.n1 * crystal.lc + 2.0 * la),
            nu2: SPEED_OF_LIGHT / (2.0 * crystal.n2 * crystal.lc + 2.0 * la),
        })
    }
}

fn quad_diag(fundamental: Complex64, harmonic: Complex64) -> Matrix4<Complex64> {
    Matrix4::from_diagonal(&[fundamental, harmonic, fundamental, harmonic].into())
}

fn real_diag(fundamental: f64, harmonic: f64) -> Matrix4<Complex64> {
    quad_diag(Complex64::from(fundamental), Complex64::from(harmonic))
}

fn complexify(n: &QuadTransfer) -> Matrix4<Complex64> {
    n.m.map(Complex64::from)
}

/// Mirror, loss and round-trip phase matrices at one sideband frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkMatrices {
    pub t1: Matrix4<Complex64>,
    pub r1: Matrix4<Complex64>,
    pub t2: Matrix4<Complex64>,
    pub r2: Matrix4<Complex64>,
    pub tl3: Matrix4<Complex64>,
    pub rl3: Matrix4<Complex64>,
    pub tl4: Matrix4<Complex64>,
    pub rl4: Matrix4<Complex64>,
    /// `diag(e^{i W/nu1}, e^{i W/nu2}, e^{i W/nu1}, e^{i W/nu2})`.
    pub d: Matrix4<Complex64>,
}

impl NetworkMatrices {
    pub fn new(cavity: &CavitySpec, fsr: &FreeSpectralRanges, omega: f64) -> Result<Self> {
        cavity.validate()?;
        ensure(omega.is_finite(), || {
            format!("sideband frequency must be finite, got {omega}")
        })?;
        let mirror = |t_fund: f64, t_harm: f64| {
            (
                real_diag(t_fund.sqrt(), t_harm.sqrt()),
                real_diag((1.0 - t_fund).sqrt(), (1.0 - t_harm).sqrt()),
            )
        };
        let loss = |l_fund: f64, l_harm: f64| {
            (
                real_diag((1.0 - l_fund).sqrt(), (1.0 - l_harm).sqrt()),
                real_diag(l_fund.sqrt(), l_harm.sqrt()),
            )
        };
        let (t1, r1) = mirror(cavity.t11, cavity.t21);
        let (t2, r2) = mirror(cavity.t12, cavity.t22);
        let (tl3, rl3) = loss(cavity.l13, cavity.l23);
        let (tl4, rl4) = loss(cavity.l14, cavity.l24);
        let d = quad_diag(
            Complex64::from_polar(1.0, omega / fsr.nu1),
            Complex64::from_polar(1.0, omega / fsr.nu2),
        );
        Ok(Self {
            t1,
            r1,
            t2,
            r2,
            tl3,
            rl3,
            tl4,
            rl4,
            d,
        })
    }
}

fn one_norm(m: &Matrix4<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn place(map: &mut NoiseMap, port: usize, block: &Matrix4<Complex64>) {
    map.fixed_view_mut::<4, 4>(0, 4 * port).copy_from(block);
}

/// Self-consistent intracavity fluctuations just inside mirror 1, as a map from
/// the vacuum inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct IntracavityMap {
    pub map: NoiseMap,
    /// 1-norm condition number of the round-trip resolvent.
    pub condition: f64,
}

pub fn solve_intracavity(
    m: &NetworkMatrices,
    n1: &QuadTransfer,
    n2: &QuadTransfer,
) -> Result<IntracavityMap> {
    let n1 = complexify(n1);
    let n2 = complexify(n2);
    let round_trip = m.d * m.r1 * m.tl4 * n2 * m.r2 * m.tl3 * n1;
    let resolvent = Matrix4::identity() - round_trip;
    let inverse = resolvent
        .lu()
        .try_inverse()
        .ok_or(Error::SingularResolvent {
            condition: f64::INFINITY,
        })?;
    let condition = one_norm(&resolvent) * one_norm(&inverse);
    log::debug!("resolvent condition number {condition:.3e}");
    if condition.is_nan() || condition >= MAX_CONDITION {
        return Err(Error::SingularResolvent { condition });
    }

    let back = m.r1 * m.tl4 * n2;
    let mut drive = NoiseMap::zeros();
    place(&mut drive, 0, &(m.d * m.t1));
    place(&mut drive, 1, &(m.d * back * m.t2));
    place(&mut drive, 2, &(-(m.d * back * m.r2 * m.rl3)));
    place(&mut drive, 3, &(-(m.d * m.r1 * m.rl4)));
    Ok(IntracavityMap {
        map: inverse * drive,
        condition,
    })
}

/// Output quadrature maps. `port1` leaves through mirror 2 after the forward
/// pass, `port2` through mirror 1 after the backward pass. Components are
/// `(X1j, X2j, Y1j, Y2j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputMaps {
    pub port1: NoiseMap,
    pub port2: NoiseMap,
}

pub fn output_quadratures(
    intracavity: &IntracavityMap,
    m: &NetworkMatrices,
    n1: &QuadTransfer,
    n2: &QuadTransfer,
) -> OutputMaps {
    let n1 = complexify(n1);
    let n2 = complexify(n2);

    let mut port1 = m.t2 * m.tl3 * n1 * intracavity.map;
    let mut direct1 = NoiseMap::zeros();
    place(&mut direct1, 1, &(-m.r2));
    place(&mut direct1, 2, &(-(m.t2 * m.rl3)));
    port1 += direct1;

    let out2 = m.t1 * m.tl4 * n2;
    let mut port2 = out2 * m.r2 * m.tl3 * n1 * intracavity.map;
    let mut direct2 = NoiseMap::zeros();
    place(&mut direct2, 0, &(-m.r1));
    place(&mut direct2, 1, &(out2 * m.t2));
    place(&mut direct2, 2, &(-(out2 * m.r2 * m.rl3)));
    place(&mut direct2, 3, &(-(m.t1 * m.rl4)));
    port2 += direct2;

    OutputMaps { port1, port2 }
}

fn power<'a>(row: impl Iterator<Item = &'a Complex64>) -> f64 {
    row.map(|z| z.norm_sqr()).sum()
}

fn correlation<'a>(
    a: impl Iterator<Item = &'a Complex64>,
    b: impl Iterator<Item = &'a Complex64>,
) -> f64 {
    2.0 * a.zip(b).map(|(x, y)| (x * y.conj()).re).sum::<f64>()
}

impl OutputMaps {
    /// Harmonic spectra and cross-correlations of the two ports.
    pub fn report(&self, omega: f64) -> NoiseReport {
        let row = |m: &NoiseMap, i: usize| m.row(i).iter().copied().collect::<Vec<_>>();
        let (x1, y1) = (row(&self.port1, 1), row(&self.port1, 3));
        let (x2, y2) = (row(&self.port2, 1), row(&self.port2, 3));
        NoiseReport {
            s_x1: power(x1.iter()),
            s_y1: power(y1.iter()),
            s_x2: power(x2.iter()),
            s_y2: power(y2.iter()),
            c_x: correlation(x1.iter(), x2.iter()),
            c_y: correlation(y1.iter(), y2.iter()),
            omega,
        }
    }

    /// Fundamental amplitude and phase spectra leaving each port.
    pub fn fundamental_spectra(&self) -> [PortSpectra; 2] {
        [&self.port1, &self.port2].map(|m| PortSpectra {
            s_x: power(m.row(0).iter()),
            s_y: power(m.row(2).iter()),
        })
    }
}

/// Noise coefficients of the harmonic output quadratures in the restricted
/// geometry. Each array multiplies the sources `(11, 13, 14, 21, 22)`: index
/// `ij` is frequency `i` entering at position `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputCoefficients {
    /// Port 1 amplitude quadrature, driven by `u_ij`.
    pub f: [Complex64; 5],
    /// Port 1 phase quadrature, driven by `v_ij`.
    pub g: [Complex64; 5],
    /// Port 2 amplitude quadrature.
    pub h: [Complex64; 5],
    /// Port 2 phase quadrature.
    pub j: [Complex64; 5],
    pub big_f: Complex64,
    pub big_g: Complex64,
    pub omega: f64,
}

/// Closed-form output coefficients. Requires [`CavitySpec::is_restricted`].
pub fn output_coefficients(
    zeta1: f64,
    zeta2: f64,
    omega: f64,
    cavity: &CavitySpec,
    fsr: &FreeSpectralRanges,
) -> Result<OutputCoefficients> {
    cavity.validate()?;
    if let Some(violation) = cavity.restriction_violation() {
        return Err(Error::RestrictionViolated(violation));
    }
    ensure(omega.is_finite(), || {
        format!("sideband frequency must be finite, got {omega}")
    })?;
    let a = transfer_matrix(zeta1)?;
    let b = transfer_matrix(zeta2)?;

    let e = Complex64::from_polar(1.0, omega / fsr.nu1);
    let refl = (1.0 - cavity.t11).sqrt();
    let pass3 = (1.0 - cavity.l13).sqrt();
    let pass4 = (1.0 - cavity.l14).sqrt();
    let leak3 = cavity.l13.sqrt();
    let leak4 = cavity.l14.sqrt();
    let couple = cavity.t11.sqrt();
    let loop_gain = e * refl * pass3 * pass4;

    // The x and y blocks share one template: (p, q, r, s) are the
    // (11, 12, 21, 22) or (33, 34, 43, 44) elements of each pass.
    let block = |p: (usize, usize), q: (usize, usize), r: (usize, usize), s: (usize, usize)| {
        let el = |n: &QuadTransfer, (i, j): (usize, usize)| n.n(i, j);
        let det = |n: &QuadTransfer| el(n, p) * el(n, s) - el(n, q) * el(n, r);
        let den = 1.0 - loop_gain * el(&a, p) * el(&b, p);
        let port1 = [
            e * couple * el(&a, r) / den,
            -e * refl * leak3 * pass4 * el(&a, r) * el(&b, p) / den,
            -e * refl * leak4 * el(&a, r) / den,
            (el(&a, s) - loop_gain * el(&b, p) * det(&a)) / den,
            e * refl * pass4 * el(&a, r) * el(&b, q) / den,
        ];
        let port2 = [
            e * couple * pass3 * el(&a, p) * el(&b, r) / den,
            Complex64::from(-leak3 * el(&b, r)) / den,
            -e * refl * pass3 * leak4 * el(&a, p) * el(&b, r) / den,
            Complex64::from(pass3 * el(&a, q) * el(&b, r)) / den,
            (el(&b, s) - loop_gain * el(&a, p) * det(&b)) / den,
        ];
        (port1, port2, den)
    };
    let (f, h, big_f) = block((1, 1), (1, 2), (2, 1), (2, 2));
    let (g, j, big_g) = block((3, 3), (3, 4), (4, 3), (4, 4));
    Ok(OutputCoefficients {
        f,
        g,
        h,
        j,
        big_f,
        big_g,
        omega,
    })
}

/// Squeezing spectra of one output beam (1 = shot noise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortSpectra {
    pub s_x: f64,
    pub s_y: f64,
}

impl PortSpectra {
    pub fn vacuum() -> Self {
        Self { s_x: 1.0, s_y: 1.0 }
    }

    pub fn uncertainty_product(&self) -> f64 {
        self.s_x * self.s_y
    }
}

/// Normalized harmonic spectra of both ports and their cross-correlations
/// `C_X = <X21 X22* + X21* X22>`, `C_Y` likewise, all per unit input noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseReport {
    pub s_x1: f64,
    pub s_y1: f64,
    pub s_x2: f64,
    pub s_y2: f64,
    pub c_x: f64,
    pub c_y: f64,
    /// Sideband angular frequency (rad/s).
    pub omega: f64,
}

impl NoiseReport {
    pub fn vacuum(omega: f64) -> Self {
        Self {
            s_x1: 1.0,
            s_y1: 1.0,
            s_x2: 1.0,
            s_y2: 1.0,
            c_x: 0.0,
            c_y: 0.0,
            omega,
        }
    }

    pub fn port1(&self) -> PortSpectra {
        PortSpectra {
            s_x: self.s_x1,
            s_y: self.s_y1,
        }
    }

    pub fn port2(&self) -> PortSpectra {
        PortSpectra {
            s_x: self.s_x2,
            s_y: self.s_y2,
        }
    }

    /// Largest absolute difference over the six scalars.
    pub fn max_abs_diff(&self, other: &NoiseReport) -> f64 {
        [
            self.s_x1 - other.s_x1,
            self.s_y1 - other.s_y1,
            self.s_x2 - other.s_x2,
            self.s_y2 - other.s_y2,
            self.c_x - other.c_x,
            self.c_y - other.c_y,
        ]
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
    }
}

pub fn noise_report(coeffs: &OutputCoefficients) -> NoiseReport {
    NoiseReport {
        s_x1: power(coeffs.f.iter()),
        s_y1: power(coeffs.g.iter()),
        s_x2: power(coeffs.h.iter()),
        s_y2: power(coeffs.j.iter()),
        c_x: correlation(coeffs.f.iter(), coeffs.h.iter()),
        c_y: correlation(coeffs.g.iter(), coeffs.j.iter()),
        omega: coeffs.omega,
    }
}

/// A route from `(zeta1, zeta2, omega)` to output spectra.
pub trait NoiseSolver: Named + Send + Sync {
    fn solve(
        &self,
        cavity: &CavitySpec,
        fsr: &FreeSpectralRanges,
        zeta: (f64, f64),
        omega: f64,
    ) -> Result<NoiseReport>;
}

/// Matrix resolvent route; any mirror and loss settings.
#[derive(Debug, Default, Clone, Copy)]
pub struct GeneralSolver;

impl Named for GeneralSolver {
    fn name(&self) -> &'static str {
        "general"
    }
}

impl NoiseSolver for GeneralSolver {
    fn solve(
        &self,
        cavity: &CavitySpec,
        fsr: &FreeSpectralRanges,
        (zeta1, zeta2): (f64, f64),
        omega: f64,
    ) -> Result<NoiseReport> {
        let m = NetworkMatrices::new(cavity, fsr, omega)?;
        let n1 = transfer_matrix(zeta1)?;
        let n2 = transfer_matrix(zeta2)?;
        let x1 = solve_intracavity(&m, &n1, &n2)?;
        Ok(output_quadratures(&x1, &m, &n1, &n2).report(omega))
    }
}

/// Closed-form coefficient route; restricted geometry only.
#[derive(Debug, Default, Clone, Copy)]
pub struct CoefficientSolver;

impl Named for CoefficientSolver {
    fn name(&self) -> &'static str {
        "coefficients"
    }
}

impl NoiseSolver for CoefficientSolver {
    fn solve(
        &self,
        cavity: &CavitySpec,
        fsr: &FreeSpectralRanges,
        (zeta1, zeta2): (f64, f64),
        omega: f64,
    ) -> Result<NoiseReport> {
        output_coefficients(zeta1, zeta2, omega, cavity, fsr).map(|c| noise_report(&c))
    }
}

/// Registry holding both solver routes.
pub fn solver_registry() -> Registry<dyn NoiseSolver> {
    let mut r: Registry<dyn NoiseSolver> = Registry::new("solver");
    r.register(Box::new(GeneralSolver));
    r.register(Box::new(CoefficientSolver));
    r
}
