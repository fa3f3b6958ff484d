//! Linearized propagation of quadrature fluctuations through one phase-matched
//! crystal pass with an empty harmonic input.

use nalgebra::{Matrix2, Matrix4};

use crate::coupling::CrystalSpec;
use crate::error::{ensure, Error, Result};

/// Real 4x4 map acting on `(x1, x2, y1, y2)`: amplitude and phase quadratures of
/// the fundamental (1) and harmonic (2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTransfer {
    pub m: Matrix4<f64>,
}

impl QuadTransfer {
    pub fn identity() -> Self {
        Self {
            m: Matrix4::identity(),
        }
    }

    /// Amplitude-quadrature block.
    pub fn x_block(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Phase-quadrature block.
    pub fn y_block(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Element `N_ij` with 1-based indices.
    pub fn n(&self, i: usize, j: usize) -> f64 {
        self.m[(i - 1, j - 1)]
    }
}

/// Transfer matrix `N(zeta)` for normalized interaction length `zeta`.
pub fn transfer_matrix(zeta: f64) -> Result<QuadTransfer> {
    ensure(zeta.is_finite() && zeta >= 0.0, || {
        format!("interaction length must be finite and non-negative, got {zeta}")
    })?;
    let sech = 1.0 / zeta.cosh();
    let tanh = zeta.tanh();
    let r2 = std::f64::consts::SQRT_2;
    let mut m = Matrix4::zeros();
    m[(0, 0)] = (1.0 - zeta * tanh) * sech;
    m[(0, 1)] = -r2 * tanh * sech;
    m[(1, 0)] = (tanh + zeta * sech * sech) / r2;
    m[(1, 1)] = sech * sech;
    m[(2, 2)] = sech;
    m[(2, 3)] = -(zeta.sinh() + zeta * sech) / r2;
    m[(3, 2)] = r2 * tanh;
    m[(3, 3)] = 1.0 - zeta * tanh;
    Ok(QuadTransfer { m })
}

/// The closed-form matrices assume a real coupling constant, i.e. perfect phase
/// matching.
pub fn require_real_coupling(crystal: &CrystalSpec) -> Result<()> {
    if crystal.dk != 0.0 {
        return Err(Error::ComplexCoupling { dk: crystal.dk });
    }
    Ok(())
}
