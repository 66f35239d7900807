//! Density matrices of the global state and of the two reduced subsystems.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::state::{Dof, PolPathState};
use crate::stokes::StokesVector;
use crate::{Error, Result};

/// Trace-one Hermitian 2x2 matrix: the state of a single degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density2(Matrix2<Complex64>);

/// Trace-one Hermitian 4x4 matrix: the global polarization-path state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density4(Matrix4<Complex64>);

impl PolPathState {
    /// Outer product `|state><state|`.
    ///
    /// For a normalized state the result has unit trace and unit purity.
    pub fn density(&self) -> Density4 {
        debug_assert!(self.is_normalized(), "density of an unnormalized state");
        let v = self.vector();
        Density4(v * v.adjoint())
    }
}

impl Density4 {
    /// Validate Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (eigenvalues above -1e-10) before wrapping.
    pub fn from_matrix(m: Matrix4<Complex64>) -> Result<Self> {
        let herm = (m - m.adjoint()).iter().map(|d| d.norm()).fold(0.0, f64::max);
        check_density(herm, (m.trace() - Complex64::ONE).norm())?;
        let eigs = m.symmetric_eigen().eigenvalues;
        if eigs.iter().any(|&l| l < -1e-10) {
            return Err(Error::InvalidParameter(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    /// `Tr(rho^2)`; one exactly for pure states.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// Trace out the other degree of freedom, keeping `keep`.
    ///
    /// With the `(hx, hy, vx, vy)` ordering the polarization index is the
    /// major one, so keeping polarization sums over path diagonals and
    /// keeping path sums over polarization diagonals.
    pub fn partial_trace(&self, keep: Dof) -> Density2 {
        let m = &self.0;
        let mut out = Matrix2::zeros();
        match keep {
            Dof::Polarization => {
                for p in 0..2 {
                    for q in 0..2 {
                        out[(p, q)] = m[(2 * p, 2 * q)] + m[(2 * p + 1, 2 * q + 1)];
                    }
                }
            }
            Dof::Path => {
                for i in 0..2 {
                    for j in 0..2 {
                        out[(i, j)] = m[(i, j)] + m[(2 + i, 2 + j)];
                    }
                }
            }
        }
        Density2(out)
    }
}

impl Density2 {
    /// Validate Hermiticity, unit trace and positivity before wrapping.
    pub fn from_matrix(m: Matrix2<Complex64>) -> Result<Self> {
        let herm = (m - m.adjoint()).iter().map(|d| d.norm()).fold(0.0, f64::max);
        check_density(herm, (m.trace() - Complex64::ONE).norm())?;
        // 2x2 positivity from trace and determinant.
        let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
        if det < -1e-10 {
            return Err(Error::InvalidParameter(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(Self(m))
    }

    /// `rho = (I + S.sigma)/2` for a Stokes vector with `|S| <= 1`.
    pub fn from_stokes(s: &StokesVector) -> Self {
        let half = 0.5;
        Self(Matrix2::new(
            Complex64::new(half * (1.0 + s.s3), 0.0),
            Complex64::new(half * s.s1, -half * s.s2),
            Complex64::new(half * s.s1, half * s.s2),
            Complex64::new(half * (1.0 - s.s3), 0.0),
        ))
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// Stokes components `s_i = Tr(rho sigma_i)`, in the convention where
    /// `rho_12 = (s1 - i s2)/2` and `s3 = rho_11 - rho_22`.
    pub fn stokes(&self) -> StokesVector {
        let m = &self.0;
        StokesVector {
            s1: 2.0 * m[(0, 1)].re,
            s2: -2.0 * m[(0, 1)].im,
            s3: m[(0, 0)].re - m[(1, 1)].re,
        }
    }
}

fn check_density(herm_defect: f64, trace_defect: f64) -> Result<()> {
    if herm_defect > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "matrix not Hermitian within 1e-12 (defect {herm_defect:.3e})"
        )));
    }
    if trace_defect > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "trace differs from 1 by {trace_defect:.3e}"
        )));
    }
    Ok(())
}
