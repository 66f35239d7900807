//! Pure bipartite polarization-path states.

use nalgebra::{Matrix2, Vector4};
use num_complex::Complex64;

use crate::{Error, Result, INPUT_TOL};

/// Polarization basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pol {
    H,
    V,
}

/// Path (arm) basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    X,
    Y,
}

/// One of the two binary degrees of freedom carried by the beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dof {
    Polarization,
    Path,
}

/// A pure state of the combined polarization-path space.
///
/// Amplitudes are stored in the fixed global ordering `(hx, hy, vx, vy)`,
/// i.e. polarization-major with the path index varying fastest. Public
/// constructors normalize to unit norm; optical post-selection (polarizers)
/// is the one operation that returns states of reduced norm, with the
/// unnormalized amplitude retained.
///
/// The global phase carries no physics: every derived observable is
/// invariant under multiplication by `exp(i*chi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolPathState {
    amps: Vector4<Complex64>,
}

/// Flat index into the `(hx, hy, vx, vy)` ordering.
#[inline]
pub(crate) fn index(pol: Pol, arm: Arm) -> usize {
    let p = match pol {
        Pol::H => 0,
        Pol::V => 1,
    };
    let a = match arm {
        Arm::X => 0,
        Arm::Y => 1,
    };
    2 * p + a
}

impl PolPathState {
    /// Build a state from four complex amplitudes in `(hx, hy, vx, vy)`
    /// order, normalizing to unit norm.
    pub fn from_amplitudes(amps: [Complex64; 4]) -> Result<Self> {
        let v = Vector4::from_row_slice(&amps);
        let norm_sqr: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(Error::DegenerateState);
        }
        Ok(Self {
            amps: v / Complex64::from(norm_sqr.sqrt()),
        })
    }

    /// Build the general state with magnitudes `r` and phases `phi` (radians),
    /// amplitude `k` being `r[k] * exp(i*phi[k])`, renormalized to unit norm.
    ///
    /// Magnitudes must be nonnegative; all-zero magnitudes are rejected as a
    /// degenerate state.
    pub fn from_polar(r: [f64; 4], phi: [f64; 4]) -> Result<Self> {
        if r.iter().any(|&m| m < 0.0) {
            return Err(Error::InvalidParameter(
                "amplitude magnitudes must be nonnegative".into(),
            ));
        }
        if r.iter().map(|m| m * m).sum::<f64>() <= 0.0 {
            return Err(Error::DegenerateState);
        }
        let amps = [
            Complex64::from_polar(r[0], phi[0]),
            Complex64::from_polar(r[1], phi[1]),
            Complex64::from_polar(r[2], phi[2]),
            Complex64::from_polar(r[3], phi[3]),
        ];
        Self::from_amplitudes(amps)
    }

    /// The basis state `|pol, arm>`.
    pub fn basis(pol: Pol, arm: Arm) -> Self {
        let mut v = Vector4::zeros();
        v[index(pol, arm)] = Complex64::ONE;
        Self { amps: v }
    }

    /// Wrap raw amplitudes without normalizing. Used by optical elements,
    /// which may legitimately reduce the norm.
    pub(crate) fn from_vector(amps: Vector4<Complex64>) -> Self {
        Self { amps }
    }

    /// Amplitude of `|pol, arm>`.
    pub fn amp(&self, pol: Pol, arm: Arm) -> Complex64 {
        self.amps[index(pol, arm)]
    }

    /// Amplitudes in `(hx, hy, vx, vy)` order.
    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.amps[0], self.amps[1], self.amps[2], self.amps[3]]
    }

    pub(crate) fn vector(&self) -> &Vector4<Complex64> {
        &self.amps
    }

    /// Squared norm of the amplitude vector.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Whether the state is normalized within the input tolerance.
    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= INPUT_TOL
    }

    /// Rescale to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n <= 0.0 {
            return Err(Error::DegenerateState);
        }
        Ok(Self {
            amps: self.amps / Complex64::from(n.sqrt()),
        })
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    /// Multiply all amplitudes by `exp(i*chi)`. Physically a no-op; exposed
    /// so the global-phase invariance can be exercised directly.
    pub fn with_global_phase(&self, chi: f64) -> Self {
        Self {
            amps: self.amps * Complex64::from_polar(1.0, chi),
        }
    }

    /// Apply independent local transformations, `va` on polarization and
    /// `vb` on path, i.e. the state becomes `(va ⊗ vb)|state>`.
    ///
    /// Both matrices must be unitary within the input tolerance.
    pub fn apply_local(
        &self,
        va: &Matrix2<Complex64>,
        vb: &Matrix2<Complex64>,
    ) -> Result<Self> {
        if !is_unitary(va) || !is_unitary(vb) {
            return Err(Error::NotUnitary);
        }
        let u = va.kronecker(vb);
        Ok(Self { amps: u * self.amps })
    }

    /// Concurrence of the pure two-qubit state, `2 |a_hx a_vy - a_hy a_vx|`.
    ///
    /// Zero exactly for product states, one for maximally entangled ones.
    /// Computed on the normalized amplitudes, so sub-normalized post-selected
    /// states report the concurrence of the state they represent.
    pub fn concurrence(&self) -> f64 {
        let n = self.norm_sqr();
        debug_assert!(n > 0.0, "concurrence of the zero vector");
        let det = self.amps[0] * self.amps[3] - self.amps[1] * self.amps[2];
        (2.0 * det.norm() / n).clamp(0.0, 1.0)
    }
}

/// Check `u† u = I` entrywise within the input tolerance.
pub fn is_unitary(u: &Matrix2<Complex64>) -> bool {
    let gram = u.adjoint() * u;
    let id = Matrix2::identity();
    (gram - id).iter().all(|d: &Complex64| d.norm() <= INPUT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polar_basis_state() {
        let s = PolPathState::from_polar([1.0, 0.0, 0.0, 0.0], [0.0; 4]).unwrap();
        assert_eq!(s.amp(Pol::H, Arm::X), Complex64::ONE);
        assert_eq!(s.amp(Pol::V, Arm::Y), Complex64::ZERO);
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn polar_matches_product_state_form() {
        // r = (1/2,..), phi = (0, d, 0, d) is |d> ⊗ (|x> + e^{id}|y>)/sqrt(2)
        let d = 0.83;
        let s = PolPathState::from_polar([0.5; 4], [0.0, d, 0.0, d]).unwrap();
        let e = Complex64::from_polar(0.5, d);
        for (amp, want) in s.amplitudes().iter().zip([c(0.5, 0.0), e, c(0.5, 0.0), e]) {
            assert!((amp - want).norm() < 1e-15);
        }
    }

    #[test]
    fn polar_renormalizes() {
        let s = PolPathState::from_polar([1.0; 4], [0.0; 4]).unwrap();
        for amp in s.amplitudes() {
            assert_abs_diff_eq!(amp.re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(amp.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn polar_rejects_degenerate_and_negative() {
        assert_eq!(
            PolPathState::from_polar([0.0; 4], [0.0; 4]),
            Err(Error::DegenerateState)
        );
        assert!(matches!(
            PolPathState::from_polar([-0.5, 0.5, 0.5, 0.5], [0.0; 4]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn local_identity_is_noop() {
        let s = PolPathState::from_polar([0.3, 0.4, 0.5, 0.6], [0.1, 0.2, 0.3, 0.4]).unwrap();
        let id = Matrix2::identity();
        let t = s.apply_local(&id, &id).unwrap();
        assert!(s.inner(&t).norm() > 1.0 - 1e-12);
    }

    #[test]
    fn local_pauli_x_flips_polarization() {
        let sx = Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let id = Matrix2::identity();
        let s = PolPathState::basis(Pol::H, Arm::X);
        let t = s.apply_local(&sx, &id).unwrap();
        assert!((t.amp(Pol::V, Arm::X) - Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn local_rejects_non_unitary() {
        let bad = Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0));
        let id = Matrix2::identity();
        let s = PolPathState::basis(Pol::H, Arm::X);
        assert_eq!(s.apply_local(&bad, &id), Err(Error::NotUnitary));
    }

    #[test]
    fn concurrence_extremes() {
        // |h,x> is a product state; (|h,y> + |v,x>)/sqrt(2) is maximally entangled.
        assert_abs_diff_eq!(PolPathState::basis(Pol::H, Arm::X).concurrence(), 0.0);
        let bell = PolPathState::from_amplitudes([
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
        ])
        .unwrap();
        assert_abs_diff_eq!(bell.concurrence(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn global_phase_leaves_inner_modulus() {
        let s = PolPathState::from_polar([0.1, 0.7, 0.3, 0.2], [0.0, 1.0, 2.0, 3.0]).unwrap();
        let t = s.with_global_phase(FRAC_PI_2 + 0.1);
        assert_abs_diff_eq!(s.inner(&t).norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.concurrence(), s.concurrence(), epsilon = 1e-15);
    }

    #[test]
    fn unitarity_check_tolerance() {
        let phase = Complex64::from_polar(1.0, PI / 7.0);
        let u = Matrix2::new(
            phase * c(0.6, 0.0),
            phase * c(0.8, 0.0),
            phase * c(-0.8, 0.0),
            phase * c(0.6, 0.0),
        );
        assert!(is_unitary(&u));
    }
}
