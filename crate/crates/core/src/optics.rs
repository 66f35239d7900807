//! Jones-calculus optical elements and their action on the bipartite state.
//!
//! A 2x2 Jones operator acts on one degree of freedom; [`apply_placed`] lifts
//! it to the four-dimensional polarization-path space, optionally conditioned
//! on the arm the element physically sits in. Counter-propagating traversal
//! (the clockwise beam of a Sagnac loop) is modeled by negating the element's
//! axis angle; see [`OpticalElement::reversed`].
//!
//! Wave plates use the real half-wave-plate convention with the overall
//! retarder phase dropped, which is harmless because every observable in this
//! crate is invariant under a global phase.

use nalgebra::{Matrix2, Vector4};
use num_complex::Complex64;

use crate::state::PolPathState;
use crate::{Error, Result, INPUT_TOL};

/// A linear optical element acting on one binary degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalElement {
    /// Half-wave plate, fast axis at `angle` radians from horizontal.
    HalfWavePlate { angle: f64 },
    /// Quarter-wave plate, fast axis at `angle` radians from horizontal.
    QuarterWavePlate { angle: f64 },
    /// Linear polarizer transmitting at `angle` radians from horizontal.
    /// The only non-unitary element: a rank-1 projector.
    Polarizer { angle: f64 },
    /// Pure relative phase `diag(1, exp(i*phase))` on its target basis.
    PhaseShifter { phase: f64 },
    /// General U(2) element `exp(i*phase) [[alpha, beta], [-beta*, alpha*]]`
    /// with `|alpha|^2 + |beta|^2 = 1`.
    GeneralU2 {
        alpha: Complex64,
        beta: Complex64,
        phase: f64,
    },
}

impl OpticalElement {
    /// Construct a general U(2) element, validating `|alpha|^2 + |beta|^2 = 1`
    /// within the input tolerance.
    pub fn general_u2(alpha: Complex64, beta: Complex64, phase: f64) -> Result<Self> {
        let n = alpha.norm_sqr() + beta.norm_sqr();
        if (n - 1.0).abs() > INPUT_TOL {
            return Err(Error::InvalidParameter(format!(
                "general U(2) parameters must satisfy |alpha|^2 + |beta|^2 = 1, got {n}"
            )));
        }
        Ok(Self::GeneralU2 { alpha, beta, phase })
    }

    /// The element's 2x2 Jones matrix.
    pub fn jones_matrix(&self) -> Matrix2<Complex64> {
        let c = |x: f64| Complex64::new(x, 0.0);
        match *self {
            Self::HalfWavePlate { angle } => {
                let (s2, c2) = (2.0 * angle).sin_cos();
                Matrix2::new(c(c2), c(s2), c(s2), c(-c2))
            }
            Self::QuarterWavePlate { angle } => {
                // R(angle) diag(1, i) R(-angle)
                let r = rotation(angle);
                let q0 = Matrix2::new(c(1.0), c(0.0), c(0.0), Complex64::I);
                r * q0 * rotation(-angle)
            }
            Self::Polarizer { angle } => {
                let (s, co) = angle.sin_cos();
                Matrix2::new(c(co * co), c(co * s), c(s * co), c(s * s))
            }
            Self::PhaseShifter { phase } => Matrix2::new(
                c(1.0),
                c(0.0),
                c(0.0),
                Complex64::from_polar(1.0, phase),
            ),
            Self::GeneralU2 { alpha, beta, phase } => {
                let g = Complex64::from_polar(1.0, phase);
                Matrix2::new(g * alpha, g * beta, g * -beta.conj(), g * alpha.conj())
            }
        }
    }

    /// The element as seen by a counter-propagating beam: axis angles are
    /// negated (equivalently, conjugation by `diag(1, -1)`); pure phase
    /// shifters are unaffected.
    pub fn reversed(&self) -> Self {
        match *self {
            Self::HalfWavePlate { angle } => Self::HalfWavePlate { angle: -angle },
            Self::QuarterWavePlate { angle } => Self::QuarterWavePlate { angle: -angle },
            Self::Polarizer { angle } => Self::Polarizer { angle: -angle },
            Self::PhaseShifter { phase } => Self::PhaseShifter { phase },
            Self::GeneralU2 { alpha, beta, phase } => Self::GeneralU2 {
                alpha,
                beta: -beta,
                phase,
            },
        }
    }
}

fn rotation(angle: f64) -> Matrix2<Complex64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(
        Complex64::new(c, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(c, 0.0),
    )
}

/// Which arms a polarization element acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArmCondition {
    X,
    Y,
    Both,
}

/// Traversal direction through an element, for Sagnac-style loops where the
/// counter-propagating beam sees negated axis angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traversal {
    Forward,
    Reverse,
}

/// Where and how an element acts on the bipartite state.
///
/// Arm conditioning only exists for polarization elements (an element sitting
/// in one arm), so the variant structure makes a conditioned path element
/// unrepresentable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Polarization {
        arm: ArmCondition,
        traversal: Traversal,
    },
    Path {
        traversal: Traversal,
    },
}

impl Placement {
    /// Polarization element acting in both arms, forward traversal.
    pub fn polarization() -> Self {
        Self::Polarization {
            arm: ArmCondition::Both,
            traversal: Traversal::Forward,
        }
    }

    /// Polarization element sitting in a single arm, forward traversal.
    pub fn on_arm(arm: ArmCondition) -> Self {
        Self::Polarization {
            arm,
            traversal: Traversal::Forward,
        }
    }

    /// Path element, forward traversal.
    pub fn path() -> Self {
        Self::Path {
            traversal: Traversal::Forward,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Self::Polarization { arm, .. } => Self::Polarization {
                arm,
                traversal: Traversal::Reverse,
            },
            Self::Path { .. } => Self::Path {
                traversal: Traversal::Reverse,
            },
        }
    }

    fn traversal(&self) -> Traversal {
        match self {
            Self::Polarization { traversal, .. } | Self::Path { traversal } => *traversal,
        }
    }
}

/// Apply a placed element to the state.
///
/// A polarization element conditioned on arm x acts as
/// `J ⊗ |x><x| + I ⊗ |y><y|`; unconditioned it acts as `J ⊗ I`; a path
/// element acts as `I ⊗ J`. Unitary elements preserve the norm; polarizers
/// post-select, returning the unnormalized surviving amplitude.
pub fn apply_placed(
    state: &PolPathState,
    elem: &OpticalElement,
    place: Placement,
) -> PolPathState {
    let elem = match place.traversal() {
        Traversal::Forward => *elem,
        Traversal::Reverse => elem.reversed(),
    };
    let j = elem.jones_matrix();
    let v = state.vector();
    let mut out = Vector4::zeros();
    match place {
        Placement::Polarization { arm, .. } => {
            let arms: &[usize] = match arm {
                ArmCondition::X => &[0],
                ArmCondition::Y => &[1],
                ArmCondition::Both => &[0, 1],
            };
            out.copy_from(v);
            for &a in arms {
                for p in 0..2 {
                    out[2 * p + a] = j[(p, 0)] * v[a] + j[(p, 1)] * v[2 + a];
                }
            }
        }
        Placement::Path { .. } => {
            for p in 0..2 {
                for i in 0..2 {
                    out[2 * p + i] =
                        j[(i, 0)] * v[2 * p] + j[(i, 1)] * v[2 * p + 1];
                }
            }
        }
    }
    PolPathState::from_vector(out)
}

/// Phase relation between transmitted and reflected ports of a beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsConvention {
    /// Real, Hadamard-like split: `|x> -> sqrt(t)|x> + sqrt(r)|y>`,
    /// `|y> -> sqrt(r)|x> - sqrt(t)|y>`.
    RealHadamard,
    /// Symmetric convention: reflected amplitudes carry a factor `i`.
    SymmetricI,
}

/// Lossless two-port beam splitter mixing the path degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    convention: BsConvention,
    /// Transmittance `t`, with reflectance `1 - t`.
    ratio: f64,
}

impl BeamSplitter {
    pub fn new(convention: BsConvention, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "beam splitter ratio must lie in (0, 1), got {ratio}"
            )));
        }
        Ok(Self { convention, ratio })
    }

    /// 50:50 split.
    pub fn balanced(convention: BsConvention) -> Self {
        Self {
            convention,
            ratio: 0.5,
        }
    }

    pub fn convention(&self) -> BsConvention {
        self.convention
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// The unitary 2x2 path-mixing matrix.
    pub fn matrix(&self) -> Matrix2<Complex64> {
        let t = self.ratio.sqrt();
        let r = (1.0 - self.ratio).sqrt();
        let c = |x: f64| Complex64::new(x, 0.0);
        match self.convention {
            BsConvention::RealHadamard => Matrix2::new(c(t), c(r), c(r), c(-t)),
            BsConvention::SymmetricI => Matrix2::new(
                c(t),
                Complex64::new(0.0, r),
                Complex64::new(0.0, r),
                c(t),
            ),
        }
    }
}

/// Mix the path degree of freedom with the beam splitter's unitary.
pub fn apply_beamsplitter(state: &PolPathState, bs: &BeamSplitter) -> PolPathState {
    let j = bs.matrix();
    let v = state.vector();
    let mut out = Vector4::zeros();
    for p in 0..2 {
        for i in 0..2 {
            out[2 * p + i] = j[(i, 0)] * v[2 * p] + j[(i, 1)] * v[2 * p + 1];
        }
    }
    PolPathState::from_vector(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{is_unitary, Arm, Pol};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};

    fn d_state() -> PolPathState {
        // |d, x>
        let inv = 1.0 / 2.0_f64.sqrt();
        PolPathState::from_polar([inv, 0.0, inv, 0.0], [0.0; 4]).unwrap()
    }

    #[test]
    fn hwp_at_22_5_degrees_rotates_h_to_d() {
        let hwp = OpticalElement::HalfWavePlate { angle: FRAC_PI_8 };
        let out = apply_placed(
            &PolPathState::basis(Pol::H, Arm::X),
            &hwp,
            Placement::polarization(),
        );
        let inv = 1.0 / 2.0_f64.sqrt();
        assert_abs_diff_eq!(out.amp(Pol::H, Arm::X).re, inv, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp(Pol::V, Arm::X).re, inv, epsilon = 1e-15);
    }

    #[test]
    fn hwp_at_half_angle_prepares_linear_polarization() {
        // HWP(t/2) maps |h> to cos(t)|h> + sin(t)|v>.
        let t = 1.234;
        let hwp = OpticalElement::HalfWavePlate { angle: t / 2.0 };
        let out = apply_placed(
            &PolPathState::basis(Pol::H, Arm::X),
            &hwp,
            Placement::polarization(),
        );
        assert_abs_diff_eq!(out.amp(Pol::H, Arm::X).re, t.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp(Pol::V, Arm::X).re, t.sin(), epsilon = 1e-15);
    }

    #[test]
    fn qwp_at_zero_is_diag_one_i() {
        let q = OpticalElement::QuarterWavePlate { angle: 0.0 }.jones_matrix();
        assert!((q[(0, 0)] - Complex64::ONE).norm() < 1e-15);
        assert!((q[(1, 1)] - Complex64::I).norm() < 1e-15);
        assert!(q[(0, 1)].norm() < 1e-15 && q[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn polarizer_is_idempotent() {
        let p = OpticalElement::Polarizer { angle: 0.7 }.jones_matrix();
        let diff = (p * p - p).iter().map(|d| d.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-15);
    }

    #[test]
    fn non_polarizer_elements_are_unitary() {
        for angle in [-1.2, 0.0, 0.4, FRAC_PI_2, 2.9] {
            assert!(is_unitary(
                &OpticalElement::HalfWavePlate { angle }.jones_matrix()
            ));
            assert!(is_unitary(
                &OpticalElement::QuarterWavePlate { angle }.jones_matrix()
            ));
            assert!(is_unitary(
                &OpticalElement::PhaseShifter { phase: angle }.jones_matrix()
            ));
        }
        let u = OpticalElement::general_u2(
            Complex64::from_polar(0.6, 0.3),
            Complex64::from_polar(0.8, -1.1),
            0.9,
        )
        .unwrap();
        assert!(is_unitary(&u.jones_matrix()));
    }

    #[test]
    fn general_u2_rejects_unnormalized() {
        assert!(OpticalElement::general_u2(
            Complex64::from(0.6),
            Complex64::from(0.9),
            0.0
        )
        .is_err());
    }

    #[test]
    fn reversal_is_an_involution() {
        let elems = [
            OpticalElement::HalfWavePlate { angle: 0.31 },
            OpticalElement::QuarterWavePlate { angle: -1.2 },
            OpticalElement::Polarizer { angle: 0.8 },
            OpticalElement::PhaseShifter { phase: 2.2 },
            OpticalElement::general_u2(
                Complex64::from_polar(0.6, 0.3),
                Complex64::from_polar(0.8, -1.1),
                0.9,
            )
            .unwrap(),
        ];
        for e in elems {
            assert_eq!(e.reversed().reversed(), e);
        }
    }

    #[test]
    fn sagnac_sandwich_imprints_half_phase() {
        // Forward Q(0) H(d/4) Q(0) multiplies |d> by exp(+i d/2); the
        // reversed traversal multiplies by exp(-i d/2). Checked on a grid.
        for k in 0..100 {
            let delta = -2.0 * PI + 4.0 * PI * (k as f64) / 99.0;
            let q = OpticalElement::QuarterWavePlate { angle: 0.0 };
            let h = OpticalElement::HalfWavePlate { angle: delta / 4.0 };
            for (traversal, sign) in [(Traversal::Forward, 1.0), (Traversal::Reverse, -1.0)] {
                let place = Placement::Polarization {
                    arm: ArmCondition::Both,
                    traversal,
                };
                let mut s = d_state();
                for e in [&q, &h, &q] {
                    s = apply_placed(&s, e, place);
                }
                let expected = d_state().with_global_phase(sign * delta / 2.0);
                let diff: f64 = s
                    .amplitudes()
                    .iter()
                    .zip(expected.amplitudes())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(diff < 1e-12, "delta = {delta}, diff = {diff:e}");
            }
        }
    }

    #[test]
    fn arm_conditioned_hwp_builds_entangled_family() {
        // HWP(t/2) on arm x sends (|h,x> + |h,y>)/sqrt(2) to
        // (cos t |h,x> + sin t |v,x> + |h,y>)/sqrt(2).
        let t = 0.9;
        let inv = 1.0 / 2.0_f64.sqrt();
        let s = PolPathState::from_polar([inv, inv, 0.0, 0.0], [0.0; 4]).unwrap();
        let out = apply_placed(
            &s,
            &OpticalElement::HalfWavePlate { angle: t / 2.0 },
            Placement::on_arm(ArmCondition::X),
        );
        assert_abs_diff_eq!(out.amp(Pol::H, Arm::X).re, t.cos() * inv, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp(Pol::V, Arm::X).re, t.sin() * inv, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp(Pol::H, Arm::Y).re, inv, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp(Pol::V, Arm::Y).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn polarizer_in_both_arms_halves_the_product_state_power() {
        // |<h|d>|^2 = 1/2: post-selected norm squared drops to one half.
        let d = 0.6;
        let s = PolPathState::from_polar([0.5; 4], [0.0, d, 0.0, d]).unwrap();
        let out = apply_placed(
            &s,
            &OpticalElement::Polarizer { angle: 0.0 },
            Placement::polarization(),
        );
        assert_abs_diff_eq!(out.norm_sqr(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn balanced_real_hadamard_splits_evenly() {
        let bs = BeamSplitter::balanced(BsConvention::RealHadamard);
        let out = apply_beamsplitter(&d_state(), &bs);
        assert_abs_diff_eq!(out.amp(Pol::H, Arm::X).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp(Pol::H, Arm::Y).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp(Pol::V, Arm::X).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp(Pol::V, Arm::Y).re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn real_hadamard_applied_twice_is_identity() {
        let bs = BeamSplitter::balanced(BsConvention::RealHadamard);
        let s = PolPathState::from_polar([0.1, 0.5, 0.7, 0.2], [0.3, 1.0, -0.4, 2.0]).unwrap();
        let twice = apply_beamsplitter(&apply_beamsplitter(&s, &bs), &bs);
        let diff: f64 = s
            .amplitudes()
            .iter()
            .zip(twice.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-15);
    }

    #[test]
    fn symmetric_convention_puts_i_on_reflection() {
        let bs = BeamSplitter::balanced(BsConvention::SymmetricI);
        let out = apply_beamsplitter(&PolPathState::basis(Pol::H, Arm::X), &bs);
        let inv = 1.0 / 2.0_f64.sqrt();
        assert!((out.amp(Pol::H, Arm::X) - Complex64::from(inv)).norm() < 1e-15);
        assert!((out.amp(Pol::H, Arm::Y) - Complex64::new(0.0, inv)).norm() < 1e-15);
    }

    #[test]
    fn beamsplitter_matrices_are_unitary() {
        for ratio in [0.1, 0.3, 0.5, 0.77] {
            for conv in [BsConvention::RealHadamard, BsConvention::SymmetricI] {
                let bs = BeamSplitter::new(conv, ratio).unwrap();
                let u = bs.matrix();
                let defect = (u.adjoint() * u - Matrix2::identity())
                    .iter()
                    .map(|d: &Complex64| d.norm())
                    .fold(0.0, f64::max);
                assert!(defect < 1e-12);
            }
        }
        assert!(BeamSplitter::new(BsConvention::RealHadamard, 0.0).is_err());
        assert!(BeamSplitter::new(BsConvention::RealHadamard, 1.0).is_err());
    }
}
