//! The two experimental state families, built directly from their amplitude
//! formulas and through the optical circuits that prepare them.
//!
//! The Sagnac recipe models the loop as two arm-conditional wave-plate
//! sequences: the counterclockwise beam (arm y) traverses `Q(0) H(d/4) Q(0)`
//! forward, the clockwise beam (arm x) traverses the same elements in reverse
//! order with negated axis angles. That reproduces exactly the `exp(+-i d/2)`
//! phases the loop imprints on the diagonal polarization, with no geometric
//! path-length phase.

use std::f64::consts::FRAC_PI_8;

use num_complex::Complex64;

use crate::optics::{
    apply_beamsplitter, apply_placed, ArmCondition, BeamSplitter, BsConvention,
    OpticalElement, Placement,
};
use crate::state::{Arm, Pol, PolPathState};

/// The product state `(|h> + |v>) ⊗ (|x> + e^{i delta} |y>) / 2`,
/// i.e. amplitudes `(1, e^{i delta}, 1, e^{i delta}) / 2`.
pub fn target_product(delta: f64) -> PolPathState {
    let half = Complex64::from(0.5);
    let e = Complex64::from_polar(0.5, delta);
    PolPathState::from_amplitudes([half, e, half, e]).expect("nonzero by construction")
}

/// The entangled-family state
/// `(cos(theta)|h,x> + |h,y> + sin(theta)|v,x>) / sqrt(2)`,
/// unit-normalized for every `theta`. Its concurrence is `|sin(theta)|`.
pub fn target_entangled(theta: f64) -> PolPathState {
    let inv = Complex64::from(1.0 / 2.0_f64.sqrt());
    PolPathState::from_amplitudes([
        inv * Complex64::from(theta.cos()),
        inv,
        inv * Complex64::from(theta.sin()),
        Complex64::ZERO,
    ])
    .expect("nonzero for all theta")
}

/// `|<a|b>|^2`; insensitive to global phases. Both states must be normalized.
pub fn fidelity(a: &PolPathState, b: &PolPathState) -> f64 {
    debug_assert!(a.is_normalized() && b.is_normalized());
    a.inner(b).norm_sqr()
}

/// Which preparation circuit a recipe encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecipeKind {
    /// Sagnac loop preparing the product family (parameter `delta`).
    SagnacProduct,
    /// Mach-Zehnder arm-conditional wave plate preparing the entangled
    /// family (parameter `theta`).
    MzEntangled,
}

/// One step of a preparation circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Element(OpticalElement, Placement),
    BeamSplitter(BeamSplitter),
}

/// A preparation circuit for one of the two families.
///
/// Recipes are constructed by the library, not parsed from user input, so
/// the element sequence is exactly the published preparation procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitRecipe {
    kind: RecipeKind,
    parameter: f64,
    steps: Vec<Step>,
}

impl CircuitRecipe {
    /// Sagnac preparation of `target_product(delta)` from `|h, x>`:
    /// HWP at 22.5 degrees, a balanced splitter, then the `Q(0) H(d/4) Q(0)`
    /// sandwich forward on arm y and reversed on arm x.
    pub fn sagnac_product(delta: f64) -> Self {
        let q = OpticalElement::QuarterWavePlate { angle: 0.0 };
        let h = OpticalElement::HalfWavePlate { angle: delta / 4.0 };
        let fwd = Placement::on_arm(ArmCondition::Y);
        let rev = Placement::on_arm(ArmCondition::X).reversed();
        let steps = vec![
            Step::Element(
                OpticalElement::HalfWavePlate { angle: FRAC_PI_8 },
                Placement::polarization(),
            ),
            Step::BeamSplitter(BeamSplitter::balanced(BsConvention::RealHadamard)),
            // counterclockwise beam
            Step::Element(q, fwd),
            Step::Element(h, fwd),
            Step::Element(q, fwd),
            // clockwise beam: same elements in reverse order, reverse traversal
            Step::Element(q, rev),
            Step::Element(h, rev),
            Step::Element(q, rev),
        ];
        Self {
            kind: RecipeKind::SagnacProduct,
            parameter: delta,
            steps,
        }
    }

    /// Mach-Zehnder preparation of `target_entangled(theta)` from `|h, x>`:
    /// a balanced splitter followed by an HWP at `theta/2` on arm x.
    pub fn mz_entangled(theta: f64) -> Self {
        let steps = vec![
            Step::BeamSplitter(BeamSplitter::balanced(BsConvention::RealHadamard)),
            Step::Element(
                OpticalElement::HalfWavePlate { angle: theta / 2.0 },
                Placement::on_arm(ArmCondition::X),
            ),
        ];
        Self {
            kind: RecipeKind::MzEntangled,
            parameter: theta,
            steps,
        }
    }

    pub fn kind(&self) -> RecipeKind {
        self.kind
    }

    pub fn parameter(&self) -> f64 {
        self.parameter
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// The state the recipe is meant to produce.
    pub fn target(&self) -> PolPathState {
        match self.kind {
            RecipeKind::SagnacProduct => target_product(self.parameter),
            RecipeKind::MzEntangled => target_entangled(self.parameter),
        }
    }

    /// Run the circuit on the input `|h, x>`.
    pub fn run(&self) -> PolPathState {
        let mut state = PolPathState::basis(Pol::H, Arm::X);
        for step in &self.steps {
            state = match step {
                Step::Element(elem, place) => apply_placed(&state, elem, *place),
                Step::BeamSplitter(bs) => apply_beamsplitter(&state, bs),
            };
        }
        state
    }
}
