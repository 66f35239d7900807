//! Simulated intensity detection and Stokes reconstruction.
//!
//! The measurement protocol mirrors the physical one end to end. For the
//! path degree of freedom: project the polarization onto `h` or `v`, read
//! the two arm intensities, and recover the relative phase by recombining
//! the arms on a balanced splitter with a known extra phase inserted on arm
//! y. For the polarization: post-select each arm and run six-projection
//! (h, v, d, a, r, l) tomography through quarter-wave-plate/polarizer
//! pipelines, then average the two arm Stokes vectors with the 50:50 weights
//! of a balanced split.
//!
//! Interference readings are computed by propagating the field through the
//! recombining splitter, so one output port carries
//! `(I_x + I_y + 2 sqrt(I_x I_y) cos(rel_phase + extra_phase)) / 2`
//! and the two ports sum to `I_x + I_y`. The quadrature readings at extra
//! phases 0 and pi/2 invert this exactly; a four-point fringe fit over the
//! full `{0, pi/2, pi, 3pi/2}` grid is provided as a cross-check.
//!
//! Every detector reading has a fixed index, and noise is a deterministic
//! function of `(NoiseModel.seed, reading index)`, so simulated records are
//! reproducible bit-for-bit and independent of evaluation order.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::optics::{
    apply_beamsplitter, apply_placed, ArmCondition, BeamSplitter, BsConvention,
    OpticalElement, Placement,
};
use crate::seeds::mix_seed;
use crate::state::{Arm, Pol, PolPathState};
use crate::stokes::StokesVector;
use crate::{Error, Result};

/// Intensities below this are treated as dark: no light, no contrast.
pub const ZERO_INTENSITY: f64 = 1e-12;

/// Extra phases at which interference ports are read out.
pub const INTERFERENCE_PHASES: [f64; 4] = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];

/// Relative Gaussian intensity noise, reproducible from a seed.
///
/// Each reading `I` becomes `max(0, I * (1 + eps))` with
/// `eps ~ Normal(0, sigma_rel)` drawn from a stream keyed by the reading's
/// fixed index. `sigma_rel = 0` bypasses sampling entirely and reproduces
/// exact intensities bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub sigma_rel: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(sigma_rel: f64, seed: u64) -> Result<Self> {
        if !(sigma_rel >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma_rel must be nonnegative, got {sigma_rel}"
            )));
        }
        Ok(Self { sigma_rel, seed })
    }

    pub fn noiseless() -> Self {
        Self {
            sigma_rel: 0.0,
            seed: 0,
        }
    }

    fn apply(&self, value: f64, reading: u64) -> f64 {
        if self.sigma_rel == 0.0 {
            return value;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(self.seed, reading));
        let eps: f64 = StandardNormal.sample(&mut rng);
        (value * (1.0 + self.sigma_rel * eps)).max(0.0)
    }
}

// Fixed reading indices. The four h/v arm readings are shared between the
// path record and the polarization record: they come from the same physical
// detector configuration, so they carry the same noise draw.
const READ_ARM_HV: [[u64; 2]; 2] = [[0, 1], [2, 3]]; // [pol][arm]
const READ_PORT_BASE: [u64; 2] = [4, 8]; // [pol], + phase index
const READ_ARM_DARL_BASE: u64 = 12; // + 2 * projection offset + arm

/// Arm intensities after h/v polarization projection plus interference-port
/// readings per polarization; the input to path-Stokes reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityRecord {
    pub i_x_h: f64,
    pub i_y_h: f64,
    pub i_x_v: f64,
    pub i_y_v: f64,
    /// `(extra_phase, port intensity)` readings for the h projection.
    pub interference_h: Vec<(f64, f64)>,
    /// `(extra_phase, port intensity)` readings for the v projection.
    pub interference_v: Vec<(f64, f64)>,
}

impl IntensityRecord {
    fn arm(&self, pol: Pol, arm: Arm) -> f64 {
        match (pol, arm) {
            (Pol::H, Arm::X) => self.i_x_h,
            (Pol::H, Arm::Y) => self.i_y_h,
            (Pol::V, Arm::X) => self.i_x_v,
            (Pol::V, Arm::Y) => self.i_y_v,
        }
    }

    fn interference(&self, pol: Pol) -> &[(f64, f64)] {
        match pol {
            Pol::H => &self.interference_h,
            Pol::V => &self.interference_v,
        }
    }

    fn reading_at(&self, pol: Pol, extra_phase: f64) -> Result<f64> {
        self.interference(pol)
            .iter()
            .find(|(phase, _)| (phase - extra_phase).abs() < 1e-9)
            .map(|&(_, intensity)| intensity)
            .ok_or_else(|| {
                Error::MalformedRecord(format!(
                    "no interference reading at extra phase {extra_phase}"
                ))
            })
    }

    /// Total intensity surviving the given polarization projection.
    pub fn total(&self, pol: Pol) -> f64 {
        self.arm(pol, Arm::X) + self.arm(pol, Arm::Y)
    }
}

/// Six-projection polarization intensities for one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SixProjections {
    pub i_h: f64,
    pub i_v: f64,
    pub i_d: f64,
    pub i_a: f64,
    pub i_r: f64,
    pub i_l: f64,
}

/// Per-arm six-projection sets; the input to polarization-Stokes
/// reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolProjectionRecord {
    pub arm_x: SixProjections,
    pub arm_y: SixProjections,
}

/// Project the polarization onto `h` or `v` and trace it out, returning the
/// unnormalized 2x2 path-space matrix. Its trace is the probability of that
/// polarization outcome, and normalized it is a rank-1 projector.
pub fn project_polarization(state: &PolPathState, which: Pol) -> Matrix2<Complex64> {
    let ux = state.amp(which, Arm::X);
    let uy = state.amp(which, Arm::Y);
    Matrix2::new(
        ux * ux.conj(),
        ux * uy.conj(),
        uy * ux.conj(),
        uy * uy.conj(),
    )
}

/// Intensity at the pinned output port (arm x, real-Hadamard recombiner)
/// after projecting onto `which_pol` and inserting `extra_phase` on arm y.
pub fn interference_intensity(state: &PolPathState, which_pol: Pol, extra_phase: f64) -> f64 {
    interference_port_intensity(
        state,
        which_pol,
        extra_phase,
        Arm::X,
        BsConvention::RealHadamard,
    )
}

/// Same readout with the port and splitter convention chosen explicitly.
pub fn interference_port_intensity(
    state: &PolPathState,
    which_pol: Pol,
    extra_phase: f64,
    port: Arm,
    convention: BsConvention,
) -> f64 {
    let polarizer = OpticalElement::Polarizer {
        angle: match which_pol {
            Pol::H => 0.0,
            Pol::V => FRAC_PI_2,
        },
    };
    let shifter = OpticalElement::PhaseShifter { phase: extra_phase };
    let mut s = apply_placed(state, &polarizer, Placement::polarization());
    s = apply_placed(&s, &shifter, Placement::path());
    s = apply_beamsplitter(&s, &BeamSplitter::balanced(convention));
    s.amp(Pol::H, port).norm_sqr() + s.amp(Pol::V, port).norm_sqr()
}

/// Projected arm intensity `|amplitude|^2`: what a detector behind an exact
/// h/v polarizer in that arm reads. Shared by both simulated records so the
/// common physical reading is one value.
fn arm_intensity(state: &PolPathState, pol: Pol, arm: Arm) -> f64 {
    state.amp(pol, arm).norm_sqr()
}

/// Simulate the path-tomography detector readings with the given noise:
/// the four projected arm intensities and the interference ports over the
/// standard extra-phase grid.
pub fn simulate_intensities(state: &PolPathState, noise: &NoiseModel) -> IntensityRecord {
    debug_assert!(state.is_normalized());
    let arm = |pol: Pol, arm_label: Arm, idx: u64| {
        noise.apply(arm_intensity(state, pol, arm_label), idx)
    };
    let ports = |pol: Pol, base: u64| {
        INTERFERENCE_PHASES
            .iter()
            .enumerate()
            .map(|(k, &phase)| {
                let value = interference_intensity(state, pol, phase);
                (phase, noise.apply(value, base + k as u64))
            })
            .collect()
    };
    IntensityRecord {
        i_x_h: arm(Pol::H, Arm::X, READ_ARM_HV[0][0]),
        i_y_h: arm(Pol::H, Arm::Y, READ_ARM_HV[0][1]),
        i_x_v: arm(Pol::V, Arm::X, READ_ARM_HV[1][0]),
        i_y_v: arm(Pol::V, Arm::Y, READ_ARM_HV[1][1]),
        interference_h: ports(Pol::H, READ_PORT_BASE[0]),
        interference_v: ports(Pol::V, READ_PORT_BASE[1]),
    }
}

/// Element pipeline measuring one polarization projection: a polarizer for
/// the linear bases, a quarter-wave plate in front of it for the circular
/// ones.
fn projection_pipeline(which: WavePlateProjection) -> Vec<OpticalElement> {
    use WavePlateProjection::*;
    match which {
        D => vec![OpticalElement::Polarizer { angle: FRAC_PI_4 }],
        A => vec![OpticalElement::Polarizer { angle: -FRAC_PI_4 }],
        R => vec![
            OpticalElement::QuarterWavePlate { angle: FRAC_PI_4 },
            OpticalElement::Polarizer { angle: 0.0 },
        ],
        L => vec![
            OpticalElement::QuarterWavePlate { angle: -FRAC_PI_4 },
            OpticalElement::Polarizer { angle: 0.0 },
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WavePlateProjection {
    D,
    A,
    R,
    L,
}

fn measure_projection(state: &PolPathState, which: WavePlateProjection, arm: Arm) -> f64 {
    let condition = match arm {
        Arm::X => ArmCondition::X,
        Arm::Y => ArmCondition::Y,
    };
    let mut s = *state;
    for elem in projection_pipeline(which) {
        s = apply_placed(&s, &elem, Placement::on_arm(condition));
    }
    s.amp(Pol::H, arm).norm_sqr() + s.amp(Pol::V, arm).norm_sqr()
}

/// Simulate six-projection polarization tomography on each arm, the d/a/r/l
/// projections through their quarter-wave-plate/polarizer pipelines.
///
/// The h and v readings are the same physical measurements as the arm
/// intensities of [`simulate_intensities`] (a polarizer at exactly 0 or 90
/// degrees reads the amplitude modulus), so they share values and reading
/// indices with that record.
pub fn simulate_pol_projections(
    state: &PolPathState,
    noise: &NoiseModel,
) -> PolProjectionRecord {
    debug_assert!(state.is_normalized());
    use WavePlateProjection::*;
    let one_arm = |arm: Arm, arm_idx: u64| {
        let darl = |which, offset: u64| {
            noise.apply(
                measure_projection(state, which, arm),
                READ_ARM_DARL_BASE + 2 * offset + arm_idx,
            )
        };
        SixProjections {
            i_h: noise.apply(
                arm_intensity(state, Pol::H, arm),
                READ_ARM_HV[0][arm_idx as usize],
            ),
            i_v: noise.apply(
                arm_intensity(state, Pol::V, arm),
                READ_ARM_HV[1][arm_idx as usize],
            ),
            i_d: darl(D, 0),
            i_a: darl(A, 1),
            i_r: darl(R, 2),
            i_l: darl(L, 3),
        }
    };
    PolProjectionRecord {
        arm_x: one_arm(Arm::X, 0),
        arm_y: one_arm(Arm::Y, 1),
    }
}

/// Simulate the complete tomography readout (path and polarization records)
/// for one state under one noise model.
pub fn simulate_records(
    state: &PolPathState,
    noise: &NoiseModel,
) -> (IntensityRecord, PolProjectionRecord) {
    (
        simulate_intensities(state, noise),
        simulate_pol_projections(state, noise),
    )
}

/// Recover the relative arm phase for one polarization projection from the
/// quadrature readings at extra phases 0 and pi/2.
///
/// Returns the phase in `(-pi, pi]`. Errors if either arm is dark, since a
/// single-arm state produces no fringe.
pub fn infer_phase(record: &IntensityRecord, which_pol: Pol) -> Result<f64> {
    let ix = record.arm(which_pol, Arm::X);
    let iy = record.arm(which_pol, Arm::Y);
    if ix <= ZERO_INTENSITY || iy <= ZERO_INTENSITY {
        return Err(Error::NoInterferenceContrast);
    }
    let base = 0.5 * (ix + iy);
    let amp = (ix * iy).sqrt();
    let r0 = record.reading_at(which_pol, 0.0)?;
    let r1 = record.reading_at(which_pol, FRAC_PI_2)?;
    let cos_part = (r0 - base) / amp;
    let sin_part = -(r1 - base) / amp;
    Ok(wrap_half_open(sin_part.atan2(cos_part)))
}

/// Fringe fit over the four-point extra-phase grid; a cross-check for
/// [`infer_phase`] that needs no arm intensities.
pub fn infer_phase_four_point(record: &IntensityRecord, which_pol: Pol) -> Result<f64> {
    let r = |phase: f64| record.reading_at(which_pol, phase);
    let cos_part = r(0.0)? - r(PI)?;
    let sin_part = r(3.0 * FRAC_PI_2)? - r(FRAC_PI_2)?;
    if cos_part.hypot(sin_part) <= 2.0 * ZERO_INTENSITY {
        return Err(Error::NoInterferenceContrast);
    }
    Ok(wrap_half_open(sin_part.atan2(cos_part)))
}

/// Decide between relative phase 0 and pi for states whose projected arm
/// amplitudes are real: constructive recombination at zero extra phase means
/// 0, destructive means pi.
pub fn infer_phase_sign(record: &IntensityRecord, which_pol: Pol) -> Result<f64> {
    let ix = record.arm(which_pol, Arm::X);
    let iy = record.arm(which_pol, Arm::Y);
    if ix <= ZERO_INTENSITY || iy <= ZERO_INTENSITY {
        return Err(Error::NoInterferenceContrast);
    }
    let base = 0.5 * (ix + iy);
    let r0 = record.reading_at(which_pol, 0.0)?;
    Ok(if r0 > base { 0.0 } else { PI })
}

fn wrap_half_open(phase: f64) -> f64 {
    if phase <= -PI {
        phase + 2.0 * PI
    } else {
        phase
    }
}

/// Rebuild the path Stokes vector from a record: form the pure projected
/// path state `a_x|x> + a_y e^{i phase}|y>` for each polarization outcome
/// and mix their Stokes vectors with the measured intensity weights.
///
/// An outcome with no light is skipped, leaving the surviving outcome with
/// weight one; a single-arm outcome needs no phase and maps straight to the
/// poles `(0, 0, +-1)`.
pub fn reconstruct_path_stokes(record: &IntensityRecord) -> Result<StokesVector> {
    let total = record.total(Pol::H) + record.total(Pol::V);
    if total <= ZERO_INTENSITY {
        return Err(Error::ZeroIntensity);
    }
    let mut combined = StokesVector::new(0.0, 0.0, 0.0);
    for pol in [Pol::H, Pol::V] {
        let weight = record.total(pol) / total;
        if record.total(pol) <= ZERO_INTENSITY {
            continue;
        }
        combined = combined.add(&branch_stokes(record, pol)?.scale(weight));
    }
    Ok(combined)
}

fn branch_stokes(record: &IntensityRecord, pol: Pol) -> Result<StokesVector> {
    let ix = record.arm(pol, Arm::X);
    let iy = record.arm(pol, Arm::Y);
    if iy <= ZERO_INTENSITY {
        return Ok(StokesVector::new(0.0, 0.0, 1.0));
    }
    if ix <= ZERO_INTENSITY {
        return Ok(StokesVector::new(0.0, 0.0, -1.0));
    }
    let phase = infer_phase(record, pol)?;
    let ax = (ix / (ix + iy)).sqrt();
    let ay = (iy / (ix + iy)).sqrt();
    Ok(StokesVector::new(
        2.0 * ax * ay * phase.cos(),
        2.0 * ax * ay * phase.sin(),
        ax * ax - ay * ay,
    ))
}

/// Rebuild the polarization Stokes vector from six-projection sets on the
/// two arms, combined with the equal weights of a balanced split.
pub fn reconstruct_pol_stokes(record: &PolProjectionRecord) -> Result<StokesVector> {
    let sx = arm_stokes(&record.arm_x)?;
    let sy = arm_stokes(&record.arm_y)?;
    Ok(sx.scale(0.5).add(&sy.scale(0.5)))
}

fn arm_stokes(p: &SixProjections) -> Result<StokesVector> {
    let pairs = [(p.i_d, p.i_a), (p.i_r, p.i_l), (p.i_h, p.i_v)];
    if pairs.iter().any(|(a, b)| a + b <= ZERO_INTENSITY) {
        return Err(Error::ZeroIntensity);
    }
    let diff = |(a, b): (f64, f64)| (a - b) / (a + b);
    Ok(StokesVector::new(
        diff(pairs[0]),
        diff(pairs[1]),
        diff(pairs[2]),
    ))
}

/// Run `repetitions` independent noisy simulations of the full tomography of
/// `state` and reconstruct both Stokes vectors for each.
///
/// Repetition `k` uses the noise seed `mix_seed(master_seed, k)`, so results
/// do not depend on evaluation order.
pub fn repeated_reconstructions(
    state: &PolPathState,
    sigma_rel: f64,
    master_seed: u64,
    repetitions: u32,
) -> Result<Vec<(StokesVector, StokesVector)>> {
    (0..repetitions)
        .map(|k| {
            let noise = NoiseModel::new(sigma_rel, mix_seed(master_seed, k as u64))?;
            let (path_rec, pol_rec) = simulate_records(state, &noise);
            Ok((
                reconstruct_path_stokes(&path_rec)?,
                reconstruct_pol_stokes(&pol_rec)?,
            ))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// CSV serialization: columns `pol,arm_or_port,extra_phase,intensity`.
// ---------------------------------------------------------------------------

/// CSV header shared by all record files.
pub const CSV_HEADER: &str = "pol,arm_or_port,extra_phase,intensity";

fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serialize a path record, and optionally the polarization record, into the
/// shared four-column CSV layout. The h/v arm rows double as the h and v
/// rows of the polarization record.
pub fn records_to_csv(path: &IntensityRecord, pol: Option<&PolProjectionRecord>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let mut row = |label: &str, arm_or_port: &str, phase: Option<f64>, v: f64| {
        let phase = phase.map(fmt_real).unwrap_or_default();
        out.push_str(&format!("{label},{arm_or_port},{phase},{}\n", fmt_real(v)));
    };
    row("h", "x", None, path.i_x_h);
    row("h", "y", None, path.i_y_h);
    row("v", "x", None, path.i_x_v);
    row("v", "y", None, path.i_y_v);
    for (pol_label, readings) in [("h", &path.interference_h), ("v", &path.interference_v)] {
        for &(phase, intensity) in readings {
            row(pol_label, "port", Some(phase), intensity);
        }
    }
    if let Some(pol_rec) = pol {
        for (arm_label, six) in [("x", &pol_rec.arm_x), ("y", &pol_rec.arm_y)] {
            for (label, v) in [
                ("d", six.i_d),
                ("a", six.i_a),
                ("r", six.i_r),
                ("l", six.i_l),
            ] {
                row(label, arm_label, None, v);
            }
        }
    }
    out
}

/// Parse records serialized by [`records_to_csv`]. The polarization record
/// is returned only when all of its d/a/r/l rows are present.
pub fn records_from_csv(text: &str) -> Result<(IntensityRecord, Option<PolProjectionRecord>)> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => {
            return Err(Error::MalformedRecord(format!(
                "expected header `{CSV_HEADER}`, found {other:?}"
            )))
        }
    }
    let mut arms: [[Option<f64>; 2]; 6] = [[None; 2]; 6]; // [h,v,d,a,r,l][x,y]
    let mut ports: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::MalformedRecord(format!(
                "line {}: expected 4 fields, found {}",
                lineno + 2,
                fields.len()
            )));
        }
        let intensity: f64 = fields[3].trim().parse().map_err(|e| {
            Error::MalformedRecord(format!("line {}: bad intensity: {e}", lineno + 2))
        })?;
        let pol_idx = match fields[0].trim() {
            "h" => 0,
            "v" => 1,
            "d" => 2,
            "a" => 3,
            "r" => 4,
            "l" => 5,
            other => {
                return Err(Error::MalformedRecord(format!(
                    "line {}: unknown projection `{other}`",
                    lineno + 2
                )))
            }
        };
        match fields[1].trim() {
            "x" => arms[pol_idx][0] = Some(intensity),
            "y" => arms[pol_idx][1] = Some(intensity),
            "port" if pol_idx < 2 => {
                let phase: f64 = fields[2].trim().parse().map_err(|e| {
                    Error::MalformedRecord(format!("line {}: bad extra_phase: {e}", lineno + 2))
                })?;
                ports[pol_idx].push((phase, intensity));
            }
            other => {
                return Err(Error::MalformedRecord(format!(
                    "line {}: unknown arm_or_port `{other}`",
                    lineno + 2
                )))
            }
        }
    }
    let need = |idx: usize, arm: usize, what: &str| {
        arms[idx][arm].ok_or_else(|| Error::MalformedRecord(format!("missing row {what}")))
    };
    let record = IntensityRecord {
        i_x_h: need(0, 0, "h,x")?,
        i_y_h: need(0, 1, "h,y")?,
        i_x_v: need(1, 0, "v,x")?,
        i_y_v: need(1, 1, "v,y")?,
        interference_h: ports[0].clone(),
        interference_v: ports[1].clone(),
    };
    let have_pol = (2..6).all(|idx| arms[idx][0].is_some() && arms[idx][1].is_some());
    let pol = if have_pol {
        let six = |arm: usize| SixProjections {
            i_h: arms[0][arm].unwrap(),
            i_v: arms[1][arm].unwrap(),
            i_d: arms[2][arm].unwrap(),
            i_a: arms[3][arm].unwrap(),
            i_r: arms[4][arm].unwrap(),
            i_l: arms[5][arm].unwrap(),
        };
        Some(PolProjectionRecord {
            arm_x: six(0),
            arm_y: six(1),
        })
    } else {
        None
    };
    Ok((record, pol))
}
