//! Inner-product correlations, the CHSH combination, parameter sweeps that
//! reach the Tsirelson bound, and a finite local-hidden-variable engine that
//! saturates but never exceeds the classical bound of 2.
//!
//! The correlation between the two degrees of freedom is the normalized
//! inner product of their Stokes vectors. For the two experimental families
//! it has the closed forms `cos(delta)` (product) and `sin(theta)`
//! (entangled). Sweeps follow the one-free-parameter setting scheme
//! `(delta1, delta, delta, 2 delta - delta1)`, which respects the constraint
//! `delta1 + delta4 = delta2 + delta3` by construction.

use crate::prep::{target_entangled, target_product};
use crate::seeds::mix_seed;
use crate::state::{Dof, PolPathState};
use crate::stokes::StokesVector;
use crate::tomo::{
    reconstruct_path_stokes, reconstruct_pol_stokes, simulate_records, NoiseModel,
};
use crate::{Error, Result};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Norm below which a Stokes vector cannot define a normalized correlation.
pub const STOKES_EPS: f64 = 1e-9;

/// Largest hidden-variable space a strategy may carry.
pub const MAX_LAMBDA: usize = 1 << 16;

/// Normalized inner product of two Stokes vectors,
/// `sa . sb / (|sa| |sb|)`, in `[-1, 1]`.
///
/// Errors when either norm is at most [`STOKES_EPS`]: a vanishing Stokes
/// vector (maximally mixed marginal) leaves the correlation undefined.
pub fn correlation_eta(sa: &StokesVector, sb: &StokesVector) -> Result<f64> {
    let (na, nb) = (sa.norm(), sb.norm());
    if na <= STOKES_EPS || nb <= STOKES_EPS {
        return Err(Error::DegenerateStokes);
    }
    Ok(sa.dot(sb) / (na * nb))
}

/// Closed-form correlation of the product family.
pub fn eta_product(delta: f64) -> f64 {
    delta.cos()
}

/// Closed-form correlation of the entangled family, continuous through the
/// degenerate points where the measured version is undefined.
pub fn eta_entangled(theta: f64) -> f64 {
    theta.sin()
}

/// CHSH combination `|e1 + e2 + e3 - e4|`.
pub fn bell_parameter(e1: f64, e2: f64, e3: f64, e4: f64) -> f64 {
    debug_assert!(
        [e1, e2, e3, e4].iter().all(|e| e.abs() <= 1.0 + 1e-9),
        "correlations must lie in [-1, 1]"
    );
    (e1 + e2 + e3 - e4).abs()
}

/// The four phase settings of one CHSH evaluation.
///
/// The settings are not independent: `delta1 + delta4 = delta2 + delta3`
/// always, which is what reduces the sweep to a single free parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSettings {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub delta4: f64,
}

impl CorrelationSettings {
    /// Validate the constraint `delta1 + delta4 = delta2 + delta3` (1e-12).
    pub fn new(delta1: f64, delta2: f64, delta3: f64, delta4: f64) -> Result<Self> {
        let defect = ((delta1 + delta4) - (delta2 + delta3)).abs();
        if defect > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "settings must satisfy delta1 + delta4 = delta2 + delta3, defect {defect:e}"
            )));
        }
        Ok(Self {
            delta1,
            delta2,
            delta3,
            delta4,
        })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.delta1, self.delta2, self.delta3, self.delta4]
    }
}

/// The one-free-parameter settings `(delta1, delta, delta, 2 delta - delta1)`.
pub fn settings_from_free_param(delta: f64, delta1_fixed: f64) -> CorrelationSettings {
    CorrelationSettings {
        delta1: delta1_fixed,
        delta2: delta,
        delta3: delta,
        delta4: 2.0 * delta - delta1_fixed,
    }
}

/// One of the two experimental state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Product states parameterized by the path phase `delta`.
    Product,
    /// Entangled-family states parameterized by the wave-plate angle `theta`.
    Entangled,
}

impl Family {
    /// The family member at the given parameter.
    pub fn state(&self, param: f64) -> PolPathState {
        match self {
            Self::Product => target_product(param),
            Self::Entangled => target_entangled(param),
        }
    }

    /// Closed-form correlation at the given parameter.
    pub fn eta_oracle(&self, param: f64) -> f64 {
        match self {
            Self::Product => eta_product(param),
            Self::Entangled => eta_entangled(param),
        }
    }

    /// Concurrence of the family member.
    pub fn concurrence(&self, param: f64) -> f64 {
        match self {
            Self::Product => 0.0,
            Self::Entangled => param.sin().abs(),
        }
    }
}

/// Both marginal Stokes vectors of a state: `(polarization, path)`.
pub fn stokes_pair(state: &PolPathState) -> (StokesVector, StokesVector) {
    let rho = state.density();
    (
        rho.partial_trace(Dof::Polarization).stokes(),
        rho.partial_trace(Dof::Path).stokes(),
    )
}

/// Correlation evaluated by preparing the family state and contracting its
/// marginal Stokes vectors; errors at degenerate parameters.
pub fn eta_stokes_direct(family: Family, param: f64) -> Result<f64> {
    let (sa, sb) = stokes_pair(&family.state(param));
    correlation_eta(&sa, &sb)
}

/// How sweep correlations are evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Estimator {
    /// Closed forms `cos`/`sin`; defined everywhere.
    AnalyticOracle,
    /// Exact Stokes computation on four separately prepared states.
    StokesDirect,
    /// Full simulated tomography with noise, averaged over repetitions.
    Tomography {
        noise: NoiseModel,
        repetitions: u32,
    },
}

/// A parameter sweep of the Bell curve for one family.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: Family,
    /// The pinned first setting; the published curves use `-3 pi / 4`.
    pub delta1_fixed: f64,
    pub grid_start: f64,
    pub grid_end: f64,
    /// Number of grid points, spaced `(end - start) / points` apart with the
    /// end point excluded, so a 360-point sweep of `[0, 2 pi)` lands exactly
    /// on whole degrees.
    pub grid_points: usize,
    pub estimator: Estimator,
}

impl SweepConfig {
    /// The default sweep of the published curves: `delta1 = -3 pi / 4`,
    /// one-degree grid over `[0, 2 pi)`.
    pub fn standard(family: Family, estimator: Estimator) -> Self {
        Self {
            family,
            delta1_fixed: -3.0 * std::f64::consts::FRAC_PI_4,
            grid_start: 0.0,
            grid_end: std::f64::consts::TAU,
            grid_points: 360,
            estimator,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid_points must be at least 2, got {}",
                self.grid_points
            )));
        }
        if !(self.grid_end > self.grid_start) {
            return Err(Error::InvalidParameter(
                "grid_end must exceed grid_start".into(),
            ));
        }
        if let Estimator::Tomography { repetitions, .. } = self.estimator {
            if repetitions == 0 {
                return Err(Error::InvalidParameter(
                    "tomography estimator needs at least one repetition".into(),
                ));
            }
        }
        Ok(())
    }

    /// Grid parameter at index `i`.
    pub fn param_at(&self, i: usize) -> f64 {
        self.grid_start
            + (self.grid_end - self.grid_start) * (i as f64) / (self.grid_points as f64)
    }
}

/// One sweep row. `eta` and `s_bell` are `None` on rows where the estimator
/// hit a degenerate Stokes vector; `s_bell_std` is populated only by the
/// tomography estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub param: f64,
    pub eta: Option<f64>,
    pub s_bell: Option<f64>,
    pub concurrence: f64,
    pub s_bell_std: Option<f64>,
}

/// Evaluate the Bell curve over the configured grid.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepPoint>> {
    config.validate()?;
    (0..config.grid_points)
        .map(|i| sweep_point(config, i))
        .collect()
}

fn sweep_point(config: &SweepConfig, index: usize) -> Result<SweepPoint> {
    let param = config.param_at(index);
    let settings = settings_from_free_param(param, config.delta1_fixed).as_array();
    let concurrence = config.family.concurrence(param);
    let undefined = |param| SweepPoint {
        param,
        eta: None,
        s_bell: None,
        concurrence,
        s_bell_std: None,
    };
    let point = match &config.estimator {
        Estimator::AnalyticOracle => {
            let etas = settings.map(|d| config.family.eta_oracle(d));
            SweepPoint {
                param,
                eta: Some(config.family.eta_oracle(param)),
                s_bell: Some(bell_parameter(etas[0], etas[1], etas[2], etas[3])),
                concurrence,
                s_bell_std: None,
            }
        }
        Estimator::StokesDirect => {
            let mut etas = [0.0; 4];
            let mut degenerate = false;
            for (e, d) in etas.iter_mut().zip(settings) {
                match eta_stokes_direct(config.family, d) {
                    Ok(v) => *e = v,
                    Err(Error::DegenerateStokes) => {
                        degenerate = true;
                        break;
                    }
                    Err(other) => return Err(other),
                }
            }
            if degenerate {
                undefined(param)
            } else {
                SweepPoint {
                    param,
                    eta: Some(etas[1]),
                    s_bell: Some(bell_parameter(etas[0], etas[1], etas[2], etas[3])),
                    concurrence,
                    s_bell_std: None,
                }
            }
        }
        Estimator::Tomography { noise, repetitions } => {
            match tomography_point(config, index, &settings, noise, *repetitions)? {
                Some((eta_mean, s_mean, s_std)) => SweepPoint {
                    param,
                    eta: Some(eta_mean),
                    s_bell: Some(s_mean),
                    concurrence,
                    s_bell_std: Some(s_std),
                },
                None => undefined(param),
            }
        }
    };
    Ok(point)
}

/// Per-repetition tomographic CHSH estimate; `None` marks a degenerate point.
fn tomography_point(
    config: &SweepConfig,
    index: usize,
    settings: &[f64; 4],
    noise: &NoiseModel,
    repetitions: u32,
) -> Result<Option<(f64, f64, f64)>> {
    let point_seed = mix_seed(noise.seed, index as u64);
    let mut s_values = Vec::with_capacity(repetitions as usize);
    let mut eta_values = Vec::with_capacity(repetitions as usize);
    for rep in 0..repetitions {
        let rep_seed = mix_seed(point_seed, rep as u64);
        let mut etas = [0.0; 4];
        for (k, (e, d)) in etas.iter_mut().zip(settings).enumerate() {
            let state = config.family.state(*d);
            let noise_k = NoiseModel {
                sigma_rel: noise.sigma_rel,
                seed: mix_seed(rep_seed, k as u64),
            };
            let (path_rec, pol_rec) = simulate_records(&state, &noise_k);
            let sa = reconstruct_pol_stokes(&pol_rec)?;
            let sb = reconstruct_path_stokes(&path_rec)?;
            match correlation_eta(&sa, &sb) {
                Ok(v) => *e = v,
                Err(Error::DegenerateStokes) => return Ok(None),
                Err(other) => return Err(other),
            }
        }
        eta_values.push(etas[1]);
        s_values.push(bell_parameter(etas[0], etas[1], etas[2], etas[3]));
    }
    let n = s_values.len() as f64;
    let eta_mean = eta_values.iter().sum::<f64>() / n;
    let s_mean = s_values.iter().sum::<f64>() / n;
    let s_std = if s_values.len() > 1 {
        (s_values.iter().map(|s| (s - s_mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(Some((eta_mean, s_mean, s_std)))
}

/// Locate the peak of the analytic-oracle Bell curve for a family: a coarse
/// one-degree scan of `[0, 2 pi)` followed by golden-section refinement of
/// the bracketing interval down to width 1e-10.
///
/// Returns `(param_star, s_star)`.
pub fn maximize_bell(family: Family, delta1_fixed: f64) -> (f64, f64) {
    let objective = |param: f64| {
        let s = settings_from_free_param(param, delta1_fixed).as_array();
        let etas = s.map(|d| family.eta_oracle(d));
        bell_parameter(etas[0], etas[1], etas[2], etas[3])
    };
    let step = std::f64::consts::TAU / 360.0;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..360 {
        let v = objective(i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let center = best_i as f64 * step;
    let (mut a, mut b) = (center - step, center + step);
    // Golden-section search for the maximum on [a, b].
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    while b - a > 1e-10 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        }
    }
    let param = 0.5 * (a + b);
    (param, objective(param))
}

// ---------------------------------------------------------------------------
// Local-hidden-variable engine.
// ---------------------------------------------------------------------------

/// Alice's measurement setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AliceSetting {
    A,
    APrime,
}

/// Bob's measurement setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BobSetting {
    B,
    BPrime,
}

/// A deterministic local-hidden-variable strategy over a finite space:
/// a distribution over hidden states and, per hidden state, dichotomic
/// outcomes for each of the four settings.
#[derive(Debug, Clone, PartialEq)]
pub struct LhvStrategy {
    rho: Vec<f64>,
    /// `[A_a(lambda), A_a'(lambda)]` per hidden state, each exactly +-1.
    alice: Vec<[i8; 2]>,
    /// `[B_b(lambda), B_b'(lambda)]` per hidden state.
    bob: Vec<[i8; 2]>,
}

impl LhvStrategy {
    pub fn new(rho: Vec<f64>, alice: Vec<[i8; 2]>, bob: Vec<[i8; 2]>) -> Result<Self> {
        let n = rho.len();
        if n == 0 || n > MAX_LAMBDA {
            return Err(Error::InvalidParameter(format!(
                "hidden-variable space must have between 1 and {MAX_LAMBDA} elements, got {n}"
            )));
        }
        if alice.len() != n || bob.len() != n {
            return Err(Error::InvalidParameter(
                "assignment tables must match the distribution length".into(),
            ));
        }
        if rho.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidParameter(
                "probabilities must be nonnegative".into(),
            ));
        }
        let total: f64 = rho.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "probabilities must sum to 1, got {total}"
            )));
        }
        let dichotomic = |table: &[[i8; 2]]| {
            table
                .iter()
                .all(|row| row.iter().all(|&v| v == 1 || v == -1))
        };
        if !dichotomic(&alice) || !dichotomic(&bob) {
            return Err(Error::InvalidParameter(
                "assignments must be exactly +1 or -1".into(),
            ));
        }
        Ok(Self { rho, alice, bob })
    }

    /// The strategy that answers +1 everywhere; saturates the bound at
    /// exactly 2.
    pub fn saturating() -> Self {
        Self {
            rho: vec![1.0],
            alice: vec![[1, 1]],
            bob: vec![[1, 1]],
        }
    }

    /// Draw a random strategy: hidden-space size uniform in
    /// `1..=max_lambda`, uniformly random sign tables, and a flat-Dirichlet
    /// distribution over the hidden states.
    pub fn sample(seed: u64, max_lambda: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=max_lambda.clamp(1, MAX_LAMBDA));
        let sign = |rng: &mut ChaCha8Rng| if rng.random::<bool>() { 1i8 } else { -1i8 };
        let alice = (0..n).map(|_| [sign(&mut rng), sign(&mut rng)]).collect();
        let bob = (0..n).map(|_| [sign(&mut rng), sign(&mut rng)]).collect();
        // Exponential draws normalized to a flat Dirichlet.
        let weights: Vec<f64> = (0..n)
            .map(|_| -(1.0 - rng.random::<f64>()).ln().max(f64::MIN_POSITIVE))
            .collect();
        let total: f64 = weights.iter().sum();
        let rho = weights.iter().map(|w| w / total).collect();
        Self {
            rho,
            alice,
            bob,
        }
    }

    pub fn lambda_count(&self) -> usize {
        self.rho.len()
    }

    fn a(&self, setting: AliceSetting, lambda: usize) -> i32 {
        let idx = match setting {
            AliceSetting::A => 0,
            AliceSetting::APrime => 1,
        };
        self.alice[lambda][idx] as i32
    }

    fn b(&self, setting: BobSetting, lambda: usize) -> i32 {
        let idx = match setting {
            BobSetting::B => 0,
            BobSetting::BPrime => 1,
        };
        self.bob[lambda][idx] as i32
    }

    /// `sum_lambda rho(lambda) A(sa, lambda) B(sb, lambda)`, in `[-1, 1]`.
    pub fn correlation(&self, sa: AliceSetting, sb: BobSetting) -> f64 {
        (0..self.lambda_count())
            .map(|l| self.rho[l] * f64::from(self.a(sa, l) * self.b(sb, l)))
            .sum()
    }

    /// The pointwise CHSH combination
    /// `[A_a + A_a'] B_b + [A_a - A_a'] B_b'`, always exactly +-2 because
    /// one bracket vanishes and the other is +-2.
    pub fn pointwise_s(&self, lambda: usize) -> i32 {
        let (a, ap) = (
            self.a(AliceSetting::A, lambda),
            self.a(AliceSetting::APrime, lambda),
        );
        let (b, bp) = (
            self.b(BobSetting::B, lambda),
            self.b(BobSetting::BPrime, lambda),
        );
        (a + ap) * b + (a - ap) * bp
    }

    /// The CHSH value of the strategy,
    /// `|eta(a,b) + eta(a,b') + eta(a',b) - eta(a',b')|`, never above 2.
    ///
    /// Also re-verifies that every hidden state's pointwise combination is
    /// exactly +-2, the step that forces the classical bound.
    pub fn bell(&self) -> f64 {
        for l in 0..self.lambda_count() {
            let s = self.pointwise_s(l);
            assert!(s == 2 || s == -2, "pointwise CHSH value {s} at lambda {l}");
        }
        use {AliceSetting::*, BobSetting::*};
        let value = self.correlation(A, B) + self.correlation(A, BPrime)
            + self.correlation(APrime, B)
            - self.correlation(APrime, BPrime);
        value.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn correlation_eta_basics() {
        let x = StokesVector::new(1.0, 0.0, 0.0);
        let y = StokesVector::new(0.0, 1.0, 0.0);
        assert_abs_diff_eq!(correlation_eta(&x, &x).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(correlation_eta(&x, &y).unwrap(), 0.0, epsilon = 1e-15);
        assert_eq!(
            correlation_eta(&StokesVector::new(0.0, 0.0, 0.0), &x),
            Err(Error::DegenerateStokes)
        );
    }

    #[test]
    fn correlation_eta_scale_invariance_and_symmetry() {
        let a = StokesVector::new(0.3, -0.2, 0.5);
        let b = StokesVector::new(-0.1, 0.7, 0.2);
        let base = correlation_eta(&a, &b).unwrap();
        assert_abs_diff_eq!(
            correlation_eta(&a.scale(7.3), &b).unwrap(),
            base,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            correlation_eta(&b, &a).unwrap(),
            base,
            epsilon = 1e-15
        );
        assert!(base.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn entangled_state_correlation_is_sin_theta() {
        let (sa, sb) = stokes_pair(&target_entangled(FRAC_PI_4));
        let eta = correlation_eta(&sa, &sb).unwrap();
        assert_abs_diff_eq!(eta, FRAC_PI_4.sin(), epsilon = 1e-9);
    }

    #[test]
    fn closed_forms_match_direct_stokes_on_grids() {
        for k in 0..100 {
            let delta = TAU * (k as f64) / 100.0;
            let direct = eta_stokes_direct(Family::Product, delta).unwrap();
            assert_abs_diff_eq!(direct, eta_product(delta), epsilon = 1e-9);
        }
        for k in 0..100 {
            let theta = TAU * (k as f64) / 100.0;
            if (theta - FRAC_PI_2).abs() < 1e-3 || (theta - 3.0 * FRAC_PI_2).abs() < 1e-3 {
                continue;
            }
            let direct = eta_stokes_direct(Family::Entangled, theta).unwrap();
            assert_abs_diff_eq!(direct, eta_entangled(theta), epsilon = 1e-9);
        }
    }

    #[test]
    fn bell_parameter_values() {
        assert_abs_diff_eq!(bell_parameter(1.0, 1.0, 1.0, 1.0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(bell_parameter(0.0, 0.0, 0.0, 0.0), 0.0, epsilon = 1e-15);
        // Settings (-3pi/4, 3pi/4, 3pi/4, 9pi/4) under the cosine family.
        let h = SQRT2 / 2.0;
        assert_abs_diff_eq!(
            bell_parameter(-h, -h, -h, h),
            2.0 * SQRT2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn settings_respect_the_identity() {
        let s = settings_from_free_param(3.0 * FRAC_PI_4, -3.0 * FRAC_PI_4);
        assert_abs_diff_eq!(s.delta4, 9.0 * FRAC_PI_4, epsilon = 1e-12);
        for k in 0..200 {
            let delta = -10.0 + 0.1 * k as f64;
            let s = settings_from_free_param(delta, -3.0 * FRAC_PI_4);
            assert!(
                ((s.delta1 + s.delta4) - (s.delta2 + s.delta3)).abs() <= 1e-12,
                "identity defect at delta {delta}"
            );
            assert!(CorrelationSettings::new(s.delta1, s.delta2, s.delta3, s.delta4).is_ok());
        }
        assert!(CorrelationSettings::new(0.0, 1.0, 1.0, 1.9).is_err());
    }

    #[test]
    fn oracle_sweep_hits_the_published_points() {
        let config = SweepConfig::standard(Family::Product, Estimator::AnalyticOracle);
        let table = sweep(&config).unwrap();
        // Grid point 135 is delta = 3 pi / 4.
        let peak = &table[135];
        assert_abs_diff_eq!(peak.s_bell.unwrap(), 2.0 * SQRT2, epsilon = 1e-12);

        let config = SweepConfig::standard(Family::Entangled, Estimator::AnalyticOracle);
        let table = sweep(&config).unwrap();
        let classical = &table[90]; // theta = pi/2
        assert_abs_diff_eq!(classical.s_bell.unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(classical.concurrence, 1.0, epsilon = 1e-12);
        let tsirelson = &table[315]; // theta = 7 pi / 4
        assert_abs_diff_eq!(tsirelson.s_bell.unwrap(), 2.0 * SQRT2, epsilon = 1e-12);
        assert_abs_diff_eq!(tsirelson.concurrence, SQRT2 / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn stokes_direct_sweep_flags_degenerate_entangled_points() {
        let config = SweepConfig::standard(Family::Entangled, Estimator::StokesDirect);
        let table = sweep(&config).unwrap();
        let gap = &table[90]; // theta = pi/2 is maximally mixed in the path
        assert!(gap.eta.is_none() && gap.s_bell.is_none());
        let fine = &table[100];
        assert!(fine.s_bell.is_some());
        // Defined rows agree with the oracle.
        for row in &table {
            if let Some(eta) = row.eta {
                assert_abs_diff_eq!(eta, eta_entangled(row.param), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn sweep_values_respect_the_tsirelson_ceiling() {
        for family in [Family::Product, Family::Entangled] {
            let config = SweepConfig::standard(family, Estimator::AnalyticOracle);
            for row in sweep(&config).unwrap() {
                let s = row.s_bell.unwrap();
                assert!((0.0..=2.0 * SQRT2 + 1e-9).contains(&s));
            }
        }
    }

    #[test]
    fn maximizer_finds_both_peaks() {
        let (p_star, s_star) = maximize_bell(Family::Product, -3.0 * FRAC_PI_4);
        assert_abs_diff_eq!(s_star, 2.0 * SQRT2, epsilon = 1e-9);
        assert_abs_diff_eq!(p_star, 3.0 * FRAC_PI_4, epsilon = 1e-6);

        let (p_star, s_star) = maximize_bell(Family::Entangled, -3.0 * FRAC_PI_4);
        assert_abs_diff_eq!(s_star, 2.0 * SQRT2, epsilon = 1e-9);
        assert_abs_diff_eq!(p_star, 7.0 * FRAC_PI_4, epsilon = 1e-6);
    }

    #[test]
    fn maximizer_never_exceeds_tsirelson() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let delta1 = rng.random_range(-PI..PI);
            for family in [Family::Product, Family::Entangled] {
                let (_, s_star) = maximize_bell(family, delta1);
                assert!(s_star <= 2.0 * SQRT2 + 1e-9, "s* = {s_star} at {delta1}");
            }
        }
    }

    #[test]
    fn tomography_estimator_is_consistent_noiselessly() {
        let config = SweepConfig {
            family: Family::Product,
            delta1_fixed: -3.0 * FRAC_PI_4,
            grid_start: 0.0,
            grid_end: TAU,
            grid_points: 8,
            estimator: Estimator::Tomography {
                noise: NoiseModel::noiseless(),
                repetitions: 1,
            },
        };
        for row in sweep(&config).unwrap() {
            let s = row.s_bell.expect("product family is never degenerate");
            let oracle = {
                let etas = settings_from_free_param(row.param, config.delta1_fixed)
                    .as_array()
                    .map(eta_product);
                bell_parameter(etas[0], etas[1], etas[2], etas[3])
            };
            assert_abs_diff_eq!(s, oracle, epsilon = 1e-9);
            assert_eq!(row.s_bell_std, Some(0.0));
        }
    }

    #[test]
    fn lhv_correlation_basics() {
        let all_plus = LhvStrategy::saturating();
        assert_abs_diff_eq!(
            all_plus.correlation(AliceSetting::A, BobSetting::B),
            1.0,
            epsilon = 1e-15
        );
        // Perfect anticorrelation over a uniform two-point space.
        let anti = LhvStrategy::new(
            vec![0.5, 0.5],
            vec![[1, 1], [-1, -1]],
            vec![[-1, -1], [1, 1]],
        )
        .unwrap();
        assert_abs_diff_eq!(
            anti.correlation(AliceSetting::A, BobSetting::B),
            -1.0,
            epsilon = 1e-15
        );
        // Point mass: the product of the two assignments.
        let point = LhvStrategy::new(vec![1.0], vec![[1, -1]], vec![[-1, 1]]).unwrap();
        assert_abs_diff_eq!(
            point.correlation(AliceSetting::A, BobSetting::B),
            -1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            point.correlation(AliceSetting::APrime, BobSetting::BPrime),
            -1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn lhv_bell_saturates_and_cancels() {
        assert_abs_diff_eq!(LhvStrategy::saturating().bell(), 2.0, epsilon = 0.0);
        // Equal mixture of two saturating patterns of opposite sign.
        let mixed = LhvStrategy::new(
            vec![0.5, 0.5],
            vec![[1, 1], [1, 1]],
            vec![[1, 1], [-1, -1]],
        )
        .unwrap();
        assert_eq!(mixed.pointwise_s(0), 2);
        assert_eq!(mixed.pointwise_s(1), -2);
        assert_abs_diff_eq!(mixed.bell(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn lhv_random_strategies_obey_the_bound() {
        for case in 0..2000u64 {
            let strategy = LhvStrategy::sample(mix_seed(123, case), 16);
            let s = strategy.bell();
            assert!(s <= 2.0 + 1e-12, "case {case}: S = {s}");
            for l in 0..strategy.lambda_count() {
                assert_eq!(strategy.pointwise_s(l).abs(), 2);
            }
        }
    }

    #[test]
    fn lhv_validation_rejects_bad_input() {
        assert!(LhvStrategy::new(vec![], vec![], vec![]).is_err());
        assert!(LhvStrategy::new(vec![0.6, 0.6], vec![[1, 1]; 2], vec![[1, 1]; 2]).is_err());
        assert!(LhvStrategy::new(vec![1.0], vec![[2, 1]], vec![[1, 1]]).is_err());
        assert!(LhvStrategy::new(vec![0.5, 0.5], vec![[1, 1]], vec![[1, 1], [1, 1]]).is_err());
    }
}
