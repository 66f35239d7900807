//! The release gate: ten end-to-end checks covering the published curve
//! features, the measurement round trips, the hidden-variable bound and the
//! structural invariants. Each check carries its own tolerance and runtime
//! budget and reports one pass/fail line; the CLI `verify` command and the
//! `acceptance` integration test both run this module.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2, TAU};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bell::{
    bell_parameter, correlation_eta, eta_entangled, eta_product, eta_stokes_direct,
    maximize_bell, settings_from_free_param, stokes_pair, sweep, Estimator, Family,
    LhvStrategy, SweepConfig,
};
use crate::born::vectorize_inner;
use crate::prep::{fidelity, CircuitRecipe};
use crate::sampling::random_state;
use crate::seeds::mix_seed;
use crate::state::{Dof, PolPathState};
use crate::tomo::{
    project_polarization, reconstruct_path_stokes, reconstruct_pol_stokes, simulate_records,
    NoiseModel,
};

/// Master seed for every randomized acceptance check.
const SEED: u64 = 0x0b5e_55ed;

const TSIRELSON: f64 = 2.0 * SQRT_2;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Human-readable summary of what was measured; on failure, every
    /// violated check with its numbers.
    pub detail: String,
    pub runtime: Duration,
}

impl CriterionResult {
    /// One status line, `PASS`/`FAIL` first.
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {:<28} ({:>7.2?}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.runtime,
            self.detail.replace('\n', "; "),
        )
    }
}

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    summary: String,
}

impl Checks {
    fn close(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        if !((got - want).abs() <= tol) {
            self.failures
                .push(format!("{label}: got {got:.12e}, want {want:.12e} (tol {tol:.0e})"));
        }
    }

    fn at_most(&mut self, label: &str, got: f64, bound: f64) {
        if !(got <= bound) {
            self.failures
                .push(format!("{label}: got {got:.12e}, bound {bound:.12e}"));
        }
    }

    fn is_true(&mut self, label: &str, cond: bool) {
        if !cond {
            self.failures.push(label.to_string());
        }
    }

    fn note(&mut self, text: impl AsRef<str>) {
        if !self.summary.is_empty() {
            self.summary.push_str("; ");
        }
        self.summary.push_str(text.as_ref());
    }
}

fn run(
    id: u32,
    name: &'static str,
    budget: Duration,
    body: impl FnOnce(&mut Checks),
) -> CriterionResult {
    let mut checks = Checks::default();
    let start = Instant::now();
    body(&mut checks);
    let runtime = start.elapsed();
    if runtime > budget {
        checks.failures.push(format!(
            "runtime {runtime:.2?} exceeded budget {budget:.2?}"
        ));
    }
    let passed = checks.failures.is_empty();
    let detail = if passed {
        checks.summary
    } else {
        checks.failures.join("\n")
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        runtime,
    }
}

/// Criterion 1: the product-family sweep peaks at the Tsirelson bound.
pub fn criterion_1() -> CriterionResult {
    run(1, "tsirelson_product", Duration::from_secs(1), |c| {
        let delta1 = -3.0 * FRAC_PI_4;
        let table = sweep(&SweepConfig::standard(
            Family::Product,
            Estimator::AnalyticOracle,
        ))
        .expect("oracle sweep");
        let (peak_param, peak_s) = table
            .iter()
            .filter_map(|row| row.s_bell.map(|s| (row.param, s)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty sweep");
        c.close("oracle sweep peak", peak_s, TSIRELSON, 1e-9);
        c.close("oracle peak location", peak_param, 3.0 * FRAC_PI_4, 1e-9);

        let direct = sweep(&SweepConfig::standard(
            Family::Product,
            Estimator::StokesDirect,
        ))
        .expect("direct sweep");
        let peak_direct = direct
            .iter()
            .filter_map(|row| row.s_bell)
            .fold(f64::NEG_INFINITY, f64::max);
        c.close("stokes-direct sweep peak", peak_direct, TSIRELSON, 1e-6);

        let (p_star, s_star) = maximize_bell(Family::Product, delta1);
        c.close("maximizer value", s_star, TSIRELSON, 1e-9);
        c.close("maximizer location", p_star, 3.0 * FRAC_PI_4, 1e-6);
        c.note(format!("peak S = {peak_s:.12} at delta = {peak_param:.6}"));
    })
}

/// Criterion 2: the entangled-family peak reaches the Tsirelson bound at a
/// partially entangled state, with the location derived by the maximizer.
pub fn criterion_2() -> CriterionResult {
    run(2, "tsirelson_entangled", Duration::from_secs(1), |c| {
        let delta1 = -3.0 * FRAC_PI_4;
        let (p_star, s_star) = maximize_bell(Family::Entangled, delta1);
        c.close("maximizer value", s_star, TSIRELSON, 1e-9);
        c.close("maximizer location", p_star, 7.0 * FRAC_PI_4, 1e-6);
        let concurrence = Family::Entangled.concurrence(p_star);
        c.close("concurrence at the peak", concurrence, SQRT_2 / 2.0, 1e-9);
        c.is_true("peak is partially entangled (C < 1)", concurrence < 1.0);

        let table = sweep(&SweepConfig::standard(
            Family::Entangled,
            Estimator::AnalyticOracle,
        ))
        .expect("oracle sweep");
        let row = &table[315]; // theta = 7 pi / 4 on the one-degree grid
        c.close("sweep row at the peak", row.s_bell.unwrap(), TSIRELSON, 1e-9);
        c.note(format!(
            "S = {s_star:.12} at theta = {p_star:.6}, C = {concurrence:.12}"
        ));
    })
}

/// Criterion 3: full entanglement gives only the classical bound.
pub fn criterion_3() -> CriterionResult {
    run(3, "classical_bound_point", Duration::from_secs(1), |c| {
        let delta1 = -3.0 * FRAC_PI_4;
        let oracle_s = {
            let etas = settings_from_free_param(FRAC_PI_2, delta1)
                .as_array()
                .map(eta_entangled);
            bell_parameter(etas[0], etas[1], etas[2], etas[3])
        };
        c.close("oracle S at theta = pi/2", oracle_s, 2.0, 1e-9);
        c.close(
            "concurrence at theta = pi/2",
            Family::Entangled.concurrence(FRAC_PI_2),
            1.0,
            1e-9,
        );
        // The degenerate point itself is excluded for the measured route;
        // probe just next to it.
        for theta in [FRAC_PI_2 - 0.01, FRAC_PI_2 + 0.01] {
            let etas = settings_from_free_param(theta, delta1).as_array().map(|d| {
                eta_stokes_direct(Family::Entangled, d).expect("nondegenerate setting")
            });
            let s = bell_parameter(etas[0], etas[1], etas[2], etas[3]);
            c.close(&format!("stokes-direct S at theta = {theta:.4}"), s, 2.0, 5e-2);
        }
        c.note(format!("oracle S = {oracle_s:.12}"));
    })
}

/// Criterion 4: measured correlations match their closed forms on grids.
pub fn criterion_4() -> CriterionResult {
    run(4, "correlation_closed_forms", Duration::from_secs(2), |c| {
        let mut worst = 0.0_f64;
        for k in 0..360 {
            let delta = TAU * (k as f64) / 360.0;
            let direct = eta_stokes_direct(Family::Product, delta).expect("never degenerate");
            worst = worst.max((direct - eta_product(delta)).abs());
        }
        c.at_most("product-family worst deviation from cos", worst, 1e-9);

        let mut worst_ent = 0.0_f64;
        for k in 0..360 {
            let theta = TAU * (k as f64) / 360.0;
            if (theta - FRAC_PI_2).abs() < 1e-3 || (theta - 3.0 * FRAC_PI_2).abs() < 1e-3 {
                continue;
            }
            let direct = eta_stokes_direct(Family::Entangled, theta).expect("nondegenerate");
            worst_ent = worst_ent.max((direct - eta_entangled(theta)).abs());
        }
        c.at_most("entangled-family worst deviation from sin", worst_ent, 1e-9);
        c.note(format!(
            "max |eta - cos| = {worst:.3e}, max |eta - sin| = {worst_ent:.3e}"
        ));
    })
}

/// Criterion 5: both circuit recipes reproduce their target states.
pub fn criterion_5() -> CriterionResult {
    run(5, "recipe_fidelity", Duration::from_secs(1), |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(SEED, 5));
        let mut worst_sagnac = 1.0_f64;
        let mut worst_mz = 1.0_f64;
        for _ in 0..50 {
            let delta = rng.random_range(0.0..TAU);
            let recipe = CircuitRecipe::sagnac_product(delta);
            worst_sagnac = worst_sagnac.min(fidelity(&recipe.run(), &recipe.target()));
        }
        for _ in 0..50 {
            let theta = rng.random_range(0.0..TAU);
            let recipe = CircuitRecipe::mz_entangled(theta);
            worst_mz = worst_mz.min(fidelity(&recipe.run(), &recipe.target()));
        }
        c.is_true(
            &format!("Sagnac recipe fidelity >= 1 - 1e-9 (worst {worst_sagnac:.15})"),
            worst_sagnac >= 1.0 - 1e-9,
        );
        c.is_true(
            &format!("Mach-Zehnder recipe fidelity >= 1 - 1e-12 (worst {worst_mz:.15})"),
            worst_mz >= 1.0 - 1e-12,
        );
        c.note(format!(
            "worst fidelities: Sagnac {worst_sagnac:.15}, MZ {worst_mz:.15}"
        ));
    })
}

/// Criterion 6: noiseless tomography reproduces the algebraic marginals, and
/// the projection identities hold.
pub fn criterion_6() -> CriterionResult {
    run(6, "tomography_round_trip", Duration::from_secs(5), |c| {
        let mut worst = 0.0_f64;
        for family in [Family::Product, Family::Entangled] {
            for k in 0..100 {
                let param = TAU * (k as f64) / 100.0;
                let state = family.state(param);
                let (path_rec, pol_rec) = simulate_records(&state, &NoiseModel::noiseless());
                let got_path = reconstruct_path_stokes(&path_rec).expect("lit record");
                let got_pol = reconstruct_pol_stokes(&pol_rec).expect("lit record");
                let (want_pol, want_path) = stokes_pair(&state);
                for (got, want) in [(got_path, want_path), (got_pol, want_pol)] {
                    worst = worst
                        .max((got.s1 - want.s1).abs())
                        .max((got.s2 - want.s2).abs())
                        .max((got.s3 - want.s3).abs());
                }
            }
        }
        c.at_most("worst componentwise reconstruction error", worst, 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(SEED, 6));
        let mut worst_mix = 0.0_f64;
        let mut worst_proj = 0.0_f64;
        for _ in 0..100 {
            let state = random_state(&mut rng);
            let mh = project_polarization(&state, crate::Pol::H);
            let mv = project_polarization(&state, crate::Pol::V);
            let marginal = state.density().partial_trace(Dof::Path);
            worst_mix = worst_mix.max(
                (mh + mv - marginal.matrix())
                    .iter()
                    .map(|d| d.norm())
                    .fold(0.0, f64::max),
            );
            for m in [mh, mv] {
                let tr = m.trace().re;
                if tr < 1e-6 {
                    continue;
                }
                let p = m / Complex64::from(tr);
                worst_proj = worst_proj.max(
                    (p * p - p).iter().map(|d| d.norm()).fold(0.0, f64::max),
                );
            }
        }
        c.at_most("projected-mixture identity defect", worst_mix, 1e-12);
        c.at_most("projector idempotence defect", worst_proj, 1e-12);
        c.note(format!(
            "reconstruction error {worst:.3e}, identity defect {worst_mix:.3e}"
        ));
    })
}

/// Criterion 7: random finite hidden-variable strategies never beat 2, the
/// pointwise combination is exactly +-2, and the bound is attainable.
pub fn criterion_7() -> CriterionResult {
    run(7, "lhv_bound", Duration::from_secs(10), |c| {
        let mut max_s = f64::NEG_INFINITY;
        let mut pointwise_ok = true;
        for case in 0..100_000u64 {
            let strategy = LhvStrategy::sample(mix_seed(SEED, case), 16);
            let s = strategy.bell();
            max_s = max_s.max(s);
            pointwise_ok &=
                (0..strategy.lambda_count()).all(|l| strategy.pointwise_s(l).abs() == 2);
        }
        c.at_most("max |S| over 100000 strategies", max_s, 2.0 + 1e-12);
        c.is_true("pointwise CHSH combination is exactly +-2", pointwise_ok);
        let saturating = LhvStrategy::saturating().bell();
        c.is_true(
            &format!("a constructed strategy attains exactly 2 (got {saturating})"),
            saturating == 2.0,
        );
        c.note(format!("max |S| = {max_s:.15}"));
    })
}

/// Criterion 8: the vectorized inner product reproduces `Tr(A†B)`.
pub fn criterion_8() -> CriterionResult {
    run(8, "born_vectorization", Duration::from_secs(1), |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(SEED, 8));
        let mut worst = 0.0_f64;
        for _ in 0..1000 {
            let mut draw = || {
                Matrix2::from_fn(|_, _| {
                    Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
                })
            };
            let a = draw();
            let b = draw();
            let trace = (a.adjoint() * b).trace();
            worst = worst.max((vectorize_inner(&a, &b) - trace).norm());
        }
        c.at_most("worst |vec(A)*.vec(B) - Tr(A†B)|", worst, 1e-12);
        c.note(format!("worst deviation {worst:.3e}"));
    })
}

/// Criterion 9: structural invariants over random pure states.
pub fn criterion_9() -> CriterionResult {
    run(9, "structural_invariants", Duration::from_secs(5), |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(SEED, 9));
        let mut worst_purity = 0.0_f64;
        let mut worst_trace = 0.0_f64;
        let mut worst_herm = 0.0_f64;
        let mut worst_balance = 0.0_f64;
        let mut worst_pythagoras = 0.0_f64;
        let mut worst_phase = 0.0_f64;
        for _ in 0..1000 {
            let state = random_state(&mut rng);
            let rho = state.density();
            worst_purity = worst_purity.max((rho.purity() - 1.0).abs());
            worst_trace = worst_trace.max((rho.matrix().trace() - Complex64::ONE).norm());
            worst_herm = worst_herm.max(
                (rho.matrix() - rho.matrix().adjoint())
                    .iter()
                    .map(|d| d.norm())
                    .fold(0.0, f64::max),
            );
            let (sa, sb) = stokes_pair(&state);
            worst_balance = worst_balance.max((sa.norm() - sb.norm()).abs());
            let (concurrence, dop) = (state.concurrence(), sa.norm());
            worst_pythagoras =
                worst_pythagoras.max((concurrence.powi(2) + dop.powi(2) - 1.0).abs());
            // The same state with a global phase must give the same matrix.
            let shifted = state.with_global_phase(rng.random_range(0.0..TAU));
            worst_phase = worst_phase.max(
                (shifted.density().matrix() - rho.matrix())
                    .iter()
                    .map(|d| d.norm())
                    .fold(0.0, f64::max),
            );
        }
        c.at_most("purity defect", worst_purity, 1e-12);
        c.at_most("trace defect", worst_trace, 1e-12);
        c.at_most("Hermiticity defect", worst_herm, 1e-12);
        c.at_most("|S_pol| vs |S_path| mismatch", worst_balance, 1e-9);
        c.at_most("C^2 + P^2 - 1 defect", worst_pythagoras, 1e-9);
        c.at_most("global-phase dependence", worst_phase, 1e-12);
        c.note(format!(
            "worst defects: purity {worst_purity:.2e}, balance {worst_balance:.2e}, \
             C^2+P^2 {worst_pythagoras:.2e}"
        ));
    })
}

/// Criterion 10: the recorded general-phase instance `phi = (0, pi/2, 0, 0)`
/// with equal magnitudes, asserted at its claimed correlation value of 1
/// against the closed form `cos(phi2 - phi3) = 0`.
///
/// The measured inner-product correlation of this state is in fact
/// `cos(phi2 - phi3)`: for equal magnitudes the identity
/// `eta = cos(phi2 - phi3)` holds for every phase tuple with nonvanishing
/// marginals, so the claimed divergence between the two routes does not
/// materialize. The check is kept exactly as claimed and reports the
/// measured value next to the closed form.
pub fn criterion_10() -> CriterionResult {
    run(10, "general_phase_instance", Duration::from_secs(1), |c| {
        let phi = [0.0, FRAC_PI_2, 0.0, 0.0];
        let state = PolPathState::from_polar([0.5; 4], phi).expect("valid state");
        let (sa, sb) = stokes_pair(&state);
        let eta = correlation_eta(&sa, &sb).expect("marginals are not degenerate");
        let closed_form = (phi[1] - phi[2]).cos();
        c.close("closed form cos(phi2 - phi3)", closed_form, 0.0, 1e-9);
        c.close("correlation_eta at the recorded instance", eta, 1.0, 1e-9);
        if (eta - closed_form).abs() <= 1e-9 {
            c.failures.push(format!(
                "measured eta = {eta:.12e} coincides with cos(phi2 - phi3) = \
                 {closed_form:.12e}; the claimed divergence (eta = 1) does not occur"
            ));
        }
        c.note(format!("eta = {eta:.6}, cos(phi2 - phi3) = {closed_form:.6}"));
    })
}

/// Run all ten criteria in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}

/// Render the full report with one line per criterion and a final verdict.
pub fn report(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(out, "{}", r.line());
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let total: Duration = results.iter().map(|r| r.runtime).sum();
    let _ = writeln!(
        out,
        "{passed}/{} criteria passed in {total:.2?}",
        results.len()
    );
    out
}
