//! Random states and local unitaries for Monte Carlo checks.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::state::PolPathState;

/// A pure state drawn uniformly (Haar) from the unit sphere in C^4.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> PolPathState {
    loop {
        let mut amps = [Complex64::ZERO; 4];
        for a in &mut amps {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *a = Complex64::new(re, im);
        }
        if let Ok(s) = PolPathState::from_amplitudes(amps) {
            return s;
        }
    }
}

/// A Haar-random 2x2 unitary: a normalized complex Gaussian pair fixes the
/// SU(2) part, plus an independent overall phase.
pub fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<Complex64> {
    let (alpha, beta) = loop {
        let draw = |rng: &mut R| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        };
        let a = draw(rng);
        let b = draw(rng);
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n > 1e-6 {
            break (a / n, b / n);
        }
    };
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    Matrix2::new(
        phase * alpha,
        phase * beta,
        phase * -beta.conj(),
        phase * alpha.conj(),
    )
}
