//! Simulation of bipartite polarization-path states of classical light.
//!
//! The library models a single beam carrying two binary degrees of freedom,
//! polarization `{h, v}` and path `{x, y}`, as a pure state of four complex
//! amplitudes. On top of that it provides:
//!
//! - Jones-calculus optical elements and their lifted action on the bipartite
//!   state, including arm-conditional placement and counter-propagating
//!   (Sagnac) traversal ([`optics`]);
//! - builders for the two experimental state families, both directly from
//!   their amplitude formulas and through the physical circuit recipes that
//!   prepare them ([`prep`]);
//! - simulated intensity detection and Stokes-vector reconstruction from
//!   projection and interference readings ([`tomo`]);
//! - inner-product correlations between the two Stokes vectors, CHSH/Bell
//!   parameter sweeps that reach the Tsirelson bound, and a finite
//!   local-hidden-variable engine that saturates but never exceeds the
//!   classical bound of 2 ([`bell`]).
//!
//! Amplitude ordering is `(hx, hy, vx, vy)` everywhere, and the Stokes
//! convention is pinned so that the diagonal polarization `(|h> + |v>)/sqrt(2)`
//! maps to `S = (1, 0, 0)`; see [`stokes`] for details.

pub mod acceptance;
pub mod bell;
pub mod born;
pub mod density;
mod error;
pub mod optics;
pub mod prep;
pub mod sampling;
pub mod seeds;
pub mod state;
pub mod stokes;
pub mod tomo;

pub use error::Error;
pub use state::{Arm, Dof, Pol, PolPathState};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Tolerance for validating caller-supplied inputs (normalization, unitarity).
pub const INPUT_TOL: f64 = 1e-9;

/// Tolerance asserted on internal algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-12;
