//! Stokes (Bloch) vectors of a single degree of freedom.
//!
//! The component convention is pinned so that the diagonal polarization
//! `(|h> + |v>)/sqrt(2)` maps to `(1, 0, 0)`: with basis ordering
//! `(|h>, |v>)` (or `(|x>, |y>)` for the path), `s1 = 2 Re rho_12`,
//! `s2 = -2 Im rho_12`, `s3 = rho_11 - rho_22`. Both degrees of freedom use
//! the same convention, which is what makes the inner-product correlation
//! between their Stokes vectors well defined.

/// Three real Stokes components of one binary degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    pub const fn new(s1: f64, s2: f64, s3: f64) -> Self {
        Self { s1, s2, s3 }
    }

    /// Euclidean norm; for a trace-one density matrix this is the degree of
    /// polarization, 1 for pure states and 0 for the maximally mixed state.
    pub fn degree_of_polarization(&self) -> f64 {
        self.norm()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.s1 * other.s1 + self.s2 * other.s2 + self.s3 * other.s3
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(c * self.s1, c * self.s2, c * self.s3)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.s1 + other.s1, self.s2 + other.s2, self.s3 + other.s3)
    }
}
