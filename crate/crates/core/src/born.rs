//! Row-major vectorization of 2x2 matrices and the inner product that makes
//! the Born rule `Tr(A†B)` an ordinary complex dot product.

use nalgebra::Matrix2;
use num_complex::Complex64;

/// Rows of `m` written one after the other.
pub fn vectorize(m: &Matrix2<Complex64>) -> [Complex64; 4] {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

/// `vec(A)* . vec(B)`, identically equal to `Tr(A†B)`.
pub fn vectorize_inner(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Complex64 {
    vectorize(a)
        .iter()
        .zip(vectorize(b))
        .map(|(x, y)| x.conj() * y)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Trace computed by explicit index sums, independent of vectorize_inner.
    fn trace_adjoint_product(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Complex64 {
        let mut t = Complex64::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                t += a[(j, i)].conj() * b[(j, i)];
            }
        }
        t
    }

    #[test]
    fn identity_with_itself_gives_dimension() {
        let id = Matrix2::<Complex64>::identity();
        assert_abs_diff_eq!(vectorize_inner(&id, &id).re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(vectorize_inner(&id, &id).im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn pauli_matrices_are_orthogonal() {
        let sx = Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let sy = Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0));
        assert_abs_diff_eq!(vectorize_inner(&sx, &sy).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn matches_trace_on_fixed_matrices() {
        let a = Matrix2::new(c(0.3, 1.1), c(-0.2, 0.4), c(2.0, -0.5), c(0.0, 0.7));
        let b = Matrix2::new(c(-1.0, 0.2), c(0.6, 0.6), c(0.1, -2.0), c(0.9, 0.0));
        let lhs = vectorize_inner(&a, &b);
        let rhs = trace_adjoint_product(&a, &b);
        assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-12);
    }
}
