use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Real symmetric matrix together with its eigen-decomposition.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    matrix: DMatrix<f64>,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl QuadraticForm {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "quadratic form must be a non-empty square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = matrix.amax().max(1.0);
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidInput(format!("matrix is not symmetric (deviation {asym:e})")));
        }
        let eig = SymmetricEigen::new(matrix.clone());
        Ok(Self {
            matrix,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `(n₊, n₋)`: numbers of positive and negative eigenvalues.
    pub fn signature(&self) -> (usize, usize) {
        let tol = self.zero_tol();
        let pos = self.eigenvalues.iter().filter(|&&l| l > tol).count();
        let neg = self.eigenvalues.iter().filter(|&&l| l < -tol).count();
        (pos, neg)
    }

    /// `n₊ − n₋`.
    pub fn sign(&self) -> i64 {
        let (p, n) = self.signature();
        p as i64 - n as i64
    }

    pub fn is_singular(&self) -> bool {
        let tol = self.zero_tol();
        self.eigenvalues.iter().any(|l| l.abs() <= tol)
    }

    fn zero_tol(&self) -> f64 {
        1e-14 * self.eigenvalues.amax().max(f64::MIN_POSITIVE)
    }

    /// `⟨Q⁻¹w, w⟩` for complex `w` (bilinear, no conjugation).
    fn inverse_bilinear(&self, w: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(i);
            let proj: Complex64 = v.iter().zip(w).map(|(&a, &b)| b * a).sum();
            acc += proj * proj / lambda;
        }
        acc
    }
}

/// Oscillatory Gaussian integral
/// `∫ e^{(i/2)⟨Qx,x⟩} e^{⟨w,x⟩} dx = e^{iπ·sign(Q)/4} |det(Q/2π)|^{-1/2} e^{(i/2)⟨Q⁻¹w,w⟩}`,
/// understood as the `ε → 0` limit of the `e^{-ε|x|²/2}`-damped integral.
pub fn fresnel_integral(q: &QuadraticForm, w: &[f64]) -> Result<Complex64> {
    let wc: Vec<Complex64> = w.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fresnel_integral_complex(q, &wc)
}

/// [`fresnel_integral`] with a complex linear coefficient. An oscillatory
/// linear phase `e^{i⟨b,x⟩}` corresponds to `w = i·b`.
pub fn fresnel_integral_complex(q: &QuadraticForm, w: &[Complex64]) -> Result<Complex64> {
    if w.len() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            got: w.len(),
        });
    }
    if q.is_singular() {
        return Err(Error::SingularMatrix);
    }
    let log_det: f64 = q.eigenvalues.iter().map(|l| (l.abs() / (2.0 * PI)).ln()).sum();
    let modulus = (-0.5 * log_det).exp();
    let phase = Complex64::from_polar(modulus, PI * q.sign() as f64 / 4.0);
    let linear = (Complex64::new(0.0, 0.5) * q.inverse_bilinear(w)).exp();
    Ok(phase * linear)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_positive() {
        let q = QuadraticForm::from_diagonal(&[1.0]).unwrap();
        let v = fresnel_integral(&q, &[0.0]).unwrap();
        let expected = Complex64::from_polar((2.0 * PI).sqrt(), PI / 4.0);
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn negative_is_conjugate() {
        let qp = QuadraticForm::from_diagonal(&[1.0]).unwrap();
        let qn = QuadraticForm::from_diagonal(&[-1.0]).unwrap();
        let a = fresnel_integral(&qp, &[0.0]).unwrap();
        let b = fresnel_integral(&qn, &[0.0]).unwrap();
        assert!((a.conj() - b).norm() < 1e-14);
    }

    #[test]
    fn indefinite_signature_zero() {
        let q = QuadraticForm::from_diagonal(&[1.0, -1.0]).unwrap();
        assert_eq!(q.sign(), 0);
        let v = fresnel_integral(&q, &[0.0, 0.0]).unwrap();
        assert!((v - Complex64::new(2.0 * PI, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn positive_definite_modulus() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.5, 3.0, 0.2, 0.0, 0.2, 1.5]);
        let det = m.determinant();
        let q = QuadraticForm::new(m).unwrap();
        let v = fresnel_integral(&q, &[0.0; 3]).unwrap();
        assert!((v.norm() - (2.0 * PI).powf(1.5) / det.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn singular_rejected() {
        let q = QuadraticForm::from_diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(fresnel_integral(&q, &[0.0, 0.0]), Err(Error::SingularMatrix));
    }

    #[test]
    fn asymmetric_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(QuadraticForm::new(m).is_err());
    }

    #[test]
    fn dimension_checked() {
        let q = QuadraticForm::from_diagonal(&[1.0, 2.0]).unwrap();
        assert!(matches!(fresnel_integral(&q, &[0.0]), Err(Error::DimensionMismatch { .. })));
    }
}
