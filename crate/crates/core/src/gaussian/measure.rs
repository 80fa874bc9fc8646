use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::wiener::{RngStream, StreamRng};

const SYMMETRY_TOL: f64 = 1e-12;

/// Gaussian measure on `ℝⁿ` with mean `a` and covariance `Σ`.
#[derive(Debug, Clone)]
pub struct GaussianSpec {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl GaussianSpec {
    /// Validates symmetry to `1e-12` (relative) and positive definiteness.
    pub fn new(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = mean.len();
        if n == 0 || cov.nrows() != n || cov.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: cov.nrows(),
            });
        }
        let scale = cov.amax().max(1.0);
        if (&cov - cov.transpose()).amax() > SYMMETRY_TOL * scale {
            return Err(Error::InvalidInput("covariance is not symmetric".into()));
        }
        let chol = Cholesky::new(cov.clone()).ok_or(Error::NotPositiveDefinite)?;
        if chol.l_dirty().diagonal().iter().any(|d| !(*d > 0.0)) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self {
            mean: DVector::from_vec(mean),
            cov,
            chol,
        })
    }

    pub fn centered(cov: DMatrix<f64>) -> Result<Self> {
        let n = cov.nrows();
        Self::new(vec![0.0; n], cov)
    }

    /// Standard Gaussian on `ℝⁿ`.
    pub fn standard(n: usize) -> Result<Self> {
        Self::centered(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn is_centered(&self) -> bool {
        self.mean.iter().all(|&v| v == 0.0)
    }

    /// Pairing `q(u, v) = ⟨Σu, v⟩`.
    pub fn pairing(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        let n = self.dim();
        if u.len() != n || v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: if u.len() != n { u.len() } else { v.len() },
            });
        }
        let su = &self.cov * DVector::from_column_slice(u);
        Ok(su.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    /// Matrix of pairings `q(uᵢ, uⱼ)`.
    pub fn pairing_matrix(&self, us: &[Vec<f64>]) -> Result<DMatrix<f64>> {
        let k = us.len();
        let mut q = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let v = self.pairing(&us[i], &us[j])?;
                q[(i, j)] = v;
                q[(j, i)] = v;
            }
        }
        Ok(q)
    }

    /// One draw `a + Lz`, `Σ = LLᵀ`, `z` standard normal.
    pub fn sample_with(&self, rng: &mut StreamRng) -> Vec<f64> {
        let z = DVector::from_iterator(self.dim(), (0..self.dim()).map(|_| StandardNormal.sample(rng)));
        let x = &self.mean + self.chol.l() * z;
        x.iter().copied().collect()
    }

    /// Density with respect to Lebesgue measure,
    /// `(2π)^{-n/2} det(Σ)^{-1/2} e^{−½⟨Σ⁻¹(x−a), x−a⟩}`.
    pub fn density(&self, x: &[f64]) -> Result<f64> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
        let d = DVector::from_column_slice(x) - &self.mean;
        let solved = self.chol.solve(&d);
        let quad = d.dot(&solved);
        let log_det: f64 = self.chol.l_dirty().diagonal().iter().map(|v| 2.0 * v.ln()).sum();
        Ok((-0.5 * (quad + log_det + n as f64 * (2.0 * std::f64::consts::PI).ln())).exp())
    }
}

/// One draw from `spec`, taken from the start of `rng`.
pub fn sample(spec: &GaussianSpec, rng: &RngStream) -> Vec<f64> {
    spec.sample_with(&mut rng.rng())
}

/// Characteristic function `E[e^{i⟨y,X⟩}] = e^{i⟨a,y⟩ − ½⟨Σy,y⟩}`.
pub fn characteristic(spec: &GaussianSpec, y: &[f64]) -> Result<Complex64> {
    let yc: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    characteristic_complex(spec, &yc)
}

/// Analytic continuation of [`characteristic`] to complex arguments
/// (bilinear in `y`, no conjugation).
pub fn characteristic_complex(spec: &GaussianSpec, y: &[Complex64]) -> Result<Complex64> {
    let n = spec.dim();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: y.len() });
    }
    let mut lin = Complex64::new(0.0, 0.0);
    let mut quad = Complex64::new(0.0, 0.0);
    for i in 0..n {
        lin += spec.mean[i] * y[i];
        for j in 0..n {
            quad += spec.cov[(i, j)] * y[i] * y[j];
        }
    }
    Ok((Complex64::i() * lin - 0.5 * quad).exp())
}

/// Cameron–Martin density of the standard Gaussian shifted by `h`, relative
/// to the unshifted one: `w ↦ e^{−½‖h‖²} e^{⟨h,w⟩}`.
///
/// For any integrable `g`, `E[density(Z)·g(Z)] = E[g(Z + h)]`.
pub fn cameron_martin_density(h: &[f64]) -> impl Fn(&[f64]) -> f64 + Send + Sync + 'static {
    let h = h.to_vec();
    let half_norm = 0.5 * h.iter().map(|v| v * v).sum::<f64>();
    move |w: &[f64]| {
        let dot: f64 = h.iter().zip(w).map(|(a, b)| a * b).sum();
        (dot - half_norm).exp()
    }
}
