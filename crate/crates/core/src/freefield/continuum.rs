use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::bessel_k;

/// Integral kernel of `(Δ + m²)⁻¹` on `ℝⁿ`, `n ∈ {1, 2, 3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceKernel {
    pub dim: usize,
    pub mass: f64,
}

impl CovarianceKernel {
    pub fn new(dim: usize, mass: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Unsupported(format!("covariance implemented for n = 1, 2, 3; got {dim}")));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidInput(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { dim, mass })
    }
}

/// `C(r) = (2π)^{-n/2} (m/r)^{(n−2)/2} K_{(n−2)/2}(mr)`.
///
/// Closed forms: `e^{−mr}/(2m)` for `n = 1`, `K₀(mr)/(2π)` for `n = 2`,
/// `e^{−mr}/(4πr)` for `n = 3`.
pub fn covariance(kernel: &CovarianceKernel, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("covariance is singular on the diagonal; need r > 0, got {r}")));
    }
    let m = kernel.mass;
    Ok(match kernel.dim {
        1 => (-m * r).exp() / (2.0 * m),
        2 => bessel_k(0.0, m * r)? / (2.0 * PI),
        3 => (-m * r).exp() / (4.0 * PI * r),
        n => return Err(Error::Unsupported(format!("dimension {n}"))),
    })
}

/// Euclidean two-point Schwinger function of the free field,
/// `S₂(y) = G(y) = C(‖y‖)`, in dimension `y.len()`.
pub fn schwinger_two_point(mass: f64, y: &[f64]) -> Result<f64> {
    let kernel = CovarianceKernel::new(y.len(), mass)?;
    let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(Error::Domain("two-point function is singular at y = 0".into()));
    }
    covariance(&kernel, r)
}

/// Chebyshev degree per panel of [`RadialTable`].
const TABLE_DEGREE: usize = 14;
/// Panel width in `ln r`.
const TABLE_PANEL: f64 = 0.25;

/// Piecewise Chebyshev interpolant of `C(r)` in the variable `ln r` on
/// `[r_min, r_max]`, accurate to about `1e-13` relative.
#[derive(Debug, Clone)]
pub struct RadialTable {
    kernel: CovarianceKernel,
    s_min: f64,
    panel: f64,
    coeffs: Vec<[f64; TABLE_DEGREE]>,
}

impl RadialTable {
    pub fn new(kernel: CovarianceKernel, r_min: f64, r_max: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(Error::InvalidInput(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
        }
        let s_min = r_min.ln();
        let s_max = r_max.ln();
        let n_panels = ((s_max - s_min) / TABLE_PANEL).ceil().max(1.0) as usize;
        let panel = (s_max - s_min) / n_panels as f64;
        let nodes: Vec<f64> = (0..TABLE_DEGREE)
            .map(|j| (PI * (j as f64 + 0.5) / TABLE_DEGREE as f64).cos())
            .collect();
        let mut coeffs = Vec::with_capacity(n_panels);
        for p in 0..n_panels {
            let a = s_min + p as f64 * panel;
            let vals: Vec<f64> = nodes
                .iter()
                .map(|&u| covariance(&kernel, (a + 0.5 * panel * (u + 1.0)).exp()))
                .collect::<Result<_>>()?;
            let mut c = [0.0; TABLE_DEGREE];
            for (k, ck) in c.iter_mut().enumerate() {
                let s: f64 = vals
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / TABLE_DEGREE as f64).cos())
                    .sum();
                *ck = 2.0 * s / TABLE_DEGREE as f64;
            }
            c[0] *= 0.5;
            coeffs.push(c);
        }
        Ok(Self {
            kernel,
            s_min,
            panel,
            coeffs,
        })
    }

    pub fn kernel(&self) -> &CovarianceKernel {
        &self.kernel
    }

    /// `C(r)`; falls back to direct evaluation outside the tabulated range.
    pub fn eval(&self, r: f64) -> f64 {
        let s = r.ln();
        let x = (s - self.s_min) / self.panel;
        let p = x.floor();
        if !(p >= 0.0) || p as usize >= self.coeffs.len() {
            if (p as usize == self.coeffs.len()) && x - p < 1e-9 {
                return self.clenshaw(self.coeffs.len() - 1, 1.0);
            }
            return covariance(&self.kernel, r).unwrap_or(f64::NAN);
        }
        let u = 2.0 * (x - p) - 1.0;
        self.clenshaw(p as usize, u)
    }

    fn clenshaw(&self, panel: usize, u: f64) -> f64 {
        let c = &self.coeffs[panel];
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ck in c.iter().skip(1).rev() {
            let b0 = 2.0 * u * b1 - b2 + ck;
            b2 = b1;
            b1 = b0;
        }
        u * b1 - b2 + c[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let k3 = CovarianceKernel::new(3, 1.0).unwrap();
        assert!((covariance(&k3, 1.0).unwrap() - (-1.0f64).exp() / (4.0 * PI)).abs() < 1e-16);
        let k1 = CovarianceKernel::new(1, 2.0).unwrap();
        assert!((covariance(&k1, 1.0).unwrap() - (-2.0f64).exp() / 4.0).abs() < 1e-16);
    }

    #[test]
    fn bessel_form_in_three_dimensions() {
        // (2π)^{-3/2} (m/r)^{1/2} K_{1/2}(mr) reproduces the closed form
        let m: f64 = 1.3;
        for &r in &[0.1, 1.0, 4.0] {
            let general = (2.0 * PI).powf(-1.5) * (m / r).sqrt() * bessel_k(0.5, m * r).unwrap();
            let k = CovarianceKernel::new(3, m).unwrap();
            assert!((general / covariance(&k, r).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn large_distance_bound() {
        let k = CovarianceKernel::new(3, 1.0).unwrap();
        let r: f64 = 10.0;
        assert!(covariance(&k, r).unwrap() <= (-r).exp() / (4.0 * PI * r) * (1.0 + 1e-15));
    }

    #[test]
    fn domain_errors() {
        let k = CovarianceKernel::new(2, 1.0).unwrap();
        assert!(covariance(&k, 0.0).is_err());
        assert!(CovarianceKernel::new(4, 1.0).is_err());
        assert!(CovarianceKernel::new(2, 0.0).is_err());
        assert!(schwinger_two_point(1.0, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn schwinger_matches_covariance() {
        let y = [1.2, -0.5, 1.6];
        let s = schwinger_two_point(1.0, &y).unwrap();
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        assert_eq!(s, schwinger_two_point(1.0, &neg).unwrap());
        assert!((schwinger_two_point(1.0, &[2.0, 0.0, 0.0]).unwrap() - (-2.0f64).exp() / (8.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn table_interpolates() {
        let k = CovarianceKernel::new(2, 1.0).unwrap();
        let t = RadialTable::new(k, 0.01, 20.0).unwrap();
        for &r in &[0.01, 0.0173, 0.5, 1.0, 3.3, 19.99, 20.0] {
            let exact = covariance(&k, r).unwrap();
            assert!((t.eval(r) / exact - 1.0).abs() < 1e-12, "r={r}: {} vs {exact}", t.eval(r));
        }
    }
}
