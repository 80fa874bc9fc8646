use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::lattice::{CovarianceTable, LatticeSpec};
use crate::error::Result;
use crate::gaussian::wick_order;
use crate::wiener::{RngStream, StreamRng};

/// One sample of the lattice Gaussian free field.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField {
    pub spec: LatticeSpec,
    /// Row-major values, index `t·L + x`.
    pub values: Vec<f64>,
    /// Local variance `G(0, 0)`, the Wick-ordering constant.
    pub c0: f64,
}

impl LatticeField {
    pub fn get(&self, x: usize, t: usize) -> f64 {
        self.values[self.spec.index(x, t)]
    }

    /// Smeared field `φ(f) = a² Σ_x f(x) φ(x)`.
    pub fn pair(&self, f: &[f64]) -> f64 {
        let a2 = self.spec.spacing * self.spec.spacing;
        a2 * f.iter().zip(&self.values).map(|(a, b)| a * b).sum::<f64>()
    }
}

/// Spectral sampler for the lattice free field.
///
/// White noise `w` is filtered as `φ = F⁻¹(√ĝ · F w)` with
/// `ĝ_k = 1/(a²(λ_k + m²))`, which gives `Cov(φ(x), φ(y)) = G(x − y)`.
#[derive(Debug, Clone)]
pub struct GffSampler {
    table: CovarianceTable,
    filter: Vec<f64>,
}

impl GffSampler {
    pub fn new(spec: &LatticeSpec) -> Self {
        Self {
            table: CovarianceTable::new(spec),
            filter: spec.spectral_weights().into_iter().map(f64::sqrt).collect(),
        }
    }

    pub fn spec(&self) -> &LatticeSpec {
        self.table.spec()
    }

    pub fn covariance(&self) -> &CovarianceTable {
        &self.table
    }

    pub fn c0(&self) -> f64 {
        self.table.c0()
    }

    pub fn sample_with(&self, rng: &mut StreamRng) -> LatticeField {
        let spec = *self.table.spec();
        let mut buf: Vec<Complex64> = (0..spec.num_sites())
            .map(|_| Complex64::new(StandardNormal.sample(rng), 0.0))
            .collect();
        let fft = self.table.fft();
        fft.forward(&mut buf);
        buf.iter_mut().zip(&self.filter).for_each(|(b, s)| *b *= s);
        fft.inverse(&mut buf);
        LatticeField {
            spec,
            values: buf.iter().map(|v| v.re).collect(),
            c0: self.c0(),
        }
    }
}

/// One field sample drawn from the start of `rng`.
pub fn sample_gff(spec: &LatticeSpec, rng: &RngStream) -> LatticeField {
    GffSampler::new(spec).sample_with(&mut rng.rng())
}

/// Pointwise Wick power `:φ(x)ᵏ:` with respect to the local variance `c0`.
pub fn wick_power_field(field: &LatticeField, k: u32) -> Result<Vec<f64>> {
    let p = wick_order(k, field.c0)?;
    Ok(field.values.iter().map(|&v| p.eval(&[v])).collect())
}
