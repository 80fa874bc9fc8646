use super::field::{wick_power_field, GffSampler, LatticeField};
use super::lattice::{CovarianceTable, LatticeSpec};
use crate::error::{Error, Result};
use crate::stats::parallel_collect;
use crate::wiener::RngStream;

/// A set of lattice sites.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    side: usize,
    sites: Vec<usize>,
}

impl Region {
    /// The whole lattice.
    pub fn full(spec: &LatticeSpec) -> Self {
        Self {
            side: spec.side,
            sites: (0..spec.num_sites()).collect(),
        }
    }

    /// Rectangle `x0 ≤ x < x0 + width`, `t0 ≤ t < t0 + height`.
    pub fn rect(spec: &LatticeSpec, x0: usize, t0: usize, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 || x0 + width > spec.side || t0 + height > spec.side {
            return Err(Error::InvalidInput(format!(
                "rectangle [{x0},{}) × [{t0},{}) does not fit in a {} lattice",
                x0 + width,
                t0 + height,
                spec.side
            )));
        }
        let sites = (t0..t0 + height)
            .flat_map(|t| (x0..x0 + width).map(move |x| spec.index(x, t)))
            .collect();
        Ok(Self { side: spec.side, sites })
    }

    /// Centred square of the given physical side length (rounded to sites).
    pub fn centered_square(spec: &LatticeSpec, physical_side: f64) -> Result<Self> {
        let n = (physical_side / spec.spacing).round() as usize;
        if n == 0 || n > spec.side {
            return Err(Error::InvalidInput(format!("square of side {physical_side} does not fit")));
        }
        let o = (spec.side - n) / 2;
        Self::rect(spec, o, o, n, n)
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Indicator function on the full lattice.
    pub fn indicator(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.side * self.side];
        for &s in &self.sites {
            v[s] = 1.0;
        }
        v
    }

    fn check(&self, spec: &LatticeSpec) -> Result<()> {
        if self.side != spec.side {
            return Err(Error::DimensionMismatch {
                expected: spec.side,
                got: self.side,
            });
        }
        Ok(())
    }
}

/// `S_I = Σ_{x∈Λ} a² Σ_j P_j :φ(x)ʲ:` for `P = Σ_j P_j yʲ`.
pub fn interaction_action(field: &LatticeField, p: &[f64], region: &Region) -> Result<f64> {
    region.check(&field.spec)?;
    let a2 = field.spec.spacing * field.spec.spacing;
    let mut total = 0.0;
    for (j, &pj) in p.iter().enumerate() {
        if pj == 0.0 {
            continue;
        }
        let w = wick_power_field(field, j as u32)?;
        total += pj * region.sites().iter().map(|&s| w[s]).sum::<f64>();
    }
    Ok(a2 * total)
}

/// `Σ_x a² g(x) :e^{αφ(x)}: = Σ_x a² g(x) e^{αφ(x) − α²c₀/2}`.
pub fn exp_interaction(field: &LatticeField, alpha: f64, g: &[f64]) -> Result<f64> {
    check_weights(&field.spec, g)?;
    let a2 = field.spec.spacing * field.spec.spacing;
    let shift = 0.5 * alpha * alpha * field.c0;
    Ok(a2 * g
        .iter()
        .zip(&field.values)
        .filter(|(w, _)| **w != 0.0)
        .map(|(w, v)| w * (alpha * v - shift).exp())
        .sum::<f64>())
}

fn check_weights(spec: &LatticeSpec, g: &[f64]) -> Result<()> {
    if g.len() != spec.num_sites() {
        return Err(Error::DimensionMismatch {
            expected: spec.num_sites(),
            got: g.len(),
        });
    }
    if let Some(i) = g.iter().position(|&w| !(w >= 0.0)) {
        return Err(Error::InvalidInput(format!("weight g[{i}] = {} is negative", g[i])));
    }
    Ok(())
}

/// `E[exp_interaction] = a² Σ_x g(x)`.
pub fn exp_interaction_mean(spec: &LatticeSpec, g: &[f64]) -> Result<f64> {
    check_weights(spec, g)?;
    Ok(spec.spacing * spec.spacing * g.iter().sum::<f64>())
}

/// `E[exp_interaction²] = a⁴ Σ_{x,y} g(x) g(y) e^{α² G(x−y)}`.
pub fn exp_interaction_second_moment(table: &CovarianceTable, alpha: f64, g: &[f64]) -> Result<f64> {
    let spec = table.spec();
    check_weights(spec, g)?;
    let a4 = spec.spacing.powi(4);
    let a2 = alpha * alpha;
    Ok(a4 * table.pointwise_kernel_form(|c| (a2 * c).exp(), g, g))
}

/// `Var(S_I) = Σ_{j≥1} P_j² j! a⁴ Σ_{x,y∈Λ} G(x−y)ʲ` (Wick powers of
/// different degree are orthogonal).
pub fn interaction_variance(table: &CovarianceTable, p: &[f64], region: &Region) -> Result<f64> {
    region.check(table.spec())?;
    let a4 = table.spec().spacing.powi(4);
    let ind = region.indicator();
    let mut total = 0.0;
    let mut fact = 1.0;
    for (j, &pj) in p.iter().enumerate().skip(1) {
        fact *= j as f64;
        if pj == 0.0 {
            continue;
        }
        total += pj * pj * fact * table.pointwise_kernel_form(|c| c.powi(j as i32), &ind, &ind);
    }
    Ok(a4 * total)
}

/// Interaction actions of `n_samples` independent free-field samples, in a
/// reproducible order.
pub fn sample_actions(spec: &LatticeSpec, p: &[f64], region: &Region, n_samples: usize, rng: &RngStream) -> Result<Vec<f64>> {
    region.check(spec)?;
    let sampler = GffSampler::new(spec);
    let out = parallel_collect(n_samples, rng, |r| {
        let f = sampler.sample_with(r);
        interaction_action(&f, p, region).unwrap_or(f64::NAN)
    });
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::EstimatorFailure("non-finite interaction action".into()));
    }
    Ok(out)
}

/// Monte Carlo estimate of `Z = E[e^{−S_I}]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionEstimate {
    pub z: f64,
    pub stderr: f64,
    /// `ln Z`, finite even when `Z` itself overflows.
    pub log_z: f64,
    pub count: usize,
}

/// Estimates `E[e^{−S}]` from action samples with log-sum-exp accumulation.
pub fn partition_from_actions(actions: &[f64]) -> Result<PartitionEstimate> {
    let n = actions.len();
    if n < 2 {
        return Err(Error::InvalidInput("need at least 2 samples".into()));
    }
    let shift = actions.iter().map(|s| -s).fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(Error::EstimatorFailure("non-finite action sample".into()));
    }
    let w: Vec<f64> = actions.iter().map(|s| (-s - shift).exp()).collect();
    let mean = w.iter().sum::<f64>() / n as f64;
    let var = w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let log_z = shift + mean.ln();
    let scale = shift.exp();
    Ok(PartitionEstimate {
        z: scale * mean,
        stderr: scale * (var / n as f64).sqrt(),
        log_z,
        count: n,
    })
}

/// Monte Carlo partition function of `:P(φ):` on `region`.
pub fn partition_estimate(
    spec: &LatticeSpec,
    p: &[f64],
    region: &Region,
    n_samples: usize,
    rng: &RngStream,
) -> Result<PartitionEstimate> {
    if p.iter().all(|&c| c == 0.0) {
        return Ok(PartitionEstimate {
            z: 1.0,
            stderr: 0.0,
            log_z: 0.0,
            count: n_samples,
        });
    }
    partition_from_actions(&sample_actions(spec, p, region, n_samples, rng)?)
}
