//! Monte Carlo accumulation with a reproducible reduction order.
//!
//! Samples are generated in fixed-size chunks. Chunk `c` always draws from
//! the same position of the caller's [`RngStream`], and the per-chunk moments
//! are merged pairwise in index order, so results are bit-identical no matter
//! how many worker threads rayon uses.

use rayon::prelude::*;

use crate::wiener::{RngStream, StreamRng};

/// Number of samples drawn from one RNG chunk.
pub const CHUNK_SIZE: usize = 2048;

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

impl Estimate {
    /// Standard deviation of a single sample.
    pub fn sample_std(&self) -> f64 {
        self.stderr * (self.count as f64).sqrt()
    }

    /// `|mean - target|` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }
}

/// Running first and second central moments of a vector-valued sample.
#[derive(Debug, Clone)]
pub struct Moments {
    count: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    pub fn new(dim: usize) -> Self {
        Self {
            count: 0,
            mean: vec![0.0; dim],
            m2: vec![0.0; dim],
        }
    }

    pub fn push(&mut self, x: &[f64]) {
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(x) {
            let delta = v - *m;
            *m += delta / n;
            *s += delta * (v - *m);
        }
    }

    /// Chan et al. parallel combination.
    pub fn merge(mut self, other: &Moments) -> Moments {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other.clone();
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * nb / n;
            self.m2[i] += other.m2[i] + delta * delta * na * nb / n;
        }
        self.count += other.count;
        self
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn estimates(&self) -> Vec<Estimate> {
        let n = self.count as f64;
        self.mean
            .iter()
            .zip(&self.m2)
            .map(|(&mean, &m2)| {
                let var = if self.count > 1 { m2 / (n - 1.0) } else { 0.0 };
                Estimate {
                    mean,
                    stderr: (var / n).sqrt(),
                    count: self.count,
                }
            })
            .collect()
    }
}

fn merge_pairwise(parts: &[Moments]) -> Moments {
    match parts.len() {
        0 => unreachable!("merge_pairwise called on an empty slice"),
        1 => parts[0].clone(),
        n => {
            let (lo, hi) = parts.split_at(n / 2);
            merge_pairwise(lo).merge(&merge_pairwise(hi))
        }
    }
}

/// Draws `n_samples` vector samples of length `dim` and returns per-component
/// mean estimates.
///
/// `sample` fills its output buffer with one realisation.
pub fn parallel_moments<F>(n_samples: usize, rng: &RngStream, dim: usize, sample: F) -> Moments
where
    F: Fn(&mut StreamRng, &mut [f64]) + Sync,
{
    if n_samples == 0 {
        return Moments::new(dim);
    }
    let n_chunks = n_samples.div_ceil(CHUNK_SIZE);
    let parts: Vec<Moments> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng.chunk(c as u64);
            let count = CHUNK_SIZE.min(n_samples - c * CHUNK_SIZE);
            let mut m = Moments::new(dim);
            let mut buf = vec![0.0; dim];
            for _ in 0..count {
                sample(&mut r, &mut buf);
                m.push(&buf);
            }
            m
        })
        .collect();
    merge_pairwise(&parts)
}

/// Scalar convenience wrapper over [`parallel_moments`].
pub fn parallel_mean<F>(n_samples: usize, rng: &RngStream, sample: F) -> Estimate
where
    F: Fn(&mut StreamRng) -> f64 + Sync,
{
    parallel_moments(n_samples, rng, 1, |r, out| out[0] = sample(r)).estimates()[0]
}

/// Draws `n_samples` scalar samples and returns them in chunk order.
pub fn parallel_collect<F>(n_samples: usize, rng: &RngStream, sample: F) -> Vec<f64>
where
    F: Fn(&mut StreamRng) -> f64 + Sync,
{
    let n_chunks = n_samples.div_ceil(CHUNK_SIZE);
    let parts: Vec<Vec<f64>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng.chunk(c as u64);
            let count = CHUNK_SIZE.min(n_samples - c * CHUNK_SIZE);
            (0..count).map(|_| sample(&mut r)).collect()
        })
        .collect();
    parts.concat()
}

/// Ordinary least-squares fit `y = intercept + slope * x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}
