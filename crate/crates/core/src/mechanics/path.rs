use crate::error::{Error, Result};

/// A discretised trajectory `t ↦ q(t) ∈ ℝⁿ` on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    times: Vec<f64>,
    dim: usize,
    values: Vec<f64>,
}

impl Path {
    /// `values` is row-major: node `i` occupies `values[i*dim..(i+1)*dim]`.
    pub fn new(times: Vec<f64>, dim: usize, values: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidInput(format!("a path needs at least 2 nodes, got {}", times.len())));
        }
        if dim == 0 || values.len() != times.len() * dim {
            return Err(Error::DimensionMismatch {
                expected: times.len() * dim.max(1),
                got: values.len(),
            });
        }
        if let Some(i) = times.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(format!("times not strictly increasing at index {}", i + 1)));
        }
        Ok(Self { times, dim, values })
    }

    /// One-dimensional path.
    pub fn scalar(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(times, 1, values)
    }

    /// Samples `q` on `steps + 1` uniform nodes of `[t0, t1]`.
    pub fn sample<F: Fn(f64) -> Vec<f64>>(t0: f64, t1: f64, steps: usize, q: F) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidInput("steps must be >= 1".into()));
        }
        let times: Vec<f64> = (0..=steps).map(|i| t0 + (t1 - t0) * i as f64 / steps as f64).collect();
        let first = q(times[0]);
        let dim = first.len();
        let mut values = first;
        for &t in &times[1..] {
            values.extend(q(t));
        }
        Self::new(times, dim, values)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Common step if the grid is uniform to `1e-9` relative.
    pub fn uniform_step(&self) -> Option<f64> {
        let n = self.times.len() - 1;
        let h = (self.times[n] - self.times[0]) / n as f64;
        let uniform = self.times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
        uniform.then_some(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_paths() {
        assert!(Path::scalar(vec![0.0], vec![0.0]).is_err());
        assert!(Path::scalar(vec![0.0, 0.0], vec![0.0, 1.0]).is_err());
        assert!(Path::scalar(vec![0.0, 1.0], vec![0.0]).is_err());
        assert!(Path::new(vec![0.0, 1.0], 2, vec![0.0; 4]).is_ok());
    }

    #[test]
    fn uniformity() {
        let p = Path::sample(0.0, 1.0, 10, |t| vec![t]).unwrap();
        assert!((p.uniform_step().unwrap() - 0.1).abs() < 1e-15);
        let q = Path::scalar(vec![0.0, 0.1, 0.3], vec![0.0; 3]).unwrap();
        assert!(q.uniform_step().is_none());
    }
}
