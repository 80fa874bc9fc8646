use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Uniform real grid `x_j = origin + j·spacing`, `j = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    origin: f64,
    spacing: f64,
    len: usize,
}

impl UniformGrid {
    pub fn new(origin: f64, spacing: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidInput(format!("grid needs at least 2 points, got {len}")));
        }
        if !(spacing > 0.0) || !spacing.is_finite() || !origin.is_finite() {
            return Err(Error::InvalidInput(format!("grid spacing must be positive, got {spacing}")));
        }
        Ok(Self { origin, spacing, len })
    }

    /// Periodic grid covering `[lo, hi)` with `len` points.
    pub fn periodic(lo: f64, hi: f64, len: usize) -> Result<Self> {
        Self::new(lo, (hi - lo) / len as f64, len)
    }

    /// Grid of the given spacing whose origin is `-(len/2)·spacing`.
    pub fn centered(spacing: f64, len: usize) -> Result<Self> {
        Self::new(-((len / 2) as f64) * spacing, spacing, len)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.spacing
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|j| self.point(j))
    }

    /// Spacing of the reciprocal grid, `2π / (len·spacing)`.
    pub fn dual_spacing(&self) -> f64 {
        2.0 * PI / (self.len as f64 * self.spacing)
    }

    /// Centred reciprocal grid.
    pub fn dual(&self) -> UniformGrid {
        let dk = self.dual_spacing();
        UniformGrid {
            origin: -((self.len / 2) as f64) * dk,
            spacing: dk,
            len: self.len,
        }
    }
}

/// Complex samples of a function on a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: UniformGrid,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: UniformGrid, f: F) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    /// Builds a sampled function from explicit abscissae, rejecting grids that
    /// are not uniform to `1e-12` relative.
    pub fn from_points(xs: &[f64], values: Vec<Complex64>) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::InvalidInput("need at least 2 sample points".into()));
        }
        let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        let scale = xs[0].abs().max(xs[xs.len() - 1].abs()).max(h.abs());
        for (j, &x) in xs.iter().enumerate() {
            if (x - (xs[0] + j as f64 * h)).abs() > 1e-12 * scale {
                return Err(Error::InvalidInput(format!("grid is not uniform at index {j}")));
            }
        }
        Self::new(UniformGrid::new(xs[0], h, xs.len())?, values)
    }

    /// Discrete `L²` norm `(Σ |f_j|² Δx)^{1/2}`.
    pub fn norm_l2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()).sqrt()
    }

    /// Discrete `L²` distance to another function on the same grid.
    pub fn distance_l2(&self, other: &SampledFunction) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (s * self.grid.spacing()).sqrt()
    }

    pub fn max_abs_diff(&self, other: &SampledFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Fourier transform onto the centred reciprocal grid.
///
/// Forward computes samples of `(2π)^{-1/2} ∫ e^{-ikx} f(x) dx`; inverse uses
/// `e^{+ikx}`. The transform of a centred grid is centred, so
/// `inverse ∘ forward` is the identity whenever `f.grid` is centred. Use
/// [`fourier_transform_onto`] to land on a grid with a different origin.
pub fn fourier_transform(f: &SampledFunction, direction: Direction) -> SampledFunction {
    let origin = f.grid.dual().origin();
    fourier_transform_onto(f, direction, origin)
}

/// Fourier transform onto the reciprocal grid starting at `target_origin`.
///
/// The Riemann sum `Δx (2π)^{-1/2} Σ_j e^{∓ik_l x_j} f_j` is evaluated exactly
/// (up to rounding) by an FFT with pre- and post-twiddles.
pub fn fourier_transform_onto(f: &SampledFunction, direction: Direction, target_origin: f64) -> SampledFunction {
    let n = f.grid.len();
    let dx = f.grid.spacing();
    let x0 = f.grid.origin();
    let dk = f.grid.dual_spacing();
    let k0 = target_origin;
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };

    let mut buf: Vec<Complex64> = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * Complex64::from_polar(1.0, sign * k0 * j as f64 * dx))
        .collect();

    let mut planner = FftPlanner::new();
    let fft = match direction {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    };
    fft.process(&mut buf);

    let scale = dx / (2.0 * PI).sqrt();
    for (l, v) in buf.iter_mut().enumerate() {
        let phase = sign * (k0 * x0 + l as f64 * dk * x0);
        *v *= Complex64::from_polar(scale, phase);
    }

    SampledFunction {
        grid: UniformGrid {
            origin: k0,
            spacing: dk,
            len: n,
        },
        values: buf,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(grid: UniformGrid) -> SampledFunction {
        SampledFunction::from_fn(grid, |x| Complex64::new((-0.5 * x * x).exp(), 0.0))
    }

    #[test]
    fn gaussian_is_self_dual() {
        let grid = UniformGrid::periodic(-20.0, 20.0, 1024).unwrap();
        let fh = fourier_transform(&gaussian(grid), Direction::Forward);
        let expected = SampledFunction::from_fn(fh.grid, |k| Complex64::new((-0.5 * k * k).exp(), 0.0));
        assert!(fh.max_abs_diff(&expected) < 1e-8);
    }

    #[test]
    fn round_trip_identity() {
        let grid = UniformGrid::periodic(-20.0, 20.0, 512).unwrap();
        let f = SampledFunction::from_fn(grid, |x| {
            Complex64::new((-(x - 1.3).powi(2)).exp() * (3.0 * x).cos(), (-(x * x) / 4.0).exp() * x)
        });
        let back = fourier_transform(&fourier_transform(&f, Direction::Forward), Direction::Inverse);
        assert_eq!(back.grid.origin(), f.grid.origin());
        assert!((back.grid.spacing() - f.grid.spacing()).abs() < 1e-15);
        assert!(back.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn onto_arbitrary_origin_round_trip() {
        let grid = UniformGrid::new(-3.7, 0.05, 300).unwrap();
        let f = SampledFunction::from_fn(grid, |x| Complex64::new((-(x - 3.0).powi(2)).exp(), 0.0));
        let fh = fourier_transform_onto(&f, Direction::Forward, -10.0);
        let back = fourier_transform_onto(&fh, Direction::Inverse, -3.7);
        assert!(back.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn non_uniform_grid_rejected() {
        let xs = [0.0, 0.1, 0.25, 0.3];
        let vals = vec![Complex64::new(0.0, 0.0); 4];
        assert!(matches!(SampledFunction::from_points(&xs, vals), Err(Error::InvalidInput(_))));
        let ok = [0.0, 0.1, 0.2, 0.3];
        assert!(SampledFunction::from_points(&ok, vec![Complex64::new(0.0, 0.0); 4]).is_ok());
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(UniformGrid::new(0.0, 0.1, 1).is_err());
        assert!(UniformGrid::new(0.0, -0.1, 8).is_err());
        assert!(UniformGrid::new(0.0, 0.0, 8).is_err());
    }
}
