use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::numerics::{SampledFunction, UniformGrid};

/// Largest allowed amplitude at the ends of the grid.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// Real-time (Schrödinger) or imaginary-time (heat) evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeMode {
    RealTime,
    Imaginary,
}

/// Wave function sampled on a uniform grid, with its mass and `ħ`.
///
/// Evolution is spectral and therefore periodic on the grid; the grid must be
/// wide enough that the function is negligible at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub psi: SampledFunction,
    pub mass: f64,
    pub hbar: f64,
}

impl WaveFunction {
    /// Rejects functions whose end-point amplitude exceeds [`BOUNDARY_TOL`]
    /// relative to their peak.
    pub fn new(psi: SampledFunction, mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0 && hbar > 0.0) {
            return Err(Error::InvalidInput(format!("mass and ħ must be positive (m={mass}, ħ={hbar})")));
        }
        let wf = Self { psi, mass, hbar };
        let b = wf.boundary_amplitude();
        if b > BOUNDARY_TOL {
            return Err(Error::InvalidInput(format!(
                "wave function not localized: boundary amplitude {b:e} exceeds {BOUNDARY_TOL:e}"
            )));
        }
        Ok(wf)
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: UniformGrid, mass: f64, hbar: f64, f: F) -> Result<Self> {
        Self::new(SampledFunction::from_fn(grid, f), mass, hbar)
    }

    pub fn grid(&self) -> UniformGrid {
        self.psi.grid
    }

    pub fn norm(&self) -> f64 {
        self.psi.norm_l2()
    }

    /// Largest modulus among the two end samples, relative to the peak.
    pub fn boundary_amplitude(&self) -> f64 {
        let v = &self.psi.values;
        let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        v[0].norm().max(v[v.len() - 1].norm()) / peak
    }

    /// `⟨x⟩` and `⟨x²⟩ − ⟨x⟩²` of the density `|ψ|²/‖ψ‖²`.
    pub fn position_moments(&self) -> (f64, f64) {
        let mut w = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (x, z) in self.psi.grid.points().zip(&self.psi.values) {
            let d = z.norm_sqr();
            w += d;
            m1 += d * x;
            m2 += d * x * x;
        }
        let mean = m1 / w;
        (mean, m2 / w - mean * mean)
    }

    fn warn_on_spill(&self) {
        let b = self.boundary_amplitude();
        if b > BOUNDARY_TOL {
            log::warn!("wave function spilled to the grid boundary (relative amplitude {b:e}); widen the grid");
        }
    }
}

/// Spectral free propagator reused across steps.
struct FreeStepper {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    multiplier: Vec<Complex64>,
}

impl FreeStepper {
    fn new(grid: UniformGrid, mass: f64, hbar: f64, t: f64, mode: TimeMode) -> Self {
        let n = grid.len();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let dk = 2.0 * PI / (n as f64 * grid.spacing());
        let norm = 1.0 / n as f64;
        let multiplier = (0..n)
            .map(|j| {
                let idx = if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 };
                let k = idx * dk;
                let e = hbar * k * k * t / (2.0 * mass);
                match mode {
                    TimeMode::RealTime => Complex64::from_polar(norm, -e),
                    TimeMode::Imaginary => Complex64::new(norm * (-e).exp(), 0.0),
                }
            })
            .collect();
        Self {
            forward,
            inverse,
            multiplier,
        }
    }

    fn apply(&self, values: &mut [Complex64]) {
        self.forward.process(values);
        for (v, m) in values.iter_mut().zip(&self.multiplier) {
            *v *= m;
        }
        self.inverse.process(values);
    }
}

/// Free Schrödinger evolution `ψ ↦ e^{−itĤ₀/ħ}ψ`, `Ĥ₀ = p̂²/2m`.
///
/// Multiplies the discrete Fourier coefficients by `e^{−iħk²t/(2m)}`; the map
/// is exactly unitary on the grid up to rounding. Logs a warning when the
/// result reaches the grid boundary.
pub fn evolve_free(psi: &WaveFunction, t: f64) -> WaveFunction {
    evolve_free_mode(psi, t, TimeMode::RealTime)
}

/// Heat-semigroup evolution `ψ ↦ e^{−τĤ₀/ħ}ψ`, multiplier `e^{−ħk²τ/(2m)}`.
pub fn evolve_free_imaginary(psi: &WaveFunction, tau: f64) -> WaveFunction {
    evolve_free_mode(psi, tau, TimeMode::Imaginary)
}

fn evolve_free_mode(psi: &WaveFunction, t: f64, mode: TimeMode) -> WaveFunction {
    if t == 0.0 {
        return psi.clone();
    }
    let stepper = FreeStepper::new(psi.grid(), psi.mass, psi.hbar, t, mode);
    let mut out = psi.clone();
    stepper.apply(&mut out.psi.values);
    out.warn_on_spill();
    out
}

/// Lie–Trotter product `(e^{−itĤ₀/(nħ)} e^{−itV/(nħ)})^n ψ`.
///
/// Each step multiplies pointwise by the potential factor `e^{−(i/ħ)(t/n)V}`
/// (real time) or `e^{−(t/n)V/ħ}` (imaginary time), then applies the free
/// evolution over `t/n`. The splitting error is `O(1/n)`.
pub fn trotter_evolve<V: Fn(f64) -> f64>(v: V, psi: &WaveFunction, t: f64, n: usize, mode: TimeMode) -> Result<WaveFunction> {
    if n == 0 {
        return Err(Error::InvalidInput("Trotter evolution needs at least one step".into()));
    }
    let dt = t / n as f64;
    let grid = psi.grid();
    let potential: Vec<Complex64> = grid
        .points()
        .map(|x| {
            let e = dt * v(x) / psi.hbar;
            match mode {
                TimeMode::RealTime => Complex64::from_polar(1.0, -e),
                TimeMode::Imaginary => Complex64::new((-e).exp(), 0.0),
            }
        })
        .collect();
    let stepper = FreeStepper::new(grid, psi.mass, psi.hbar, dt, mode);
    let mut out = psi.clone();
    for _ in 0..n {
        for (z, f) in out.psi.values.iter_mut().zip(&potential) {
            *z *= f;
        }
        stepper.apply(&mut out.psi.values);
    }
    out.warn_on_spill();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packet(grid: UniformGrid, sigma: f64, k0: f64) -> WaveFunction {
        WaveFunction::from_fn(grid, 1.0, 1.0, |x| {
            Complex64::from_polar((-(x * x) / (4.0 * sigma * sigma)).exp(), k0 * x)
        })
        .unwrap()
    }

    #[test]
    fn rejects_unlocalized() {
        let grid = UniformGrid::periodic(-2.0, 2.0, 64).unwrap();
        assert!(WaveFunction::from_fn(grid, 1.0, 1.0, |_| Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn zero_time_is_identity() {
        let grid = UniformGrid::periodic(-20.0, 20.0, 256).unwrap();
        let psi = packet(grid, 1.0, 0.5);
        assert_eq!(evolve_free(&psi, 0.0), psi);
    }

    #[test]
    fn norm_preserved() {
        let grid = UniformGrid::periodic(-40.0, 40.0, 1024).unwrap();
        let psi = packet(grid, 1.0, 1.0);
        for &t in &[-3.0, 0.1, 2.0, 5.0] {
            let out = evolve_free(&psi, t);
            assert!((out.norm() - psi.norm()).abs() < 1e-12 * psi.norm());
        }
    }

    #[test]
    fn gaussian_spreading() {
        let grid = UniformGrid::periodic(-60.0, 60.0, 2048).unwrap();
        let sigma = 0.8;
        let psi = packet(grid, sigma, 0.0);
        for &t in &[0.5, 2.0, 4.0] {
            let (_, var) = evolve_free(&psi, t).position_moments();
            let expected = sigma * sigma + (t / (2.0 * sigma)).powi(2);
            assert!((var - expected).abs() < 1e-8, "t={t}: {var} vs {expected}");
        }
    }

    #[test]
    fn group_velocity() {
        let grid = UniformGrid::periodic(-60.0, 60.0, 2048).unwrap();
        let psi = packet(grid, 1.0, 2.0);
        let (mean, _) = evolve_free(&psi, 3.0).position_moments();
        assert!((mean - 6.0).abs() < 1e-8);
    }

    #[test]
    fn trotter_without_potential_is_free() {
        let grid = UniformGrid::periodic(-40.0, 40.0, 512).unwrap();
        let psi = packet(grid, 1.0, 0.3);
        let a = trotter_evolve(|_| 0.0, &psi, 1.5, 7, TimeMode::RealTime).unwrap();
        let b = evolve_free(&psi, 1.5);
        assert!(a.psi.max_abs_diff(&b.psi) < 1e-12);
    }

    #[test]
    fn imaginary_time_ground_energy() {
        let grid = UniformGrid::periodic(-12.0, 12.0, 256).unwrap();
        let psi = packet(grid, 0.5, 0.0);
        let v = |x: f64| 0.5 * x * x;
        let (t, n) = (10.0, 2000);
        let a = trotter_evolve(v, &psi, t, n, TimeMode::Imaginary).unwrap();
        let delta = 0.5;
        let b = trotter_evolve(v, &a, delta, 100, TimeMode::Imaginary).unwrap();
        let energy = -(b.norm() / a.norm()).ln() / delta;
        assert!((energy - 0.5).abs() < 1e-3, "{energy}");
    }
}
