use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Periodic `L×L` lattice with spacing `a` and mass `m`.
///
/// Sites are indexed `(x, t)` with `0 ≤ x, t < L`, stored row-major with
/// `t` as the row: index `t·L + x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub side: usize,
    pub spacing: f64,
    pub mass: f64,
}

impl LatticeSpec {
    pub fn new(side: usize, spacing: f64, mass: f64) -> Result<Self> {
        if side < 4 || side % 2 == 1 {
            return Err(Error::InvalidInput(format!("lattice side must be even and >= 4, got {side}")));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidInput(format!("lattice spacing must be positive, got {spacing}")));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidInput(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { side, spacing, mass })
    }

    pub fn num_sites(&self) -> usize {
        self.side * self.side
    }

    pub fn index(&self, x: usize, t: usize) -> usize {
        t * self.side + x
    }

    /// Physical side length `L·a`.
    pub fn extent(&self) -> f64 {
        self.side as f64 * self.spacing
    }

    /// Eigenvalue of the lattice Laplacian,
    /// `λ_k = (4/a²)(sin²(πk₁/L) + sin²(πk₂/L))`.
    pub fn laplacian_eigenvalue(&self, k1: usize, k2: usize) -> f64 {
        let l = self.side as f64;
        let s1 = (PI * k1 as f64 / l).sin();
        let s2 = (PI * k2 as f64 / l).sin();
        4.0 / (self.spacing * self.spacing) * (s1 * s1 + s2 * s2)
    }

    /// Spectral weights `1/(a²(λ_k + m²))` in FFT order (index `k₂·L + k₁`).
    pub fn spectral_weights(&self) -> Vec<f64> {
        let l = self.side;
        let a2 = self.spacing * self.spacing;
        let m2 = self.mass * self.mass;
        (0..l * l)
            .map(|i| 1.0 / (a2 * (self.laplacian_eigenvalue(i % l, i / l) + m2)))
            .collect()
    }
}

/// Lattice Green function of `Δ_a + m²` on the torus,
/// `(1/(L²a²)) Σ_k e^{ik·(dx,dy)} / (λ_k + m²)`, summed directly.
pub fn lattice_covariance(spec: &LatticeSpec, dx: i64, dy: i64) -> f64 {
    let l = spec.side;
    let m2 = spec.mass * spec.mass;
    let dxm = dx.rem_euclid(l as i64) as usize;
    let dym = dy.rem_euclid(l as i64) as usize;
    // cos(2πj/L) looked up by min(j, L−j) so that d ↦ −d is bit-exact
    let cos_table: Vec<f64> = (0..=l / 2).map(|j| (2.0 * PI * j as f64 / l as f64).cos()).collect();
    let phase_cos = |j: usize| cos_table[j.min(l - j)];
    let mut s = 0.0;
    for k2 in 0..l {
        for k1 in 0..l {
            let j = (k1 * dxm + k2 * dym) % l;
            s += phase_cos(j) / (spec.laplacian_eigenvalue(k1, k2) + m2);
        }
    }
    s / ((l * l) as f64 * spec.spacing * spec.spacing)
}

/// Two-dimensional complex FFT on an `L×L` array stored row-major.
#[derive(Clone)]
pub(crate) struct Fft2 {
    side: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub(crate) fn new(side: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            side,
            forward: planner.plan_fft_forward(side),
            inverse: planner.plan_fft_inverse(side),
        }
    }

    fn run(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let l = self.side;
        fft.process(data);
        let mut col = vec![Complex64::new(0.0, 0.0); l];
        for c in 0..l {
            for r in 0..l {
                col[r] = data[r * l + c];
            }
            fft.process(&mut col);
            for r in 0..l {
                data[r * l + c] = col[r];
            }
        }
    }

    /// Unnormalized forward transform `Σ_x u_x e^{−ik·x}`.
    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.forward);
    }

    /// Normalized inverse transform `(1/L²) Σ_k û_k e^{ik·x}`.
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inverse);
        let n = (self.side * self.side) as f64;
        data.iter_mut().for_each(|v| *v /= n);
    }

    /// Periodic convolution `(K*u)_x = Σ_y K(x−y) u_y` given `K̂`.
    pub(crate) fn convolve_hat(&self, kernel_hat: &[Complex64], u: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf.iter_mut().zip(kernel_hat).for_each(|(b, k)| *b *= k);
        self.inverse(&mut buf);
        buf.iter().map(|v| v.re).collect()
    }

    pub(crate) fn transform_real(&self, u: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }
}

/// All values of the lattice Green function, computed with one inverse FFT.
#[derive(Clone)]
pub struct CovarianceTable {
    spec: LatticeSpec,
    values: Vec<f64>,
    hat: Vec<Complex64>,
    fft: Fft2,
}

impl std::fmt::Debug for CovarianceTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CovarianceTable").field("spec", &self.spec).field("c0", &self.c0()).finish()
    }
}

impl CovarianceTable {
    pub fn new(spec: &LatticeSpec) -> Self {
        let fft = Fft2::new(spec.side);
        let hat: Vec<Complex64> = spec.spectral_weights().into_iter().map(|g| Complex64::new(g, 0.0)).collect();
        let mut buf = hat.clone();
        fft.inverse(&mut buf);
        Self {
            spec: *spec,
            values: buf.iter().map(|v| v.re).collect(),
            hat,
            fft,
        }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    /// `G(dx, dy)` with periodic wrap-around.
    pub fn get(&self, dx: i64, dy: i64) -> f64 {
        let l = self.spec.side as i64;
        self.values[(dy.rem_euclid(l) * l + dx.rem_euclid(l)) as usize]
    }

    /// Local variance `G(0, 0)`.
    pub fn c0(&self) -> f64 {
        self.values[0]
    }

    /// `(G*u)_x = Σ_y G(x−y) u_y`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.fft.convolve_hat(&self.hat, u)
    }

    /// Smeared covariance `C(f, g) = a⁴ Σ_{x,y} f(x) G(x−y) g(y)`.
    pub fn pairing(&self, f: &[f64], g: &[f64]) -> f64 {
        let a4 = self.spec.spacing.powi(4);
        a4 * f.iter().zip(self.apply(g)).map(|(a, b)| a * b).sum::<f64>()
    }

    /// `Σ_{x,y} u_x K(x−y) v_y` for the kernel `K(d) = h(G(d))`.
    pub fn pointwise_kernel_form<H: Fn(f64) -> f64>(&self, h: H, u: &[f64], v: &[f64]) -> f64 {
        let k: Vec<f64> = self.values.iter().map(|&g| h(g)).collect();
        let k_hat = self.fft.transform_real(&k);
        let kv = self.fft.convolve_hat(&k_hat, v);
        u.iter().zip(kv).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn fft(&self) -> &Fft2 {
        &self.fft
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(LatticeSpec::new(3, 0.1, 1.0).is_err());
        assert!(LatticeSpec::new(6, 0.0, 1.0).is_err());
        assert!(LatticeSpec::new(6, 0.1, -1.0).is_err());
        assert!(LatticeSpec::new(8, 0.1, 1.0).is_ok());
    }

    #[test]
    fn table_matches_direct_sum() {
        let spec = LatticeSpec::new(16, 0.25, 1.3).unwrap();
        let t = CovarianceTable::new(&spec);
        for &(dx, dy) in &[(0, 0), (1, 0), (3, -2), (8, 8), (-5, 7)] {
            let d = lattice_covariance(&spec, dx, dy);
            assert!((t.get(dx, dy) - d).abs() < 1e-12 * d.abs().max(1.0), "({dx},{dy})");
        }
        assert!(t.c0() > 0.0);
    }

    #[test]
    fn symmetries_exact() {
        let spec = LatticeSpec::new(12, 0.5, 0.7).unwrap();
        let g = lattice_covariance(&spec, 2, 5);
        assert_eq!(g, lattice_covariance(&spec, -2, -5));
        let t = CovarianceTable::new(&spec);
        assert!((t.get(2, 5) - t.get(5, 2)).abs() < 1e-15);
    }

    #[test]
    fn green_function_equation() {
        // (Δ_a + m²)G = δ/a² at the origin
        let spec = LatticeSpec::new(16, 0.3, 0.9).unwrap();
        let t = CovarianceTable::new(&spec);
        let a2 = spec.spacing * spec.spacing;
        for &(x, y) in &[(0i64, 0i64), (1, 0), (4, 7)] {
            let lap = (4.0 * t.get(x, y) - t.get(x + 1, y) - t.get(x - 1, y) - t.get(x, y + 1) - t.get(x, y - 1)) / a2;
            let lhs = lap + spec.mass * spec.mass * t.get(x, y);
            let rhs = if (x, y) == (0, 0) { 1.0 / a2 } else { 0.0 };
            assert!((lhs - rhs).abs() < 1e-10, "({x},{y}): {lhs}");
        }
    }

    #[test]
    fn constant_mode_sum_rule() {
        // Σ_d G(d) a² = 1/m²
        let spec = LatticeSpec::new(10, 0.4, 1.5).unwrap();
        let t = CovarianceTable::new(&spec);
        let s: f64 = (0..10).flat_map(|y| (0..10).map(move |x| (x, y))).map(|(x, y)| t.get(x, y)).sum();
        assert!((s * spec.spacing * spec.spacing - 1.0 / 2.25).abs() < 1e-12);
    }
}
