use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use super::continuum::{CovarianceKernel, RadialTable};
use super::lattice::{CovarianceTable, LatticeSpec};
use crate::error::{Error, Result};
use crate::numerics::GaussLegendre;

/// Composite Gauss–Legendre panels per axis over a bump's bounding box.
const BUMP_PANELS: usize = 8;
/// Gauss–Legendre order per panel.
const BUMP_ORDER: usize = 8;

fn min_eigenvalue(m: DMatrix<f64>) -> f64 {
    let sym = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Reflection Gram matrix `M_ij = C(f_i, θf_j)` on the periodic lattice,
/// `θ(x, t) = (x, −t mod L)`.
///
/// Test functions are full-lattice arrays (index `t·L + x`) and must vanish
/// outside the rows `1 ≤ t ≤ L/2 − 1`.
pub fn lattice_reflection_gram(spec: &LatticeSpec, fs: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let l = spec.side;
    for (i, f) in fs.iter().enumerate() {
        if f.len() != spec.num_sites() {
            return Err(Error::DimensionMismatch {
                expected: spec.num_sites(),
                got: f.len(),
            });
        }
        for (idx, &v) in f.iter().enumerate() {
            let t = idx / l;
            if v != 0.0 && !(1..l / 2).contains(&t) {
                return Err(Error::InvalidSupport(format!(
                    "test function {i} is non-zero at row t={t}; support must lie in rows 1..{}",
                    l / 2 - 1
                )));
            }
        }
    }
    let table = CovarianceTable::new(spec);
    let a4 = spec.spacing.powi(4);
    let reflected: Vec<Vec<f64>> = fs
        .iter()
        .map(|f| {
            let mut r = vec![0.0; f.len()];
            for t in 0..l {
                let tr = (l - t) % l;
                r[tr * l..(tr + 1) * l].copy_from_slice(&f[t * l..(t + 1) * l]);
            }
            r
        })
        .collect();
    let applied: Vec<Vec<f64>> = reflected.iter().map(|r| table.apply(r)).collect();
    let k = fs.len();
    Ok(DMatrix::from_fn(k, k, |i, j| {
        a4 * fs[i].iter().zip(&applied[j]).map(|(a, b)| a * b).sum::<f64>()
    }))
}

/// Smallest eigenvalue of [`lattice_reflection_gram`]; reflection positivity
/// means it is non-negative.
pub fn reflection_positivity_lattice(spec: &LatticeSpec, fs: &[Vec<f64>]) -> Result<f64> {
    Ok(min_eigenvalue(lattice_reflection_gram(spec, fs)?))
}

/// Smooth bump `A·exp(1 − 1/(1 − ρ²))` for `ρ < 1`, where `ρ` is the
/// elliptical radius `√((u/r₁)² + (v/r₂)²)` in coordinates `(u, v)` rotated
/// by `angle` about `center`. Points are `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: [f64; 2],
    pub radii: [f64; 2],
    pub angle: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn round(center: [f64; 2], radius: f64, amplitude: f64) -> Self {
        Self {
            center,
            radii: [radius, radius],
            angle: 0.0,
            amplitude,
        }
    }

    pub fn eval(&self, p: [f64; 2]) -> f64 {
        let (dx, dy) = (p[0] - self.center[0], p[1] - self.center[1]);
        let (s, c) = self.angle.sin_cos();
        let u = (c * dx + s * dy) / self.radii[0];
        let v = (-s * dx + c * dy) / self.radii[1];
        let rho2 = u * u + v * v;
        if rho2 >= 1.0 {
            0.0
        } else {
            self.amplitude * (1.0 - 1.0 / (1.0 - rho2)).exp()
        }
    }

    /// Radius of a disc about the centre containing the support.
    pub fn reach(&self) -> f64 {
        self.radii[0].max(self.radii[1])
    }

    fn quadrature(&self, out: &mut Vec<([f64; 2], f64)>) {
        let gl = GaussLegendre::new(BUMP_ORDER).expect("positive order");
        let r = self.reach();
        let xs = gl.composite_points(self.center[0] - r, self.center[0] + r, BUMP_PANELS);
        let ts = gl.composite_points(self.center[1] - r, self.center[1] + r, BUMP_PANELS);
        for &(x, wx) in &xs {
            for &(t, wt) in &ts {
                let v = self.eval([x, t]);
                if v != 0.0 {
                    out.push(([x, t], wx * wt * v));
                }
            }
        }
    }
}

/// Rotation by `angle` about the origin followed by a translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanTransform {
    pub angle: f64,
    pub translation: [f64; 2],
}

impl EuclideanTransform {
    pub fn identity() -> Self {
        Self {
            angle: 0.0,
            translation: [0.0, 0.0],
        }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.angle.sin_cos();
        [
            c * p[0] - s * p[1] + self.translation[0],
            s * p[0] + c * p[1] + self.translation[1],
        ]
    }
}

/// Finite sum of [`Bump`]s on `ℝ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub bumps: Vec<Bump>,
}

impl TestFunction {
    pub fn new(bumps: Vec<Bump>) -> Self {
        Self { bumps }
    }

    pub fn eval(&self, p: [f64; 2]) -> f64 {
        self.bumps.iter().map(|b| b.eval(p)).sum()
    }

    /// `(Tf)(p) = f(T⁻¹p)`.
    pub fn transformed(&self, t: &EuclideanTransform) -> Self {
        Self {
            bumps: self
                .bumps
                .iter()
                .map(|b| Bump {
                    center: t.apply(b.center),
                    angle: b.angle + t.angle,
                    ..*b
                })
                .collect(),
        }
    }

    /// `(θf)(x, t) = f(x, −t)`.
    pub fn reflected(&self) -> Self {
        Self {
            bumps: self
                .bumps
                .iter()
                .map(|b| Bump {
                    center: [b.center[0], -b.center[1]],
                    angle: -b.angle,
                    ..*b
                })
                .collect(),
        }
    }

    /// Quadrature nodes `(p, w·f(p))` on axis-aligned grids around each bump.
    fn quadrature(&self) -> Vec<([f64; 2], f64)> {
        let mut out = Vec::new();
        for b in &self.bumps {
            b.quadrature(&mut out);
        }
        out
    }
}

fn require_plane(kernel: &CovarianceKernel) -> Result<()> {
    if kernel.dim != 2 {
        return Err(Error::Unsupported(format!(
            "test functions live in the plane; kernel dimension is {}",
            kernel.dim
        )));
    }
    Ok(())
}

/// `C(f, g) = ∫∫ f(p) C(‖p − q‖) g(q) dp dq` by tensor Gauss–Legendre
/// quadrature. The supports of `f` and `g` must be disjoint so that the
/// integrand is smooth.
pub fn smeared_covariance(kernel: &CovarianceKernel, f: &TestFunction, g: &TestFunction) -> Result<f64> {
    require_plane(kernel)?;
    let mut d_min = f64::INFINITY;
    let mut d_max: f64 = 0.0;
    for a in &f.bumps {
        for b in &g.bumps {
            let d = (a.center[0] - b.center[0]).hypot(a.center[1] - b.center[1]);
            d_min = d_min.min(d - a.reach() - b.reach());
            d_max = d_max.max(d + a.reach() + b.reach());
        }
    }
    if f.bumps.is_empty() || g.bumps.is_empty() {
        return Ok(0.0);
    }
    if !(d_min > 0.0) {
        return Err(Error::InvalidSupport("test function supports must be disjoint".into()));
    }
    let table = RadialTable::new(*kernel, d_min * 0.999, d_max * 1.001)?;
    let qf = f.quadrature();
    let qg = g.quadrature();
    Ok(qf
        .iter()
        .map(|(p, wp)| {
            wp * qg
                .iter()
                .map(|(q, wq)| wq * table.eval((p[0] - q[0]).hypot(p[1] - q[1])))
                .sum::<f64>()
        })
        .sum())
}

/// `|C(Tf, Tg) − C(f, g)|`, both evaluated by [`smeared_covariance`] on
/// axis-aligned grids, so the transformed functions are resampled.
pub fn euclidean_invariance_check(
    kernel: &CovarianceKernel,
    f: &TestFunction,
    g: &TestFunction,
    transform: &EuclideanTransform,
) -> Result<f64> {
    let base = smeared_covariance(kernel, f, g)?;
    let moved = smeared_covariance(kernel, &f.transformed(transform), &g.transformed(transform))?;
    Ok((moved - base).abs())
}

/// Reflection Gram matrix `M_ij = C(f_i, θf_j)` for the planar continuum
/// covariance, from its mixed Fourier representation
/// `M_ij = ∫ dξ/(4πμ) conj(F_i(ξ)) F_j(ξ)`, `μ = √(ξ² + m²)`,
/// `F(ξ) = ∫ f(x, t) e^{−iξx − μt} dx dt`. Supports must lie in `t > 0`.
pub fn continuum_reflection_gram(kernel: &CovarianceKernel, fs: &[TestFunction]) -> Result<DMatrix<f64>> {
    require_plane(kernel)?;
    let mut t_min = f64::INFINITY;
    let mut x_extent: f64 = 0.0;
    for (i, f) in fs.iter().enumerate() {
        for b in &f.bumps {
            let lo = b.center[1] - b.reach();
            if !(lo > 0.0) {
                return Err(Error::InvalidSupport(format!(
                    "test function {i} reaches time {lo}; support must lie in t > 0"
                )));
            }
            t_min = t_min.min(lo);
            x_extent = x_extent.max(b.center[0].abs() + b.reach());
        }
    }
    let k = fs.len();
    if k == 0 || !t_min.is_finite() {
        return Ok(DMatrix::zeros(k, k));
    }
    let m = kernel.mass;
    // e^{−2ξ t_min} < 1e-18 beyond the cutoff
    let xi_max = 21.0 / t_min;
    let panels = ((xi_max * x_extent.max(1.0) / 2.0).ceil() as usize).max(8);
    let gl = GaussLegendre::new(10)?;
    let nodes = gl.composite_points(0.0, xi_max, panels);
    let quads: Vec<Vec<([f64; 2], f64)>> = fs.iter().map(|f| f.quadrature()).collect();
    let mut gram = DMatrix::zeros(k, k);
    let mut fr = vec![0.0; k];
    let mut fi = vec![0.0; k];
    for &(xi, w) in &nodes {
        let mu = (xi * xi + m * m).sqrt();
        for (j, q) in quads.iter().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for (p, wf) in q {
                let amp = wf * (-mu * p[1]).exp();
                let (s, c) = (xi * p[0]).sin_cos();
                re += amp * c;
                im -= amp * s;
            }
            fr[j] = re;
            fi[j] = im;
        }
        let weight = 2.0 * w / (4.0 * PI * mu);
        for i in 0..k {
            for j in 0..k {
                gram[(i, j)] += weight * (fr[i] * fr[j] + fi[i] * fi[j]);
            }
        }
    }
    Ok(gram)
}

/// Smallest eigenvalue of [`continuum_reflection_gram`].
pub fn reflection_positivity_continuum(kernel: &CovarianceKernel, fs: &[TestFunction]) -> Result<f64> {
    Ok(min_eigenvalue(continuum_reflection_gram(kernel, fs)?))
}
