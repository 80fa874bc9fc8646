use nalgebra::DMatrix;

use super::PhasePolynomial;
use crate::error::{Error, Result};

/// A point `(x, p)` of phase space `ℝ²ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhaseState {
    pub fn new(x: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if x.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: p.len(),
            });
        }
        Ok(Self { x, p })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn distance(&self, other: &PhaseState) -> f64 {
        self.x
            .iter()
            .chain(&self.p)
            .zip(other.x.iter().chain(&other.p))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

struct SplitHamiltonian {
    grad_t: Vec<PhasePolynomial>,
    grad_v: Vec<PhasePolynomial>,
}

impl SplitHamiltonian {
    fn new(h: &PhasePolynomial) -> Result<Self> {
        let (t, v) = h
            .split_separable()
            .ok_or_else(|| Error::UnsupportedHamiltonian("leapfrog requires H = T(p) + V(x)".into()))?;
        let n = h.dim();
        Ok(Self {
            grad_t: (0..n).map(|i| t.d_dp(i)).collect(),
            grad_v: (0..n).map(|i| v.d_dx(i)).collect(),
        })
    }

    fn kick(&self, s: &mut PhaseState, dt: f64) {
        let zeros = vec![0.0; s.dim()];
        let force: Vec<f64> = self.grad_v.iter().map(|g| g.eval(&s.x, &zeros)).collect();
        for (p, f) in s.p.iter_mut().zip(force) {
            *p -= dt * f;
        }
    }

    fn drift(&self, s: &mut PhaseState, dt: f64) {
        let zeros = vec![0.0; s.dim()];
        let vel: Vec<f64> = self.grad_t.iter().map(|g| g.eval(&zeros, &s.p)).collect();
        for (x, v) in s.x.iter_mut().zip(vel) {
            *x += dt * v;
        }
    }

    fn step(&self, s: &mut PhaseState, dt: f64) {
        self.kick(s, 0.5 * dt);
        self.drift(s, dt);
        self.kick(s, 0.5 * dt);
    }
}

/// Integrates Hamilton's equations `ẋ = ∂H/∂p`, `ṗ = −∂H/∂x` with the
/// kick–drift–kick leapfrog scheme and returns the `steps + 1` states at
/// uniformly spaced times `0, t/steps, …, t`. Negative `t` runs backwards.
pub fn hamiltonian_flow(h: &PhasePolynomial, s0: &PhaseState, t: f64, steps: usize) -> Result<Vec<PhaseState>> {
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be >= 1".into()));
    }
    if s0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: s0.dim(),
        });
    }
    let split = SplitHamiltonian::new(h)?;
    let dt = t / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = s0.clone();
    out.push(s.clone());
    for _ in 0..steps {
        split.step(&mut s, dt);
        out.push(s.clone());
    }
    Ok(out)
}

/// Jacobian `∂(x', p')/∂(x, p)` of one leapfrog step, assembled from the
/// exact Hessians of `T` and `V`.
pub fn leapfrog_jacobian(h: &PhasePolynomial, s: &PhaseState, dt: f64) -> Result<DMatrix<f64>> {
    let n = h.dim();
    let (t, v) = h
        .split_separable()
        .ok_or_else(|| Error::UnsupportedHamiltonian("leapfrog requires H = T(p) + V(x)".into()))?;
    let split = SplitHamiltonian::new(h)?;
    let zeros = vec![0.0; n];
    let hess_v = |x: &[f64]| DMatrix::from_fn(n, n, |i, j| v.d_dx(i).d_dx(j).eval(x, &zeros));
    let hess_t = |p: &[f64]| DMatrix::from_fn(n, n, |i, j| t.d_dp(i).d_dp(j).eval(&zeros, p));
    let kick_jac = |x: &[f64]| {
        let mut m = DMatrix::<f64>::identity(2 * n, 2 * n);
        let hv = hess_v(x) * (-0.5 * dt);
        m.view_mut((n, 0), (n, n)).copy_from(&hv);
        m
    };
    let drift_jac = |p: &[f64]| {
        let mut m = DMatrix::<f64>::identity(2 * n, 2 * n);
        let ht = hess_t(p) * dt;
        m.view_mut((0, n), (n, n)).copy_from(&ht);
        m
    };

    let mut state = s.clone();
    let j1 = kick_jac(&state.x);
    split.kick(&mut state, 0.5 * dt);
    let j2 = drift_jac(&state.p);
    split.drift(&mut state, dt);
    let j3 = kick_jac(&state.x);
    Ok(j3 * j2 * j1)
}
