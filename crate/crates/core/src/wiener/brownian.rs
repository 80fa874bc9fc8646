use rand_distr::{Distribution, StandardNormal};

use super::rng::{RngStream, StreamRng};
use crate::error::{Error, Result};
use crate::mechanics::Path;
use crate::numerics::integrate_adaptive;
use crate::stats::{parallel_moments, Estimate};

/// Integration half-width, in standard deviations, for unbounded boxes.
const TAIL_SIGMAS: f64 = 8.5;
/// Largest number of times [`cylinder_probability`] integrates over.
pub const MAX_CYLINDER_TIMES: usize = 4;

/// Scalar path on a grid starting at time 0 with value exactly 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianPath {
    path: Path,
}

impl BrownianPath {
    pub fn new(path: Path) -> Result<Self> {
        if path.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: path.dim(),
            });
        }
        if path.times()[0] != 0.0 || path.values()[0] != 0.0 {
            return Err(Error::InvalidInput("Brownian path must start at x(0) = 0".into()));
        }
        Ok(Self { path })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn times(&self) -> &[f64] {
        self.path.times()
    }

    pub fn values(&self) -> &[f64] {
        self.path.values()
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Samples a Brownian path on `steps + 1` uniform nodes of `[0, T]`, drawing
/// from the start of `rng`.
pub fn sample_brownian(t_final: f64, steps: usize, rng: &RngStream) -> Result<BrownianPath> {
    sample_brownian_with(t_final, steps, &mut rng.rng())
}

/// [`sample_brownian`] drawing from an existing generator.
pub fn sample_brownian_with(t_final: f64, steps: usize, rng: &mut StreamRng) -> Result<BrownianPath> {
    if !(t_final > 0.0) || steps == 0 {
        return Err(Error::InvalidInput(format!(
            "need T > 0 and steps >= 1 (T={t_final}, steps={steps})"
        )));
    }
    let mut values = vec![0.0; steps + 1];
    brownian_values(rng, t_final / steps as f64, &mut values);
    let times = (0..=steps).map(|i| t_final * i as f64 / steps as f64).collect();
    BrownianPath::new(Path::scalar(times, values)?)
}

/// Fills `out` with a Brownian path on a uniform grid of step `dt`, `out[0] = 0`.
pub fn brownian_values(rng: &mut StreamRng, dt: f64, out: &mut [f64]) {
    let sd = dt.sqrt();
    let mut x = 0.0;
    out[0] = 0.0;
    for v in out.iter_mut().skip(1) {
        let z: f64 = StandardNormal.sample(rng);
        x += sd * z;
        *v = x;
    }
}

/// Monte Carlo estimate of `E[x(s)x(t)]` from `n_paths` paths sampled on
/// `steps` uniform steps of `[0, T]`. Both times must lie on the grid.
pub fn two_point_estimate(s: f64, t: f64, t_final: f64, steps: usize, n_paths: usize, rng: &RngStream) -> Result<Estimate> {
    let dt = t_final / steps as f64;
    let index = |u: f64| -> Result<usize> {
        let i = (u / dt).round();
        if !(0.0..=steps as f64).contains(&i) || (i * dt - u).abs() > 1e-9 * t_final {
            return Err(Error::InvalidInput(format!("time {u} is not a grid point")));
        }
        Ok(i as usize)
    };
    let (i, j) = (index(s)?, index(t)?);
    let m = parallel_moments(n_paths, rng, 1, |r, out| {
        let mut buf = vec![0.0; steps + 1];
        brownian_values(r, dt, &mut buf);
        out[0] = buf[i] * buf[j];
    });
    Ok(m.estimates()[0])
}

/// Cylinder set `{x : x(tᵢ) ∈ (αᵢ, βᵢ], i = 1..k}`; bounds may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderSet {
    times: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl CylinderSet {
    pub fn new(times: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if times.is_empty() || lower.len() != times.len() || upper.len() != times.len() {
            return Err(Error::InvalidInput("cylinder set needs equal, non-zero numbers of times and bounds".into()));
        }
        if !(times[0] > 0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("cylinder times must satisfy 0 < t₁ < … < t_k".into()));
        }
        if lower.iter().zip(&upper).any(|(a, b)| a.is_nan() || b.is_nan() || a > b) {
            return Err(Error::InvalidInput("cylinder boxes must satisfy α ≤ β".into()));
        }
        Ok(Self { times, lower, upper })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether a sampled path (values at the set's times) lies in the set.
    pub fn contains(&self, values: &[f64]) -> bool {
        values
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&a, &b))| v > a && v <= b)
    }
}

/// Standard normal CDF.
fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// `P(a < N(0,1) ≤ b)`, evaluated on the tail that avoids cancellation.
fn normal_interval(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        normal_cdf(-a) - normal_cdf(-b)
    } else {
        normal_cdf(b) - normal_cdf(a)
    }
}

/// Wiener measure of a cylinder set.
///
/// Evaluates the iterated Gaussian integral
/// `∫_{box₁}…∫_{box_k} Π p(tᵢ − tᵢ₋₁, xᵢ₋₁, xᵢ) dx` with heat kernel `p`.
/// The innermost integral is a normal-CDF difference; the outer ones use
/// adaptive Gauss–Kronrod on the box clipped to `±8.5σ` of the conditional
/// mean, split at the next box's edges. Supports `k ≤ 4`.
pub fn cylinder_probability(c: &CylinderSet) -> Result<f64> {
    if c.len() > MAX_CYLINDER_TIMES {
        return Err(Error::Unsupported(format!(
            "cylinder quadrature supports at most {MAX_CYLINDER_TIMES} times, got {}; use Monte Carlo",
            c.len()
        )));
    }
    let sigmas: Vec<f64> = c
        .times
        .iter()
        .scan(0.0, |prev, &t| {
            let s = (t - *prev).sqrt();
            *prev = t;
            Some(s)
        })
        .collect();
    Ok(nested(c, &sigmas, 0, 0.0).clamp(0.0, 1.0))
}

fn nested(c: &CylinderSet, sigmas: &[f64], level: usize, x_prev: f64) -> f64 {
    let sd = sigmas[level];
    let (a, b) = (c.lower[level], c.upper[level]);
    if level + 1 == c.len() {
        return normal_interval((a - x_prev) / sd, (b - x_prev) / sd);
    }
    let lo = a.max(x_prev - TAIL_SIGMAS * sd);
    let hi = b.min(x_prev + TAIL_SIGMAS * sd);
    if !(hi > lo) {
        return 0.0;
    }
    let mut cuts = vec![lo, hi, x_prev];
    cuts.push(c.lower[level + 1]);
    cuts.push(c.upper[level + 1]);
    cuts.retain(|v| v.is_finite() && *v >= lo && *v <= hi);
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();
    let norm = 1.0 / (sd * (2.0 * std::f64::consts::PI).sqrt());
    let f = |x: f64| {
        let z = (x - x_prev) / sd;
        norm * (-0.5 * z * z).exp() * nested(c, sigmas, level + 1, x)
    };
    cuts.windows(2).map(|w| integrate_adaptive(f, w[0], w[1], 1e-12, 1e-11)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::parallel_mean;

    #[test]
    fn starts_at_origin_on_uniform_grid() {
        let p = sample_brownian(2.0, 16, &RngStream::new(1, 0)).unwrap();
        assert_eq!(p.values()[0], 0.0);
        assert_eq!(p.len(), 17);
        assert!((p.path().uniform_step().unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn deterministic() {
        let a = sample_brownian(1.0, 100, &RngStream::new(9, 3)).unwrap();
        let b = sample_brownian(1.0, 100, &RngStream::new(9, 3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn endpoint_variance() {
        let e = parallel_mean(20_000, &RngStream::new(2, 0), |r| {
            let p = sample_brownian_with(1.5, 8, r).unwrap();
            p.values()[8].powi(2)
        });
        assert!(e.z_score(1.5) < 4.0);
    }

    #[test]
    fn single_time_cylinders() {
        let inf = f64::INFINITY;
        let half = CylinderSet::new(vec![1.0], vec![-inf], vec![0.0]).unwrap();
        assert!((cylinder_probability(&half).unwrap() - 0.5).abs() < 1e-14);
        let all = CylinderSet::new(vec![1.0], vec![-inf], vec![inf]).unwrap();
        assert_eq!(cylinder_probability(&all).unwrap(), 1.0);
    }

    #[test]
    fn two_time_full_line_is_marginal() {
        let inf = f64::INFINITY;
        let one = CylinderSet::new(vec![0.7], vec![-0.2], vec![0.9]).unwrap();
        let two = CylinderSet::new(vec![0.3, 0.7], vec![-inf, -0.2], vec![inf, 0.9]).unwrap();
        let p1 = cylinder_probability(&one).unwrap();
        let p2 = cylinder_probability(&two).unwrap();
        assert!((p1 - p2).abs() < 1e-9, "{p1} vs {p2}");
    }

    #[test]
    fn two_time_quadrant() {
        // P(x(1) > 0, x(2) > 0) = 1/4 + asin(ρ)/(2π), ρ = 1/√2
        let inf = f64::INFINITY;
        let c = CylinderSet::new(vec![1.0, 2.0], vec![0.0, 0.0], vec![inf, inf]).unwrap();
        let exact = 0.25 + (0.5f64.sqrt()).asin() / (2.0 * std::f64::consts::PI);
        assert!((cylinder_probability(&c).unwrap() - exact).abs() < 1e-9);
    }

    #[test]
    fn too_many_times() {
        let c = CylinderSet::new(vec![0.1, 0.2, 0.3, 0.4, 0.5], vec![0.0; 5], vec![1.0; 5]).unwrap();
        assert!(matches!(cylinder_probability(&c), Err(Error::Unsupported(_))));
    }

    #[test]
    fn invalid_sets() {
        assert!(CylinderSet::new(vec![0.0], vec![0.0], vec![1.0]).is_err());
        assert!(CylinderSet::new(vec![0.5, 0.4], vec![0.0; 2], vec![1.0; 2]).is_err());
        assert!(CylinderSet::new(vec![0.5], vec![1.0], vec![0.0]).is_err());
    }

    #[test]
    fn off_grid_two_point_rejected() {
        assert!(two_point_estimate(0.33, 0.8, 1.0, 10, 10, &RngStream::new(0, 0)).is_err());
    }
}
