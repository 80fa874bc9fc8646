use super::Path;
use crate::error::{Error, Result};

/// Discretised action of a piecewise-linear path,
/// `Σᵢ Δtᵢ [ (m/2)‖(qᵢ₊₁ − qᵢ)/Δtᵢ‖² − V(qᵢ) ]`.
///
/// The potential is sampled at the left end of each interval, the same rule
/// the time-sliced path integral uses.
pub fn action<V: Fn(&[f64]) -> f64>(mass: f64, potential: V, path: &Path) -> f64 {
    let t = path.times();
    (0..path.len() - 1)
        .map(|i| {
            let dt = t[i + 1] - t[i];
            let (a, b) = (path.point(i), path.point(i + 1));
            let v2: f64 = a.iter().zip(b).map(|(x, y)| (y - x) * (y - x)).sum::<f64>() / (dt * dt);
            dt * (0.5 * mass * v2 - potential(a))
        })
        .sum()
}

/// Discrete Euler–Lagrange residual `−∇V(qᵢ) − m(qᵢ₊₁ − 2qᵢ + qᵢ₋₁)/Δt²`
/// at every interior node of a uniform path.
pub fn euler_lagrange_residual<G: Fn(&[f64]) -> Vec<f64>>(mass: f64, grad_potential: G, path: &Path) -> Result<Vec<Vec<f64>>> {
    let dt = path
        .uniform_step()
        .ok_or_else(|| Error::InvalidInput("Euler-Lagrange residual needs a uniform time grid".into()))?;
    Ok((1..path.len() - 1)
        .map(|i| {
            let (prev, cur, next) = (path.point(i - 1), path.point(i), path.point(i + 1));
            let grad = grad_potential(cur);
            (0..path.dim())
                .map(|k| -grad[k] - mass * (next[k] - 2.0 * cur[k] + prev[k]) / (dt * dt))
                .collect()
        })
        .collect())
}
