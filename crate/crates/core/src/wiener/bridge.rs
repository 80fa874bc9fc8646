use std::f64::consts::PI;

use rand_distr::{Distribution, StandardNormal};

use super::rng::{RngStream, StreamRng};
use crate::error::{Error, Result};
use crate::mechanics::Path;

/// Total mass of the conditional Wiener measure pinned at `x` (time `a`) and
/// `y` (time `b`): the heat kernel `(2π(b−a))^{-1/2} e^{−(x−y)²/(2(b−a))}`.
pub fn bridge_mass(x: f64, y: f64, a: f64, b: f64) -> Result<f64> {
    check_interval(a, b)?;
    let t = b - a;
    Ok((-(x - y).powi(2) / (2.0 * t)).exp() / (2.0 * PI * t).sqrt())
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(b > a) {
        return Err(Error::InvalidInput(format!("bridge needs b > a, got [{a}, {b}]")));
    }
    Ok(())
}

/// Samples a Brownian bridge from `x` at time `a` to `y` at time `b` on
/// `steps + 1` uniform nodes, drawing from the start of `rng`.
pub fn sample_bridge(x: f64, y: f64, a: f64, b: f64, steps: usize, rng: &RngStream) -> Result<Path> {
    sample_bridge_with(x, y, a, b, steps, &mut rng.rng())
}

/// [`sample_bridge`] drawing from an existing generator.
pub fn sample_bridge_with(x: f64, y: f64, a: f64, b: f64, steps: usize, rng: &mut StreamRng) -> Result<Path> {
    check_interval(a, b)?;
    if steps == 0 {
        return Err(Error::InvalidInput("bridge needs at least one step".into()));
    }
    let mut values = vec![0.0; steps + 1];
    bridge_values(rng, x, y, b - a, &mut values);
    let times = (0..=steps).map(|i| a + (b - a) * i as f64 / steps as f64).collect();
    Path::scalar(times, values)
}

/// Fills `out` with a bridge from `x` to `y` over duration `span`.
///
/// Given the value `u` at node `j`, the next node is drawn from the exact
/// conditional law `N(u + (y−u)·Δt/r, Δt·(r−Δt)/r)`, `r` the remaining time.
/// Endpoints are set exactly.
pub fn bridge_values(rng: &mut StreamRng, x: f64, y: f64, span: f64, out: &mut [f64]) {
    let steps = out.len() - 1;
    let dt = span / steps as f64;
    out[0] = x;
    let mut u = x;
    for j in 0..steps - 1 {
        let remaining = span - j as f64 * dt;
        let mean = u + (y - u) * dt / remaining;
        let var = dt * (remaining - dt) / remaining;
        let z: f64 = StandardNormal.sample(rng);
        u = mean + var.sqrt() * z;
        out[j + 1] = u;
    }
    out[steps] = y;
}
