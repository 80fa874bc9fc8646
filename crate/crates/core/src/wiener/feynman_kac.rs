use rand_distr::{Distribution, StandardNormal};

use super::bridge::{bridge_mass, bridge_values};
use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::stats::{parallel_mean, parallel_moments, Estimate};

fn check(t: f64, n_paths: usize, steps: usize) -> Result<()> {
    if !(t > 0.0) || n_paths < 2 || steps == 0 {
        return Err(Error::InvalidInput(format!(
            "need t > 0, n_paths >= 2, steps >= 1 (t={t}, n_paths={n_paths}, steps={steps})"
        )));
    }
    Ok(())
}

fn finish(e: Estimate) -> Result<Estimate> {
    if !e.mean.is_finite() || !e.stderr.is_finite() {
        return Err(Error::EstimatorFailure(
            "potential or initial function produced a non-finite value along a path".into(),
        ));
    }
    Ok(e)
}

/// Monte Carlo Feynman–Kac estimate of `(e^{−tĤ}ψ)(x₀)`, `Ĥ = −½ d²/dx² + V`.
///
/// Averages `ψ(x(t)) e^{−Σⱼ Δt V(x(tⱼ₋₁))}` over Brownian paths started at
/// `x₀`, with the potential sampled at the left end of each of the `steps`
/// sub-intervals. Units `ħ = m = 1`.
pub fn feynman_kac<V, F>(v: V, psi: F, t: f64, x0: f64, n_paths: usize, steps: usize, rng: &RngStream) -> Result<Estimate>
where
    V: Fn(f64) -> f64 + Sync,
    F: Fn(f64) -> f64 + Sync,
{
    check(t, n_paths, steps)?;
    let dt = t / steps as f64;
    let sd = dt.sqrt();
    let e = parallel_mean(n_paths, rng, |r| {
        let mut x = x0;
        let mut s = 0.0;
        for _ in 0..steps {
            let vx = v(x);
            if !vx.is_finite() {
                return f64::NAN;
            }
            s += dt * vx;
            let z: f64 = StandardNormal.sample(r);
            x += sd * z;
        }
        psi(x) * (-s).exp()
    });
    finish(e)
}

/// Monte Carlo estimate of the integral kernel `e^{−tĤ}(x, y)`.
///
/// The free heat kernel from `x` to `y` multiplies the bridge average of
/// `e^{−Σⱼ Δt V(u(tⱼ₋₁))}`, with bridges pinned at `x` (time 0) and `y`
/// (time `t`).
pub fn feynman_kac_kernel<V>(v: V, t: f64, x: f64, y: f64, n_paths: usize, steps: usize, rng: &RngStream) -> Result<Estimate>
where
    V: Fn(f64) -> f64 + Sync,
{
    check(t, n_paths, steps)?;
    let dt = t / steps as f64;
    let weight = bridge_mass(x, y, 0.0, t)?;
    let e = parallel_mean(n_paths, rng, |r| {
        let mut buf = vec![0.0; steps + 1];
        bridge_values(r, x, y, t, &mut buf);
        let mut s = 0.0;
        for &u in &buf[..steps] {
            let vu = v(u);
            if !vu.is_finite() {
                return f64::NAN;
            }
            s += dt * vu;
        }
        (-s).exp()
    });
    let e = finish(e)?;
    Ok(Estimate {
        mean: weight * e.mean,
        stderr: weight * e.stderr,
        count: e.count,
    })
}

/// Energy decay rate `−(1/Δ) ln(F(t+Δ)/F(t))` with `F(s) = (e^{−sĤ}ψ)(x₀)`.
///
/// Both values come from the same Brownian paths: each path is run to
/// `t + Δ` with the step `t/steps`, and the weights at `t` and `t + Δ` are
/// read off along the way. The standard error follows from the delta method
/// on the ratio of means. `Δ` must be a multiple of the step to within
/// `1e-9`.
#[allow(clippy::too_many_arguments)]
pub fn feynman_kac_energy<V, F>(
    v: V,
    psi: F,
    t: f64,
    delta: f64,
    x0: f64,
    n_paths: usize,
    steps: usize,
    rng: &RngStream,
) -> Result<Estimate>
where
    V: Fn(f64) -> f64 + Sync,
    F: Fn(f64) -> f64 + Sync,
{
    check(t, n_paths, steps)?;
    let dt = t / steps as f64;
    let extra = delta / dt;
    if !(delta > 0.0) || (extra - extra.round()).abs() > 1e-9 * extra.max(1.0) {
        return Err(Error::InvalidInput(format!(
            "delta = {delta} must be a positive multiple of the step {dt}"
        )));
    }
    let total = steps + extra.round() as usize;
    let sd = dt.sqrt();
    // components: w₁, w₂, w₁², w₂², w₁w₂
    let m = parallel_moments(n_paths, rng, 5, |r, out| {
        let mut x = x0;
        let mut s = 0.0f64;
        let mut w1 = f64::NAN;
        for j in 0..total {
            if j == steps {
                w1 = psi(x) * (-s).exp();
            }
            s += dt * v(x);
            let z: f64 = StandardNormal.sample(r);
            x += sd * z;
        }
        let w2 = psi(x) * (-s).exp();
        out.copy_from_slice(&[w1, w2, w1 * w1, w2 * w2, w1 * w2]);
    });
    let e = m.estimates();
    let (m1, m2) = (e[0].mean, e[1].mean);
    if !(m1 > 0.0 && m2 > 0.0) || e.iter().any(|x| !x.mean.is_finite()) {
        return Err(Error::EstimatorFailure(format!(
            "energy estimate needs positive finite path averages, got {m1} and {m2}"
        )));
    }
    // Var(ln m₂ − ln m₁) ≈ Var(w₂/m₂ − w₁/m₁)/n
    let n = m.count() as f64;
    let var = e[3].mean / (m2 * m2) + e[2].mean / (m1 * m1) - 2.0 * e[4].mean / (m1 * m2);
    Ok(Estimate {
        mean: -(m2 / m1).ln() / delta,
        stderr: (var.max(0.0) / (n - 1.0)).sqrt() / delta,
        count: m.count(),
    })
}
