use super::brownian::BrownianPath;
use crate::error::{Error, Result};

/// Discrete Hölder quotient `max_ℓ max_i |x(t_{i+ℓ}) − x(tᵢ)| / (ℓΔt)^α` over
/// dyadic lags `ℓ = 1, 2, 4, …` shorter than the path.
pub fn holder_statistic(path: &BrownianPath, alpha: f64) -> Result<f64> {
    let dt = path
        .path()
        .uniform_step()
        .ok_or_else(|| Error::InvalidInput("Hölder statistic needs a uniform grid".into()))?;
    let x = path.values();
    let mut best = 0.0f64;
    let mut lag = 1;
    while lag < x.len() {
        let scale = (lag as f64 * dt).powf(alpha);
        let m = x.windows(lag + 1).map(|w| (w[lag] - w[0]).abs()).fold(0.0, f64::max);
        best = best.max(m / scale);
        lag *= 2;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanics::Path;

    #[test]
    fn linear_path() {
        // slope 2 on [0,1]: lag-ℓ quotient 2(ℓΔt)^{1−α}, largest at the full-length lag 8
        let p = BrownianPath::new(Path::sample(0.0, 1.0, 8, |t| vec![2.0 * t]).unwrap()).unwrap();
        let h = holder_statistic(&p, 0.5).unwrap();
        assert!((h - 2.0).abs() < 1e-12);
        let h1 = holder_statistic(&p, 1.0).unwrap();
        assert!((h1 - 2.0).abs() < 1e-12);
        let h0 = holder_statistic(&p, 0.0).unwrap();
        assert!((h0 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_uniform_rejected() {
        let p = BrownianPath::new(Path::scalar(vec![0.0, 0.1, 0.5], vec![0.0, 1.0, 0.0]).unwrap()).unwrap();
        assert!(holder_statistic(&p, 0.5).is_err());
    }
}
