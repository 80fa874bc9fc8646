use crate::error::{Error, Result};

/// Log-magnitude below which the scaled integrand is dropped (`e^{-40} ≈ 4e-18`).
const TAIL_LOG: f64 = 40.0;

/// Modified Bessel function of the second kind,
/// `K_ν(z) = ∫₀^∞ e^{-z cosh t} cosh(νt) dt`.
///
/// The integral is truncated at `T` where the scaled integrand
/// `e^{-z(cosh t − 1)} cosh(νt)` has fallen below `e^{-40}`, then evaluated by
/// trapezoidal sums with repeated step halving. The integrand is even and
/// entire in `t`, so the trapezoidal rule converges geometrically and the
/// refinement stops once two levels agree to `1e-15` relative.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("K_nu(z) requires z > 0, got {z}")));
    }
    if !nu.is_finite() {
        return Err(Error::Domain(format!("order must be finite, got {nu}")));
    }
    let nu = nu.abs();
    let log_integrand = |t: f64| -z * (t.cosh() - 1.0) + nu * t;
    let integrand = |t: f64| (-z * (t.cosh() - 1.0)).exp() * (nu * t).cosh();

    // The log-integrand is concave; step past its maximum, then until the tail is negligible.
    let mut upper = 0.5;
    while log_integrand(upper) > -TAIL_LOG || log_integrand(upper) > log_integrand(upper * 0.5) {
        upper *= 1.25;
    }

    let mut n = 16usize;
    let mut h = upper / n as f64;
    let mut sum = 0.5 * (integrand(0.0) + integrand(upper)) + (1..n).map(|i| integrand(i as f64 * h)).sum::<f64>();
    let mut estimate = sum * h;
    for _ in 0..20 {
        let odd: f64 = (0..n).map(|i| integrand((2 * i + 1) as f64 * h * 0.5)).sum();
        sum += odd;
        n *= 2;
        h *= 0.5;
        let next = sum * h;
        let converged = (next - estimate).abs() <= 1e-15 * next.abs();
        estimate = next;
        if converged && n >= 64 {
            break;
        }
    }
    Ok(estimate * (-z).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn half_order_closed_form() {
        let v = bessel_k(0.5, 2.0).unwrap();
        let exact = (PI / 4.0).sqrt() * (-2.0f64).exp();
        assert!((v / exact - 1.0).abs() < 1e-12, "{}", v / exact - 1.0);
    }

    #[test]
    fn half_order_across_range() {
        for &z in &[1e-3, 0.01, 0.3, 1.0, 7.5, 20.0, 50.0] {
            let v = bessel_k(0.5, z).unwrap();
            let exact = (PI / (2.0 * z)).sqrt() * (-z).exp();
            assert!((v / exact - 1.0).abs() < 1e-9, "z={z}: {}", v / exact - 1.0);
            let v = bessel_k(1.5, z).unwrap();
            let exact = (PI / (2.0 * z)).sqrt() * (-z).exp() * (1.0 + 1.0 / z);
            assert!((v / exact - 1.0).abs() < 1e-9, "z={z}: {}", v / exact - 1.0);
        }
    }

    #[test]
    fn reference_values() {
        // Abramowitz & Stegun table 9.8
        let k0_1 = 0.421_024_438_240_708_3;
        let k1_1 = 0.601_907_230_197_234_6;
        assert!((bessel_k(0.0, 1.0).unwrap() / k0_1 - 1.0).abs() < 1e-12);
        assert!((bessel_k(1.0, 1.0).unwrap() / k1_1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_term_recurrence() {
        for &nu in &[0.5, 1.0, 1.5] {
            for &z in &[0.5, 1.0, 5.0] {
                let lhs = bessel_k(nu + 1.0, z).unwrap();
                let rhs = bessel_k(nu - 1.0, z).unwrap() + 2.0 * nu / z * bessel_k(nu, z).unwrap();
                assert!((lhs / rhs - 1.0).abs() < 1e-7, "nu={nu} z={z}");
            }
        }
    }

    #[test]
    fn positive() {
        for &nu in &[0.0, 0.3, 1.0, 2.5] {
            for &z in &[1e-3, 0.1, 1.0, 10.0, 50.0] {
                assert!(bessel_k(nu, z).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn domain_error() {
        assert!(matches!(bessel_k(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(1.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn matches_three_dimensional_covariance() {
        // (2π)^{-3/2} (m/r)^{1/2} K_{1/2}(mr) = e^{-mr}/(4πr) at m = r = 1
        let v = (2.0 * PI).powf(-1.5) * bessel_k(0.5, 1.0).unwrap();
        let exact = (-1.0f64).exp() / (4.0 * PI);
        assert!((v / exact - 1.0).abs() < 1e-6);
    }
}
