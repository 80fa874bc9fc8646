use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{fresnel_integral_complex, QuadraticForm};

/// Real-time (oscillatory) or Euclidean (heat) free propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMode {
    RealTime,
    Euclidean,
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!("propagation time must be positive, got {t}")));
    }
    Ok(())
}

/// Free-particle kernel.
///
/// Real time: `√(m/(2πiħt)) e^{i m (x−y)²/(2ħt)}` with `√i = e^{iπ/4}`.
/// Euclidean: `√(m/(2πħt)) e^{−m (x−y)²/(2ħt)}`, the heat kernel, which is
/// `(2πt)^{-1/2} e^{−(x−y)²/(2t)}` in units `m = ħ = 1`.
pub fn free_kernel(t: f64, x: f64, y: f64, mass: f64, hbar: f64, mode: KernelMode) -> Result<Complex64> {
    check_time(t)?;
    let amp = (mass / (2.0 * PI * hbar * t)).sqrt();
    let q = mass * (x - y).powi(2) / (2.0 * hbar * t);
    Ok(match mode {
        KernelMode::RealTime => Complex64::from_polar(amp, q - PI / 4.0),
        KernelMode::Euclidean => Complex64::new(amp * (-q).exp(), 0.0),
    })
}

/// Real-time free kernel assembled from `n` time slices.
///
/// Evaluates `A(n,t) ∫ e^{(i/ħ)S(γ)} dx₁…dx_{n−1}` where `S` is the sliced
/// free action `(m/2Δt) Σ (x_k − x_{k−1})²` with `x₀ = x`, `x_n = y`,
/// `Δt = t/n`, and `A(n,t) = (m/(2πiħΔt))^{n/2}`. The Gaussian integral over
/// the interior points is done in closed form by [`fresnel_integral_complex`]
/// on the tridiagonal form of the action. Interior coordinates are rescaled by
/// `√(2πħΔt/m)` so that the form is `2π·tridiag(−1, 2, −1)` and the large
/// prefactors cancel analytically.
pub fn timeslice_free_kernel(t: f64, x: f64, y: f64, mass: f64, hbar: f64, n: usize) -> Result<Complex64> {
    check_time(t)?;
    if n == 0 {
        return Err(Error::InvalidInput("need at least one time slice".into()));
    }
    let dt = t / n as f64;
    let w = mass / (hbar * dt);
    if n == 1 {
        return free_kernel(t, x, y, mass, hbar, KernelMode::RealTime);
    }
    let d = n - 1;
    let mut q = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        q[(i, i)] = 4.0 * PI;
        if i + 1 < d {
            q[(i, i + 1)] = -2.0 * PI;
            q[(i + 1, i)] = -2.0 * PI;
        }
    }
    let form = QuadraticForm::new(q)?;
    let s = (2.0 * PI / w).sqrt();
    // linear phase i⟨b,u⟩ with b = −w(x e₁ + y e_{n−1}), in rescaled variables
    let mut lin = vec![Complex64::new(0.0, 0.0); d];
    lin[0] += Complex64::new(0.0, -w * s * x);
    lin[d - 1] += Complex64::new(0.0, -w * s * y);
    let gauss = fresnel_integral_complex(&form, &lin)?;
    let boundary_phase = 0.5 * w * (x * x + y * y);
    let prefactor = Complex64::from_polar((w / (2.0 * PI)).sqrt(), boundary_phase - PI * n as f64 / 4.0);
    Ok(prefactor * gauss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_adaptive;

    #[test]
    fn euclidean_semigroup() {
        let k = |t: f64, a: f64, b: f64| free_kernel(t, a, b, 1.0, 1.0, KernelMode::Euclidean).unwrap().re;
        let (t1, t2, x, z) = (0.3, 0.7, 0.0, 1.0);
        let lhs = integrate_adaptive(|y| k(t1, x, y) * k(t2, y, z), -15.0, 15.0, 1e-14, 1e-13);
        assert!((lhs - k(t1 + t2, x, z)).abs() < 1e-10);
    }

    #[test]
    fn euclidean_normalized() {
        let total = integrate_adaptive(
            |y| free_kernel(0.4, 0.3, y, 1.0, 1.0, KernelMode::Euclidean).unwrap().re,
            -15.0,
            15.0,
            1e-14,
            1e-13,
        );
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn realtime_modulus_constant() {
        let (m, hbar, t) = (2.0, 0.5, 1.3);
        let expected = (m / (2.0 * PI * hbar * t)).sqrt();
        for &(x, y) in &[(0.0, 0.0), (1.0, -2.0), (5.0, 3.0)] {
            let v = free_kernel(t, x, y, m, hbar, KernelMode::RealTime).unwrap();
            assert!((v.norm() - expected).abs() < 1e-14);
        }
        let at_origin = free_kernel(t, 0.0, 0.0, m, hbar, KernelMode::RealTime).unwrap();
        assert!((at_origin.arg() + PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn nonpositive_time_rejected() {
        assert!(free_kernel(0.0, 0.0, 1.0, 1.0, 1.0, KernelMode::RealTime).is_err());
        assert!(timeslice_free_kernel(-1.0, 0.0, 1.0, 1.0, 1.0, 3).is_err());
    }

    #[test]
    fn slices_reproduce_free_kernel() {
        let exact = free_kernel(1.0, 0.0, 1.0, 1.0, 1.0, KernelMode::RealTime).unwrap();
        assert_eq!(timeslice_free_kernel(1.0, 0.0, 1.0, 1.0, 1.0, 1).unwrap(), exact);
        assert!((timeslice_free_kernel(1.0, 0.0, 1.0, 1.0, 1.0, 2).unwrap() - exact).norm() < 1e-12);
        assert!((timeslice_free_kernel(1.0, 0.0, 1.0, 1.0, 1.0, 10).unwrap() - exact).norm() < 1e-10);
        let exact = free_kernel(0.7, -0.4, 1.9, 1.7, 0.6, KernelMode::RealTime).unwrap();
        for n in [3, 17, 64] {
            let v = timeslice_free_kernel(0.7, -0.4, 1.9, 1.7, 0.6, n).unwrap();
            assert!((v - exact).norm() < 1e-9, "n={n}: {v} vs {exact}");
        }
    }
}
