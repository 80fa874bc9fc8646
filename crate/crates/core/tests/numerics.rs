use std::f64::consts::PI;

use num_complex::Complex64;
use pathint::numerics::{
    bessel_k, fourier_transform, fresnel_integral, fresnel_integral_complex, gauss_hermite_expect, Direction,
    GaussLegendre, QuadraticForm, SampledFunction, UniformGrid,
};
use proptest::prelude::*;

/// `∫ e^{(i/2)q x² + i b x − ε x²/2} dx` by brute-force composite quadrature.
fn damped_oscillatory_integral(q: f64, b: f64, eps: f64) -> Complex64 {
    // e^{-ε x²/2} < 1e-17 beyond this
    let half = (2.0 * 40.0 / eps).sqrt();
    let gl = GaussLegendre::new(16).unwrap();
    let panels = (half * (q.abs() * half + b.abs()) / 2.0).ceil() as usize + 50;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in gl.composite_points(-half, half, panels) {
        let phase = 0.5 * q * x * x + b * x;
        acc += w * (-0.5 * eps * x * x).exp() * Complex64::from_polar(1.0, phase);
    }
    acc
}

/// Polynomial extrapolation of samples `(ε_i, I(ε_i))` to `ε = 0` (Neville).
fn extrapolate_to_zero(eps: &[f64], vals: &[Complex64]) -> Complex64 {
    let mut p = vals.to_vec();
    let n = eps.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i + 1] * eps[i] - p[i] * eps[i + m]) / (eps[i] - eps[i + m]);
        }
    }
    p[0]
}

fn regularized_oracle(q: f64, b: f64) -> Complex64 {
    let eps: Vec<f64> = (0..6).map(|k| 0.4 * 0.5f64.powi(k)).collect();
    let vals: Vec<Complex64> = eps.iter().map(|&e| damped_oscillatory_integral(q, b, e)).collect();
    extrapolate_to_zero(&eps, &vals)
}

#[test]
fn fresnel_closed_form_matches_regularized_limit() {
    for &(q, b) in &[(1.0, 0.0), (-1.0, 0.0), (2.5, 0.7), (-0.8, -1.1)] {
        let form = QuadraticForm::from_diagonal(&[q]).unwrap();
        let closed = fresnel_integral_complex(&form, &[Complex64::new(0.0, b)]).unwrap();
        let oracle = regularized_oracle(q, b);
        assert!((closed - oracle).norm() < 1e-6 * closed.norm(), "q={q} b={b}: {closed} vs {oracle}");
    }
}

#[test]
fn fresnel_reference_values() {
    let one = fresnel_integral(&QuadraticForm::from_diagonal(&[1.0]).unwrap(), &[0.0]).unwrap();
    let expected = Complex64::from_polar((2.0 * PI).sqrt(), PI / 4.0);
    assert!((one - expected).norm() < 1e-14);
    let minus = fresnel_integral(&QuadraticForm::from_diagonal(&[-1.0]).unwrap(), &[0.0]).unwrap();
    assert!((minus - one.conj()).norm() < 1e-14);
    let split = fresnel_integral(&QuadraticForm::from_diagonal(&[1.0, -1.0]).unwrap(), &[0.0, 0.0]).unwrap();
    assert!((split - Complex64::new(2.0 * PI, 0.0)).norm() < 1e-12);
}

#[test]
fn fresnel_factorizes_over_eigenbasis() {
    // a rotated diagonal form equals the product of one-dimensional integrals
    let (c, s) = (0.6f64, 0.8f64);
    let rot = nalgebra::DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    let diag = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.5, -0.7]));
    let q = QuadraticForm::new(&rot * diag * rot.transpose()).unwrap();
    let b = [0.3, -0.4];
    let w: Vec<Complex64> = b.iter().map(|&x| Complex64::new(0.0, x)).collect();
    let full = fresnel_integral_complex(&q, &w).unwrap();
    let b_rot = [c * b[0] + s * b[1], -s * b[0] + c * b[1]];
    let prod = regularized_oracle(1.5, b_rot[0]) * regularized_oracle(-0.7, b_rot[1]);
    assert!((full - prod).norm() < 1e-6 * full.norm(), "{full} vs {prod}");
}

#[test]
fn gaussian_fourier_pair() {
    let grid = UniformGrid::periodic(-20.0, 20.0, 1024).unwrap();
    let f = SampledFunction::from_fn(grid, |x| Complex64::new((-x * x / 2.0).exp(), 0.0));
    let fh = fourier_transform(&f, Direction::Forward);
    let err = fh
        .grid
        .points()
        .zip(&fh.values)
        .map(|(k, v)| (v - (-k * k / 2.0).exp()).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");
}

#[test]
fn derivative_becomes_multiplication() {
    let grid = UniformGrid::periodic(-20.0, 20.0, 1024).unwrap();
    let g = |x: f64| (-(x - 0.5) * (x - 0.5)).exp() * (2.0 * x).cos();
    let dg = |x: f64| {
        let e = (-(x - 0.5) * (x - 0.5)).exp();
        e * (-2.0 * (x - 0.5) * (2.0 * x).cos() - 2.0 * (2.0 * x).sin())
    };
    // five-point central differences
    let h = 1e-3;
    let fd = |x: f64| (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h);
    let f = SampledFunction::from_fn(grid, |x| Complex64::new(g(x), 0.0));
    let df = SampledFunction::from_fn(grid, |x| Complex64::new(fd(x), 0.0));
    let fh = fourier_transform(&f, Direction::Forward);
    let dfh = fourier_transform(&df, Direction::Forward);
    let mut err: f64 = 0.0;
    for (j, k) in fh.grid.points().enumerate() {
        err = err.max((dfh.values[j] - Complex64::new(0.0, k) * fh.values[j]).norm());
    }
    assert!(err < 1e-6, "{err}");
    // the finite-difference stencil itself is accurate
    assert!((fd(0.3) - dg(0.3)).abs() < 1e-9);
}

fn smooth_random(coeffs: &[(f64, f64, f64)]) -> impl Fn(f64) -> Complex64 + '_ {
    move |x| {
        coeffs
            .iter()
            .map(|&(a, c, w)| Complex64::new(a * (-(x - c).powi(2) / (w * w)).exp(), 0.3 * a * (-(x + c).powi(2)).exp()))
            .sum()
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn round_trip_and_plancherel(coeffs in prop::collection::vec((-2.0..2.0f64, -3.0..3.0f64, 0.5..2.0f64), 1..5)) {
        let grid = UniformGrid::periodic(-25.0, 25.0, 512).unwrap();
        let f = SampledFunction::from_fn(grid, smooth_random(&coeffs));
        let fh = fourier_transform(&f, Direction::Forward);
        let back = fourier_transform(&fh, Direction::Inverse);
        let scale = f.values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-3);
        prop_assert!(back.max_abs_diff(&f) < 1e-10 * scale);
        let (n, nh) = (f.norm_l2(), fh.norm_l2());
        prop_assert!((n - nh).abs() < 1e-10 * n.max(1e-3));
    }

    #[test]
    fn bessel_recurrence(nu in prop::sample::select(vec![0.5, 1.0, 1.5]), z in prop::sample::select(vec![0.5, 1.0, 5.0])) {
        let lhs = bessel_k(nu + 1.0, z).unwrap();
        let rhs = bessel_k((nu - 1.0f64).abs(), z).unwrap() + 2.0 * nu / z * bessel_k(nu, z).unwrap();
        prop_assert!((lhs / rhs - 1.0).abs() < 1e-7);
    }

    #[test]
    fn bessel_positive(nu in 0.0..4.0f64, z in 1e-3..50.0f64) {
        prop_assert!(bessel_k(nu, z).unwrap() > 0.0);
    }
}

#[test]
fn bessel_against_integral_oracle() {
    // K_0 and K_1 from the defining integral with an independent quadrature
    for &(nu, z) in &[(0.0, 1e-3), (0.0, 0.7), (1.0, 2.0), (2.5, 10.0), (0.3, 50.0)] {
        let integrand = |t: f64| (-z * t.cosh()).exp() * (nu * t).cosh();
        let upper = (40.0f64 / z).acosh().max(1.0) + 2.0;
        let gl = GaussLegendre::new(20).unwrap();
        let oracle = gl.integrate_composite(integrand, 0.0, upper, 400);
        let v = bessel_k(nu, z).unwrap();
        assert!((v / oracle - 1.0).abs() < 1e-9, "nu={nu} z={z}: {v} vs {oracle}");
    }
    let half = bessel_k(0.5, 2.0).unwrap();
    assert!((half / ((PI / 4.0).sqrt() * (-2.0f64).exp()) - 1.0).abs() < 1e-9);
}

#[test]
fn gauss_hermite_reference_values() {
    assert!((gauss_hermite_expect(|x| x * x, 5).unwrap() - 1.0).abs() < 1e-14);
    assert!((gauss_hermite_expect(|x| x.powi(4), 5).unwrap() - 3.0).abs() < 1e-13);
    assert!((gauss_hermite_expect(f64::exp, 40).unwrap() - 0.5f64.exp()).abs() < 1e-12);
}
