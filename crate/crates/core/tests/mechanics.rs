use pathint::mechanics::{
    action, euler_lagrange_residual, hamiltonian_flow, leapfrog_jacobian, legendre_transform, poisson_bracket, Path,
    PhasePolynomial, PhaseState,
};
use proptest::prelude::*;

const DIM: usize = 2;

/// Random polynomial in `(x₁, x₂, p₁, p₂)` of total degree ≤ 4 with small
/// integer coefficients, so every bracket identity holds exactly in floating point.
fn poly() -> impl Strategy<Value = PhasePolynomial> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 2 * DIM), -3i32..=3), 1..5).prop_map(|terms| {
        let mut acc = PhasePolynomial::zero(DIM);
        for (mut e, c) in terms {
            while e.iter().sum::<u32>() > 4 {
                let i = e.iter().position(|&v| v > 0).unwrap();
                e[i] -= 1;
            }
            acc = acc.try_add(&PhasePolynomial::monomial(DIM, e, c as f64)).unwrap();
        }
        acc
    })
}

fn sub(a: &PhasePolynomial, b: &PhasePolynomial) -> PhasePolynomial {
    a.try_add(&b.scale(-1.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bracket_is_antisymmetric(f in poly(), g in poly()) {
        let fg = poisson_bracket(&f, &g).unwrap();
        let gf = poisson_bracket(&g, &f).unwrap();
        prop_assert!(fg.try_add(&gf).unwrap().is_zero());
        prop_assert!(poisson_bracket(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn bracket_is_bilinear(f in poly(), g in poly(), h in poly(), c in -3i32..=3) {
        let lhs = poisson_bracket(&f.try_add(&g.scale(c as f64)).unwrap(), &h).unwrap();
        let rhs = poisson_bracket(&f, &h).unwrap().try_add(&poisson_bracket(&g, &h).unwrap().scale(c as f64)).unwrap();
        prop_assert!(sub(&lhs, &rhs).is_zero());
    }

    #[test]
    fn bracket_is_a_derivation(f in poly(), g in poly(), h in poly()) {
        let lhs = poisson_bracket(&f, &g.try_mul(&h).unwrap()).unwrap();
        let rhs = poisson_bracket(&f, &g)
            .unwrap()
            .try_mul(&h)
            .unwrap()
            .try_add(&g.try_mul(&poisson_bracket(&f, &h).unwrap()).unwrap())
            .unwrap();
        prop_assert!(sub(&lhs, &rhs).is_zero());
    }

    #[test]
    fn bracket_satisfies_jacobi(f in poly(), g in poly(), h in poly()) {
        let a = poisson_bracket(&f, &poisson_bracket(&g, &h).unwrap()).unwrap();
        let b = poisson_bracket(&g, &poisson_bracket(&h, &f).unwrap()).unwrap();
        let c = poisson_bracket(&h, &poisson_bracket(&f, &g).unwrap()).unwrap();
        prop_assert!(a.try_add(&b).unwrap().try_add(&c).unwrap().is_zero());
    }

    #[test]
    fn leapfrog_step_has_unit_jacobian(x1 in -2.0..2.0f64, x2 in -2.0..2.0f64, p1 in -2.0..2.0f64, p2 in -2.0..2.0f64) {
        // anharmonic, coupled, separable
        let h = PhasePolynomial::monomial(DIM, vec![0, 0, 2, 0], 0.5)
            .try_add(&PhasePolynomial::monomial(DIM, vec![0, 0, 0, 2], 0.5)).unwrap()
            .try_add(&PhasePolynomial::monomial(DIM, vec![4, 0, 0, 0], 0.25)).unwrap()
            .try_add(&PhasePolynomial::monomial(DIM, vec![1, 1, 0, 0], 0.3)).unwrap();
        let s = PhaseState::new(vec![x1, x2], vec![p1, p2]).unwrap();
        let j = leapfrog_jacobian(&h, &s, 0.05).unwrap();
        prop_assert!((j.determinant() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn coupled_oscillators_conserve_energy_and_reverse() {
    let h = PhasePolynomial::monomial(DIM, vec![0, 0, 2, 0], 0.5)
        .try_add(&PhasePolynomial::monomial(DIM, vec![0, 0, 0, 2], 0.5))
        .unwrap()
        .try_add(&PhasePolynomial::monomial(DIM, vec![2, 0, 0, 0], 0.5))
        .unwrap()
        .try_add(&PhasePolynomial::monomial(DIM, vec![0, 2, 0, 0], 2.0))
        .unwrap()
        .try_add(&PhasePolynomial::monomial(DIM, vec![1, 1, 0, 0], 0.4))
        .unwrap();
    let s0 = PhaseState::new(vec![1.0, -0.5], vec![0.2, 0.7]).unwrap();
    let traj = hamiltonian_flow(&h, &s0, 100.0, 100_000).unwrap();
    let e0 = h.eval(&s0.x, &s0.p);
    let drift = traj.iter().map(|s| (h.eval(&s.x, &s.p) - e0).abs()).fold(0.0, f64::max);
    assert!(drift < 1e-6 * e0.abs(), "{drift}");
    let end = traj.last().unwrap();
    let back = hamiltonian_flow(&h, &PhaseState::new(end.x.clone(), end.p.iter().map(|p| -p).collect()).unwrap(), 100.0, 100_000).unwrap();
    let fin = back.last().unwrap();
    let restored = PhaseState::new(fin.x.clone(), fin.p.iter().map(|p| -p).collect()).unwrap();
    assert!(restored.distance(&s0) < 1e-10, "{}", restored.distance(&s0));
}

#[test]
fn legendre_of_exponential() {
    // ℒ(eˣ)(p) = p ln p − p
    for &p in &[0.5, 1.0, 3.0] {
        let v = legendre_transform(f64::exp, p, -10.0, 10.0).unwrap();
        assert!((v - (p * p.ln() - p)).abs() < 1e-9, "p={p}: {v}");
    }
}

#[test]
fn oscillator_action_matches_closed_form() {
    // x(t) = cos t on [0, T]: S = ∫ ½(ẋ² − x²) dt = −sin(2T)/4
    let t_final = 1.3;
    let exact = -f64::sin(2.0 * t_final) / 4.0;
    let errs: Vec<f64> = [200usize, 400, 800]
        .iter()
        .map(|&n| {
            let path = Path::sample(0.0, t_final, n, |t| vec![t.cos()]).unwrap();
            (action(1.0, |q| 0.5 * q[0] * q[0], &path) - exact).abs()
        })
        .collect();
    for w in errs.windows(2) {
        let rate = (w[0] / w[1]).log2();
        assert!(rate > 0.9, "rate {rate}");
    }
    assert!(errs[2] < 1e-3);
}

#[test]
fn two_dimensional_free_action() {
    let path = Path::new(vec![0.0, 2.0], 2, vec![0.0, 0.0, 1.0, 2.0]).unwrap();
    let s = action(3.0, |_| 0.0, &path);
    assert!((s - 3.0 * 5.0 / (2.0 * 2.0)).abs() < 1e-14);
}

#[test]
fn residual_separates_true_and_perturbed_paths() {
    let exact = Path::sample(0.0, 3.0, 3000, |t| vec![t.cos()]).unwrap();
    let r_exact = euler_lagrange_residual(1.0, |q| vec![q[0]], &exact).unwrap();
    let max_exact = r_exact.iter().map(|r| r[0].abs()).fold(0.0, f64::max);
    assert!(max_exact < 1e-5);
    let bumped = Path::sample(0.0, 3.0, 3000, |t| vec![t.cos() + 1e-3 * (5.0 * t).sin() * t * (3.0 - t)]).unwrap();
    let r_bumped = euler_lagrange_residual(1.0, |q| vec![q[0]], &bumped).unwrap();
    let norm = |r: &[Vec<f64>]| r.iter().map(|v| v[0] * v[0]).sum::<f64>().sqrt();
    assert!(norm(&r_bumped) > 10.0 * norm(&r_exact));
}
