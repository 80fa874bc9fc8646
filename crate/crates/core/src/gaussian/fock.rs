use crate::error::{Error, Result};

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Truncated `⟨Exp(h₁), Exp(h₂)⟩ = Σ_{n≤trunc} ⟨h₁,h₂⟩ⁿ/n!` with a bound on
/// the omitted tail; the full series is `e^{⟨h₁,h₂⟩}`.
pub fn fock_exp_inner(h1: &[f64], h2: &[f64], trunc: usize) -> Result<(f64, f64)> {
    if h1.len() != h2.len() {
        return Err(Error::DimensionMismatch {
            expected: h1.len(),
            got: h2.len(),
        });
    }
    let s: f64 = h1.iter().zip(h2).map(|(a, b)| a * b).sum();
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..=trunc {
        term *= s / n as f64;
        sum += term;
    }
    let k = trunc + 1;
    let next = s.abs().powi(k as i32) / factorial(k);
    let ratio = s.abs() / (k + 1) as f64;
    let bound = if ratio < 1.0 { next / (1.0 - ratio) } else { f64::INFINITY };
    Ok((sum, bound))
}

/// Element of `H^{⊗n}` for `H = ℝ^d`, stored as a dense array of `d^n`
/// entries (last factor fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub dim: usize,
    pub order: usize,
    pub data: Vec<f64>,
}

impl Tensor {
    /// `v₁ ⊗ … ⊗ v_n`.
    pub fn product(vs: &[&[f64]]) -> Result<Self> {
        let dim = vs.first().map_or(0, |v| v.len());
        if vs.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidInput("tensor factors must share a dimension".into()));
        }
        let mut data = vec![1.0];
        for v in vs {
            data = data.iter().flat_map(|&a| v.iter().map(move |&b| a * b)).collect();
        }
        Ok(Self {
            dim,
            order: vs.len(),
            data,
        })
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim || self.order != other.order {
            return Err(Error::InvalidInput("tensors live in different spaces".into()));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Symmetric product `v₁ ⊗ₛ … ⊗ₛ v_n = (1/√n!) Σ_σ v_{σ(1)} ⊗ … ⊗ v_{σ(n)}`,
/// summed explicitly over all permutations.
pub fn symmetric_product(vs: &[&[f64]]) -> Result<Tensor> {
    let n = vs.len();
    if n > 8 {
        return Err(Error::Unsupported(format!("explicit symmetrisation limited to 8 factors, got {n}")));
    }
    let mut acc: Option<Tensor> = None;
    for p in permutations(n) {
        let factors: Vec<&[f64]> = p.iter().map(|&i| vs[i]).collect();
        let t = Tensor::product(&factors)?;
        acc = Some(match acc {
            None => t,
            Some(mut a) => {
                a.data.iter_mut().zip(&t.data).for_each(|(x, y)| *x += y);
                a
            }
        });
    }
    let mut t = acc.expect("at least one permutation");
    let c = 1.0 / factorial(n).sqrt();
    t.data.iter_mut().for_each(|x| *x *= c);
    Ok(t)
}

/// `h^{⊗ₛn}`, the symmetric product of `n` copies of `h`.
pub fn symmetric_power(h: &[f64], n: usize) -> Result<Tensor> {
    symmetric_product(&vec![h; n])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_inner_against_exponential() {
        let (v, b) = fock_exp_inner(&[0.3, -1.2], &[1.1, 0.4], 40).unwrap();
        let exact = (0.33f64 - 0.48).exp();
        assert!((v - exact).abs() < 1e-14);
        assert!(b < 1e-40);
        assert_eq!(fock_exp_inner(&[1.0, 2.0], &[0.0, 0.0], 5).unwrap().0, 1.0);
    }

    #[test]
    fn symmetric_power_norms() {
        let h = [0.6, -1.1];
        let h2: f64 = h.iter().map(|v| v * v).sum();
        for n in 0..=5 {
            let t = symmetric_power(&h, n).unwrap();
            let expected = factorial(n) * h2.powi(n as i32);
            assert!((t.norm().powi(2) - expected).abs() < 1e-12 * expected.max(1.0), "n={n}");
        }
    }

    #[test]
    fn symmetric_powers_inner_product() {
        let (a, b) = ([0.5, 0.2], [-0.3, 1.4]);
        let s: f64 = 0.5 * -0.3 + 0.2 * 1.4;
        for n in 1..=4 {
            let v = symmetric_power(&a, n).unwrap().inner(&symmetric_power(&b, n).unwrap()).unwrap();
            assert!((v - factorial(n) * s.powi(n as i32)).abs() < 1e-13);
        }
    }
}
