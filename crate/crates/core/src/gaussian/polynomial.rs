use std::collections::{BTreeMap, HashMap};
use std::fmt;

use nalgebra::DMatrix;

use super::diagrams::pairing_sum;
use super::measure::GaussianSpec;
use crate::error::{Error, Result};

fn check_pairing_matrix(q: &DMatrix<f64>) -> Result<()> {
    if !q.is_square() {
        return Err(Error::InvalidPairing("pairing matrix must be square".into()));
    }
    let scale = q.amax().max(1.0);
    if (q - q.transpose()).amax() > 1e-12 * scale {
        return Err(Error::InvalidPairing("pairing matrix must be symmetric".into()));
    }
    if q.diagonal().iter().any(|&d| d < 0.0) {
        return Err(Error::InvalidPairing("self-pairings q(f,f) must be non-negative".into()));
    }
    Ok(())
}

/// Polynomial in jointly Gaussian linear functionals `f₁, …, f_k`.
///
/// Terms are ordinary monomials `Π fᵢ^{eᵢ}`; the pairing matrix
/// `q(fᵢ, fⱼ) = E[fᵢfⱼ]` determines Gaussian integrals and Wick ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct WickPolynomial {
    q: DMatrix<f64>,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl WickPolynomial {
    pub fn zero(q: DMatrix<f64>) -> Result<Self> {
        check_pairing_matrix(&q)?;
        Ok(Self {
            q,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(q: DMatrix<f64>, c: f64) -> Result<Self> {
        let k = q.nrows();
        Self::monomial(q, vec![0; k], c)
    }

    pub fn monomial(q: DMatrix<f64>, exponents: Vec<u32>, c: f64) -> Result<Self> {
        let mut p = Self::zero(q)?;
        if exponents.len() != p.num_generators() {
            return Err(Error::DimensionMismatch {
                expected: p.num_generators(),
                got: exponents.len(),
            });
        }
        if c != 0.0 {
            p.terms.insert(exponents, c);
        }
        Ok(p)
    }

    /// Generators are the given vectors under the pairing of `spec`.
    pub fn from_generators(spec: &GaussianSpec, generators: &[Vec<f64>]) -> Result<Self> {
        Self::zero(spec.pairing_matrix(generators)?)
    }

    pub fn pairing(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn num_generators(&self) -> usize {
        self.q.nrows()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> f64 {
        self.terms.get(exponents).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Value when the generators take the values `f`.
    pub fn eval(&self, f: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(f).map(|(&k, &x)| x.powi(k as i32)).product::<f64>())
            .sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        if c == 0.0 {
            out.terms.clear();
        } else {
            out.terms.values_mut().for_each(|v| *v *= c);
        }
        out
    }

    fn same_pairing(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::InconsistentLabels("polynomials use different pairing matrices".into()));
        }
        Ok(())
    }

    fn add_term(&mut self, e: Vec<u32>, c: f64) {
        let v = self.terms.entry(e).or_insert(0.0);
        *v += c;
        if *v == 0.0 {
            self.terms.retain(|_, c| *c != 0.0);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_pairing(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-1.0))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_pairing(other)?;
        let mut out = Self {
            q: self.q.clone(),
            terms: BTreeMap::new(),
        };
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Gaussian integral, each monomial evaluated as a sum over pairings.
    pub fn expectation(&self) -> f64 {
        self.terms.iter().map(|(e, c)| c * monomial_moment(&self.q, e)).sum()
    }

    /// The Wick product `:Π fᵢ^{eᵢ}:` expanded into ordinary monomials.
    ///
    /// Uses `:f·G: = f·:G: − Σ_{g∈G} q(f,g)·:G∖g:` on the multiset of factors.
    pub fn wick_product(q: DMatrix<f64>, exponents: &[u32]) -> Result<Self> {
        check_pairing_matrix(&q)?;
        if exponents.len() != q.nrows() {
            return Err(Error::DimensionMismatch {
                expected: q.nrows(),
                got: exponents.len(),
            });
        }
        let mut memo = HashMap::new();
        let terms = wick_product_terms(&q, exponents, &mut memo);
        let mut out = Self::zero(q)?;
        for (e, c) in terms {
            if c != 0.0 {
                out.add_term(e, c);
            }
        }
        Ok(out)
    }
}

fn wick_product_terms(
    q: &DMatrix<f64>,
    e: &[u32],
    memo: &mut HashMap<Vec<u32>, BTreeMap<Vec<u32>, f64>>,
) -> BTreeMap<Vec<u32>, f64> {
    if let Some(t) = memo.get(e) {
        return t.clone();
    }
    let mut out = BTreeMap::new();
    match e.iter().position(|&k| k > 0) {
        None => {
            out.insert(e.to_vec(), 1.0);
        }
        Some(i) => {
            let mut rest = e.to_vec();
            rest[i] -= 1;
            for (m, c) in wick_product_terms(q, &rest, memo) {
                let mut m = m;
                m[i] += 1;
                *out.entry(m).or_insert(0.0) += c;
            }
            for j in 0..e.len() {
                if rest[j] == 0 || q[(i, j)] == 0.0 {
                    continue;
                }
                let mult = rest[j] as f64;
                let mut r2 = rest.clone();
                r2[j] -= 1;
                for (m, c) in wick_product_terms(q, &r2, memo) {
                    *out.entry(m).or_insert(0.0) -= mult * q[(i, j)] * c;
                }
            }
        }
    }
    memo.insert(e.to_vec(), out.clone());
    out
}

fn monomial_moment(q: &DMatrix<f64>, e: &[u32]) -> f64 {
    let labels: Vec<usize> = e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect();
    let m = labels.len();
    if m % 2 == 1 {
        return 0.0;
    }
    let qm = DMatrix::from_fn(m, m, |a, b| q[(labels[a], labels[b])]);
    pairing_sum(&qm)
}

impl fmt::Display for WickPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " {} ", if *c < 0.0 { '-' } else { '+' })?;
                write!(f, "{}", c.abs())?;
            } else {
                write!(f, "{c}")?;
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·f{}", i + 1)?,
                    _ => write!(f, "·f{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Single-generator pairing matrix `[[q]]`.
fn scalar_pairing(q: f64) -> Result<DMatrix<f64>> {
    if !(q >= 0.0) {
        return Err(Error::InvalidPairing(format!("q(f,f) must be non-negative, got {q}")));
    }
    Ok(DMatrix::from_element(1, 1, q))
}

/// `:fⁿ: = Σ_k n!/(k!(n−2k)!) (−q/2)^k f^{n−2k}` with `q = q(f,f)`.
pub fn wick_order(n: u32, q: f64) -> Result<WickPolynomial> {
    let mut p = WickPolynomial::zero(scalar_pairing(q)?)?;
    for k in 0..=n / 2 {
        let c = factorial(n) / (factorial(k) * factorial(n - 2 * k)) * (-0.5 * q).powi(k as i32);
        if c != 0.0 {
            p.terms.insert(vec![n - 2 * k], c);
        }
    }
    Ok(p)
}

/// Inverse of [`wick_order`]: coefficients `c_j` with `fⁿ = Σ_j c_j :f^j:`,
/// namely `c_{n−2k} = n!/(k!(n−2k)!) (q/2)^k`.
pub fn wick_order_inverse(n: u32, q: f64) -> Result<Vec<f64>> {
    scalar_pairing(q)?;
    let mut c = vec![0.0; n as usize + 1];
    for k in 0..=n / 2 {
        c[(n - 2 * k) as usize] = factorial(n) / (factorial(k) * factorial(n - 2 * k)) * (0.5 * q).powi(k as i32);
    }
    Ok(c)
}

/// Probabilists' Hermite polynomial, `H₀ = 1`, `H₁ = x`,
/// `H_{n+1} = x Hₙ − n H_{n−1}`; generating function
/// `e^{tx − t²/2} = Σ tⁿ/n! Hₙ(x)`.
pub fn hermite(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `E[:fⁿ: :g^m:] = δ_{nm} n! q(f,g)ⁿ`.
pub fn wick_inner(n: u32, m: u32, qff: f64, qgg: f64, qfg: f64) -> Result<f64> {
    if qff < 0.0 || qgg < 0.0 || qfg * qfg > qff * qgg * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::InvalidPairing(format!(
            "pairings violate Cauchy–Schwarz: q(f,g)² = {} > q(f,f)q(g,g) = {}",
            qfg * qfg,
            qff * qgg
        )));
    }
    if n != m {
        return Ok(0.0);
    }
    Ok(factorial(n) * qfg.powi(n as i32))
}

/// Constant in Cramér's inequality `|Hₙ(x)| ≤ K √(n!) e^{x²/4}`.
const CRAMER_CONSTANT: f64 = 1.086_435;

/// Wick exponential `:e^{αf}: = Σ_k α^k/k! :f^k: = e^{αf − α²q/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WickExp {
    pub alpha: f64,
    pub q: f64,
}

pub fn wick_exp(alpha: f64, q: f64) -> Result<WickExp> {
    scalar_pairing(q)?;
    Ok(WickExp { alpha, q })
}

impl WickExp {
    /// Coefficients `α^k/k!` of `:f^k:` for `k = 0..=trunc`.
    pub fn series_coefficients(&self, trunc: u32) -> Vec<f64> {
        let mut c = Vec::with_capacity(trunc as usize + 1);
        let mut v = 1.0;
        for k in 0..=trunc {
            if k > 0 {
                v *= self.alpha / k as f64;
            }
            c.push(v);
        }
        c
    }

    pub fn closed_form(&self, f: f64) -> f64 {
        (self.alpha * f - 0.5 * self.alpha * self.alpha * self.q).exp()
    }

    /// Truncated series at `f` with a bound on the discarded tail.
    ///
    /// With `:f^k: = q^{k/2} H_k(f/√q)`, Cramér's inequality bounds the
    /// `k`-th term by `K e^{f²/(4q)} r^k/√(k!)`, `r = |α|√q`; the tail of that
    /// majorant is summed as a geometric series.
    pub fn eval_series(&self, f: f64, trunc: u32) -> (f64, f64) {
        let coeffs = self.series_coefficients(trunc);
        let sq = self.q.sqrt();
        let value: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let wk = if self.q > 0.0 {
                    sq.powi(k as i32) * hermite(k as u32, f / sq)
                } else {
                    f.powi(k as i32)
                };
                c * wk
            })
            .sum();
        let bound = if self.q > 0.0 {
            let r = self.alpha.abs() * sq;
            let k = trunc + 1;
            let first = r.powi(k as i32) / factorial(k).sqrt();
            let ratio = r / ((k + 1) as f64).sqrt();
            if ratio < 1.0 {
                CRAMER_CONSTANT * (f * f / (4.0 * self.q)).exp() * first / (1.0 - ratio)
            } else {
                f64::INFINITY
            }
        } else {
            let r = (self.alpha * f).abs();
            let k = trunc + 1;
            let ratio = r / (k + 1) as f64;
            if ratio < 1.0 {
                r.powi(k as i32) / factorial(k) / (1.0 - ratio)
            } else {
                f64::INFINITY
            }
        };
        (value, bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        let p = wick_order(2, 1.7).unwrap();
        assert_eq!(p.coefficient(&[2]), 1.0);
        assert_eq!(p.coefficient(&[0]), -1.7);
        let p = wick_order(4, 1.0).unwrap();
        assert_eq!((p.coefficient(&[4]), p.coefficient(&[2]), p.coefficient(&[0])), (1.0, -6.0, 3.0));
        let p = wick_order(0, 2.0).unwrap();
        assert_eq!(p.coefficient(&[0]), 1.0);
        assert_eq!(p.terms().count(), 1);
    }

    #[test]
    fn round_trip_exact() {
        for n in 0..=10 {
            let q = 1.0;
            let inv = wick_order_inverse(n, q).unwrap();
            let mut acc = WickPolynomial::zero(DMatrix::from_element(1, 1, q)).unwrap();
            for (j, &c) in inv.iter().enumerate() {
                acc = acc.try_add(&wick_order(j as u32, q).unwrap().scale(c)).unwrap();
            }
            let mono = WickPolynomial::monomial(DMatrix::from_element(1, 1, q), vec![n], 1.0).unwrap();
            assert_eq!(acc, mono, "n={n}");
        }
    }

    #[test]
    fn round_trip_general_q() {
        let q = 0.37;
        let n = 9;
        let inv = wick_order_inverse(n, q).unwrap();
        let x = 1.234;
        let v: f64 = inv.iter().enumerate().map(|(j, c)| c * wick_order(j as u32, q).unwrap().eval(&[x])).sum();
        assert!((v - x.powi(n as i32)).abs() < 1e-12 * x.powi(n as i32));
    }

    #[test]
    fn hermite_matches_wick_order() {
        for n in 0..=8 {
            let p = wick_order(n, 1.0).unwrap();
            for &x in &[-1.3, 0.0, 0.4, 2.2] {
                assert!((p.eval(&[x]) - hermite(n, x)).abs() < 1e-12);
            }
        }
        assert_eq!(hermite(2, 3.0), 8.0);
    }

    #[test]
    fn hermite_generating_function() {
        let (t, x) = (0.5, 1.3);
        let mut s = 0.0;
        let mut tk = 1.0;
        for n in 0..20 {
            s += tk * hermite(n, x);
            tk *= t / (n + 1) as f64;
        }
        assert!((s - (t * x - 0.5 * t * t).exp()).abs() < 1e-12);
    }

    #[test]
    fn derivative_rule() {
        // d/dx Hₙ = n H_{n−1}
        for n in 1..8u32 {
            let x = 0.8;
            let h = 1e-5;
            let d = (hermite(n, x + h) - hermite(n, x - h)) / (2.0 * h);
            assert!((d - n as f64 * hermite(n - 1, x)).abs() < 1e-6);
        }
    }

    #[test]
    fn wick_product_single_generator_matches_closed_form() {
        for n in 0..=7 {
            let q = 0.6;
            let a = WickPolynomial::wick_product(DMatrix::from_element(1, 1, q), &[n]).unwrap();
            let b = wick_order(n, q).unwrap();
            for (e, c) in b.terms() {
                assert!((a.coefficient(e) - c).abs() < 1e-12);
            }
            assert_eq!(a.terms().count(), b.terms().count());
        }
    }

    #[test]
    fn wick_products_have_zero_mean() {
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 2.0]);
        for e in [[1u32, 1], [2, 2], [3, 1], [0, 4]] {
            let p = WickPolynomial::wick_product(q.clone(), &e).unwrap();
            assert!(p.expectation().abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn inner_products() {
        assert_eq!(wick_inner(1, 1, 1.0, 2.0, 0.7).unwrap(), 0.7);
        assert_eq!(wick_inner(2, 3, 1.0, 1.0, 0.5).unwrap(), 0.0);
        assert!((wick_inner(2, 2, 1.0, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(wick_inner(1, 1, 1.0, 1.0, 1.5), Err(Error::InvalidPairing(_))));
    }

    #[test]
    fn wick_exponential_series() {
        for &(alpha, q, trunc) in &[(0.7, 1.3, 30), (1.5, 1.0, 30), (-1.2, 1.5, 30), (2.0, 1.0, 40)] {
            let w = wick_exp(alpha, q).unwrap();
            for &f in &[-1.0, 0.0, 0.5, 2.0] {
                let (v, bound) = w.eval_series(f, trunc);
                let exact = w.closed_form(f);
                assert!((v - exact).abs() < 1e-10, "α={alpha} f={f}");
                assert!((v - exact).abs() <= bound + 1e-14);
            }
        }
        // at |α|√q = 2 the 30-term truncation error is of order 1e-8, inside the bound
        let w = wick_exp(2.0, 1.0).unwrap();
        let (v, bound) = w.eval_series(-1.0, 30);
        let err = (v - w.closed_form(-1.0)).abs();
        assert!(err > 1e-10 && err <= bound);
        let w = wick_exp(0.0, 1.0).unwrap();
        assert_eq!(w.eval_series(3.0, 5).0, 1.0);
    }
}
