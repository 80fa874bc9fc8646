use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::operators::{momentum, position, OscillatorParams, TruncatedOperator};
use crate::error::{Error, Result};
use crate::mechanics::PhasePolynomial;

fn require_one_dim(f: &PhasePolynomial) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: f.dim(),
        });
    }
    Ok(())
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Weyl (fully symmetric) quantization of a polynomial in `(x, p)`.
///
/// Each monomial `x^a p^b` becomes the average of the products of `a` copies
/// of `x̂` and `b` copies of `p̂` over all `(a+b)!` letter orderings, i.e. the
/// sum over the `C(a+b, a)` distinct words divided by `C(a+b, a)`. Word sums
/// are built by the recursion `S(a,b) = x̂·S(a−1,b) + p̂·S(a,b−1)`.
pub fn weyl_quantize(f: &PhasePolynomial, n: usize, params: OscillatorParams) -> Result<TruncatedOperator> {
    require_one_dim(f)?;
    let x = position(n, params)?;
    let p = momentum(n, params)?;
    let mut words: HashMap<(u32, u32), TruncatedOperator> = HashMap::new();
    words.insert((0, 0), TruncatedOperator::identity(params, n));

    fn word_sum(
        a: u32,
        b: u32,
        x: &TruncatedOperator,
        p: &TruncatedOperator,
        memo: &mut HashMap<(u32, u32), TruncatedOperator>,
    ) -> TruncatedOperator {
        if let Some(s) = memo.get(&(a, b)) {
            return s.clone();
        }
        let mut acc: Option<TruncatedOperator> = None;
        if a > 0 {
            let rest = word_sum(a - 1, b, x, p, memo);
            acc = Some(x * &rest);
        }
        if b > 0 {
            let rest = word_sum(a, b - 1, x, p, memo);
            let term = p * &rest;
            acc = Some(match acc {
                Some(s) => &s + &term,
                None => term,
            });
        }
        let s = acc.expect("word_sum reached (0,0) without memo entry");
        memo.insert((a, b), s.clone());
        s
    }

    let mut out = TruncatedOperator::new(params, nalgebra::DMatrix::zeros(n, n))?;
    for (e, c) in f.terms() {
        let (a, b) = (e[0], e[1]);
        let s = word_sum(a, b, &x, &p, &mut words);
        let weight = c / binomial(a + b, a);
        out = &out + &s.scale(Complex64::new(weight, 0.0));
    }
    Ok(out)
}

/// Wick (normal-ordered) quantization with respect to `z = x + iαp`.
///
/// The polynomial is rewritten in `(z, z̄)` via `x = (z + z̄)/2`,
/// `p = (z − z̄)/(2iα)`, and each `z^j z̄^k` becomes `(ẑ†)^k ẑ^j` with
/// `ẑ = x̂ + iαp̂`.
pub fn wick_quantize(f: &PhasePolynomial, alpha: f64, n: usize, params: OscillatorParams) -> Result<TruncatedOperator> {
    require_one_dim(f)?;
    let needs_p = f.terms().any(|(e, _)| e[1] > 0);
    if needs_p && alpha == 0.0 {
        return Err(Error::InvalidInput("alpha must be non-zero to quantize momentum terms".into()));
    }

    // coefficients of z^j z̄^k
    let mut zc: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
    for (e, c) in f.terms() {
        let (a, b) = (e[0], e[1]);
        let px = 0.5f64.powi(a as i32);
        let pp = if b > 0 {
            Complex64::new(0.0, 2.0 * alpha).powi(-(b as i32))
        } else {
            Complex64::new(1.0, 0.0)
        };
        for j in 0..=a {
            for k in 0..=b {
                let sign = if (b - k) % 2 == 1 { -1.0 } else { 1.0 };
                let coeff = pp * (c * px * binomial(a, j) * binomial(b, k) * sign);
                // x part contributes z^j z̄^{a-j}, p part z^k z̄^{b-k}
                *zc.entry((j + k, (a - j) + (b - k))).or_insert(Complex64::new(0.0, 0.0)) += coeff;
            }
        }
    }

    let x = position(n, params)?;
    let p = momentum(n, params)?;
    let ia = Complex64::new(0.0, alpha);
    let z = &x + &p.scale(ia);
    let zdag = &x - &p.scale(ia);
    let max_deg = zc.keys().map(|&(j, k)| j.max(k)).max().unwrap_or(0);
    let mut z_pows = vec![TruncatedOperator::identity(params, n)];
    let mut zd_pows = vec![TruncatedOperator::identity(params, n)];
    for k in 1..=max_deg as usize {
        z_pows.push(&z_pows[k - 1] * &z);
        zd_pows.push(&zd_pows[k - 1] * &zdag);
    }

    let mut out = TruncatedOperator::new(params, nalgebra::DMatrix::zeros(n, n))?;
    for (&(j, k), &c) in &zc {
        if c.norm() == 0.0 {
            continue;
        }
        let term = &zd_pows[k as usize] * &z_pows[j as usize];
        out = &out + &term.scale(c);
    }
    Ok(out)
}
