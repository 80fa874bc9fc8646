use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Polynomial in the phase-space coordinates `(x₁..xₙ, p₁..pₙ)`.
///
/// Each key is an exponent vector of length `2n` (positions first, then
/// momenta). Zero coefficients are never stored, so two polynomials are equal
/// exactly when their term maps are.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePolynomial {
    n: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl PhasePolynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::monomial(n, vec![0; 2 * n], c)
    }

    pub fn monomial(n: usize, exponents: Vec<u32>, coeff: f64) -> Self {
        assert_eq!(exponents.len(), 2 * n, "exponent vector must have length 2n");
        let mut p = Self::zero(n);
        p.add_term(exponents, coeff);
        p
    }

    /// The coordinate function `x_i` (0-based).
    pub fn x(n: usize, i: usize) -> Self {
        let mut e = vec![0; 2 * n];
        e[i] = 1;
        Self::monomial(n, e, 1.0)
    }

    /// The momentum function `p_i` (0-based).
    pub fn p(n: usize, i: usize) -> Self {
        let mut e = vec![0; 2 * n];
        e[n + i] = 1;
        Self::monomial(n, e, 1.0)
    }

    /// One-dimensional monomial `c·x^a p^b`.
    pub fn xp(a: u32, b: u32, c: f64) -> Self {
        Self::monomial(1, vec![a, b], c)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exponents: &[u32]) -> f64 {
        self.terms.get(exponents).copied().unwrap_or(0.0)
    }

    fn add_term(&mut self, exponents: Vec<u32>, coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        let entry = self.terms.entry(exponents);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let c = *o.get() + coeff;
                if c == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = Self::zero(self.n);
        for (e, &v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Partial derivative with respect to variable `var` in `0..2n`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, &c) in &self.terms {
            if e[var] > 0 {
                let mut d = e.clone();
                d[var] -= 1;
                out.add_term(d, c * e[var] as f64);
            }
        }
        out
    }

    pub fn d_dx(&self, i: usize) -> Self {
        self.derivative(i)
    }

    pub fn d_dp(&self, i: usize) -> Self {
        self.derivative(self.n + i)
    }

    /// Evaluates at `(x, p)`.
    pub fn eval(&self, x: &[f64], p: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(p.len(), self.n);
        self.terms
            .iter()
            .map(|(e, &c)| {
                let mut v = c;
                for i in 0..self.n {
                    v *= x[i].powi(e[i] as i32) * p[i].powi(e[self.n + i] as i32);
                }
                v
            })
            .sum()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    /// True if every term depends only on positions or only on momenta.
    pub fn is_separable(&self) -> bool {
        self.split_separable().is_some()
    }

    /// Splits `H = T(p) + V(x)`; constants go to `V`.
    pub fn split_separable(&self) -> Option<(Self, Self)> {
        let mut kinetic = Self::zero(self.n);
        let mut potential = Self::zero(self.n);
        for (e, &c) in &self.terms {
            let has_x = e[..self.n].iter().any(|&k| k > 0);
            let has_p = e[self.n..].iter().any(|&k| k > 0);
            match (has_x, has_p) {
                (true, true) => return None,
                (false, true) => kinetic.add_term(e.clone(), c),
                _ => potential.add_term(e.clone(), c),
            }
        }
        Some((kinetic, potential))
    }
}

impl Add for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn add(self, rhs: &PhasePolynomial) -> PhasePolynomial {
        self.try_add(rhs).expect("dimension mismatch in polynomial addition")
    }
}

impl Sub for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn sub(self, rhs: &PhasePolynomial) -> PhasePolynomial {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn mul(self, rhs: &PhasePolynomial) -> PhasePolynomial {
        self.try_mul(rhs).expect("dimension mismatch in polynomial product")
    }
}

impl Neg for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn neg(self) -> PhasePolynomial {
        self.scale(-1.0)
    }
}

impl fmt::Display for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let (name, idx) = if i < self.n { ("x", i) } else { ("p", i - self.n) };
                write!(f, "*{name}{}", idx + 1)?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// `{f, g} = Σⱼ (∂f/∂xⱼ ∂g/∂pⱼ − ∂g/∂xⱼ ∂f/∂pⱼ)`, computed exactly.
pub fn poisson_bracket(f: &PhasePolynomial, g: &PhasePolynomial) -> Result<PhasePolynomial> {
    f.check_dim(g)?;
    let mut out = PhasePolynomial::zero(f.n);
    for j in 0..f.n {
        let a = f.d_dx(j).try_mul(&g.d_dp(j))?;
        let b = g.d_dx(j).try_mul(&f.d_dp(j))?;
        out = out.try_add(&a)?.try_add(&b.scale(-1.0))?;
    }
    Ok(out)
}
