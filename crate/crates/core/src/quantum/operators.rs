use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const SELF_ADJOINT_TOL: f64 = 1e-10;

/// Physical constants of the oscillator `H = p²/2m + mω²x²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0 && omega > 0.0 && hbar > 0.0) {
            return Err(Error::InvalidInput(format!(
                "oscillator constants must be positive (m={mass}, ω={omega}, ħ={hbar})"
            )));
        }
        Ok(Self { mass, omega, hbar })
    }

    pub fn unit() -> Self {
        Self {
            mass: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }
}

/// Complex `N×N` matrix in the truncated oscillator basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub params: OscillatorParams,
    pub matrix: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn new(params: OscillatorParams, matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidInput("operator matrix must be square".into()));
        }
        Ok(Self { params, matrix })
    }

    pub fn identity(params: OscillatorParams, dim: usize) -> Self {
        Self {
            params,
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            params: self.params,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            params: self.params,
            matrix: &self.matrix * c,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `max |A − A†|` over all entries.
    pub fn self_adjoint_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A_ij − B_ij|` over the leading `k×k` block.
    pub fn block_distance(&self, other: &Self, k: usize) -> f64 {
        let a = self.matrix.view((0, 0), (k, k));
        let b = other.matrix.view((0, 0), (k, k));
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Applies the operator to a coefficient vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let x = nalgebra::DVector::from_column_slice(v);
        (&self.matrix * x).iter().copied().collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.params, self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl Mul for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn mul(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        TruncatedOperator {
            params: self.params,
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Add for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn add(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        TruncatedOperator {
            params: self.params,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn sub(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        TruncatedOperator {
            params: self.params,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

/// Annihilation and creation operators: `a e_n = √n e_{n−1}`,
/// `a† e_n = √(n+1) e_{n+1}`.
pub fn ladder_operators(n: usize, params: OscillatorParams) -> Result<(TruncatedOperator, TruncatedOperator)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("truncation must be >= 2, got {n}")));
    }
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    let adag = a.adjoint();
    Ok((
        TruncatedOperator { params, matrix: a },
        TruncatedOperator { params, matrix: adag },
    ))
}

/// `x̂ = √(ħ/2mω) (a + a†)`.
pub fn position(n: usize, params: OscillatorParams) -> Result<TruncatedOperator> {
    let (a, adag) = ladder_operators(n, params)?;
    let c = (params.hbar / (2.0 * params.mass * params.omega)).sqrt();
    Ok((&a + &adag).scale(Complex64::new(c, 0.0)))
}

/// `p̂ = i√(ħmω/2) (a† − a)`.
pub fn momentum(n: usize, params: OscillatorParams) -> Result<TruncatedOperator> {
    let (a, adag) = ladder_operators(n, params)?;
    let c = (params.hbar * params.mass * params.omega / 2.0).sqrt();
    Ok((&adag - &a).scale(Complex64::new(0.0, c)))
}

/// `Ĥ = ħω(a†a + ½I)`.
pub fn hamiltonian(n: usize, params: OscillatorParams) -> Result<TruncatedOperator> {
    let (a, adag) = ladder_operators(n, params)?;
    let number = &adag * &a;
    let half = TruncatedOperator::identity(params, n).scale(Complex64::new(0.5, 0.0));
    Ok((&number + &half).scale(Complex64::new(params.hbar * params.omega, 0.0)))
}

/// Sorted eigenvalues of `p̂²/2m + mω²x̂²/2` assembled from the truncated
/// position and momentum matrices.
///
/// In the truncated product the top basis vector decouples with the spurious
/// eigenvalue `ħω(N−1)/2`, so only the leading `(N−1)×(N−1)` block is
/// diagonalized. Its eigenvalues are `ħω(n + ½)`, `n < N−1`.
pub fn oscillator_spectrum(n: usize, params: OscillatorParams) -> Result<Vec<f64>> {
    let x = position(n, params)?;
    let p = momentum(n, params)?;
    let kinetic = (&p * &p).scale(Complex64::new(0.5 / params.mass, 0.0));
    let pot = (&x * &x).scale(Complex64::new(0.5 * params.mass * params.omega * params.omega, 0.0));
    let h = &kinetic + &pot;
    let block = h.matrix.view((0, 0), (n - 1, n - 1)).into_owned();
    let mut ev: Vec<f64> = SymmetricEigen::new(block).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ev)
}

/// Unitary group `U(t) = Σⱼ e^{-(i/ħ)tλⱼ} φⱼφⱼ*` of a self-adjoint operator.
pub fn eigen_propagator(h: &TruncatedOperator, t: f64) -> Result<TruncatedOperator> {
    let scale = h.matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = h.self_adjoint_defect();
    if defect > SELF_ADJOINT_TOL * scale {
        return Err(Error::NotSelfAdjoint(defect));
    }
    let eig = SymmetricEigen::new(h.matrix.clone());
    let phases = nalgebra::DVector::from_iterator(
        h.dim(),
        eig.eigenvalues
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -t * l / h.params.hbar)),
    );
    let v = &eig.eigenvectors;
    let u = v * DMatrix::from_diagonal(&phases) * v.adjoint();
    Ok(TruncatedOperator {
        params: h.params,
        matrix: u,
    })
}
