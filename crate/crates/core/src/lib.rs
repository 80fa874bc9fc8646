//! Numerical path-integral quantum mechanics and Euclidean free-field theory.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: Fourier transforms, Fresnel integrals, modified Bessel
//!   functions and quadrature rules shared by everything else.
//! - [`mechanics`]: polynomial phase-space observables, Poisson brackets,
//!   leapfrog Hamiltonian flow, Legendre transform and action functionals.
//! - [`quantum`]: truncated oscillator algebra, Weyl/Wick quantization,
//!   free propagators, split-step evolution and the time-sliced kernel.
//! - [`wiener`]: Brownian paths and bridges, cylinder-set probabilities,
//!   Hölder statistics and Feynman–Kac estimators.
//! - [`gaussian`]: finite-dimensional Gaussian measures, Wick's theorem,
//!   Wick ordering, Feynman diagrams, Cameron–Martin and Fock space.
//! - [`freefield`]: continuum covariance of `(Δ+m²)⁻¹`, the periodic lattice
//!   Gaussian free field, Wick-ordered interactions and Osterwalder–Schrader
//!   style checks.

pub mod error;
pub mod freefield;
pub mod gaussian;
pub mod mechanics;
pub mod numerics;
pub mod quantum;
pub mod stats;
pub mod wiener;

pub use error::{Error, Result};
