//! Quantum mechanics in one dimension.
//!
//! Operators live in the orthonormal oscillator basis `e_n = ψ_n/√(n!)`,
//! truncated to `N` levels; identities are only meaningful away from the top
//! corner of the matrices, where truncation corrupts products. Wave functions
//! live on uniform grids and are evolved spectrally.

mod evolution;
mod kernels;
mod operators;
mod quantize;

pub use evolution::{evolve_free, evolve_free_imaginary, trotter_evolve, TimeMode, WaveFunction};
pub use kernels::{free_kernel, timeslice_free_kernel, KernelMode};
pub use operators::{
    eigen_propagator, hamiltonian, ladder_operators, momentum, oscillator_spectrum, position, OscillatorParams,
    TruncatedOperator,
};
pub use quantize::{weyl_quantize, wick_quantize};

/// Default truncation for oscillator-basis computations.
pub const DEFAULT_TRUNCATION: usize = 200;
