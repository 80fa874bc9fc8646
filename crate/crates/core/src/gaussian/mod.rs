//! Gaussian measures on `ℝⁿ`: sampling, characteristic functions, Wick's
//! theorem and Feynman diagrams, Wick-ordered polynomials and exponentials,
//! Cameron–Martin shifts and symmetric Fock space.

mod diagrams;
mod fock;
mod measure;
mod polynomial;

pub use diagrams::{
    enumerate_generalized_pairings, enumerate_pairings, eval_diagram, generalized_wick_expectation,
    generalized_wick_expectation_vectors, moment_wick, pairing_sum, Diagram,
};
pub use fock::{fock_exp_inner, symmetric_power, symmetric_product, Tensor};
pub use measure::{cameron_martin_density, characteristic, characteristic_complex, sample, GaussianSpec};
pub use polynomial::{hermite, wick_exp, wick_inner, wick_order, wick_order_inverse, WickExp, WickPolynomial};
