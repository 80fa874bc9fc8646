//! Classical mechanics on `ℝⁿ`: polynomial observables, Poisson brackets,
//! leapfrog Hamiltonian flow, the Legendre transform and discretised actions.

mod action;
mod flow;
mod legendre;
mod path;
mod polynomial;

pub use action::{action, euler_lagrange_residual};
pub use flow::{hamiltonian_flow, leapfrog_jacobian, PhaseState};
pub use legendre::legendre_transform;
pub use path::Path;
pub use polynomial::{poisson_bracket, PhasePolynomial};
