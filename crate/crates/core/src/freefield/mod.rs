//! The Euclidean free scalar field: continuum covariance of `(Δ + m²)⁻¹`,
//! the periodic-lattice Gaussian free field, Wick powers and interactions,
//! partition-function estimates and numerical reflection-positivity and
//! Euclidean-invariance checks.
//!
//! `Δ` is the non-negative Laplacian `−Σ∂²`.

mod continuum;
mod field;
mod interaction;
mod lattice;
mod positivity;

pub use continuum::{covariance, schwinger_two_point, CovarianceKernel, RadialTable};
pub use field::{sample_gff, wick_power_field, GffSampler, LatticeField};
pub use interaction::{
    exp_interaction, exp_interaction_mean, exp_interaction_second_moment, interaction_action, interaction_variance,
    partition_estimate, partition_from_actions, sample_actions, PartitionEstimate, Region,
};
pub use lattice::{lattice_covariance, CovarianceTable, LatticeSpec};
pub use positivity::{
    continuum_reflection_gram, euclidean_invariance_check, lattice_reflection_gram, reflection_positivity_continuum,
    reflection_positivity_lattice, smeared_covariance, Bump, EuclideanTransform, TestFunction,
};
