//! Wiener measure: Brownian paths and bridges, cylinder-set probabilities,
//! Hölder statistics and Feynman–Kac estimators.
//!
//! Euclidean estimators use `ħ = m = 1` and `Ĥ = −½ d²/dx² + V`.

mod bridge;
mod brownian;
mod feynman_kac;
mod holder;
mod rng;

pub use bridge::{bridge_mass, bridge_values, sample_bridge, sample_bridge_with};
pub use brownian::{
    brownian_values, cylinder_probability, sample_brownian, sample_brownian_with, two_point_estimate, BrownianPath,
    CylinderSet, MAX_CYLINDER_TIMES,
};
pub use feynman_kac::{feynman_kac, feynman_kac_energy, feynman_kac_kernel};
pub use holder::holder_statistic;
pub use rng::{RngStream, StreamRng};
