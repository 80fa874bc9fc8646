//! Shared numerical kernels.
//!
//! All Fourier transforms in the crate go through [`fourier_transform`], which
//! uses the symmetric convention
//! `f̂(k) = (2π)^{-1/2} ∫ e^{-ikx} f(x) dx`.

mod bessel;
mod fourier;
mod fresnel;
pub mod quadrature;

pub use bessel::bessel_k;
pub use fourier::{fourier_transform, fourier_transform_onto, Direction, SampledFunction, UniformGrid};
pub use fresnel::{fresnel_integral, fresnel_integral_complex, QuadraticForm};
pub use quadrature::{gauss_hermite_expect, integrate_adaptive, GaussHermite, GaussLegendre};
