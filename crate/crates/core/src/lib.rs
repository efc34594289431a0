//! Extremal Newtonian potentials of axisymmetric measures on the sphere.
//!
//! The kernel, quadrature, Kelvin and planar code is generic over the scalar (see
//! [`scalar::Real`]); the measure, Dirichlet, star and mass-move layers work in `f64`.

pub mod dirichlet;
pub mod error;
pub mod kelvin;
pub mod kernel;
pub mod massmove;
pub mod measure;
pub mod planar;
pub mod quadrature;
pub mod scalar;
pub mod star;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Kernel = kernel::KernelEval<f64>;
pub type Kernel32 = kernel::KernelEval<f32>;
pub type Quadrature = quadrature::GaussLegendre<f64>;
pub type PlanarGeometry = planar::PlanarGeometry<f64>;
pub type PlanarGeometry32 = planar::PlanarGeometry<f32>;
