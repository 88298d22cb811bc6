//! Continuous-time quantum walk workbench for perfect state transfer.
//!
//! The numeric core is generic over the scalar type through [`Real`]
//! (`f32`/`f64`); the aliases below pin it to `f64`, which is what every
//! documented tolerance assumes.

pub mod cubelike;
pub mod error;
pub mod feder;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod scalar;
pub mod spectral;
pub mod suites;
pub mod symmetry;
pub mod walk;

pub use error::{Error, Result};
pub use partition::{Equitability, Partition};
pub use scalar::Real;

pub type Graph = graph::Graph<f64>;
pub type GraphFamilySpec = graph::GraphFamilySpec<f64>;
pub type Matrix = linalg::Matrix<f64>;
pub type Complex = linalg::Complex<f64>;
pub type Spectrum = spectral::Spectrum<f64>;
pub type Propagator = spectral::Propagator<f64>;
pub type NormalizedPartitionMatrix = partition::NormalizedPartitionMatrix<f64>;
pub type QuotientResult = partition::QuotientResult<f64>;
pub type FidelitySeries = walk::FidelitySeries<f64>;

pub type GraphF32 = graph::Graph<f32>;
pub type SpectrumF32 = spectral::Spectrum<f32>;
