//! Permanents of perturbed matrices, their zero-free regions and log
//! expansions, reweighted moments, and hardcore-model cluster expansions.

pub mod analytic;
pub mod cluster;
pub mod distribution;
pub mod error;
pub mod graph;
pub mod hardcore;
pub mod interp;
pub mod matrix;
pub mod monomer_dimer;
pub mod montecarlo;
pub mod pair;
pub mod permanent;
pub mod poly;
pub mod rescaled;
pub mod reweight;
pub mod rng;
pub mod roots;

pub use distribution::{sample_matrix, DistributionKind, EntryDistribution};
pub use error::{Error, Result};
pub use graph::{Graph, WeightVector};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use poly::PolynomialCoefficients;
pub use rng::SeededStream;
