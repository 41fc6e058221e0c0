//! Numerical laboratory for finite mixtures of product distributions of
//! exchangeable sequences.
//!
//! The crate computes distances between discrete mixing measures, divergences
//! between product mixtures and their upper bounds, checks identifiability
//! constructions, runs ratio probes of inverse bounds, and simulates
//! posterior contraction. The [`lab`] module ties everything to JSON configs
//! and CSV reports.

pub mod error;
pub mod identifiability;
pub mod kernels;
pub mod lab;
pub mod measures;
pub mod parallel;
pub mod probes;
pub mod posterior;
pub mod products;
pub mod quadrature;
pub mod seed;
pub mod stats;

pub use error::{Error, Result};
pub use kernels::{Divergence, ExpFamilySpec, Kernel, MomentMapReport};
pub use measures::{MatchingResult, MixingMeasure};
pub use products::{DivergenceEstimate, EstimateOptions, ExchangeableDataset, ProductMixtureModel};
