//! Degree sequences of random bipartite graphs and loop-free digraphs.

pub mod asymptotics;
pub mod binom;
pub mod cli;
pub mod domain;
pub mod error;
pub mod exact;
pub mod harness;
pub mod models;
pub mod quad;
pub mod sampling;

pub use domain::{degrees_of, density_lambda, BipartiteAdjacency, DegreeSequence, Probability, Shape};
pub use error::{Error, Result};
pub use sampling::{EdgeProb, Family, ModelParam, ModelSpec, RngStream};
