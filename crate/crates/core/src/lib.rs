pub mod agents;
pub mod error;
pub mod games;
pub mod geometry;
pub mod nash;
pub mod payoff;
pub mod rng;
pub mod stats;
pub mod training;

pub use error::{Error, Result};
pub use payoff::{standardize, Matrix, PayoffMatrix};
