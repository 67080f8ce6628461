//! Growth, volume entropy and systolic invariants of finitely generated
//! groups and piecewise-flat simplicial complexes.

pub mod builders;
pub mod cli;
pub mod complex;
pub mod error;
pub mod group;
pub mod growth;
pub mod invariants;
pub mod norm;
pub mod optimize;
pub mod search;

pub use complex::{MetricComplex, PiOneData};
pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec};
pub use norm::Norm;
pub use search::{BallProfile, Budget};
