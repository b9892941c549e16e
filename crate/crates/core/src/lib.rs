//! Tropical oriented matroids, tropical hyperplane arrangements and mixed
//! subdivisions of dilated simplices, with exact rational arithmetic.

pub mod cli;
pub mod comparability;
mod dsu;
pub mod duality;
pub mod error;
pub mod io;
pub mod mixsd;
pub mod realize;
pub mod report;
pub mod svg;
pub mod tom;
pub mod types;

pub use error::{Error, Result};
pub use mixsd::MixedSubdivision;
pub use realize::WeightMatrix;
pub use tom::TypeCollection;
pub use types::{NdType, OrderedPartition};
