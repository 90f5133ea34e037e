//! Metric graph bundles on finite graphs.
//!
//! The crate works with finite connected unit-edge graphs and measures coarse
//! geometric quantities on them: hyperbolicity constants, properness of fiber
//! embeddings, quasi-isometric sections, ladders with their retractions, and
//! empirical flaring.

pub mod bundle;
pub mod error;
pub mod flaring;
pub mod graph;
pub mod half;
pub mod hyperbolicity;
pub mod ladders;
pub mod sections;

pub use error::{Error, Result};
pub use graph::{Graph, Path, Vertex};
pub use half::Half;
