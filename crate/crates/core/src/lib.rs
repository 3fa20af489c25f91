//! Sums, products, ratios and differences along the edges of graphs whose
//! vertices carry exact rational values.
//!
//! The crate builds the explicit set/graph pairs used in sum-product
//! counterexamples, counts distinct edge values exactly, checks the
//! cardinality inequalities those constructions satisfy, and fits growth
//! exponents over parameter sweeps.

pub mod error;
pub mod exactnum;
pub mod setgraph;
pub mod constructions;
pub mod energy;
pub mod bounds;
pub mod pencils;
pub mod harness;
pub mod oracle;

pub use error::{Error, Result};
pub use exactnum::BigRat;
pub use setgraph::{EdgeGraph, EdgeValueStats, Mode, ValueSet};
