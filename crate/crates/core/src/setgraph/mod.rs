//! Value sets, simple graphs over them, and distinct-value statistics along
//! edges.

mod graph;
mod io;
mod stats;
mod valueset;

pub use graph::{Cleanup, EdgeGraph};
pub(crate) use graph::sort_pairs;
pub use io::{read_graph, read_value_set, write_graph, write_value_set};
pub use stats::{
    edge_stats, edge_value_frequencies, large_over_small_stats, pairwise_frequencies, pairwise_stats,
    EdgeStatsAccumulator, EdgeValueStats, Mode,
};
pub use valueset::{BuiltSet, ValueSet};
