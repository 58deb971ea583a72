//! Balancing: reduction of an SLP to prefix grammars of its heavy trees,
//! and the linear-size contracting transform built on it.

mod contracting;
mod reduce;

pub use contracting::{make_contracting, ContractingSlp};
pub use reduce::{heavy_forest_tree, reduce_to_trees, HeavyPrefixes, Side};
