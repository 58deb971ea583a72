//! Predecessor sets with split and weighted ancestor queries.

mod predset;
mod wa;

pub use predset::PredSet;
pub use wa::{SmallWa, WaIndex, WeightedTree, MAX_HEIGHT, WORD};
