//! Contracting SLPs defining all prefixes of weighted strings and of
//! labeled trees.

mod caterpillar;
mod string;
mod tree;
mod tree_slp;
mod weak;

pub use caterpillar::build_caterpillar_prefix_slp;
pub use string::{build_prefix_slp, prefix_slp_into, BaseSlp, LeftVar, PrefixArtifacts, PrefixSlp};
pub use tree::{normalize, parse_tree, write_tree, LabeledTree, NormalizedTree};
pub use tree_slp::{build_tree_prefix_slp, TreePrefixSlp};
pub use weak::{build_tree_prefix_slp_weak, heavy_symbols_form_paths, WeakPrefixSlp};
