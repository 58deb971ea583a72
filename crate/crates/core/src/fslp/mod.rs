//! Forest straight-line programs in normal form and navigation over the
//! forests they derive.
//!
//! A node is addressed by a [`Tau`] cursor: rib cursors pick a tree of a
//! forest, spine cursors walk down the chain of contexts forming that tree.
//! Parent, sibling and first/last child moves cost a constant number of
//! cursor operations; `nav_child` is dominated by one random access into
//! the contracting rib grammar.

mod grammar;
mod nav;
mod script;
mod sigma;

pub use grammar::{
    example_fslp, parse_fslp, random_fslp, write_forest, write_fslp, FRule, Fslp, Tree, VarClass, HOLE,
};
pub use nav::{rib_slp, spine_slp, FslpNav, Move, Side, Tau, Work};
pub use script::{parse_nav_script, run_nav_script, NavOp, NavRow};
pub use sigma::{Sigma, SlpNav};
