//! Contracting straight-line programs.
//!
//! The crate turns arbitrary SLPs into contracting SLPs of linear size,
//! builds prefix SLPs for weighted strings and labeled trees, and uses the
//! result for fringe access, finger search and navigation in compressed
//! forests.

pub mod ancestry;
pub mod balancer;
pub mod error;
pub mod finger;
pub mod fslp;
pub mod gen;
pub mod grammar;
pub mod prefix;

pub use error::{Error, Result};
pub use grammar::{Alphabet, Slp, SlpMetrics, Symbol, TermId, VarId};
pub use balancer::{make_contracting, ContractingSlp};
pub use prefix::{LabeledTree, PrefixSlp};
