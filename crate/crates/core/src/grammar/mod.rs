//! Straight-line programs: representation, validation, metrics, Chomsky
//! normal form, heavy forests and the text format.

mod builder;
mod cnf;
mod heavy;
mod lower_bound;
mod slp;
mod text;

pub use builder::Builder;
pub use cnf::{to_cnf, Cnf, CnfOptions};
pub use heavy::{
    contracting_violation, distinct_children, expand_heavy, expand_occurrence, heavy_index,
    is_contracting, naive_access, HeavyEdge, HeavyForest, Violation,
};
pub use lower_bound::gen_lower_bound;
pub use slp::{Alphabet, Slp, SlpMetrics, Symbol, TermId, ValidationReport, VarId};
pub use text::{parse_slp, write_slp};
pub(crate) use text::{strip_comment, valid_name};
