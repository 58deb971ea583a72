//! Fringe access and finger search over contracting grammars in Chomsky
//! normal form.
//!
//! Steps are counted as one unit per short step, per long step (including
//! its weighted ancestor query) and per predecessor set operation.

mod balanced;
mod forests;
mod script;
mod state;

pub use balanced::{random_balanced_slp, spot_check_path_balance, weight_balanced_slp, PathBalanceParams};
pub use forests::{
    fringe_grammar, thresholds, AcceleratedPath, Dir, Edge, Forest, ForestMode, SkewForestSet, WeightedEdge,
    HEIGHT_SLOPE,
};
pub use script::{parse_finger_script, run_finger_script, FingerOp, ScriptRow};
pub use state::{FingerState, Outcome};

/// Default number of forest levels.
pub const DEFAULT_T: usize = 3;
