use crate::error::{Error, Result};
use crate::grammar::{naive_access, to_cnf, CnfOptions, HeavyForest, Slp, SlpMetrics, TermId, VarId};
use crate::prefix::build_tree_prefix_slp;

use super::reduce::{heavy_forest_tree, reduce_to_trees, HeavyPrefixes, Side};

/// A contracting SLP (with unit terminal weights) together with the
/// variable deriving each input variable's string.
#[derive(Clone, Debug)]
pub struct ContractingSlp {
    pub slp: Slp,
    /// `repr[A]` derives the string of input variable `A`; `None` exactly
    /// when that string is empty.
    pub repr: Vec<Option<VarId>>,
    metrics: SlpMetrics,
}

impl ContractingSlp {
    pub fn metrics(&self) -> &SlpMetrics {
        &self.metrics
    }

    /// Length of input variable `a`.
    pub fn len_of(&self, a: VarId) -> u64 {
        self.repr[a.idx()].map_or(0, |r| self.metrics.len[r.idx()])
    }

    /// The `i`-th symbol (1-based) of input variable `a` and the number of
    /// rules visited on the way down.
    pub fn access(&self, a: VarId, i: u64) -> Result<(TermId, u32)> {
        match self.repr.get(a.idx()).copied().flatten() {
            Some(r) => naive_access(&self.slp, &self.metrics, r, i),
            None => Err(Error::PositionOutOfRange { pos: i, len: 0 }),
        }
    }
}

/// Linear-size contracting SLP defining every string of `g`.
///
/// The input is brought into Chomsky normal form (dropping variables that
/// derive ε) and weighted by length; the heavy forest of each side is then
/// handled by one tree prefix grammar.
pub fn make_contracting(g: &Slp) -> Result<ContractingSlp> {
    let cnf = to_cnf(g, CnfOptions { eliminate_epsilon: true })?;
    let mut h = cnf.slp;
    h.alphabet = h.alphabet.with_unit_weights();
    let m = h.metrics()?;
    let hf = HeavyForest::build(&h, &m);
    let side = |s: Side| -> Result<HeavyPrefixes> {
        let (tree, node_of) = heavy_forest_tree(&h, &m, &hf, s);
        let p = build_tree_prefix_slp(&tree)?;
        Ok(HeavyPrefixes { slp: p.slp, prefix: node_of.iter().map(|&x| p.prefix[x]).collect() })
    };
    let hl = side(Side::Left)?;
    let hr = side(Side::Right)?;
    let slp = reduce_to_trees(&h, &hl, &hr)?;
    let metrics = slp.metrics()?;
    Ok(ContractingSlp { slp, repr: cnf.repr, metrics })
}
