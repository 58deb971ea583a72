use crate::error::{Error, Result};

use super::slp::{Slp, SlpMetrics, Symbol, TermId, VarId};

/// Position of the heavy child on a right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeavyEdge {
    pub index: usize,
    pub child: Symbol,
}

/// Heavy-child edges of an SLP. Edges point from a variable to its heavy
/// child, i.e. towards the root of the heavy tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyForest {
    edge: Vec<Option<HeavyEdge>>,
    root: Vec<Symbol>,
}

/// First variable occurrence violating the contracting condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub var: VarId,
    pub index: usize,
}

/// Index of the heavy symbol in `rhs`, if any. `weight` gives symbol weights.
pub fn heavy_index(rhs: &[Symbol], weight: impl Fn(Symbol) -> u64) -> Option<usize> {
    let ws: Vec<u64> = rhs.iter().map(|&s| weight(s)).collect();
    let total: u64 = ws.iter().sum();
    ws.iter().position(|&w| 2 * w > total)
}

impl HeavyForest {
    pub fn build(slp: &Slp, m: &SlpMetrics) -> HeavyForest {
        let mut edge = vec![None; slp.num_vars()];
        let mut root = vec![Symbol::Var(VarId(0)); slp.num_vars()];
        for &v in &m.topo_order {
            let rhs = slp.rule(v);
            let e = heavy_index(rhs, |s| m.weight_of(slp, s))
                .map(|index| HeavyEdge { index, child: rhs[index] });
            root[v.idx()] = match e {
                None => Symbol::Var(v),
                Some(HeavyEdge { child: Symbol::Term(t), .. }) => Symbol::Term(t),
                Some(HeavyEdge { child: Symbol::Var(c), .. }) => root[c.idx()],
            };
            edge[v.idx()] = e;
        }
        HeavyForest { edge, root }
    }

    pub fn edge(&self, v: VarId) -> Option<HeavyEdge> {
        self.edge[v.idx()]
    }

    /// Root of the heavy tree containing `v`: a terminal, or a variable
    /// whose rule has no heavy child.
    pub fn root(&self, v: VarId) -> Symbol {
        self.root[v.idx()]
    }

    pub fn root_of(&self, s: Symbol) -> Symbol {
        match s {
            Symbol::Var(v) => self.root(v),
            t => t,
        }
    }

    /// Reversed light prefix of `v`'s rule.
    pub fn left_label(&self, slp: &Slp, v: VarId) -> Vec<Symbol> {
        let e = self.edge(v).expect("no heavy edge");
        slp.rule(v)[..e.index].iter().rev().copied().collect()
    }

    /// Light suffix of `v`'s rule.
    pub fn right_label(&self, slp: &Slp, v: VarId) -> Vec<Symbol> {
        let e = self.edge(v).expect("no heavy edge");
        slp.rule(v)[e.index + 1..].to_vec()
    }

    pub fn num_edges(&self) -> usize {
        self.edge.iter().filter(|e| e.is_some()).count()
    }

    /// Heavy edges whose child is a variable.
    pub fn num_var_edges(&self) -> usize {
        self.edge
            .iter()
            .filter(|e| matches!(e, Some(HeavyEdge { child: Symbol::Var(_), .. })))
            .count()
    }
}

/// First heavy variable occurrence, or `None` if the SLP is contracting.
pub fn contracting_violation(slp: &Slp, m: &SlpMetrics) -> Option<Violation> {
    for v in slp.vars() {
        let w = m.weight[v.idx()];
        for (index, &s) in slp.rule(v).iter().enumerate() {
            if let Symbol::Var(b) = s {
                if 2 * m.weight[b.idx()] > w {
                    return Some(Violation { var: v, index });
                }
            }
        }
    }
    None
}

pub fn is_contracting(slp: &Slp) -> Result<bool> {
    let m = slp.metrics()?;
    Ok(contracting_violation(slp, &m).is_none())
}

/// Replaces the variable at `index` of `v`'s rule by its right-hand side.
pub fn expand_heavy(slp: &Slp, v: VarId, index: usize) -> Result<Slp> {
    let mut out = slp.clone();
    expand_occurrence(&mut out, v, index)?;
    Ok(out)
}

pub fn expand_occurrence(slp: &mut Slp, v: VarId, index: usize) -> Result<()> {
    if v.idx() >= slp.num_vars() {
        return Err(Error::UnknownSymbol(v.to_string()));
    }
    let Some(Symbol::Var(b)) = slp.rule(v).get(index).copied() else {
        return Err(Error::NotAVariable { var: v, index });
    };
    let inner = slp.rule(b).to_vec();
    let rules = slp.rules_mut();
    rules[v.idx()].splice(index..index + 1, inner);
    Ok(())
}

/// Descends from `v` to position `i` (1-based). Returns the terminal and
/// the number of rules visited.
pub fn naive_access(slp: &Slp, m: &SlpMetrics, v: VarId, i: u64) -> Result<(TermId, u32)> {
    let len = m.len[v.idx()];
    if i == 0 || i > len {
        return Err(Error::PositionOutOfRange { pos: i, len });
    }
    let mut cur = v;
    let mut i = i;
    let mut steps = 0;
    loop {
        steps += 1;
        let mut next = None;
        for &s in slp.rule(cur) {
            let l = m.len_of(slp, s);
            if i <= l {
                next = Some(s);
                break;
            }
            i -= l;
        }
        match next.expect("lengths are consistent") {
            Symbol::Term(t) => return Ok((t, steps)),
            Symbol::Var(w) => cur = w,
        }
    }
}

/// Makes the two children of every rule `A -> BB` distinct by adding one
/// copy `B'` (with `B`'s right-hand side) per such `B`. Existing variable
/// ids are unchanged. The input must be valid.
pub fn distinct_children(slp: &Slp) -> Slp {
    let mut out = slp.clone();
    let mut copy: Vec<Option<VarId>> = vec![None; slp.num_vars()];
    let order = slp.topo_order().expect("valid SLP");
    for v in order {
        if let [Symbol::Var(b), Symbol::Var(c)] = *slp.rule(v) {
            if b == c {
                let b2 = *copy[b.idx()].get_or_insert_with(|| {
                    let rhs = out.rule(b).to_vec();
                    let b2 = out.add_rule(rhs);
                    if let Some(n) = slp.var_name(b) {
                        out.set_name(b2, format!("{n}_dup"));
                    }
                    b2
                });
                out.set_rule(v, vec![Symbol::Var(b), Symbol::Var(b2)]);
            }
        }
    }
    out
}
