use super::slp::{Alphabet, Slp, Symbol, TermId, VarId};

/// Incremental SLP construction with weights maintained on the fly.
///
/// Every right-hand side may only mention variables that were pushed
/// earlier, so the result is acyclic by construction.
#[derive(Clone, Debug)]
pub struct Builder {
    slp: Slp,
    weight: Vec<u64>,
}

impl Builder {
    pub fn new(alphabet: Alphabet) -> Self {
        Builder { slp: Slp::new(alphabet), weight: Vec::new() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.slp.alphabet
    }

    pub fn add_terminal(&mut self, name: Option<String>, weight: u64) -> TermId {
        assert!(weight > 0, "terminal weight must be positive");
        self.slp.alphabet.push(name, weight)
    }

    pub fn num_vars(&self) -> usize {
        self.weight.len()
    }

    pub fn weight_of(&self, s: Symbol) -> u64 {
        match s {
            Symbol::Term(t) => self.slp.alphabet.weight(t),
            Symbol::Var(v) => self.weight[v.idx()],
        }
    }

    pub fn weight_of_str(&self, u: &[Symbol]) -> u64 {
        u.iter().map(|&s| self.weight_of(s)).sum()
    }

    pub fn rule(&self, v: VarId) -> &[Symbol] {
        self.slp.rule(v)
    }

    pub fn push(&mut self, rhs: Vec<Symbol>) -> VarId {
        let w = self.weight_of_str(&rhs);
        debug_assert!(rhs.iter().all(|s| match s {
            Symbol::Var(v) => v.idx() < self.weight.len(),
            Symbol::Term(t) => t.idx() < self.slp.alphabet.len(),
        }));
        self.weight.push(w);
        self.slp.add_rule(rhs)
    }

    pub fn push_named(&mut self, name: impl Into<String>, rhs: Vec<Symbol>) -> VarId {
        let v = self.push(rhs);
        self.slp.set_name(v, name);
        v
    }

    /// Replaces a heavy variable occurrence in `rhs` by that variable's
    /// right-hand side. The result is contracting whenever the expanded
    /// rule was.
    pub fn expand_heavy_in(&self, rhs: Vec<Symbol>) -> Vec<Symbol> {
        let total = self.weight_of_str(&rhs);
        let heavy = rhs.iter().position(|&s| {
            matches!(s, Symbol::Var(_)) && 2 * self.weight_of(s) > total
        });
        match heavy {
            None => rhs,
            Some(k) => {
                let Symbol::Var(b) = rhs[k] else { unreachable!() };
                let inner = self.slp.rule(b);
                let mut out = Vec::with_capacity(rhs.len() + inner.len() - 1);
                out.extend_from_slice(&rhs[..k]);
                out.extend_from_slice(inner);
                out.extend_from_slice(&rhs[k + 1..]);
                out
            }
        }
    }

    /// Pushes `rhs` after expanding its heavy variable, if any.
    pub fn push_contracting(&mut self, rhs: Vec<Symbol>) -> VarId {
        let rhs = self.expand_heavy_in(rhs);
        self.push(rhs)
    }

    pub fn set_name(&mut self, v: VarId, name: impl Into<String>) {
        self.slp.set_name(v, name);
    }

    pub fn set_start(&mut self, v: VarId) {
        self.slp.start = Some(v);
    }

    pub fn slp(&self) -> &Slp {
        &self.slp
    }

    pub fn weights(&self) -> &[u64] {
        &self.weight
    }

    pub fn finish(self) -> Slp {
        self.slp
    }
}
