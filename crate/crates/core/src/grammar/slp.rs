use std::borrow::Cow;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a variable within one [`Slp`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

/// Index of a terminal within one [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub u32);

impl VarId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl TermId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.0)
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// A symbol on a right-hand side: either a terminal or a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Term(TermId),
    Var(VarId),
}

impl Symbol {
    pub fn var(self) -> Option<VarId> {
        match self {
            Symbol::Var(v) => Some(v),
            Symbol::Term(_) => None,
        }
    }

    pub fn term(self) -> Option<TermId> {
        match self {
            Symbol::Term(t) => Some(t),
            Symbol::Var(_) => None,
        }
    }
}

/// Weighted terminal alphabet. Names are optional; unnamed alphabets print
/// terminals as `t<id>`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    weights: Vec<u64>,
    names: Vec<String>,
}

impl Alphabet {
    pub fn unnamed(weights: Vec<u64>) -> Self {
        Alphabet { weights, names: Vec::new() }
    }

    pub fn unit(n: usize) -> Self {
        Self::unnamed(vec![1; n])
    }

    /// Builds a named alphabet; panics if the lengths differ.
    pub fn named(names: Vec<String>, weights: Vec<u64>) -> Self {
        assert_eq!(names.len(), weights.len());
        Alphabet { weights, names }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, t: TermId) -> u64 {
        self.weights[t.idx()]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn is_named(&self) -> bool {
        !self.names.is_empty()
    }

    pub fn name(&self, t: TermId) -> Cow<'_, str> {
        match self.names.get(t.idx()) {
            Some(n) => Cow::Borrowed(n.as_str()),
            None => Cow::Owned(format!("t{}", t.0)),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<TermId> {
        self.names.iter().position(|n| n == name).map(|i| TermId(i as u32))
    }

    /// Appends a terminal. Unnamed alphabets stay unnamed when `name` is
    /// `None`; otherwise missing names are filled with `t<id>`.
    pub fn push(&mut self, name: Option<String>, weight: u64) -> TermId {
        let id = TermId(self.weights.len() as u32);
        match name {
            Some(n) => {
                if self.names.len() < self.weights.len() {
                    self.names = (0..self.weights.len()).map(|i| format!("t{i}")).collect();
                }
                self.names.push(n);
            }
            None if self.is_named() => self.names.push(format!("t{}", id.0)),
            None => {}
        }
        self.weights.push(weight);
        id
    }

    /// Same names, every weight set to one.
    pub fn with_unit_weights(&self) -> Alphabet {
        Alphabet { weights: vec![1; self.weights.len()], names: self.names.clone() }
    }
}

/// A straight-line program: one rule per variable, acyclic.
///
/// Rules are stored densely by [`VarId`], so the single-definition property
/// holds by construction; acyclicity and symbol ranges are checked by
/// [`Slp::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Slp {
    pub alphabet: Alphabet,
    rules: Vec<Vec<Symbol>>,
    names: Vec<Option<String>>,
    pub start: Option<VarId>,
}

/// Result of a successful [`Slp::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub num_vars: usize,
    pub num_terminals: usize,
    pub size: usize,
    /// Variables ordered so that every variable comes after all variables
    /// on its right-hand side.
    pub topo_order: Vec<VarId>,
}

/// Per-variable lengths, weights and heights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlpMetrics {
    pub len: Vec<u64>,
    pub weight: Vec<u64>,
    pub height: Vec<u32>,
    pub topo_order: Vec<VarId>,
}

impl SlpMetrics {
    pub fn len_of(&self, slp: &Slp, s: Symbol) -> u64 {
        match s {
            Symbol::Term(_) => 1,
            Symbol::Var(v) => {
                let _ = slp;
                self.len[v.idx()]
            }
        }
    }

    pub fn weight_of(&self, slp: &Slp, s: Symbol) -> u64 {
        match s {
            Symbol::Term(t) => slp.alphabet.weight(t),
            Symbol::Var(v) => self.weight[v.idx()],
        }
    }

    pub fn max_height(&self) -> u32 {
        self.height.iter().copied().max().unwrap_or(0)
    }
}

impl Slp {
    pub fn new(alphabet: Alphabet) -> Self {
        Slp { alphabet, rules: Vec::new(), names: Vec::new(), start: None }
    }

    /// Builds from raw rules; nothing is checked until [`Slp::validate`].
    pub fn from_rules(alphabet: Alphabet, rules: Vec<Vec<Symbol>>, start: Option<VarId>) -> Self {
        let names = vec![None; rules.len()];
        Slp { alphabet, rules, names, start }
    }

    pub fn add_rule(&mut self, rhs: Vec<Symbol>) -> VarId {
        self.rules.push(rhs);
        self.names.push(None);
        VarId(self.rules.len() as u32 - 1)
    }

    pub fn add_named_rule(&mut self, name: impl Into<String>, rhs: Vec<Symbol>) -> VarId {
        let v = self.add_rule(rhs);
        self.names[v.idx()] = Some(name.into());
        v
    }

    pub fn set_rule(&mut self, v: VarId, rhs: Vec<Symbol>) {
        self.rules[v.idx()] = rhs;
    }

    pub fn set_name(&mut self, v: VarId, name: impl Into<String>) {
        self.names[v.idx()] = Some(name.into());
    }

    pub fn num_vars(&self) -> usize {
        self.rules.len()
    }

    pub fn rule(&self, v: VarId) -> &[Symbol] {
        &self.rules[v.idx()]
    }

    pub fn rules(&self) -> &[Vec<Symbol>] {
        &self.rules
    }

    pub(crate) fn rules_mut(&mut self) -> &mut Vec<Vec<Symbol>> {
        &mut self.rules
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        (0..self.rules.len() as u32).map(VarId)
    }

    /// Total length of all right-hand sides.
    pub fn size(&self) -> usize {
        self.rules.iter().map(Vec::len).sum()
    }

    pub fn max_rhs_len(&self) -> usize {
        self.rules.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn var_name(&self, v: VarId) -> Option<&str> {
        self.names.get(v.idx()).and_then(|n| n.as_deref())
    }

    pub fn display_var(&self, v: VarId) -> String {
        match self.var_name(v) {
            Some(n) => n.to_string(),
            None => format!("_{}", v.0),
        }
    }

    pub fn lookup_var(&self, name: &str) -> Option<VarId> {
        self.names
            .iter()
            .position(|n| n.as_deref() == Some(name))
            .map(|i| VarId(i as u32))
    }

    /// Resolves a variable by name, or by the `_<id>` form used for
    /// unnamed variables.
    pub fn resolve_var(&self, name: &str) -> Option<VarId> {
        if let Some(v) = self.lookup_var(name) {
            return Some(v);
        }
        let id: u32 = name.strip_prefix('_')?.parse().ok()?;
        ((id as usize) < self.rules.len()).then_some(VarId(id))
    }

    /// Checks symbol ranges, weight positivity and acyclicity.
    pub fn validate(&self) -> Result<ValidationReport> {
        for t in 0..self.alphabet.len() {
            let t = TermId(t as u32);
            if self.alphabet.weight(t) == 0 {
                return Err(Error::NonPositiveWeight(self.alphabet.name(t).into_owned()));
            }
        }
        for (v, rhs) in self.rules.iter().enumerate() {
            for &s in rhs {
                let ok = match s {
                    Symbol::Term(t) => t.idx() < self.alphabet.len(),
                    Symbol::Var(w) => w.idx() < self.rules.len(),
                };
                if !ok {
                    return Err(Error::UnknownSymbol(format!(
                        "{s:?} in rule of {}",
                        self.display_var(VarId(v as u32))
                    )));
                }
            }
        }
        if let Some(s) = self.start {
            if s.idx() >= self.rules.len() {
                return Err(Error::UnknownSymbol(format!("start {s}")));
            }
        }
        let topo_order = self.topo_order()?;
        Ok(ValidationReport {
            num_vars: self.rules.len(),
            num_terminals: self.alphabet.len(),
            size: self.size(),
            topo_order,
        })
    }

    /// Children-first order of all variables, or `CyclicGrammar`.
    /// Assumes symbol ranges are valid.
    pub fn topo_order(&self) -> Result<Vec<VarId>> {
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let n = self.rules.len();
        let mut color = vec![WHITE; n];
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if color[root] != WHITE {
                continue;
            }
            color[root] = GREY;
            stack.push((root, 0));
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let rhs = &self.rules[v];
                let mut pushed = false;
                while *next < rhs.len() {
                    let s = rhs[*next];
                    *next += 1;
                    if let Symbol::Var(w) = s {
                        match color[w.idx()] {
                            WHITE => {
                                color[w.idx()] = GREY;
                                stack.push((w.idx(), 0));
                                pushed = true;
                                break;
                            }
                            GREY => {
                                return Err(Error::CyclicGrammar(self.display_var(w)));
                            }
                            _ => {}
                        }
                    }
                }
                if !pushed {
                    color[v] = BLACK;
                    order.push(VarId(v as u32));
                    stack.pop();
                }
            }
        }
        Ok(order)
    }

    /// Lengths, weights and heights in one children-first pass.
    /// Terminals have height 0; a rule adds one.
    pub fn metrics(&self) -> Result<SlpMetrics> {
        let order = self.validate()?.topo_order;
        self.metrics_with_order(order)
    }

    pub(crate) fn metrics_with_order(&self, order: Vec<VarId>) -> Result<SlpMetrics> {
        let n = self.rules.len();
        let mut len = vec![0u64; n];
        let mut weight = vec![0u64; n];
        let mut height = vec![0u32; n];
        for &v in &order {
            let mut l = 0u64;
            let mut w = 0u64;
            let mut h = 0u32;
            for &s in &self.rules[v.idx()] {
                let (sl, sw, sh) = match s {
                    Symbol::Term(t) => (1, self.alphabet.weight(t), 0),
                    Symbol::Var(c) => (len[c.idx()], weight[c.idx()], height[c.idx()]),
                };
                l = l.checked_add(sl).ok_or_else(|| Error::Overflow(self.display_var(v)))?;
                w = w.checked_add(sw).ok_or_else(|| Error::Overflow(self.display_var(v)))?;
                h = h.max(sh);
            }
            len[v.idx()] = l;
            weight[v.idx()] = w;
            height[v.idx()] = h + 1;
        }
        Ok(SlpMetrics { len, weight, height, topo_order: order })
    }

    /// Expands `v` into its terminal string. Fails with `OutputTooLarge`
    /// when the string is longer than `max_len`.
    pub fn eval(&self, v: VarId, max_len: u64) -> Result<Vec<TermId>> {
        let m = self.metrics()?;
        let len = m.len[v.idx()];
        if len > max_len {
            return Err(Error::OutputTooLarge { len, limit: max_len });
        }
        let mut out = Vec::with_capacity(len as usize);
        self.expand_into(Symbol::Var(v), &mut out);
        Ok(out)
    }

    /// Unchecked expansion; the grammar must be valid and the output small.
    pub fn expand_into(&self, s: Symbol, out: &mut Vec<TermId>) {
        let mut stack = vec![s];
        while let Some(s) = stack.pop() {
            match s {
                Symbol::Term(t) => out.push(t),
                Symbol::Var(v) => stack.extend(self.rules[v.idx()].iter().rev().copied()),
            }
        }
    }

    pub fn expand(&self, s: Symbol) -> Vec<TermId> {
        let mut out = Vec::new();
        self.expand_into(s, &mut out);
        out
    }

    /// Concatenated terminal names of `val(v)`.
    pub fn eval_string(&self, v: VarId, max_len: u64) -> Result<String> {
        let s = self.eval(v, max_len)?;
        Ok(self.render(&s))
    }

    pub fn render(&self, s: &[TermId]) -> String {
        let mut out = String::new();
        for &t in s {
            out.push_str(&self.alphabet.name(t));
        }
        out
    }

    /// Whether every rule is `A -> BC` or `A -> a`.
    pub fn is_cnf(&self) -> bool {
        self.rules.iter().all(|rhs| matches!(rhs.as_slice(), [Symbol::Term(_)] | [Symbol::Var(_), Symbol::Var(_)]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Slp {
        // S -> A B, A -> a, B -> b c
        let mut g = Slp::new(Alphabet::named(
            vec!["a".into(), "b".into(), "c".into()],
            vec![1, 1, 1],
        ));
        let a = g.add_named_rule("A", vec![Symbol::Term(TermId(0))]);
        let b = g.add_named_rule("B", vec![Symbol::Term(TermId(1)), Symbol::Term(TermId(2))]);
        let s = g.add_named_rule("S", vec![Symbol::Var(a), Symbol::Var(b)]);
        g.start = Some(s);
        g
    }

    #[test]
    fn eval_small() {
        let g = abc();
        assert_eq!(g.eval_string(g.start.unwrap(), 10).unwrap(), "abc");
        assert!(matches!(
            g.eval(g.start.unwrap(), 2),
            Err(Error::OutputTooLarge { len: 3, limit: 2 })
        ));
    }

    #[test]
    fn cycle_detected() {
        let mut g = Slp::new(Alphabet::unit(1));
        let s = g.add_named_rule("S", vec![]);
        g.set_rule(s, vec![Symbol::Var(s), Symbol::Term(TermId(0))]);
        assert!(matches!(g.validate(), Err(Error::CyclicGrammar(_))));
    }

    #[test]
    fn unknown_symbol() {
        let g = Slp::from_rules(Alphabet::unit(1), vec![vec![Symbol::Var(VarId(3))]], None);
        assert!(matches!(g.validate(), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn zero_weight_rejected() {
        let g = Slp::from_rules(Alphabet::unnamed(vec![0]), vec![], None);
        assert!(matches!(g.validate(), Err(Error::NonPositiveWeight(_))));
    }

    #[test]
    fn metrics_basics() {
        let mut g = Slp::new(Alphabet::unnamed(vec![7]));
        let a = g.add_rule(vec![Symbol::Term(TermId(0))]);
        let e = g.add_rule(vec![]);
        let m = g.metrics().unwrap();
        assert_eq!((m.len[a.idx()], m.weight[a.idx()], m.height[a.idx()]), (1, 7, 1));
        assert_eq!((m.len[e.idx()], m.height[e.idx()]), (0, 1));
    }

    #[test]
    fn overflow_is_an_error() {
        let mut g = Slp::new(Alphabet::unit(1));
        let mut prev = g.add_rule(vec![Symbol::Term(TermId(0))]);
        for _ in 0..64 {
            prev = g.add_rule(vec![Symbol::Var(prev), Symbol::Var(prev)]);
        }
        assert!(matches!(g.metrics(), Err(Error::Overflow(_))));
    }
}
