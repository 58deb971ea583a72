use crate::error::{Error, Result};
use crate::grammar::{Alphabet, HeavyForest, Slp, SlpMetrics, Symbol, TermId, VarId};
use crate::prefix::LabeledTree;

/// Which light part of a rule labels its heavy edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Reversed light prefix.
    Left,
    /// Light suffix.
    Right,
}

/// Prefix grammar for one side of the heavy forest of an SLP `g`.
///
/// Terminals are the symbols of `g`: terminal `t` of `g` is `t`, variable
/// `A` is `|Σ| + A`, weighted as in `g`.
#[derive(Clone, Debug)]
pub struct HeavyPrefixes {
    pub slp: Slp,
    /// Prefix variable of every symbol, indexed like the terminals; `None`
    /// for empty prefixes.
    pub prefix: Vec<Option<VarId>>,
}

/// The left- or right-labeled heavy forest of `g` as one tree: every heavy
/// tree root hangs off a fresh root by an empty edge.
///
/// Returns the tree and the node of every symbol.
pub fn heavy_forest_tree(g: &Slp, m: &SlpMetrics, hf: &HeavyForest, side: Side) -> (LabeledTree, Vec<usize>) {
    let nt = g.alphabet.len();
    let nv = g.num_vars();
    let mut weights = g.alphabet.weights().to_vec();
    weights.extend_from_slice(&m.weight);
    let gamma = |s: Symbol| match s {
        Symbol::Term(t) => TermId(t.0),
        Symbol::Var(v) => TermId((nt + v.idx()) as u32),
    };
    let node = |s: Symbol| 1 + gamma(s).idx();
    let mut parent = vec![Some(0); 1 + nt + nv];
    parent[0] = None;
    let mut label = vec![Vec::new(); 1 + nt + nv];
    for v in g.vars() {
        if let Some(e) = hf.edge(v) {
            let x = node(Symbol::Var(v));
            parent[x] = Some(node(e.child));
            let lab = match side {
                Side::Left => hf.left_label(g, v),
                Side::Right => hf.right_label(g, v),
            };
            label[x] = lab.into_iter().map(gamma).collect();
        }
    }
    let tree = LabeledTree::from_parts(Alphabet::unnamed(weights), parent, label).expect("heavy forest is a forest");
    (tree, (1..=nt + nv).collect())
}

/// Rewrites `g` using prefix grammars of its left- and right-labeled heavy
/// trees so that every rule becomes contracting.
///
/// Variables `0..|g|` of the result derive the same strings as in `g`; the
/// rules of `hl` (reversed) and `hr` follow.
pub fn reduce_to_trees(g: &Slp, hl: &HeavyPrefixes, hr: &HeavyPrefixes) -> Result<Slp> {
    let nt = g.alphabet.len();
    let nv = g.num_vars();
    assert_eq!(hl.slp.alphabet.len(), nt + nv, "left prefix grammar over the wrong alphabet");
    assert_eq!(hr.slp.alphabet.len(), nt + nv, "right prefix grammar over the wrong alphabet");
    let m = g.metrics()?;
    let hf = HeavyForest::build(g, &m);
    let ml = hl.slp.metrics()?;
    let mr = hr.slp.metrics()?;
    let off_l = nv;
    let off_r = nv + hl.slp.num_vars();
    let total = off_r + hr.slp.num_vars();

    let mut weight = m.weight.clone();
    weight.extend_from_slice(&ml.weight);
    weight.extend_from_slice(&mr.weight);
    let map = |s: Symbol, off: usize| match s {
        Symbol::Term(t) if t.idx() < nt => s,
        Symbol::Term(t) => Symbol::Var(VarId((t.idx() - nt) as u32)),
        Symbol::Var(x) => Symbol::Var(VarId((off + x.idx()) as u32)),
    };
    let mut rules: Vec<Vec<Symbol>> = Vec::with_capacity(total);
    rules.extend(g.rules().iter().cloned());
    rules.extend(hl.slp.rules().iter().map(|r| r.iter().rev().map(|&s| map(s, off_l)).collect()));
    rules.extend(hr.slp.rules().iter().map(|r| r.iter().map(|&s| map(s, off_r)).collect()));
    let wt = |s: Symbol| match s {
        Symbol::Term(t) => g.alphabet.weight(t),
        Symbol::Var(v) => weight[v.idx()],
    };

    // Which prefixes and suffixes are nonempty.
    let mut need = vec![(false, false); nv];
    for &v in &m.topo_order {
        if let Some(e) = hf.edge(v) {
            let below = e.child.var().map_or((false, false), |c| need[c.idx()]);
            need[v.idx()] = (below.0 || e.index > 0, below.1 || e.index + 1 < g.rule(v).len());
        }
    }

    // Step 1: A -> P_A · root · S_A, expanding P_A or S_A when heavy.
    for v in g.vars() {
        if hf.edge(v).is_none() {
            continue;
        }
        let key = nt + v.idx();
        let pick = |h: &HeavyPrefixes, needed: bool, off: usize| -> Result<Option<Symbol>> {
            match h.prefix[key] {
                Some(p) => Ok(Some(Symbol::Var(VarId((off + p.idx()) as u32)))),
                None if needed => Err(Error::MissingPrefixVariable(g.display_var(v))),
                None => Ok(None),
            }
        };
        let p = pick(hl, need[v.idx()].0, off_l)?;
        let s = pick(hr, need[v.idx()].1, off_r)?;
        let mut rhs = Vec::new();
        rhs.extend(p);
        match hf.root(v) {
            Symbol::Var(r) => rhs.extend_from_slice(g.rule(r)),
            t => rhs.push(t),
        }
        rhs.extend(s);
        let w: u64 = rhs.iter().map(|&x| wt(x)).sum();
        debug_assert_eq!(w, weight[v.idx()]);
        if let Some(k) = rhs.iter().position(|&x| x.var().is_some_and(|y| y.idx() >= nv) && 2 * wt(x) > w) {
            let y = rhs[k].var().unwrap();
            let inner = rules[y.idx()].clone();
            rhs.splice(k..k + 1, inner);
        }
        rules[v.idx()] = rhs;
    }

    // Step 2: expand heavy original variables in the prefix rules, using
    // the rules from step 1.
    for x in nv..total {
        let w = weight[x];
        let heavy = rules[x].iter().position(|&s| s.var().is_some_and(|y| y.idx() < nv) && 2 * wt(s) > w);
        if let Some(k) = heavy {
            let y = rules[x][k].var().unwrap();
            let inner = rules[y.idx()].clone();
            rules[x].splice(k..k + 1, inner);
        }
    }

    let mut out = Slp::from_rules(g.alphabet.clone(), rules, g.start);
    for v in g.vars() {
        if let Some(n) = g.var_name(v) {
            out.set_name(v, n);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::is_contracting;

    fn v(i: u32) -> Symbol {
        Symbol::Var(VarId(i))
    }
    fn t(i: u32) -> Symbol {
        Symbol::Term(TermId(i))
    }

    fn empty_prefixes(g: &Slp) -> HeavyPrefixes {
        let k = g.alphabet.len() + g.num_vars();
        HeavyPrefixes { slp: Slp::new(Alphabet::unit(k)), prefix: vec![None; k] }
    }

    #[test]
    fn contracting_input_is_unchanged() {
        let g = Slp::from_rules(Alphabet::unit(2), vec![vec![v(1), v(2)], vec![t(0)], vec![t(1)]], Some(VarId(0)));
        let h = empty_prefixes(&g);
        let out = reduce_to_trees(&g, &h, &h).unwrap();
        assert_eq!(out.rules(), g.rules());
    }

    #[test]
    fn missing_prefix_is_reported() {
        // S -> a A, A -> a a a
        let g = Slp::from_rules(Alphabet::unit(1), vec![vec![t(0), v(1)], vec![t(0), t(0), t(0)]], None);
        let h = empty_prefixes(&g);
        assert!(matches!(reduce_to_trees(&g, &h, &h), Err(Error::MissingPrefixVariable(_))));
    }

    #[test]
    fn figure_one_rule_for_s() {
        // S -> A T B, T -> D C U, U -> u u u u u u u u (heavy root)
        let mut g = Slp::new(Alphabet::unit(5));
        let a = g.add_named_rule("A", vec![t(0)]);
        let b = g.add_named_rule("B", vec![t(1)]);
        let c = g.add_named_rule("C", vec![t(2)]);
        let d = g.add_named_rule("D", vec![t(3)]);
        let u = g.add_named_rule("U", vec![t(4); 8]);
        let tt = g.add_named_rule("T", vec![Symbol::Var(d), Symbol::Var(c), Symbol::Var(u)]);
        let s = g.add_named_rule("S", vec![Symbol::Var(a), Symbol::Var(tt), Symbol::Var(b)]);
        let m = g.metrics().unwrap();
        let hf = HeavyForest::build(&g, &m);
        let mk = |side| {
            let (tree, node_of) = heavy_forest_tree(&g, &m, &hf, side);
            let p = crate::prefix::build_tree_prefix_slp(&tree).unwrap();
            HeavyPrefixes { slp: p.slp, prefix: node_of.iter().map(|&x| p.prefix[x]).collect() }
        };
        let (hl, hr) = (mk(Side::Left), mk(Side::Right));
        let nt = g.alphabet.len() as u32;
        let pl = hl.prefix[(nt + s.0) as usize].unwrap();
        let gam = |x: u32| TermId(nt + x);
        let mut want = vec![gam(c.0), gam(d.0), gam(a.0)];
        assert_eq!(hl.slp.eval(pl, 100).unwrap(), want);
        want.reverse();
        let sr = hr.prefix[(nt + s.0) as usize].unwrap();
        assert_eq!(hr.slp.eval(sr, 100).unwrap(), vec![gam(b.0)]);
        let out = reduce_to_trees(&g, &hl, &hr).unwrap();
        assert!(is_contracting(&out).unwrap());
        for x in g.vars() {
            assert_eq!(out.eval(x, 100).unwrap(), g.eval(x, 100).unwrap());
        }
    }
}
