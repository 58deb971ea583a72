use crate::balancer::{heavy_forest_tree, reduce_to_trees, HeavyPrefixes, Side};
use crate::error::Result;
use crate::grammar::{Alphabet, Builder, HeavyForest, Slp, Symbol, TermId, VarId};

use super::caterpillar::caterpillar_bundle_into;
use super::tree::{normalize, LabeledTree};
use super::weak::weak_into;

/// Contracting SLP defining every root-to-node label of a tree.
#[derive(Clone, Debug)]
pub struct TreePrefixSlp {
    pub slp: Slp,
    /// Prefix variable of every node; `None` when the prefix is empty.
    pub prefix: Vec<Option<VarId>>,
}

/// Replaces every terminal `t` of `slp` by the nonempty string `map[t]`
/// over `alphabet`. Strings of length one are substituted in place; longer
/// ones get a new variable, which is expanded wherever it is heavy.
/// Existing variable ids are kept.
pub(crate) fn resolve_terminals(slp: &Slp, alphabet: Alphabet, map: &[Vec<TermId>]) -> Slp {
    let weight = |u: &[TermId]| -> u64 { u.iter().map(|&a| alphabet.weight(a)).sum() };
    let nv = slp.num_vars();
    let mut out = Slp::new(alphabet.clone());
    let mut xvar: Vec<Option<VarId>> = vec![None; map.len()];
    let mut extra: Vec<(usize, Vec<Symbol>)> = Vec::new();
    for (t, u) in map.iter().enumerate() {
        debug_assert!(!u.is_empty());
        if u.len() > 1 {
            xvar[t] = Some(VarId((nv + extra.len()) as u32));
            extra.push((t, u.iter().map(|&a| Symbol::Term(a)).collect()));
        }
    }
    let m = slp.metrics().expect("valid SLP");
    for v in slp.vars() {
        let total = m.weight[v.idx()];
        let mut rhs = Vec::with_capacity(slp.rule(v).len());
        for &s in slp.rule(v) {
            match s {
                Symbol::Var(_) => rhs.push(s),
                Symbol::Term(t) => {
                    let u = &map[t.idx()];
                    match xvar[t.idx()] {
                        Some(x) if 2 * weight(u) <= total => rhs.push(Symbol::Var(x)),
                        _ => rhs.extend(u.iter().map(|&a| Symbol::Term(a))),
                    }
                }
            }
        }
        let id = out.add_rule(rhs);
        if let Some(name) = slp.var_name(v) {
            out.set_name(id, name);
        }
    }
    for (_, rhs) in extra {
        out.add_rule(rhs);
    }
    out.start = slp.start;
    out
}

/// Contracting SLP with `O(n)` variables and right-hand sides of length
/// `O(ℓ)` defining all prefixes of `t`, where `ℓ` bounds the label lengths.
pub fn build_tree_prefix_slp(t: &LabeledTree) -> Result<TreePrefixSlp> {
    let nt = normalize(t);
    let ne = nt.labels.len();
    if ne == 0 {
        return Ok(TreePrefixSlp { slp: Slp::new(t.alphabet.clone()), prefix: vec![None; t.num_nodes()] });
    }
    let mut bw = Builder::new(nt.edge_alphabet.clone());
    let pw = weak_into(&mut bw, &nt.tree);
    let gw = bw.finish();
    let m = gw.metrics()?;
    let hf = HeavyForest::build(&gw, &m);

    let hl = caterpillar_prefixes(&gw, &m, &hf, Side::Left)?;
    let hr = caterpillar_prefixes(&gw, &m, &hf, Side::Right)?;
    let reduced = reduce_to_trees(&gw, &hl, &hr)?;
    let slp = resolve_terminals(&reduced, t.alphabet.clone(), &nt.labels);
    let prefix = nt.node_map.iter().map(|&x| pw[x]).collect();
    Ok(TreePrefixSlp { slp, prefix })
}

/// Prefix SLPs of the left- or right-labeled heavy trees of `g`, all of
/// which must be caterpillars.
fn caterpillar_prefixes(
    g: &Slp,
    m: &crate::grammar::SlpMetrics,
    hf: &HeavyForest,
    side: Side,
) -> Result<HeavyPrefixes> {
    let (tree, node_of) = heavy_forest_tree(g, m, hf, side);
    let gamma = tree.alphabet.clone();
    let nt = normalize(&tree);
    let mut alpha = gamma.clone();
    let first = alpha.len();
    for &w in nt.edge_alphabet.weights() {
        alpha.push(None, w);
    }
    let mut b = Builder::new(alpha);
    let shift = |s: Symbol| match s {
        Symbol::Term(e) => Symbol::Term(TermId(e.0 + first as u32)),
        v => v,
    };
    let mut sym = nt.tree.clone();
    for s in sym.sym.iter_mut().skip(1) {
        *s = shift(*s);
    }
    let local = caterpillar_bundle_into(&mut b, &sym)?;
    let mut map: Vec<Vec<TermId>> = (0..first as u32).map(|a| vec![TermId(a)]).collect();
    map.extend(nt.labels.iter().cloned());
    let slp = resolve_terminals(&b.finish(), gamma, &map);
    let prefix = node_of.iter().map(|&x| local[nt.node_map[x]]).collect();
    Ok(HeavyPrefixes { slp, prefix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::is_contracting;

    fn check(t: &LabeledTree) -> TreePrefixSlp {
        let p = build_tree_prefix_slp(t).unwrap();
        assert!(is_contracting(&p.slp).unwrap());
        for v in 0..t.num_nodes() {
            let want = t.path_label(v);
            match p.prefix[v] {
                None => assert!(want.is_empty()),
                Some(x) => assert_eq!(p.slp.eval(x, 1 << 24).unwrap(), want, "node {v}"),
            }
        }
        p
    }

    #[test]
    fn path_matches_string_prefixes() {
        let mut t = LabeledTree::new(Alphabet::unit(3));
        let mut v = 0;
        for i in 0..30 {
            v = t.add_child(v, vec![TermId(i % 3)]);
        }
        check(&t);
    }

    #[test]
    fn multi_symbol_and_empty_labels() {
        let mut t = LabeledTree::new(Alphabet::unnamed(vec![1, 2, 7]));
        let a = t.add_child(0, vec![TermId(0), TermId(1)]);
        let b = t.add_child(a, vec![]);
        let c = t.add_child(b, vec![TermId(2), TermId(2), TermId(0)]);
        t.add_child(c, vec![TermId(1)]);
        t.add_child(a, vec![TermId(0)]);
        t.add_child(0, vec![]);
        check(&t);
    }

    #[test]
    fn complete_binary_tree() {
        let mut t = LabeledTree::new(Alphabet::unit(2));
        let mut level = vec![0];
        for _ in 0..7 {
            let mut next = Vec::new();
            for &v in &level {
                next.push(t.add_child(v, vec![TermId(0)]));
                next.push(t.add_child(v, vec![TermId(1)]));
            }
            level = next;
        }
        check(&t);
    }
}
