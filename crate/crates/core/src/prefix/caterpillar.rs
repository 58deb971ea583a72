use crate::error::{Error, Result};
use crate::grammar::{Builder, Symbol, TermId, VarId};

use super::string::prefix_slp_into;
use super::tree::{normalize, LabeledTree, SymTree};
use super::tree_slp::{resolve_terminals, TreePrefixSlp};

/// Adds a contracting prefix SLP for the caterpillar `t` to `b`. Edge
/// symbols must be terminals of `b`. Returns the prefix variable of every
/// node (`None` for the root).
pub(crate) fn caterpillar_into(b: &mut Builder, t: &SymTree) -> Result<Vec<Option<VarId>>> {
    let mut prefix: Vec<Option<VarId>> = vec![None; t.len()];
    let is_inner = |v: usize| !t.children[v].is_empty();
    let mut spine = vec![0usize];
    let mut v = 0;
    loop {
        let mut inner = t.children[v].iter().copied().filter(|&c| is_inner(c));
        let next = match (inner.next(), inner.next()) {
            (Some(_), Some(_)) => return Err(Error::NotACaterpillar(v)),
            (Some(c), None) => c,
            (None, _) => match t.children[v].first() {
                Some(&c) => {
                    spine.push(c);
                    break;
                }
                None => break,
            },
        };
        spine.push(next);
        v = next;
    }
    if spine.len() == 1 {
        return Ok(prefix);
    }
    let word: Vec<TermId> = spine[1..]
        .iter()
        .map(|&x| t.sym[x].term().expect("caterpillar edges carry terminals"))
        .collect();
    let art = prefix_slp_into(b, &word);
    for (k, &x) in spine[1..].iter().enumerate() {
        prefix[x] = Some(art.prefix[k]);
    }
    let mut on_spine = vec![false; t.len()];
    for &x in &spine {
        on_spine[x] = true;
    }
    for &x in &spine {
        for &c in &t.children[x] {
            if on_spine[c] {
                continue;
            }
            let rhs = match prefix[x] {
                Some(p) => vec![Symbol::Var(p), t.sym[c]],
                None => vec![t.sym[c]],
            };
            prefix[c] = Some(b.push_contracting(rhs));
        }
    }
    Ok(prefix)
}

/// Runs [`caterpillar_into`] on every subtree hanging off the root of `t`,
/// so `t` may be a bundle of caterpillars glued at their roots.
pub(crate) fn caterpillar_bundle_into(b: &mut Builder, t: &SymTree) -> Result<Vec<Option<VarId>>> {
    let mut prefix = vec![None; t.len()];
    for &c in &t.children[0] {
        let mut sub = SymTree::single();
        let mut map = vec![(c, sub.push(0, t.sym[c]))];
        let mut k = 0;
        while k < map.len() {
            let (x, lx) = map[k];
            for &y in &t.children[x] {
                let ly = sub.push(lx, t.sym[y]);
                map.push((y, ly));
            }
            k += 1;
        }
        let p = caterpillar_into(b, &sub).map_err(|e| match e {
            Error::NotACaterpillar(v) => Error::NotACaterpillar(map.iter().find(|m| m.1 == v).map_or(0, |m| m.0)),
            e => e,
        })?;
        for (x, lx) in map {
            prefix[x] = p[lx];
        }
    }
    Ok(prefix)
}

/// Contracting prefix SLP of a caterpillar with `O(n)` variables and
/// right-hand sides of length `O(ℓ)`.
pub fn build_caterpillar_prefix_slp(t: &LabeledTree) -> Result<TreePrefixSlp> {
    let nt = normalize(t);
    let mut b = Builder::new(nt.edge_alphabet.clone());
    let local = caterpillar_into(&mut b, &nt.tree).map_err(|e| match e {
        Error::NotACaterpillar(v) => Error::NotACaterpillar(nt.node_map.iter().position(|&x| x == v).unwrap_or(v)),
        e => e,
    })?;
    let slp = resolve_terminals(&b.finish(), t.alphabet.clone(), &nt.labels);
    Ok(TreePrefixSlp { slp, prefix: nt.node_map.iter().map(|&x| local[x]).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{is_contracting, Alphabet};

    fn term(i: u32) -> Symbol {
        Symbol::Term(TermId(i))
    }

    fn check(b: Builder, t: &SymTree, prefix: &[Option<VarId>]) {
        let slp = b.finish();
        assert!(is_contracting(&slp).unwrap());
        for v in 1..t.len() {
            let mut want = Vec::new();
            let mut x = v;
            while x != 0 {
                want.push(t.sym[x].term().unwrap());
                x = t.parent[x];
            }
            want.reverse();
            assert_eq!(slp.eval(prefix[v].unwrap(), 1 << 20).unwrap(), want, "node {v}");
        }
    }

    #[test]
    fn path_of_two() {
        let mut t = SymTree::single();
        let x = t.push(0, term(0));
        t.push(x, term(1));
        let mut b = Builder::new(Alphabet::unit(2));
        let p = caterpillar_into(&mut b, &t).unwrap();
        assert!(p[0].is_none());
        check(b, &t, &p);
    }

    #[test]
    fn root_with_leaf_and_spine() {
        let mut t = SymTree::single();
        t.push(0, term(0));
        t.push(0, term(1));
        let mut b = Builder::new(Alphabet::unit(2));
        let p = caterpillar_into(&mut b, &t).unwrap();
        check(b, &t, &p);
    }

    #[test]
    fn legs_with_heavy_prefixes() {
        let mut t = SymTree::single();
        let mut v = 0;
        for i in 0..6 {
            v = t.push(v, term(i));
            t.push(v, term(6));
            t.push(v, term(7));
        }
        let mut w = vec![1u64; 8];
        w[0] = 50;
        let mut b = Builder::new(Alphabet::unnamed(w));
        let p = caterpillar_into(&mut b, &t).unwrap();
        check(b, &t, &p);
    }

    #[test]
    fn rejects_branching() {
        let mut t = SymTree::single();
        let a = t.push(0, term(0));
        let c = t.push(0, term(0));
        t.push(a, term(0));
        t.push(c, term(0));
        let mut b = Builder::new(Alphabet::unit(1));
        assert_eq!(caterpillar_into(&mut b, &t), Err(Error::NotACaterpillar(0)));
    }
}
