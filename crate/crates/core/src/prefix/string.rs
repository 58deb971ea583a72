use crate::error::{Error, Result};
use crate::grammar::{Alphabet, Builder, Slp, Symbol, TermId, VarId};

const NONE: usize = usize::MAX;

/// The left-heavy base SLP of a weighted string together with its
/// derivation tree `D` and the contracted tree `D0`.
///
/// Nodes of `D` are numbered `0..n` for the leaves (string positions) and
/// `n..` for the variables; the root is [`BaseSlp::root`].
#[derive(Clone, Debug)]
pub struct BaseSlp {
    syms: Vec<TermId>,
    rules: Vec<Vec<usize>>,
    parent: Vec<usize>,
    child_idx: Vec<u32>,
    weight: Vec<u64>,
    len: Vec<u64>,
    in_s0: Vec<bool>,
    d0_parent: Vec<usize>,
    level: Vec<u32>,
    height: Vec<u32>,
    probes: u64,
}

/// One left-branching variable `L_{α,β}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LeftVar {
    pub alpha: usize,
    pub beta: usize,
    pub var: VarId,
}

/// An SLP with one variable per nonempty prefix of a string.
#[derive(Clone, Debug)]
pub struct PrefixSlp {
    pub slp: Slp,
    /// `prefix[i]` derives the first `i + 1` symbols.
    pub prefix: Vec<VarId>,
}

impl BaseSlp {
    /// Builds the base SLP for `syms` with symbol weights `w`.
    pub fn build(syms: &[TermId], w: &[u64]) -> BaseSlp {
        let n = syms.len();
        assert!(n > 0, "string must be nonempty");
        assert_eq!(n, w.len());
        let mut pre = vec![0u64; n + 1];
        for i in 0..n {
            pre[i + 1] = pre[i] + w[i];
        }
        let mut b = BaseSlp {
            syms: syms.to_vec(),
            rules: Vec::new(),
            parent: vec![NONE; n],
            child_idx: vec![0; n],
            weight: w.to_vec(),
            len: vec![1; n],
            in_s0: Vec::new(),
            d0_parent: Vec::new(),
            level: Vec::new(),
            height: Vec::new(),
            probes: 0,
        };
        // (segment start, end, node id reserved for it)
        let root = b.new_var(n as u64, pre[n]);
        let mut work = vec![(0usize, n, root)];
        while let Some((l, r, node)) = work.pop() {
            let k = node - n;
            if r - l == 1 {
                b.rules[k] = vec![l];
                b.attach(l, node, 0);
                continue;
            }
            let i = b.split(&pre, l, r);
            let mid = i + 1 + (r - i - 1).div_ceil(2);
            let mut rhs = Vec::with_capacity(4);
            for (s, e, leaf) in [(l, i, false), (i, i + 1, true), (i + 1, mid, false), (mid, r, false)] {
                if s == e {
                    continue;
                }
                let child = if leaf {
                    i
                } else {
                    let c = b.new_var((e - s) as u64, pre[e] - pre[s]);
                    work.push((s, e, c));
                    c
                };
                b.attach(child, node, rhs.len() as u32);
                rhs.push(child);
            }
            b.rules[k] = rhs;
        }
        b.build_d0();
        b
    }

    fn new_var(&mut self, len: u64, weight: u64) -> usize {
        self.rules.push(Vec::new());
        self.parent.push(NONE);
        self.child_idx.push(0);
        self.weight.push(weight);
        self.len.push(len);
        self.parent.len() - 1
    }

    fn attach(&mut self, child: usize, parent: usize, idx: u32) {
        self.parent[child] = parent;
        self.child_idx[child] = idx;
    }

    /// Maximal `i` in `[l, r)` with `2 * ‖a_i … a_{r-1}‖ > ‖a_l … a_{r-1}‖`,
    /// by exponential search from the right end followed by binary search.
    fn split(&mut self, pre: &[u64], l: usize, r: usize) -> usize {
        let total = pre[r] - pre[l];
        let heavy_suffix = |i: usize| 2 * (pre[r] - pre[i]) > total;
        let mut k = 0u32;
        let lo = loop {
            self.probes += 1;
            let start = r.saturating_sub(1usize << k).max(l);
            if start == l || heavy_suffix(start) {
                break start;
            }
            k += 1;
        };
        // heavy_suffix(lo) holds; the answer lies in [lo, hi).
        let mut lo = lo;
        let mut hi = if k == 0 { r } else { r - (1usize << (k - 1)) };
        while hi - lo > 1 {
            self.probes += 1;
            let mid = lo + (hi - lo) / 2;
            if heavy_suffix(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn build_d0(&mut self) {
        let total = self.parent.len();
        let n = self.syms.len();
        self.in_s0 = vec![false; total];
        self.d0_parent = vec![NONE; total];
        self.level = vec![0; total];
        self.height = vec![0; total];
        // Variables are numbered in creation order, parents before children;
        // leaves come last in this order.
        let order: Vec<usize> = (n..total).chain(0..n).collect();
        let mut s0anc = vec![NONE; total];
        for &x in &order {
            let p = self.parent[x];
            let is = p == NONE || self.child_idx[x] > 0;
            self.in_s0[x] = is;
            if p != NONE && is {
                let a = s0anc[p];
                self.d0_parent[x] = a;
                self.level[x] = self.level[a] + 1;
            }
            s0anc[x] = if is { x } else { s0anc[p] };
        }
        for &x in order.iter().rev() {
            let p = self.d0_parent[x];
            if self.in_s0[x] && p != NONE {
                self.height[p] = self.height[p].max(self.height[x] + 1);
            }
        }
    }

    pub fn num_leaves(&self) -> usize {
        self.syms.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.parent.len()
    }

    pub fn num_vars(&self) -> usize {
        self.rules.len()
    }

    pub fn root(&self) -> usize {
        self.syms.len()
    }

    pub fn is_leaf(&self, x: usize) -> bool {
        x < self.syms.len()
    }

    pub fn leaf(&self, pos: usize) -> usize {
        pos
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        (self.parent[x] != NONE).then_some(self.parent[x])
    }

    /// Children of a variable node in rule order.
    pub fn rule(&self, x: usize) -> &[usize] {
        &self.rules[x - self.syms.len()]
    }

    pub fn weight(&self, x: usize) -> u64 {
        self.weight[x]
    }

    pub fn len(&self, x: usize) -> u64 {
        self.len[x]
    }

    /// Left siblings of `x` in its parent's rule.
    pub fn lsib(&self, x: usize) -> &[usize] {
        let p = self.parent[x];
        &self.rule(p)[..self.child_idx[x] as usize]
    }

    pub fn in_s0(&self, x: usize) -> bool {
        self.in_s0[x]
    }

    pub fn d0_parent(&self, x: usize) -> Option<usize> {
        (self.d0_parent[x] != NONE).then_some(self.d0_parent[x])
    }

    pub fn level(&self, x: usize) -> u32 {
        self.level[x]
    }

    /// Height of `x` in `D0`.
    pub fn height(&self, x: usize) -> u32 {
        self.height[x]
    }

    /// Probes spent by the split searches.
    pub fn probes(&self) -> u64 {
        self.probes
    }

    /// Lowest `D0` node that is an ancestor of `x` (inclusive).
    pub fn s0_ancestor(&self, mut x: usize) -> usize {
        while !self.in_s0[x] {
            x = self.parent[x];
        }
        x
    }

    /// The string branching off to the left on the path from `alpha` down
    /// to `beta`, as terminal symbols.
    pub fn left_branch_value(&self, alpha: usize, beta: usize) -> Result<Vec<TermId>> {
        let mut parts: Vec<&[usize]> = Vec::new();
        let mut x = beta;
        while x != alpha {
            if self.parent[x] == NONE {
                return Err(Error::NotAnAncestor);
            }
            parts.push(self.lsib(x));
            x = self.parent[x];
        }
        let mut out = Vec::new();
        for part in parts.iter().rev() {
            for &y in part.iter() {
                self.expand(y, &mut out);
            }
        }
        Ok(out)
    }

    fn expand(&self, x: usize, out: &mut Vec<TermId>) {
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            if self.is_leaf(y) {
                out.push(self.syms[y]);
            } else {
                stack.extend(self.rule(y).iter().rev());
            }
        }
    }
}

/// Everything produced by [`prefix_slp_into`].
#[derive(Clone, Debug)]
pub struct PrefixArtifacts {
    pub base: BaseSlp,
    /// Builder variable of every variable node of the base SLP, indexed by
    /// `node - n`.
    pub base_vars: Vec<VarId>,
    pub left_vars: Vec<LeftVar>,
    pub prefix: Vec<VarId>,
}

/// Adds a contracting prefix SLP for `s` (terminals of `b`) to `b`.
pub fn prefix_slp_into(b: &mut Builder, s: &[TermId]) -> PrefixArtifacts {
    let n = s.len();
    let w: Vec<u64> = s.iter().map(|&t| b.alphabet().weight(t)).collect();
    let base = BaseSlp::build(s, &w);

    // Base variables, children first (reverse creation order).
    let nv = base.num_vars();
    let mut base_vars = vec![VarId(0); nv];
    let sym = |x: usize, base_vars: &[VarId]| -> Symbol {
        if x < n {
            Symbol::Term(s[x])
        } else {
            Symbol::Var(base_vars[x - n])
        }
    };
    for k in (0..nv).rev() {
        let rhs: Vec<Symbol> = base.rules[k].iter().map(|&x| sym(x, &base_vars)).collect();
        base_vars[k] = b.push(rhs);
    }
    let lsib = |x: usize, base_vars: &[VarId]| -> Vec<Symbol> {
        base.lsib(x).iter().map(|&y| sym(y, base_vars)).collect()
    };

    // D0 children lists, then a preorder walk with the ancestor path.
    let total = base.num_nodes();
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); total];
    for x in 0..total {
        if let Some(p) = base.d0_parent(x) {
            kids[p].push(x);
        }
    }
    // lvars[β][ℓ] = L_{path[ℓ], β}
    let mut lvars: Vec<Vec<VarId>> = vec![Vec::new(); total];
    let mut left_vars = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    let mut stack: Vec<(usize, usize)> = vec![(base.root(), 0)];
    while let Some(&mut (x, ref mut next)) = stack.last_mut() {
        if *next == 0 {
            path.push(x);
            let lv = base.level(x) as usize;
            if lv > 0 {
                let top = (base.height(x) as usize).min(lv - 1);
                let mut row = Vec::with_capacity(top + 1);
                for l in 0..=top {
                    let rhs = if l + 1 == lv {
                        lsib(x, &base_vars)
                    } else if l + 2 == lv {
                        let mut r = lsib(path[lv - 1], &base_vars);
                        r.extend(lsib(x, &base_vars));
                        r
                    } else {
                        let a1 = path[l + 1];
                        let b1 = path[lv - 1];
                        let inner = lvars[b1][l + 1];
                        let mut r = lsib(a1, &base_vars);
                        r.push(Symbol::Var(inner));
                        r.extend(lsib(x, &base_vars));
                        r
                    };
                    let v = b.push_contracting(rhs);
                    row.push(v);
                    left_vars.push(LeftVar { alpha: path[l], beta: x, var: v });
                }
                lvars[x] = row;
            }
        }
        if *next < kids[x].len() {
            let c = kids[x][*next];
            *next += 1;
            stack.push((c, 0));
        } else {
            stack.pop();
            path.pop();
        }
    }

    let mut prefix = Vec::with_capacity(n);
    for i in 1..n {
        let beta = base.s0_ancestor(base.leaf(i));
        prefix.push(lvars[beta][0]);
    }
    prefix.push(base_vars[0]);
    PrefixArtifacts { base, base_vars, left_vars, prefix }
}

/// Contracting SLP defining every nonempty prefix of `s`, with right-hand
/// sides of length at most 10.
pub fn build_prefix_slp(alphabet: &Alphabet, s: &[TermId]) -> PrefixSlp {
    let mut b = Builder::new(alphabet.clone());
    let art = prefix_slp_into(&mut b, s);
    PrefixSlp { slp: b.finish(), prefix: art.prefix }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::is_contracting;

    fn terms(n: usize) -> Vec<TermId> {
        (0..n as u32).map(TermId).collect()
    }

    #[test]
    fn base_unit_four() {
        let b = BaseSlp::build(&terms(4), &[1, 1, 1, 1]);
        let root = b.root();
        let r = b.rule(root);
        assert_eq!(r.len(), 4);
        assert_eq!(r[1], b.leaf(1));
        assert_eq!(b.rule(r[0]), &[b.leaf(0)]);
        assert_eq!(b.rule(r[2]), &[b.leaf(2)]);
        assert_eq!(b.rule(r[3]), &[b.leaf(3)]);
    }

    #[test]
    fn base_heavy_first() {
        let b = BaseSlp::build(&terms(3), &[4, 1, 1]);
        let r = b.rule(b.root());
        assert_eq!(r.len(), 3);
        assert_eq!(r[0], b.leaf(0));
    }

    #[test]
    fn base_single() {
        let b = BaseSlp::build(&terms(1), &[5]);
        assert_eq!(b.rule(b.root()), &[b.leaf(0)]);
    }

    #[test]
    fn two_symbols() {
        let p = build_prefix_slp(&Alphabet::unit(2), &terms(2));
        assert_eq!(p.slp.eval(p.prefix[0], 10).unwrap(), terms(1));
        assert_eq!(p.slp.eval(p.prefix[1], 10).unwrap(), terms(2));
    }

    #[test]
    fn adversarial_weights() {
        let n = 8;
        let w: Vec<u64> = (0..n).map(|i| 1u64 << (n - 1 - i)).collect();
        let p = build_prefix_slp(&Alphabet::unnamed(w), &terms(n));
        assert!(is_contracting(&p.slp).unwrap());
        assert!(p.slp.max_rhs_len() <= 10);
        for i in 0..n {
            assert_eq!(p.slp.eval(p.prefix[i], 100).unwrap(), terms(i + 1));
        }
    }

    #[test]
    fn left_value_basics() {
        let b = BaseSlp::build(&terms(9), &[1; 9]);
        assert_eq!(b.left_branch_value(b.root(), b.root()).unwrap(), vec![]);
        for i in 0..9 {
            assert_eq!(b.left_branch_value(b.root(), b.leaf(i)).unwrap(), terms(i));
        }
        assert_eq!(b.left_branch_value(b.leaf(3), b.root()), Err(Error::NotAnAncestor));
    }
}
