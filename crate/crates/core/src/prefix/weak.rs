use crate::grammar::{Builder, Slp, Symbol, TermId, VarId};

use super::tree::{normalize, LabeledTree, SymTree};

const NONE: usize = usize::MAX;

/// One level of the recursion: a tree whose edges are labeled by symbols
/// of the shared builder.
struct Instance {
    tree: SymTree,
    /// Prefix variable `P_{top, x}` of the unary path ending in `x`.
    pvar: Vec<Option<VarId>>,
    /// Start of the maximal unary path through `x` (the parent of `x` in
    /// the contracted tree when `x` is branching).
    top: Vec<usize>,
    branching: Vec<bool>,
    peak: Vec<usize>,
    /// Sub-instance and local node for non-peak branching nodes.
    sub: Vec<Option<(usize, usize)>>,
}

fn rank(d: u64) -> i32 {
    (64 - (d - 1).leading_zeros()) as i32
}

/// Adds an SLP for all nonempty prefixes of `t` to `b`. Returns the prefix
/// variable of every node (`None` for the root).
///
/// At most `4n` variables are added for `n` edges and right-hand sides have
/// length at most 6. Every heavy symbol is the heavy child of at most one
/// heavy variable, provided the edge symbols of `t` are pairwise distinct
/// and occur nowhere else.
pub(crate) fn weak_into(b: &mut Builder, t: &SymTree) -> Vec<Option<VarId>> {
    let mut insts = vec![Instance::new(t.clone())];
    let mut k = 0;
    while k < insts.len() {
        let subs = insts[k].phase1(b);
        for (nodes, tree) in subs {
            let id = insts.len();
            for (local, &x) in nodes.iter().enumerate().skip(1) {
                insts[k].sub[x] = Some((id, local));
            }
            insts.push(Instance::new(tree));
        }
        k += 1;
    }
    let mut avars: Vec<Vec<Option<VarId>>> = vec![Vec::new(); insts.len()];
    for k in (0..insts.len()).rev() {
        avars[k] = insts[k].phase2(b, &avars);
    }
    avars.swap_remove(0)
}

impl Instance {
    fn new(tree: SymTree) -> Self {
        let n = tree.len();
        Instance {
            tree,
            pvar: vec![None; n],
            top: vec![NONE; n],
            branching: vec![false; n],
            peak: vec![NONE; n],
            sub: vec![None; n],
        }
    }

    fn edges(&self) -> usize {
        self.tree.len() - 1
    }

    /// Builds the unary-path variables and returns the sub-instances as
    /// (node list with the peak first, local tree).
    fn phase1(&mut self, b: &mut Builder) -> Vec<(Vec<usize>, SymTree)> {
        if self.edges() <= 1 {
            return Vec::new();
        }
        let t = &self.tree;
        let n = t.len();
        for x in 1..n {
            let p = t.parent[x];
            let rhs = if p == 0 || t.children[p].len() != 1 {
                self.top[x] = p;
                vec![t.sym[x]]
            } else {
                self.top[x] = self.top[p];
                vec![Symbol::Var(self.pvar[p].expect("parent precedes child")), t.sym[x]]
            };
            self.pvar[x] = Some(b.push(rhs));
        }
        self.branching[0] = true;
        let mut d = vec![0u64; n];
        let mut rk = vec![i32::MIN; n];
        self.peak[0] = 0;
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 1..n {
            if t.children[x].len() < 2 {
                continue;
            }
            self.branching[x] = true;
            let p = self.top[x];
            d[x] = d[p] + b.weight_of(Symbol::Var(self.pvar[x].unwrap()));
            rk[x] = rank(d[x]);
            self.peak[x] = if rk[p] != rk[x] { x } else { self.peak[p] };
            groups[self.peak[x]].push(x);
        }
        let mut subs = Vec::new();
        let mut local = vec![NONE; n];
        for members in groups {
            if members.len() < 2 {
                continue;
            }
            let mut sub = SymTree::single();
            local[members[0]] = 0;
            for &x in &members[1..] {
                local[x] = sub.push(local[self.top[x]], Symbol::Var(self.pvar[x].unwrap()));
            }
            subs.push((members, sub));
        }
        subs
    }

    fn phase2(&self, b: &mut Builder, avars: &[Vec<Option<VarId>>]) -> Vec<Option<VarId>> {
        let t = &self.tree;
        let n = t.len();
        let mut avar: Vec<Option<VarId>> = vec![None; n];
        if self.edges() == 1 {
            avar[1] = Some(b.push(vec![t.sym[1]]));
            return avar;
        }
        let pv = |x: usize| Symbol::Var(self.pvar[x].unwrap());
        let bvar = |v: usize| {
            self.sub[v].map(|(k, l)| Symbol::Var(avars[k][l].expect("sub-instance finished")))
        };
        for x in 1..n {
            let v = if self.branching[x] { x } else { self.top[x] };
            let tail = (x != v).then(|| pv(x));
            let rhs: Vec<Symbol> = if v == 0 {
                vec![pv(x)]
            } else {
                let vh = self.peak[v];
                let u = self.top[vh];
                let mut r = Vec::with_capacity(6);
                let mut light = Vec::with_capacity(3);
                if u != 0 {
                    let uh = self.peak[u];
                    let s = self.top[uh];
                    if s != 0 {
                        r.push(Symbol::Var(avar[s].unwrap()));
                        light.extend(r.last().copied());
                    }
                    r.push(pv(uh));
                    r.extend(bvar(u));
                    light.extend(bvar(u));
                }
                r.push(pv(vh));
                r.extend(bvar(v));
                light.extend(bvar(v));
                r.extend(tail);
                debug_assert!({
                    let total = b.weight_of_str(&r);
                    light.iter().all(|&s| 2 * b.weight_of(s) <= total)
                });
                r
            };
            avar[x] = Some(b.push(rhs));
        }
        avar
    }
}

/// A prefix SLP over fresh edge terminals, as produced by
/// [`build_tree_prefix_slp_weak`].
#[derive(Clone, Debug)]
pub struct WeakPrefixSlp {
    /// Grammar over one terminal per nonempty edge.
    pub slp: Slp,
    /// Original label of every edge terminal.
    pub labels: Vec<Vec<TermId>>,
    /// Prefix variable of every node of the input tree; `None` when the
    /// prefix is empty.
    pub prefix: Vec<Option<VarId>>,
    /// Number of nonempty edges.
    pub edges: usize,
}

impl WeakPrefixSlp {
    /// Expansion of `v` with edge terminals replaced by their labels.
    pub fn eval_labels(&self, v: VarId) -> Vec<TermId> {
        self.slp.expand(Symbol::Var(v)).into_iter().flat_map(|e| self.labels[e.idx()].iter().copied()).collect()
    }
}

/// Prefix SLP for a labeled tree whose heavy symbols form disjoint paths.
/// Every nonempty edge label becomes a fresh terminal first, so edge
/// symbols are pairwise distinct.
pub fn build_tree_prefix_slp_weak(t: &LabeledTree) -> WeakPrefixSlp {
    let nt = normalize(t);
    let mut b = Builder::new(nt.edge_alphabet.clone());
    let local = weak_into(&mut b, &nt.tree);
    let prefix = nt.node_map.iter().map(|&x| local[x]).collect();
    WeakPrefixSlp { slp: b.finish(), labels: nt.labels, prefix, edges: nt.tree.len() - 1 }
}

/// Checks that every symbol is the heavy child of at most one variable
/// that is itself heavy somewhere.
pub fn heavy_symbols_form_paths(slp: &Slp) -> crate::Result<bool> {
    let m = slp.metrics()?;
    let hf = crate::grammar::HeavyForest::build(slp, &m);
    let mut heavy_var = vec![false; slp.num_vars()];
    for v in slp.vars() {
        if let Some(e) = hf.edge(v) {
            if let Symbol::Var(c) = e.child {
                heavy_var[c.idx()] = true;
            }
        }
    }
    let nt = slp.alphabet.len();
    let mut indeg = vec![0u32; nt + slp.num_vars()];
    for v in slp.vars() {
        if !heavy_var[v.idx()] {
            continue;
        }
        if let Some(e) = hf.edge(v) {
            let k = match e.child {
                Symbol::Term(t) => t.idx(),
                Symbol::Var(c) => nt + c.idx(),
            };
            indeg[k] += 1;
            if indeg[k] > 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
