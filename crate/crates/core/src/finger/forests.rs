use crate::ancestry::{WaIndex, WeightedTree};
use crate::error::{Error, Result};
use crate::grammar::{distinct_children, to_cnf, CnfOptions, Slp, Symbol, TermId, VarId};
use crate::balancer::make_contracting;

/// Every variable of a fringe grammar must satisfy
/// `height(A) <= HEIGHT_SLOPE * (ceil(log2 |A|) + 1)`.
pub const HEIGHT_SLOPE: u32 = 8;

/// Side from which positions are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Left,
    Right,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Left => Dir::Right,
            Dir::Right => Dir::Left,
        }
    }
}

/// How the forests were chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForestMode {
    /// Rank forest plus `t - 1` threshold forests, each with its mirror.
    Skew { t: usize },
    /// One forest of all left edges and one of all right edges.
    PathBalanced,
}

/// One forest over the variables; edges go from a variable to one of its
/// two children.
#[derive(Clone, Debug)]
pub struct Forest {
    parent: Vec<Option<VarId>>,
    lambda: Vec<u64>,
    rho: Vec<u64>,
    root: Vec<VarId>,
    wa_l: WaIndex,
    wa_r: WaIndex,
    height: usize,
}

impl Forest {
    pub fn parent(&self, a: VarId) -> Option<VarId> {
        self.parent[a.idx()]
    }

    /// Weighted depth of `a` in the left-weighted version.
    pub fn lambda(&self, a: VarId) -> u64 {
        self.lambda[a.idx()]
    }

    /// Weighted depth of `a` in the right-weighted version.
    pub fn rho(&self, a: VarId) -> u64 {
        self.rho[a.idx()]
    }

    pub fn root(&self, a: VarId) -> VarId {
        self.root[a.idx()]
    }

    fn depth(&self, dir: Dir, a: VarId) -> u64 {
        match dir {
            Dir::Left => self.lambda[a.idx()],
            Dir::Right => self.rho[a.idx()],
        }
    }

    /// Highest ancestor `x` of `a` with weighted distance `< p` in the
    /// `dir`-weighted version.
    fn highest_within(&self, dir: Dir, a: VarId, p: u64) -> VarId {
        let wa = match dir {
            Dir::Left => &self.wa_l,
            Dir::Right => &self.wa_r,
        };
        match wa.query_distance(a.idx(), p) {
            Some(u) if u < self.parent.len() => VarId(u as u32),
            _ => self.root[a.idx()],
        }
    }

    /// Height of the forest in edges.
    pub fn height(&self) -> usize {
        self.height
    }
}

/// A step of an accelerated path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    /// One rule application from a variable to a child.
    Short { from: VarId, to: VarId },
    /// A path inside forest number `forest`.
    Long { from: VarId, forest: u16, to: VarId },
}

impl Edge {
    pub fn from(&self) -> VarId {
        match *self {
            Edge::Short { from, .. } | Edge::Long { from, .. } => from,
        }
    }

    pub fn to(&self) -> VarId {
        match *self {
            Edge::Short { to, .. } | Edge::Long { to, .. } => to,
        }
    }
}

/// An edge with its left weight `lambda` and right weight `rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightedEdge {
    pub edge: Edge,
    pub lambda: u64,
    pub rho: u64,
}

/// Compact path from a variable to one leaf of its derivation tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceleratedPath {
    pub source: VarId,
    pub edges: Vec<WeightedEdge>,
    /// Variable with a terminal rule at the end of the path.
    pub target: VarId,
    pub symbol: TermId,
}

/// Forests with weighted ancestor indexes for fringe access on a grammar in
/// Chomsky normal form with distinct children.
#[derive(Clone, Debug)]
pub struct SkewForestSet {
    g: Slp,
    len: Vec<u64>,
    height: Vec<u32>,
    mode: ForestMode,
    tau: Vec<u64>,
    forests: Vec<Forest>,
}

/// Least `k` with `len <= 2^(2^k)`.
fn rank(len: u64) -> u32 {
    (0..6).find(|&k| len <= 1u64 << (1u32 << k)).unwrap_or(6)
}

/// `ceil(log^(k) n)` for `k = 0..t`, where logarithms of values at most 1
/// are taken as 0.
pub fn thresholds(n: u64, t: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(t);
    let mut x = n as f64;
    for k in 0..t {
        if k > 0 {
            x = if x > 1.0 { x.log2() } else { 0.0 };
        }
        out.push(x.ceil() as u64);
    }
    out[0] = n;
    out
}

/// Converts any SLP into a grammar accepted by [`SkewForestSet::preprocess`]:
/// contracting, then Chomsky normal form, then distinct children. The start
/// variable is carried over.
pub fn fringe_grammar(g: &Slp) -> Result<Slp> {
    let start = g.start.ok_or(Error::NoStart)?;
    let c = make_contracting(g)?;
    let cnf = to_cnf(&c.slp, CnfOptions::default())?;
    let mut out = distinct_children(&cnf.slp);
    out.start = c.repr[start.idx()].and_then(|r| cnf.repr[r.idx()]);
    if out.start.is_none() {
        return Err(Error::EpsilonDerivation(g.display_var(start)));
    }
    Ok(out)
}

impl SkewForestSet {
    /// Forests `F_0..F_{t-1}` and their mirrors.
    pub fn preprocess(g: &Slp, t: usize) -> Result<Self> {
        assert!(t >= 1, "need at least one forest");
        Self::build(g, ForestMode::Skew { t })
    }

    /// The two forests of all left and all right edges, for path-balanced
    /// grammars.
    pub fn preprocess_path_balanced(g: &Slp) -> Result<Self> {
        Self::build(g, ForestMode::PathBalanced)
    }

    fn build(g: &Slp, mode: ForestMode) -> Result<Self> {
        let m = g.metrics()?;
        for v in g.vars() {
            match g.rule(v) {
                [Symbol::Term(_)] => {}
                [Symbol::Var(b), Symbol::Var(c)] if b != c => {}
                [Symbol::Var(_), Symbol::Var(_)] => {
                    return Err(Error::NotCnf(format!("rule of {} has equal children", g.display_var(v))))
                }
                _ => return Err(Error::NotCnf(format!("rule of {}", g.display_var(v)))),
            }
        }
        if mode != ForestMode::PathBalanced {
            for v in g.vars() {
                let l = m.len[v.idx()];
                let lg = 64 - (l - 1).leading_zeros();
                if m.height[v.idx()] > HEIGHT_SLOPE * (lg + 1) {
                    return Err(Error::NotContracting(format!(
                        "{} has length {l} but height {}",
                        g.display_var(v),
                        m.height[v.idx()]
                    )));
                }
            }
        }
        let n = m.len.iter().copied().max().unwrap_or(1);
        let mut set = SkewForestSet {
            g: g.clone(),
            len: m.len.clone(),
            height: m.height.clone(),
            mode,
            tau: Vec::new(),
            forests: Vec::new(),
        };
        let len = &m.len;
        match mode {
            ForestMode::Skew { t } => {
                set.tau = thresholds(n, t);
                let rk: Vec<u32> = len.iter().map(|&l| rank(l)).collect();
                for k in 0..t {
                    for dir in [Dir::Left, Dir::Right] {
                        let tau = set.tau[k];
                        let f = set.forest_from(&m.topo_order, |a, p, q| {
                            if k == 0 {
                                let (ra, rp, rq) = (rk[a.idx()], rk[p.idx()], rk[q.idx()]);
                                if ra == rp {
                                    Some(p)
                                } else if ra == rq && rq > rp {
                                    Some(q)
                                } else {
                                    None
                                }
                            } else if len[p.idx()] > tau {
                                Some(p)
                            } else if len[q.idx()] > tau {
                                Some(q)
                            } else {
                                None
                            }
                        }, dir)?;
                        set.forests.push(f);
                    }
                }
            }
            ForestMode::PathBalanced => {
                for dir in [Dir::Left, Dir::Right] {
                    let f = set.forest_from(&m.topo_order, |_, p, _| Some(p), dir)?;
                    set.forests.push(f);
                }
            }
        }
        Ok(set)
    }

    /// Builds one forest; `pick(A, P, Q)` sees the children in `dir` order.
    fn forest_from(
        &self,
        topo: &[VarId],
        pick: impl Fn(VarId, VarId, VarId) -> Option<VarId>,
        dir: Dir,
    ) -> Result<Forest> {
        let nv = self.g.num_vars();
        let mut parent = vec![None; nv];
        let mut lambda = vec![0u64; nv];
        let mut rho = vec![0u64; nv];
        let mut root: Vec<VarId> = (0..nv as u32).map(VarId).collect();
        let mut hgt = vec![0usize; nv];
        for &a in topo {
            let Some((b, c)) = self.children(a) else { continue };
            let (p, q) = match dir {
                Dir::Left => (b, c),
                Dir::Right => (c, b),
            };
            if let Some(x) = pick(a, p, q) {
                parent[a.idx()] = Some(x);
                let (dl, dr) = if x == b { (0, self.len[c.idx()]) } else { (self.len[b.idx()], 0) };
                lambda[a.idx()] = lambda[x.idx()] + dl;
                rho[a.idx()] = rho[x.idx()] + dr;
                root[a.idx()] = root[x.idx()];
                hgt[a.idx()] = hgt[x.idx()] + 1;
            }
        }
        let tree = |d: &[u64]| -> Result<WaIndex> {
            let mut par: Vec<Option<usize>> = parent.iter().map(|p| Some(p.map_or(nv, |x| x.idx()))).collect();
            par.push(None);
            let mut depth = d.to_vec();
            depth.push(0);
            WaIndex::build(&WeightedTree::new(par, depth)?)
        };
        let wa_l = tree(&lambda)?;
        let wa_r = tree(&rho)?;
        let height = hgt.into_iter().max().unwrap_or(0);
        Ok(Forest { parent, lambda, rho, root, wa_l, wa_r, height })
    }

    pub fn grammar(&self) -> &Slp {
        &self.g
    }

    pub fn mode(&self) -> ForestMode {
        self.mode
    }

    pub fn forests(&self) -> &[Forest] {
        &self.forests
    }

    /// Thresholds `ceil(log^(k) N)` for `k = 0..t`.
    pub fn thresholds(&self) -> &[u64] {
        &self.tau
    }

    pub fn len(&self, a: VarId) -> u64 {
        self.len[a.idx()]
    }

    pub fn height(&self, a: VarId) -> u32 {
        self.height[a.idx()]
    }

    pub fn children(&self, a: VarId) -> Option<(VarId, VarId)> {
        match *self.g.rule(a) {
            [Symbol::Var(b), Symbol::Var(c)] => Some((b, c)),
            _ => None,
        }
    }

    fn dir_children(&self, a: VarId, dir: Dir) -> Option<(VarId, VarId)> {
        self.children(a).map(|(b, c)| match dir {
            Dir::Left => (b, c),
            Dir::Right => (c, b),
        })
    }

    pub fn terminal(&self, a: VarId) -> Option<TermId> {
        match *self.g.rule(a) {
            [Symbol::Term(t)] => Some(t),
            _ => None,
        }
    }

    fn skew_index(&self, k: usize, dir: Dir) -> usize {
        2 * k + (dir == Dir::Right) as usize
    }

    pub(crate) fn short_edge(&self, from: VarId, to: VarId) -> WeightedEdge {
        let (b, c) = self.children(from).expect("binary rule");
        let (lambda, rho) = if to == b { (0, self.len[c.idx()]) } else { (self.len[b.idx()], 0) };
        WeightedEdge { edge: Edge::Short { from, to }, lambda, rho }
    }

    pub(crate) fn long_edge(&self, forest: usize, from: VarId, to: VarId) -> WeightedEdge {
        let f = &self.forests[forest];
        WeightedEdge {
            edge: Edge::Long { from, forest: forest as u16, to },
            lambda: f.lambda(from) - f.lambda(to),
            rho: f.rho(from) - f.rho(to),
        }
    }

    /// Weight of `e` in direction `dir`.
    pub(crate) fn weight(e: &WeightedEdge, dir: Dir) -> u64 {
        match dir {
            Dir::Left => e.lambda,
            Dir::Right => e.rho,
        }
    }

    /// Short step from `a` at `dir`-relative position `p`; records the edge.
    pub(crate) fn short_step(&self, a: VarId, p: u64, dir: Dir, out: &mut Vec<WeightedEdge>) -> (VarId, u64) {
        let (x, y) = self.dir_children(a, dir).expect("binary rule");
        let lx = self.len[x.idx()];
        let (to, q) = if p <= lx { (x, p) } else { (y, p - lx) };
        out.push(self.short_edge(a, to));
        (to, q)
    }

    /// Long step in `forest` from `a` at `dir`-relative position `p`: moves
    /// to the highest ancestor `x` with weighted distance `< p`. Records the
    /// edge unless `x = a`.
    pub(crate) fn long_step(
        &self,
        forest: usize,
        a: VarId,
        p: u64,
        dir: Dir,
        out: &mut Vec<WeightedEdge>,
    ) -> (VarId, u64) {
        let f = &self.forests[forest];
        let x = f.highest_within(dir, a, p);
        if x == a {
            return (a, p);
        }
        let e = self.long_edge(forest, a, x);
        out.push(e);
        (x, p - Self::weight(&e, dir))
    }

    fn finish(&self, a: VarId, mut p: u64, dir: Dir, out: &mut Vec<WeightedEdge>, steps: &mut u64) -> VarId {
        let mut a = a;
        while self.terminal(a).is_none() {
            (a, p) = self.short_step(a, p, dir, out);
            *steps += 1;
        }
        a
    }

    /// Accelerated path from `a` at `dir`-relative position `p`, appended to
    /// `out`. Returns the final variable.
    pub(crate) fn fringe_into(&self, a: VarId, p: u64, dir: Dir, out: &mut Vec<WeightedEdge>, steps: &mut u64) -> VarId {
        match self.mode {
            ForestMode::Skew { .. } => self.fringe_skew(a, p, dir, out, steps),
            ForestMode::PathBalanced => self.fringe_balanced(a, p, dir, out, steps),
        }
    }

    fn fringe_skew(&self, a: VarId, p: u64, dir: Dir, out: &mut Vec<WeightedEdge>, steps: &mut u64) -> VarId {
        let (mut a, mut p) = (a, p);
        let k = (0..self.tau.len()).rev().find(|&k| p <= self.tau[k]).unwrap_or(0);
        if k >= 1 && self.len[a.idx()] > self.tau[k] {
            (a, p) = self.long_step(self.skew_index(k, dir), a, p, dir, out);
            *steps += 1;
            if self.terminal(a).is_some() {
                return a;
            }
            (a, p) = self.short_step(a, p, dir, out);
            *steps += 1;
            debug_assert!(self.len[a.idx()] <= self.tau[k]);
        }
        let f0 = self.skew_index(0, dir);
        loop {
            if self.terminal(a).is_some() {
                return a;
            }
            let f = &self.forests[f0];
            if f.parent(a).is_some() {
                if p > f.depth(dir, a) + self.len[f.root(a).idx()] {
                    return self.finish(a, p, dir, out, steps);
                }
                (a, p) = self.long_step(f0, a, p, dir, out);
                *steps += 1;
                if self.terminal(a).is_some() {
                    return a;
                }
            }
            (a, p) = self.short_step(a, p, dir, out);
            *steps += 1;
        }
    }

    fn fringe_balanced(&self, a: VarId, p: u64, dir: Dir, out: &mut Vec<WeightedEdge>, steps: &mut u64) -> VarId {
        // Opposite-side long step along the edges of side `dir`.
        let forest = (dir == Dir::Right) as usize;
        let q = self.len[a.idx()] - p + 1;
        let (x, _) = self.long_step(forest, a, q, dir.flip(), out);
        *steps += 1;
        if self.terminal(x).is_some() {
            return x;
        }
        let (y, _) = self.dir_children(x, dir).unwrap();
        debug_assert!(self.len[y.idx()] < p);
        let (z, p) = self.short_step(x, p, dir, out);
        *steps += 1;
        self.finish(z, p, dir, out, steps)
    }

    /// The `i`-th symbol (1-based) of `a` with its accelerated path and the
    /// number of steps taken.
    pub fn fringe_access(&self, a: VarId, i: u64) -> Result<(AcceleratedPath, u64)> {
        let len = self.len[a.idx()];
        if i == 0 || i > len {
            return Err(Error::PositionOutOfRange { pos: i, len });
        }
        let (dir, p) = if i <= len - i + 1 { (Dir::Left, i) } else { (Dir::Right, len - i + 1) };
        let mut edges = Vec::new();
        let mut steps = 0;
        let target = self.fringe_into(a, p, dir, &mut edges, &mut steps);
        let symbol = self.terminal(target).expect("path ends at a terminal rule");
        Ok((AcceleratedPath { source: a, edges, target, symbol }, steps))
    }

    /// Checks that `path` composes, that its weights match the forests and
    /// that its left weights sum to `i - 1`.
    pub fn check_path(&self, path: &AcceleratedPath, i: u64) -> bool {
        let mut cur = path.source;
        let mut sum = 0;
        for (k, e) in path.edges.iter().enumerate() {
            if e.edge.from() != cur {
                return false;
            }
            let want = match e.edge {
                Edge::Short { from, to } => {
                    if self.children(from).is_none_or(|(b, c)| to != b && to != c) {
                        return false;
                    }
                    self.short_edge(from, to)
                }
                Edge::Long { from, forest, to } => {
                    let f = &self.forests[forest as usize];
                    let mut x = from;
                    while x != to {
                        match f.parent(x) {
                            Some(y) => x = y,
                            None => return false,
                        }
                    }
                    // The next short step leaves the tree of the long edge.
                    if let Some(next) = path.edges.get(k + 1) {
                        if let Edge::Short { to: y, .. } = next.edge {
                            if f.parent(to) == Some(y) {
                                return false;
                            }
                        }
                    }
                    self.long_edge(forest as usize, from, to)
                }
            };
            if *e != want {
                return false;
            }
            sum += e.lambda;
            cur = e.edge.to();
        }
        cur == path.target && sum + 1 == i && self.terminal(cur) == Some(path.symbol)
    }
}
