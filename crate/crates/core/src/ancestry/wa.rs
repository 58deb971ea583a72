use crate::error::{Error, Result};

/// Word size of the small-tree index.
pub const WORD: usize = 64;

/// Largest supported height of a [`WaIndex`] tree.
pub const MAX_HEIGHT: usize = 16 * WORD;

/// Rooted tree with non-decreasing weighted depths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTree {
    parent: Vec<Option<usize>>,
    depth: Vec<u64>,
    root: usize,
}

impl WeightedTree {
    /// Builds a tree from parent links (parents need not precede children)
    /// and weighted depths.
    pub fn new(parent: Vec<Option<usize>>, depth: Vec<u64>) -> Result<Self> {
        let n = parent.len();
        if n == 0 || depth.len() != n {
            return Err(Error::InvalidTree("empty tree or depth count mismatch".into()));
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidTree(format!("{} roots", roots.len())));
        }
        for v in 0..n {
            if let Some(p) = parent[v] {
                if p >= n {
                    return Err(Error::InvalidTree(format!("parent {p} out of range")));
                }
                if depth[p] > depth[v] {
                    return Err(Error::InvalidTree(format!("depth decreases from {p} to {v}")));
                }
            }
        }
        let t = WeightedTree { parent, depth, root: roots[0] };
        if t.preorder().len() != n {
            return Err(Error::InvalidTree("tree is not connected".into()));
        }
        Ok(t)
    }

    /// Builds a tree from parent links and edge weights; the root has
    /// depth `root_depth`.
    pub fn from_edge_weights(parent: Vec<Option<usize>>, weight: &[u64], root_depth: u64) -> Result<Self> {
        let n = parent.len();
        let probe = WeightedTree::new(parent.clone(), vec![0; n])?;
        let mut depth = vec![0u64; n];
        for v in probe.preorder() {
            depth[v] = match parent[v] {
                None => root_depth,
                Some(p) => depth[p]
                    .checked_add(weight[v])
                    .ok_or_else(|| Error::Overflow(format!("depth of node {v}")))?,
            };
        }
        Ok(WeightedTree { depth, ..probe })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn depth(&self, v: usize) -> u64 {
        self.depth[v]
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut kids = vec![Vec::new(); self.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                kids[p].push(v);
            }
        }
        kids
    }

    /// Nodes in depth-first preorder.
    pub fn preorder(&self) -> Vec<usize> {
        let kids = self.children();
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(kids[v].iter().rev());
        }
        out
    }

    /// Number of nodes on the longest root-to-leaf path minus one.
    pub fn height(&self) -> usize {
        let mut h = vec![0usize; self.len()];
        let mut best = 0;
        for v in self.preorder() {
            if let Some(p) = self.parent[v] {
                h[v] = h[p] + 1;
                best = best.max(h[v]);
            }
        }
        best
    }

    /// Reference answer by walking up from `v`.
    pub fn query_naive(&self, v: usize, p: u64) -> Option<usize> {
        let mut best = None;
        let mut x = Some(v);
        while let Some(y) = x {
            if self.depth[y] > p {
                best = Some(y);
            }
            x = self.parent[y];
        }
        best
    }
}

/// Weighted ancestor index for a tree of at most [`WORD`] nodes.
///
/// Depths are made distinct as `d(v_i) · 2^64 + i` over a preorder
/// `v_0, v_1, …`; each node stores the bit mask of its ancestors (itself
/// included) among the nodes sorted by perturbed depth.
#[derive(Clone, Debug)]
pub struct SmallWa {
    sorted: Vec<u128>,
    node: Vec<usize>,
    mask: Vec<u64>,
}

impl SmallWa {
    /// `parent` uses local indices; `nodes[k]` is reported for local node `k`.
    pub fn build(parent: &[Option<usize>], depth: &[u64], nodes: &[usize]) -> Result<Self> {
        let n = parent.len();
        if n > WORD {
            return Err(Error::TreeTooLarge { nodes: n, limit: WORD });
        }
        let mut kids = vec![Vec::new(); n];
        let mut root = 0;
        for (v, p) in parent.iter().enumerate() {
            match *p {
                Some(p) => kids[p].push(v),
                None => root = v,
            }
        }
        let mut pre = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            pre.push(v);
            stack.extend(kids[v].iter().rev());
        }
        let mut keyed: Vec<(u128, usize)> =
            pre.iter().enumerate().map(|(i, &v)| (((depth[v] as u128) << 64) | i as u128, v)).collect();
        keyed.sort_unstable();
        let mut pos = vec![0usize; n];
        for (j, &(_, v)) in keyed.iter().enumerate() {
            pos[v] = j;
        }
        let mut mask = vec![0u64; n];
        for &v in &pre {
            let up = parent[v].map_or(0, |p| mask[p]);
            mask[v] = up | 1 << pos[v];
        }
        let sorted = keyed.iter().map(|k| k.0).collect();
        let node = keyed.iter().map(|k| nodes[k.1]).collect();
        Ok(SmallWa { sorted, node, mask })
    }

    /// Index over a whole tree of at most [`WORD`] nodes.
    pub fn from_tree(t: &WeightedTree) -> Result<Self> {
        let ids: Vec<usize> = (0..t.len()).collect();
        SmallWa::build(&t.parent, &t.depth, &ids)
    }

    /// Highest ancestor of local node `v` (inclusive) with depth `> p`.
    pub fn query(&self, v: usize, p: u64) -> Option<usize> {
        if p == u64::MAX {
            return None;
        }
        self.query_perturbed(v, (p as u128 + 1) << 64)
    }

    /// Same query against perturbed depths: highest ancestor with
    /// perturbed depth `>= pt`.
    pub fn query_perturbed(&self, v: usize, pt: u128) -> Option<usize> {
        let i = self.sorted.partition_point(|&k| k < pt);
        if i >= WORD {
            return None;
        }
        let m = self.mask[v] >> i;
        (m != 0).then(|| self.node[i + m.trailing_zeros() as usize])
    }
}

/// Weighted ancestor index for trees of height at most [`MAX_HEIGHT`].
///
/// Nodes with at least [`WORD`] descendants (counting themselves) are
/// macro nodes; the remaining micro trees get a [`SmallWa`] each. Every
/// macro node points to one root-to-leaf path of the macro tree, chosen
/// by descending into the deepest macro child.
#[derive(Clone, Debug)]
pub struct WaIndex {
    root: usize,
    depth: Vec<u64>,
    is_macro: Vec<bool>,
    /// Lowest macro ancestor of each micro node.
    lma: Vec<Option<usize>>,
    micro_of: Vec<(u32, u32)>,
    micro: Vec<SmallWa>,
    path_of: Vec<u32>,
    /// Per macro path: depths (first occurrences only) and nodes.
    paths: Vec<(Vec<u64>, Vec<usize>)>,
}

impl WaIndex {
    pub fn build(t: &WeightedTree) -> Result<Self> {
        let n = t.len();
        let h = t.height();
        if h > MAX_HEIGHT {
            return Err(Error::HeightTooLarge { height: h, limit: MAX_HEIGHT });
        }
        let pre = t.preorder();
        let kids = t.children();
        let mut size = vec![1usize; n];
        let mut sub_h = vec![0usize; n];
        for &v in pre.iter().rev() {
            if let Some(p) = t.parent(v) {
                size[p] += size[v];
                sub_h[p] = sub_h[p].max(sub_h[v] + 1);
            }
        }
        let is_macro: Vec<bool> = size.iter().map(|&s| s >= WORD).collect();

        // Micro trees, rooted at micro nodes with a macro parent (or none).
        let mut micro_of = vec![(u32::MAX, u32::MAX); n];
        let mut micro = Vec::new();
        let mut lma = vec![None; n];
        for &r in &pre {
            if is_macro[r] || t.parent(r).is_some_and(|p| !is_macro[p]) {
                continue;
            }
            let id = micro.len() as u32;
            let mut members = vec![r];
            let mut k = 0;
            while k < members.len() {
                let v = members[k];
                micro_of[v] = (id, k as u32);
                lma[v] = t.parent(r);
                members.extend(kids[v].iter().copied());
                k += 1;
            }
            let parent: Vec<Option<usize>> =
                members.iter().map(|&v| if v == r { None } else { t.parent(v).map(|p| micro_of[p].1 as usize) }).collect();
            let depth: Vec<u64> = members.iter().map(|&v| t.depth(v)).collect();
            micro.push(SmallWa::build(&parent, &depth, &members)?);
        }

        // Macro paths.
        let mut path_of = vec![u32::MAX; n];
        let mut paths = Vec::new();
        for &v in &pre {
            if !is_macro[v] || path_of[v] != u32::MAX {
                continue;
            }
            // v starts a new path: it is the root or not the preferred child.
            let id = paths.len() as u32;
            let mut x = v;
            loop {
                path_of[x] = id;
                match kids[x].iter().copied().filter(|&c| is_macro[c]).max_by_key(|&c| sub_h[c]) {
                    Some(c) => x = c,
                    None => break,
                }
            }
            let leaf = x;
            let mut chain = vec![leaf];
            while let Some(p) = t.parent(*chain.last().unwrap()) {
                chain.push(p);
            }
            chain.reverse();
            let mut ds = Vec::with_capacity(chain.len());
            let mut ns = Vec::with_capacity(chain.len());
            for &u in &chain {
                if ds.last() != Some(&t.depth(u)) {
                    ds.push(t.depth(u));
                    ns.push(u);
                }
            }
            paths.push((ds, ns));
        }
        Ok(WaIndex { root: t.root, depth: t.depth.clone(), is_macro, lma, micro_of, micro, path_of, paths })
    }

    fn macro_query(&self, v: usize, p: u64) -> Option<usize> {
        if self.depth[v] <= p {
            return None;
        }
        let (ds, ns) = &self.paths[self.path_of[v] as usize];
        let k = ds.partition_point(|&d| d <= p);
        Some(ns[k])
    }

    /// Highest ancestor `u` of `v` (`v` included) with `d(u) > p`.
    pub fn query(&self, v: usize, p: u64) -> Option<usize> {
        if self.is_macro[v] {
            return self.macro_query(v, p);
        }
        if let Some(m) = self.lma[v] {
            if self.depth[m] > p {
                return self.macro_query(m, p);
            }
        }
        let (id, local) = self.micro_of[v];
        self.micro[id as usize].query(local as usize, p)
    }

    /// Highest ancestor `u` of `v` with `d(v) - d(u) < q`.
    pub fn query_distance(&self, v: usize, q: u64) -> Option<usize> {
        match self.depth[v].checked_sub(q) {
            Some(p) => self.query(v, p),
            None => Some(self.root),
        }
    }

    /// Number of leaves of the macro tree.
    pub fn macro_leaves(&self) -> usize {
        self.paths.len()
    }

    pub fn num_micro_trees(&self) -> usize {
        self.micro.len()
    }
}
