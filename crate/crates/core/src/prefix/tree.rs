//! Labeled trees and their normalization to single-symbol edges.
//!
//! Text format:
//!
//! ```text
//! tree v1
//! terminal a
//! terminal b weight 3
//! node r
//! node x
//! node y
//! edge r x a b
//! edge x y eps
//! root r
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grammar::{strip_comment, valid_name, Alphabet, Symbol, TermId};

const NONE: usize = usize::MAX;

/// Rooted tree whose edges carry strings over a weighted alphabet. The
/// label of node `v` is the label of the edge from its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    pub alphabet: Alphabet,
    parent: Vec<Option<usize>>,
    label: Vec<Vec<TermId>>,
    names: Vec<String>,
    root: usize,
}

impl LabeledTree {
    /// A tree consisting of its root only.
    pub fn new(alphabet: Alphabet) -> Self {
        LabeledTree { alphabet, parent: vec![None], label: vec![Vec::new()], names: Vec::new(), root: 0 }
    }

    /// Builds a tree from parent links and edge labels. Exactly one node
    /// must have no parent and all nodes must reach it.
    pub fn from_parts(alphabet: Alphabet, parent: Vec<Option<usize>>, label: Vec<Vec<TermId>>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::InvalidTree("no nodes".into()));
        }
        if label.len() != n {
            return Err(Error::InvalidTree("label count differs from node count".into()));
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidTree(format!("{} roots", roots.len())));
        }
        for (v, &p) in parent.iter().enumerate() {
            if let Some(p) = p {
                if p >= n {
                    return Err(Error::InvalidTree(format!("parent {p} of node {v} out of range")));
                }
            }
        }
        for l in &label {
            if let Some(t) = l.iter().find(|t| t.idx() >= alphabet.len()) {
                return Err(Error::UnknownSymbol(t.to_string()));
            }
        }
        // 0 = unvisited, 1 = on current walk, 2 = reaches the root
        let mut state = vec![0u8; n];
        state[roots[0]] = 2;
        for v in 0..n {
            let mut walk = Vec::new();
            let mut x = v;
            while state[x] == 0 {
                state[x] = 1;
                walk.push(x);
                x = parent[x].expect("only the root lacks a parent");
            }
            if state[x] == 1 {
                return Err(Error::InvalidTree(format!("node {x} lies on a cycle")));
            }
            for y in walk {
                state[y] = 2;
            }
        }
        Ok(LabeledTree { alphabet, parent, label, names: Vec::new(), root: roots[0] })
    }

    pub fn add_child(&mut self, parent: usize, label: Vec<TermId>) -> usize {
        assert!(parent < self.parent.len());
        debug_assert!(label.iter().all(|t| t.idx() < self.alphabet.len()));
        self.parent.push(Some(parent));
        self.label.push(label);
        self.parent.len() - 1
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn num_nodes(&self) -> usize {
        self.parent.len()
    }

    /// Number of edges.
    pub fn num_edges(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn label(&self, v: usize) -> &[TermId] {
        &self.label[v]
    }

    /// Longest edge label.
    pub fn max_label_len(&self) -> usize {
        self.label.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn node_name(&self, v: usize) -> String {
        self.names.get(v).cloned().unwrap_or_else(|| v.to_string())
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut kids = vec![Vec::new(); self.num_nodes()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                kids[p].push(v);
            }
        }
        kids
    }

    /// Concatenated labels from the root down to `v`.
    pub fn path_label(&self, v: usize) -> Vec<TermId> {
        let mut parts = Vec::new();
        let mut x = v;
        while let Some(p) = self.parent[x] {
            parts.push(x);
            x = p;
        }
        parts.iter().rev().flat_map(|&y| self.label[y].iter().copied()).collect()
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses the `tree v1` format.
pub fn parse_tree(src: &str) -> Result<LabeledTree> {
    let mut header = false;
    let mut tnames = Vec::new();
    let mut tweights = Vec::new();
    let mut tindex: HashMap<String, TermId> = HashMap::new();
    let mut nodes: Vec<String> = Vec::new();
    let mut nindex: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, String, String, Vec<String>)> = Vec::new();
    let mut root: Option<(usize, String)> = None;
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if !header {
            if toks != ["tree", "v1"] {
                return Err(perr(line, "expected header `tree v1`"));
            }
            header = true;
            continue;
        }
        match toks[0] {
            "terminal" => {
                let (name, w) = match toks.as_slice() {
                    [_, n] => (*n, 1),
                    [_, n, "weight", w] => (*n, w.parse().map_err(|_| perr(line, format!("bad weight `{w}`")))?),
                    _ => return Err(perr(line, "expected `terminal <name> [weight <w>]`")),
                };
                if !valid_name(name) || name == "eps" {
                    return Err(perr(line, format!("invalid name `{name}`")));
                }
                if w == 0 {
                    return Err(Error::NonPositiveWeight(format!("{name} (line {line})")));
                }
                if tindex.insert(name.to_string(), TermId(tnames.len() as u32)).is_some() {
                    return Err(Error::Redefinition(format!("terminal {name} (line {line})")));
                }
                tnames.push(name.to_string());
                tweights.push(w);
            }
            "node" => {
                let [_, name] = toks.as_slice() else {
                    return Err(perr(line, "expected `node <id>`"));
                };
                if !valid_name(name) {
                    return Err(perr(line, format!("invalid name `{name}`")));
                }
                if nindex.insert(name.to_string(), nodes.len()).is_some() {
                    return Err(Error::Redefinition(format!("node {name} (line {line})")));
                }
                nodes.push(name.to_string());
            }
            "edge" => {
                if toks.len() < 4 {
                    return Err(perr(line, "expected `edge <parent> <child> <label...|eps>`"));
                }
                let label = if toks[3..] == ["eps"] {
                    Vec::new()
                } else {
                    toks[3..].iter().map(|s| s.to_string()).collect()
                };
                edges.push((line, toks[1].to_string(), toks[2].to_string(), label));
            }
            "root" => {
                let [_, name] = toks.as_slice() else {
                    return Err(perr(line, "expected `root <id>`"));
                };
                if root.is_some() {
                    return Err(Error::Redefinition(format!("root (line {line})")));
                }
                root = Some((line, name.to_string()));
            }
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(perr(1, "missing header `tree v1`"));
    }
    let node = |name: &str, line: usize| {
        nindex.get(name).copied().ok_or_else(|| Error::UnknownSymbol(format!("node {name} (line {line})")))
    };
    let n = nodes.len();
    let mut parent = vec![None; n];
    let mut label = vec![Vec::new(); n];
    for (line, p, c, l) in &edges {
        let (p, c) = (node(p, *line)?, node(c, *line)?);
        if parent[c].is_some() {
            return Err(Error::Redefinition(format!("parent of node {} (line {line})", nodes[c])));
        }
        parent[c] = Some(p);
        label[c] = l
            .iter()
            .map(|s| tindex.get(s).copied().ok_or_else(|| Error::UnknownSymbol(format!("{s} (line {line})"))))
            .collect::<Result<_>>()?;
    }
    let mut t = LabeledTree::from_parts(Alphabet::named(tnames, tweights), parent, label)?;
    if let Some((line, r)) = root {
        if node(&r, line)? != t.root {
            return Err(Error::InvalidTree(format!("declared root {r} has a parent (line {line})")));
        }
    }
    t.names = nodes;
    Ok(t)
}

/// Writes `t` in the `tree v1` format.
pub fn write_tree(t: &LabeledTree) -> String {
    let mut out = String::from("tree v1\n");
    for k in 0..t.alphabet.len() {
        let id = TermId(k as u32);
        let w = t.alphabet.weight(id);
        let _ = write!(out, "terminal {}", t.alphabet.name(id));
        if w != 1 {
            let _ = write!(out, " weight {w}");
        }
        out.push('\n');
    }
    for v in 0..t.num_nodes() {
        let _ = writeln!(out, "node {}", t.node_name(v));
    }
    for v in 0..t.num_nodes() {
        if let Some(p) = t.parent(v) {
            let _ = write!(out, "edge {} {}", t.node_name(p), t.node_name(v));
            if t.label(v).is_empty() {
                out.push_str(" eps");
            }
            for &a in t.label(v) {
                let _ = write!(out, " {}", t.alphabet.name(a));
            }
            out.push('\n');
        }
    }
    let _ = writeln!(out, "root {}", t.node_name(t.root()));
    out
}

/// Tree with one symbol per edge, nodes numbered parents first, root 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SymTree {
    pub parent: Vec<usize>,
    /// `sym[v]` labels the edge into `v`; unused for the root.
    pub sym: Vec<Symbol>,
    pub children: Vec<Vec<usize>>,
}

impl SymTree {
    pub fn single() -> Self {
        SymTree { parent: vec![NONE], sym: vec![Symbol::Term(TermId(0))], children: vec![Vec::new()] }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn push(&mut self, parent: usize, sym: Symbol) -> usize {
        self.parent.push(parent);
        self.sym.push(sym);
        self.children.push(Vec::new());
        self.children[parent].push(self.parent.len() - 1);
        self.parent.len() - 1
    }
}

/// A tree with a fresh edge terminal per nonempty edge.
#[derive(Clone, Debug)]
pub struct NormalizedTree {
    pub(crate) tree: SymTree,
    /// Edge terminals; the weight of each is the weight of its label.
    pub edge_alphabet: Alphabet,
    /// Original label of every edge terminal.
    pub labels: Vec<Vec<TermId>>,
    /// Normalized node of every original node.
    pub node_map: Vec<usize>,
}

/// Contracts ε-edges and replaces every other label by a fresh terminal.
pub fn normalize(t: &LabeledTree) -> NormalizedTree {
    let kids = t.children();
    let mut tree = SymTree::single();
    let mut weights = Vec::new();
    let mut labels = Vec::new();
    let mut node_map = vec![NONE; t.num_nodes()];
    node_map[t.root()] = 0;
    let mut stack = vec![t.root()];
    while let Some(v) = stack.pop() {
        for &c in kids[v].iter().rev() {
            let lab = t.label(c);
            node_map[c] = if lab.is_empty() {
                node_map[v]
            } else {
                let e = TermId(labels.len() as u32);
                weights.push(lab.iter().map(|&a| t.alphabet.weight(a)).sum());
                labels.push(lab.to_vec());
                tree.push(node_map[v], Symbol::Term(e))
            };
            stack.push(c);
        }
    }
    // Children were discovered in reverse; restore label order.
    for ch in &mut tree.children {
        ch.reverse();
    }
    NormalizedTree { tree, edge_alphabet: Alphabet::unnamed(weights), labels, node_map }
}
