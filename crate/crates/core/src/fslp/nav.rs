use std::rc::Rc;

use crate::balancer::{make_contracting, ContractingSlp};
use crate::error::{Error, Result};
use crate::grammar::{Alphabet, Slp, Symbol, TermId, VarId};

use super::grammar::{FRule, Fslp, VarClass};
use super::sigma::{Sigma, SlpNav};

/// Direction marks inside a τ cursor: below the node of an `a(B)` rule, or
/// into the left or right forest of an `a(L x R)` context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    L,
    M,
    R,
}

#[derive(Clone, Debug)]
enum Item {
    /// Rib cursor: a tree of a forest.
    H(Sigma),
    /// Spine cursor: a context root or tree root along a vertical chain.
    V(Sigma),
    Dir(Side),
}

#[derive(Debug)]
struct Link {
    item: Item,
    prev: Option<Rc<Link>>,
}

/// A node of a forest derived by some forest variable, as the sequence of
/// rib and spine cursors leading to it. Always ends with a spine cursor.
#[derive(Clone, Debug)]
pub struct Tau {
    top: Rc<Link>,
}

impl Tau {
    fn spine(&self) -> &Sigma {
        match &self.top.item {
            Item::V(s) => s,
            _ => unreachable!("a cursor ends with a spine cursor"),
        }
    }

    fn items(&self) -> impl Iterator<Item = &Item> {
        std::iter::successors(Some(&self.top), |l| l.prev.as_ref()).map(|l| &l.item)
    }

    /// Number of entries (cursors and marks).
    pub fn len(&self) -> usize {
        self.items().count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total number of derivation-path frames held by the embedded cursors.
    pub fn frames(&self) -> usize {
        self.items()
            .map(|it| match it {
                Item::H(s) | Item::V(s) => s.depth(),
                Item::Dir(_) => 0,
            })
            .sum()
    }

    /// Identifies the cursor by kinds, roots and positions.
    pub fn key(&self) -> Vec<(u8, u32, u64)> {
        let mut k: Vec<_> = self
            .items()
            .map(|it| match it {
                Item::H(s) => (0, s.root().0, s.pos()),
                Item::V(s) => (1, s.root().0, s.pos()),
                Item::Dir(d) => (2, *d as u32, 0),
            })
            .collect();
        k.reverse();
        k
    }
}

impl PartialEq for Tau {
    fn eq(&self, other: &Tau) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Tau {}

/// Cost of a navigation step. `steps` counts σ operations, with a local
/// move as one unit and a random access by the frames it builds; `frames`
/// counts derivation-path frames created or visited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Work {
    pub steps: u64,
    pub frames: u64,
}

/// A navigation move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Parent,
    FirstChild,
    LastChild,
    Left,
    Right,
    /// The `j`-th child, 1-based.
    Child(u64),
}

fn push(prev: Option<Rc<Link>>, item: Item) -> Rc<Link> {
    Rc::new(Link { item, prev })
}

/// Rib SLP: one terminal and one variable per FSLP variable. Forest
/// variables keep their `eps` and concatenation rules, tree variables
/// derive their own terminal, context variables derive ε.
pub fn rib_slp(g: &Fslp) -> Slp {
    let n = g.num_vars();
    let rules = (0..n)
        .map(|v| match (g.class(v), g.rule(v)) {
            (VarClass::Top, FRule::Concat(b, c)) => vec![Symbol::Var(VarId(b as u32)), Symbol::Var(VarId(c as u32))],
            (VarClass::Bot, _) => vec![Symbol::Term(TermId(v as u32))],
            _ => vec![],
        })
        .collect();
    let names = (0..n).map(|v| g.name(v).to_string()).collect();
    let mut s = Slp::from_rules(Alphabet::named(names, vec![1; n]), rules, None);
    for v in 0..n {
        s.set_name(VarId(v as u32), g.name(v));
    }
    s
}

/// Spine SLP: one terminal per `a(B)` or `a(L x R)` rule (indexed by its
/// variable), `A -> X` for `A -> X<B>` and `X -> Y Z` for `X -> Y<Z>`.
/// Forest variables derive ε.
pub fn spine_slp(g: &Fslp) -> Slp {
    let n = g.num_vars();
    let var = |x: usize| Symbol::Var(VarId(x as u32));
    let rules = (0..n)
        .map(|v| match g.rule(v) {
            FRule::Node(..) | FRule::CtxNode(..) => vec![Symbol::Term(TermId(v as u32))],
            FRule::Apply(x, _) => vec![var(x)],
            FRule::Compose(y, z) => vec![var(y), var(z)],
            FRule::Empty | FRule::Concat(..) => vec![],
        })
        .collect();
    let names = (0..n)
        .map(|v| match g.rule(v) {
            FRule::Node(a, b) => format!("{}({})", g.label_name(a), g.name(b)),
            FRule::CtxNode(a, l, r) => format!("{}({}x{})", g.label_name(a), g.name(l), g.name(r)),
            _ => format!("_{}", g.name(v)),
        })
        .collect();
    let mut s = Slp::from_rules(Alphabet::named(names, vec![1; n]), rules, None);
    for v in 0..n {
        s.set_name(VarId(v as u32), g.name(v));
    }
    s
}

/// Navigation over the forests of an FSLP, with random access to children.
#[derive(Clone, Debug)]
pub struct FslpNav {
    g: Fslp,
    rib: ContractingSlp,
    rib_nav: SlpNav,
    spine: SlpNav,
}

impl FslpNav {
    /// Builds the rib SLP (made contracting) and the spine SLP.
    pub fn new(g: Fslp) -> Result<Self> {
        g.validate()?;
        let rib = make_contracting(&rib_slp(&g))?;
        let rib_nav = SlpNav::new(rib.slp.clone())?;
        let spine = SlpNav::new(spine_slp(&g))?;
        Ok(FslpNav { g, rib, rib_nav, spine })
    }

    pub fn grammar(&self) -> &Fslp {
        &self.g
    }

    /// The contracting rib grammar and the representative of each variable.
    pub fn rib(&self) -> &ContractingSlp {
        &self.rib
    }

    pub fn spine(&self) -> &SlpNav {
        &self.spine
    }

    /// Number of trees derived by forest variable `a`.
    pub fn rib_len(&self, a: usize) -> u64 {
        self.rib.len_of(VarId(a as u32))
    }

    fn rib_root(&self, a: usize) -> Option<VarId> {
        self.rib.repr[a]
    }

    fn check_forest(&self, a: usize) -> Result<()> {
        if a >= self.g.num_vars() {
            return Err(Error::UnknownSymbol(format!("variable #{a}")));
        }
        if !self.g.class(a).is_forest() {
            return Err(Error::ShapeViolation(format!("{} is a context variable", self.g.name(a))));
        }
        Ok(())
    }

    /// The FSLP variable whose `a(..)` rule produced the current node.
    pub fn node_var(&self, t: &Tau) -> usize {
        self.spine.symbol(t.spine()).idx()
    }

    /// Label of the current node.
    pub fn symbol(&self, t: &Tau) -> u32 {
        match self.g.rule(self.node_var(t)) {
            FRule::Node(a, _) | FRule::CtxNode(a, _, _) => a,
            _ => unreachable!("spine terminals are node rules"),
        }
    }

    pub fn symbol_name(&self, t: &Tau) -> &str {
        self.g.label_name(self.symbol(t))
    }

    /// Number of children of the current node.
    pub fn degree(&self, t: &Tau) -> u64 {
        match self.g.rule(self.node_var(t)) {
            FRule::Node(_, b) => self.rib_len(b),
            FRule::CtxNode(_, l, r) => self.rib_len(l) + 1 + self.rib_len(r),
            _ => unreachable!(),
        }
    }

    fn tree_root(&self, prev: Option<Rc<Link>>, b: usize, w: &mut Work) -> Tau {
        w.steps += 1;
        let s = self.spine.first_counted(VarId(b as u32), &mut w.frames).expect("trees are nonempty");
        Tau { top: push(prev, Item::V(s)) }
    }

    /// Enters the tree at rib cursor `rho`, below `prev` and mark `side`.
    fn enter(&self, prev: Option<Rc<Link>>, side: Option<Side>, rho: Sigma, w: &mut Work) -> Tau {
        let prev = match side {
            Some(d) => Some(push(prev, Item::Dir(d))),
            None => prev,
        };
        w.steps += 1;
        let b = self.rib_nav.symbol(&rho).idx();
        let link = push(prev, Item::H(rho));
        self.tree_root(Some(link), b, w)
    }

    fn forest_edge(&self, prev: Option<Rc<Link>>, side: Option<Side>, a: usize, last: bool, w: &mut Work) -> Option<Tau> {
        let r = self.rib_root(a)?;
        w.steps += 1;
        let rho = if last {
            self.rib_nav.last_counted(r, &mut w.frames)
        } else {
            self.rib_nav.first_counted(r, &mut w.frames)
        }?;
        Some(self.enter(prev, side, rho, w))
    }

    fn forest_at(&self, prev: Option<Rc<Link>>, side: Side, a: usize, j: u64, w: &mut Work) -> Option<Tau> {
        let r = self.rib_root(a)?;
        let mut frames = 0;
        let rho = self.rib_nav.at_counted(r, j, &mut frames)?;
        w.steps += frames;
        w.frames += frames;
        Some(self.enter(prev, Some(side), rho, w))
    }

    /// Root of the first tree derived by forest variable `a`.
    pub fn root_first(&self, a: usize) -> Result<Option<Tau>> {
        self.check_forest(a)?;
        Ok(self.forest_edge(None, None, a, false, &mut Work::default()))
    }

    /// Root of the last tree derived by forest variable `a`.
    pub fn root_last(&self, a: usize) -> Result<Option<Tau>> {
        self.check_forest(a)?;
        Ok(self.forest_edge(None, None, a, true, &mut Work::default()))
    }

    /// The child at the parameter position of a context node.
    fn x_child(&self, t: &Tau, w: &mut Work) -> Tau {
        w.steps += 1;
        match self.spine.succ_counted(t.spine(), &mut w.frames) {
            Some(s) => Tau { top: push(t.top.prev.clone(), Item::V(s)) },
            None => match self.g.rule(t.spine().root().idx()) {
                FRule::Apply(_, b) => self.tree_root(Some(t.top.clone()), b, w),
                _ => unreachable!("a spine ends inside a context only below an insertion"),
            },
        }
    }

    fn parent(&self, t: &Tau, w: &mut Work) -> Option<Tau> {
        let s = t.spine();
        if s.pos() > 1 {
            w.steps += 1;
            let p = self.spine.pred_counted(s, &mut w.frames).unwrap();
            return Some(Tau { top: push(t.top.prev.clone(), Item::V(p)) });
        }
        let prev = t.top.prev.as_ref().expect("a spine cursor follows a rib cursor");
        match prev.item {
            Item::V(_) => Some(Tau { top: prev.clone() }),
            Item::H(_) => {
                let dir = prev.prev.as_ref()?;
                Some(Tau { top: dir.prev.clone().expect("a mark follows a spine cursor") })
            }
            Item::Dir(_) => unreachable!(),
        }
    }

    fn first_or_last_child(&self, t: &Tau, last: bool, w: &mut Work) -> Option<Tau> {
        let here = Some(t.top.clone());
        match self.g.rule(self.node_var(t)) {
            FRule::Node(_, b) => self.forest_edge(here, Some(Side::M), b, last, w),
            FRule::CtxNode(_, l, r) => {
                let (side, f) = if last { (Side::R, r) } else { (Side::L, l) };
                self.forest_edge(here, Some(side), f, last, w).or_else(|| Some(self.x_child(t, w)))
            }
            _ => unreachable!(),
        }
    }

    fn child(&self, t: &Tau, j: u64, w: &mut Work) -> Option<Tau> {
        w.steps += 1;
        if j == 0 {
            return None;
        }
        let here = Some(t.top.clone());
        match self.g.rule(self.node_var(t)) {
            FRule::Node(_, b) => self.forest_at(here, Side::M, b, j, w),
            FRule::CtxNode(_, l, r) => {
                let nl = self.rib_len(l);
                if j <= nl {
                    self.forest_at(here, Side::L, l, j, w)
                } else if j == nl + 1 {
                    Some(self.x_child(t, w))
                } else {
                    self.forest_at(here, Side::R, r, j - nl - 1, w)
                }
            }
            _ => unreachable!(),
        }
    }

    fn sibling(&self, t: &Tau, fwd: bool, w: &mut Work) -> Option<Tau> {
        let s = t.spine();
        let prev = t.top.prev.as_ref().expect("a spine cursor follows a rib cursor");
        let in_forest = s.pos() == 1 && matches!(prev.item, Item::H(_));
        if in_forest {
            let Item::H(rho) = &prev.item else { unreachable!() };
            w.steps += 1;
            let next = if fwd {
                self.rib_nav.succ_counted(rho, &mut w.frames)
            } else {
                self.rib_nav.pred_counted(rho, &mut w.frames)
            };
            if let Some(r) = next {
                return Some(self.enter(prev.prev.clone(), None, r, w));
            }
            let dir = prev.prev.as_ref()?;
            let parent = Tau { top: dir.prev.clone().expect("a mark follows a spine cursor") };
            return match (&dir.item, fwd) {
                (Item::Dir(Side::L), true) | (Item::Dir(Side::R), false) => Some(self.x_child(&parent, w)),
                _ => None,
            };
        }
        // The parameter child of a context node.
        let parent = self.parent(t, w).expect("a parameter child has a parent");
        let FRule::CtxNode(_, l, r) = self.g.rule(self.node_var(&parent)) else { unreachable!() };
        let here = Some(parent.top.clone());
        if fwd {
            self.forest_edge(here, Some(Side::R), r, false, w)
        } else {
            self.forest_edge(here, Some(Side::L), l, true, w)
        }
    }

    /// Performs `m` from `t`; `None` if the target does not exist.
    pub fn step(&self, t: &Tau, m: Move) -> (Option<Tau>, Work) {
        let mut w = Work::default();
        let out = match m {
            Move::Parent => self.parent(t, &mut w),
            Move::FirstChild => self.first_or_last_child(t, false, &mut w),
            Move::LastChild => self.first_or_last_child(t, true, &mut w),
            Move::Left => self.sibling(t, false, &mut w),
            Move::Right => self.sibling(t, true, &mut w),
            Move::Child(j) => self.child(t, j, &mut w),
        };
        (out, w)
    }

    pub fn parent_of(&self, t: &Tau) -> Option<Tau> {
        self.step(t, Move::Parent).0
    }

    pub fn first_child(&self, t: &Tau) -> Option<Tau> {
        self.step(t, Move::FirstChild).0
    }

    pub fn last_child(&self, t: &Tau) -> Option<Tau> {
        self.step(t, Move::LastChild).0
    }

    pub fn left_sibling(&self, t: &Tau) -> Option<Tau> {
        self.step(t, Move::Left).0
    }

    pub fn right_sibling(&self, t: &Tau) -> Option<Tau> {
        self.step(t, Move::Right).0
    }

    /// The `j`-th child and the number of steps spent.
    pub fn nav_child(&self, t: &Tau, j: u64) -> (Option<Tau>, u64) {
        let (out, w) = self.step(t, Move::Child(j));
        (out, w.steps)
    }
}

#[cfg(test)]
mod tests {
    use super::super::grammar::{example_fslp, write_forest};
    use super::*;

    fn nav() -> (FslpNav, Tau) {
        let n = FslpNav::new(example_fslp()).unwrap();
        let a = n.grammar().lookup("A").unwrap();
        let t = n.root_first(a).unwrap().unwrap();
        (n, t)
    }

    #[test]
    fn rib_and_spine_strings() {
        let g = example_fslp();
        let rib = rib_slp(&g);
        let b = VarId(g.lookup("B").unwrap() as u32);
        assert_eq!(rib.eval_string(b, 10).unwrap(), "CC");
        let spine = spine_slp(&g);
        let c = VarId(g.lookup("C").unwrap() as u32);
        assert_eq!(spine.eval_string(c, 10).unwrap(), "b(DxD)b(DxD)");
        let a = VarId(g.lookup("A").unwrap() as u32);
        assert_eq!(spine.eval_string(a, 10).unwrap(), "a(B)");
    }

    #[test]
    fn example_moves() {
        let (n, root) = nav();
        assert_eq!(n.symbol_name(&root), "a");
        assert_eq!(n.degree(&root), 2);
        assert!(n.parent_of(&root).is_none());
        assert!(n.right_sibling(&root).is_none());
        let b1 = n.first_child(&root).unwrap();
        assert_eq!(n.symbol_name(&b1), "b");
        let b2 = n.right_sibling(&b1).unwrap();
        assert_eq!(n.symbol_name(&b2), "b");
        assert!(n.right_sibling(&b2).is_none());
        assert_eq!(n.nav_child(&root, 2).0.unwrap(), b2);
        assert!(n.nav_child(&root, 3).0.is_none());
        assert_eq!(n.degree(&b1), 3);
        let inner = n.nav_child(&b1, 2).0.unwrap();
        assert_eq!(n.symbol_name(&inner), "b");
        let c3 = n.nav_child(&inner, 3).0.unwrap();
        assert_eq!(n.symbol_name(&c3), "c");
        assert_eq!(n.degree(&c3), 0);
        assert!(n.first_child(&c3).is_none());
        assert_eq!(n.parent_of(&c3).unwrap(), inner);
        assert_eq!(n.parent_of(&inner).unwrap(), b1);
        assert_eq!(n.parent_of(&b2).unwrap(), root);
    }

    #[test]
    fn dfs_reproduces_term() {
        let (n, root) = nav();
        fn term(n: &FslpNav, t: &Tau, out: &mut String) {
            out.push_str(n.symbol_name(t));
            if let Some(mut c) = n.first_child(t) {
                out.push('(');
                loop {
                    term(n, &c, out);
                    match n.right_sibling(&c) {
                        Some(d) => {
                            out.push(',');
                            c = d;
                        }
                        None => break,
                    }
                }
                out.push(')');
            }
        }
        let mut s = String::new();
        term(&n, &root, &mut s);
        let g = n.grammar();
        assert_eq!(s, write_forest(g, &g.eval_forest(g.lookup("A").unwrap(), 100).unwrap()));
    }

    #[test]
    fn context_root_is_rejected() {
        let n = FslpNav::new(example_fslp()).unwrap();
        assert!(matches!(n.root_first(n.grammar().lookup("X").unwrap()), Err(Error::ShapeViolation(_))));
        assert!(n.root_first(n.grammar().lookup("E").unwrap()).unwrap().is_none());
    }
}
