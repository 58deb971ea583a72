use std::rc::Rc;

use crate::error::Result;
use crate::grammar::{Slp, Symbol, TermId, VarId};

#[derive(Debug)]
struct Frame {
    var: VarId,
    idx: u32,
    up: Option<Rc<Frame>>,
}

/// Position `pos` (1-based) in the string of `root`, stored as the
/// root-to-leaf path of its derivation tree. Paths share their upper parts
/// between cursors.
#[derive(Clone, Debug)]
pub struct Sigma {
    root: VarId,
    pos: u64,
    leaf: Rc<Frame>,
}

impl Sigma {
    pub fn root(&self) -> VarId {
        self.root
    }

    pub fn pos(&self) -> u64 {
        self.pos
    }

    /// Number of frames on the path.
    pub fn depth(&self) -> usize {
        let mut k = 0;
        let mut f = Some(&self.leaf);
        while let Some(x) = f {
            k += 1;
            f = x.up.as_ref();
        }
        k
    }
}

/// Navigation over the derivation trees of a string SLP. Variables may
/// derive ε; such children are skipped.
#[derive(Clone, Debug)]
pub struct SlpNav {
    slp: Slp,
    len: Vec<u64>,
}

impl SlpNav {
    pub fn new(slp: Slp) -> Result<Self> {
        let m = slp.metrics()?;
        Ok(SlpNav { slp, len: m.len })
    }

    pub fn slp(&self) -> &Slp {
        &self.slp
    }

    pub fn len(&self, a: VarId) -> u64 {
        self.len[a.idx()]
    }

    fn sym_len(&self, s: Symbol) -> u64 {
        match s {
            Symbol::Term(_) => 1,
            Symbol::Var(v) => self.len[v.idx()],
        }
    }

    pub fn symbol(&self, s: &Sigma) -> TermId {
        self.slp.rule(s.leaf.var)[s.leaf.idx as usize].term().expect("cursor ends at a terminal")
    }

    /// Descends from `frame` (whose chosen child is `s`) to the first or
    /// last leaf below it.
    fn descend(&self, mut frame: Rc<Frame>, mut s: Symbol, last: bool, work: &mut u64) -> Rc<Frame> {
        while let Symbol::Var(v) = s {
            let rhs = self.slp.rule(v);
            let mut pick = (0..rhs.len()).filter(|&k| self.sym_len(rhs[k]) > 0);
            let k = if last { pick.next_back() } else { pick.next() }.expect("nonempty variable");
            frame = Rc::new(Frame { var: v, idx: k as u32, up: Some(frame) });
            *work += 1;
            s = rhs[k];
        }
        frame
    }

    fn edge(&self, a: VarId, last: bool, work: &mut u64) -> Option<Sigma> {
        let n = self.len[a.idx()];
        if n == 0 {
            return None;
        }
        let rhs = self.slp.rule(a);
        let mut pick = (0..rhs.len()).filter(|&k| self.sym_len(rhs[k]) > 0);
        let k = if last { pick.next_back() } else { pick.next() }.unwrap();
        *work += 1;
        let top = Rc::new(Frame { var: a, idx: k as u32, up: None });
        let leaf = self.descend(top, rhs[k], last, work);
        Some(Sigma { root: a, pos: if last { n } else { 1 }, leaf })
    }

    pub fn first(&self, a: VarId) -> Option<Sigma> {
        self.edge(a, false, &mut 0)
    }

    pub fn last(&self, a: VarId) -> Option<Sigma> {
        self.edge(a, true, &mut 0)
    }

    /// Like [`SlpNav::first`]; adds the number of frames created to `work`.
    pub fn first_counted(&self, a: VarId, work: &mut u64) -> Option<Sigma> {
        self.edge(a, false, work)
    }

    pub fn last_counted(&self, a: VarId, work: &mut u64) -> Option<Sigma> {
        self.edge(a, true, work)
    }

    fn step(&self, s: &Sigma, fwd: bool, work: &mut u64) -> Option<Sigma> {
        let mut f = Some(s.leaf.clone());
        while let Some(fr) = f {
            *work += 1;
            let rhs = self.slp.rule(fr.var);
            let next = if fwd {
                (fr.idx as usize + 1..rhs.len()).find(|&k| self.sym_len(rhs[k]) > 0)
            } else {
                (0..fr.idx as usize).rev().find(|&k| self.sym_len(rhs[k]) > 0)
            };
            if let Some(k) = next {
                let top = Rc::new(Frame { var: fr.var, idx: k as u32, up: fr.up.clone() });
                let leaf = self.descend(top, rhs[k], !fwd, work);
                let pos = if fwd { s.pos + 1 } else { s.pos - 1 };
                return Some(Sigma { root: s.root, pos, leaf });
            }
            f = fr.up.clone();
        }
        None
    }

    /// The next position, or `None` at the end.
    pub fn succ(&self, s: &Sigma) -> Option<Sigma> {
        self.step(s, true, &mut 0)
    }

    /// The previous position, or `None` at the start.
    pub fn pred(&self, s: &Sigma) -> Option<Sigma> {
        self.step(s, false, &mut 0)
    }

    /// Like [`SlpNav::succ`]; adds the number of frames touched to `work`.
    pub fn succ_counted(&self, s: &Sigma, work: &mut u64) -> Option<Sigma> {
        self.step(s, true, work)
    }

    pub fn pred_counted(&self, s: &Sigma, work: &mut u64) -> Option<Sigma> {
        self.step(s, false, work)
    }

    /// Cursor at position `i` of `a`; adds the number of frames built to
    /// `work`.
    pub fn at_counted(&self, a: VarId, i: u64, work: &mut u64) -> Option<Sigma> {
        if i == 0 || i > self.len[a.idx()] {
            return None;
        }
        let mut up: Option<Rc<Frame>> = None;
        let mut v = a;
        let mut p = i;
        loop {
            let rhs = self.slp.rule(v);
            let mut k = 0;
            while p > self.sym_len(rhs[k]) {
                p -= self.sym_len(rhs[k]);
                k += 1;
            }
            *work += 1;
            let fr = Rc::new(Frame { var: v, idx: k as u32, up });
            match rhs[k] {
                Symbol::Term(_) => return Some(Sigma { root: a, pos: i, leaf: fr }),
                Symbol::Var(w) => {
                    up = Some(fr);
                    v = w;
                }
            }
        }
    }

    pub fn at(&self, a: VarId, i: u64) -> Option<Sigma> {
        self.at_counted(a, i, &mut 0)
    }
}
