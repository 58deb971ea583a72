use crate::ancestry::PredSet;
use crate::error::{Error, Result};
use crate::grammar::{TermId, VarId};

use super::forests::{Dir, Edge, SkewForestSet, WeightedEdge};

/// Result of a finger operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    /// Symbol at the requested position.
    pub symbol: TermId,
    pub steps: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Entry {
    edge: WeightedEdge,
    l: u64,
    r: u64,
}

/// Accelerated path from the start variable to the finger, with prefix sums
/// of its left and right weights.
///
/// `L` maps every distinct left prefix sum (including the empty sum) to
/// the largest index attaining it; `R` likewise for right sums.
#[derive(Clone, Debug)]
pub struct FingerState {
    start: VarId,
    n: u64,
    gamma: Vec<Entry>,
    l: PredSet<u32>,
    r: PredSet<u32>,
    f: Option<u64>,
}

impl FingerState {
    /// Empty state for the start variable of `sf`.
    pub fn new(sf: &SkewForestSet) -> Result<Self> {
        let start = sf.grammar().start.ok_or(Error::NoStart)?;
        let cap = sf.height(start) as usize + 2;
        Ok(FingerState {
            start,
            n: sf.len(start),
            gamma: Vec::with_capacity(cap),
            l: PredSet::with_capacity(cap),
            r: PredSet::with_capacity(cap),
            f: None,
        })
    }

    pub fn finger(&self) -> Option<u64> {
        self.f
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of edges on the stored path.
    pub fn path_len(&self) -> usize {
        self.gamma.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &WeightedEdge> {
        self.gamma.iter().map(|e| &e.edge)
    }

    fn check_pos(&self, i: u64) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::PositionOutOfRange { pos: i, len: self.n });
        }
        Ok(())
    }

    fn node(&self, j: usize) -> VarId {
        if j == 0 {
            self.start
        } else {
            self.gamma[j - 1].edge.edge.to()
        }
    }

    fn sums(&self, j: usize) -> (u64, u64) {
        if j == 0 {
            (0, 0)
        } else {
            (self.gamma[j - 1].l, self.gamma[j - 1].r)
        }
    }

    fn push(&mut self, e: WeightedEdge, steps: &mut u64) -> Result<()> {
        let (l, r) = self.sums(self.gamma.len());
        let (l, r) = (l + e.lambda, r + e.rho);
        self.gamma.push(Entry { edge: e, l, r });
        let j = self.gamma.len() as u32;
        self.l.insert(l, j)?;
        self.r.insert(r, j)?;
        *steps += 2;
        Ok(())
    }

    /// Places the finger at `f` using a path of short steps only.
    pub fn setfinger(&mut self, sf: &SkewForestSet, f: u64) -> Result<Outcome> {
        self.check_pos(f)?;
        self.gamma.clear();
        self.l.clear();
        self.r.clear();
        self.l.insert(0, 0)?;
        self.r.insert(0, 0)?;
        let mut steps = 2;
        let (mut a, mut p) = (self.start, f);
        let mut buf = Vec::with_capacity(1);
        while sf.terminal(a).is_none() {
            buf.clear();
            (a, p) = sf.short_step(a, p, Dir::Left, &mut buf);
            steps += 1;
            self.push(buf[0], &mut steps)?;
        }
        self.f = Some(f);
        Ok(Outcome { symbol: sf.terminal(a).unwrap(), steps })
    }

    /// Locates the branching point for position `i` and computes the new
    /// path suffix. Returns the kept prefix length and the suffix.
    fn descend(&self, sf: &SkewForestSet, i: u64, steps: &mut u64) -> Result<(usize, Vec<WeightedEdge>, VarId)> {
        self.check_pos(i)?;
        let f = self.f.ok_or(Error::FingerNotSet)?;
        let (dir, p, d) = if i < f { (Dir::Left, i, f - i) } else { (Dir::Right, self.n - i + 1, i - f) };
        let set = match dir {
            Dir::Left => &self.l,
            Dir::Right => &self.r,
        };
        let (key, j) = set.pred(p).expect("the empty prefix sum is below every position");
        *steps += 1;
        let j = j as usize;
        let next = self.gamma[j].edge;
        let a = self.node(j);
        let p1 = p - key;
        let mut out = Vec::new();
        let target = match next.edge {
            Edge::Short { to, .. } => {
                debug_assert!(SkewForestSet::weight(&next, dir) > 0);
                let (y, p2) = sf.short_step(a, p1, dir, &mut out);
                *steps += 1;
                debug_assert_ne!(y, to);
                debug_assert!(sf.len(y) - p2 < d);
                self.fringe(sf, y, p2, dir, &mut out, steps)
            }
            Edge::Long { forest, .. } => {
                let (x, p2) = sf.long_step(forest as usize, a, p1, dir, &mut out);
                *steps += 1;
                let (y, p3) = sf.short_step(x, p2, dir, &mut out);
                *steps += 1;
                debug_assert!(sf.len(y) - p3 < d);
                self.fringe(sf, y, p3, dir, &mut out, steps)
            }
        };
        Ok((j, out, target))
    }

    /// Fringe access from `y` at `dir`-relative position `p`, choosing the
    /// nearer side.
    fn fringe(&self, sf: &SkewForestSet, y: VarId, p: u64, dir: Dir, out: &mut Vec<WeightedEdge>, steps: &mut u64) -> VarId {
        let q = sf.len(y) - p + 1;
        if q < p {
            sf.fringe_into(y, q, dir.flip(), out, steps)
        } else {
            sf.fringe_into(y, p, dir, out, steps)
        }
    }

    /// Moves the finger to `i`.
    pub fn movefinger(&mut self, sf: &SkewForestSet, i: u64) -> Result<Outcome> {
        let f = self.f.ok_or(Error::FingerNotSet)?;
        self.check_pos(i)?;
        if i == f {
            return Ok(Outcome { symbol: self.finger_symbol(sf), steps: 0 });
        }
        let mut steps = 0;
        let (j, suffix, target) = self.descend(sf, i, &mut steps)?;
        self.gamma.truncate(j);
        let (lj, rj) = self.sums(j);
        self.l.split(lj);
        self.r.split(rj);
        steps += 2;
        // The kept sums must point at indices within the kept prefix.
        for (set, key) in [(&mut self.l, lj), (&mut self.r, rj)] {
            if set.get(key) != Some(j as u32) {
                set.insert(key, j as u32)?;
                steps += 1;
            }
        }
        for e in suffix {
            self.push(e, &mut steps)?;
        }
        self.f = Some(i);
        Ok(Outcome { symbol: sf.terminal(target).unwrap(), steps })
    }

    /// The symbol at position `i`, leaving the finger in place.
    pub fn access(&self, sf: &SkewForestSet, i: u64) -> Result<Outcome> {
        let f = self.f.ok_or(Error::FingerNotSet)?;
        self.check_pos(i)?;
        if i == f {
            return Ok(Outcome { symbol: self.finger_symbol(sf), steps: 0 });
        }
        let mut steps = 0;
        let (_, _, target) = self.descend(sf, i, &mut steps)?;
        Ok(Outcome { symbol: sf.terminal(target).unwrap(), steps })
    }

    fn finger_symbol(&self, sf: &SkewForestSet) -> TermId {
        sf.terminal(self.node(self.gamma.len())).expect("path ends at a terminal rule")
    }

    /// Recomputes the prefix sums from the path and compares them with the
    /// stored stack and predecessor sets.
    pub fn is_consistent(&self, sf: &SkewForestSet) -> bool {
        let (mut l, mut r) = (0u64, 0u64);
        let mut want_l = vec![(0u64, 0u32)];
        let mut want_r = vec![(0u64, 0u32)];
        let mut cur = self.start;
        for (k, e) in self.gamma.iter().enumerate() {
            if e.edge.edge.from() != cur {
                return false;
            }
            cur = e.edge.edge.to();
            l += e.edge.lambda;
            r += e.edge.rho;
            if (e.l, e.r) != (l, r) {
                return false;
            }
            let j = k as u32 + 1;
            for (w, x) in [(&mut want_l, l), (&mut want_r, r)] {
                match w.last_mut() {
                    Some(last) if last.0 == x => last.1 = j,
                    _ => w.push((x, j)),
                }
            }
        }
        sf.terminal(cur).is_some()
            && self.f == Some(l + 1)
            && self.l.iter().collect::<Vec<_>>() == want_l
            && self.r.iter().collect::<Vec<_>>() == want_r
    }
}
