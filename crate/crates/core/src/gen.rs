//! Seeded generators for grammars, strings and trees.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grammar::{Alphabet, Slp, Symbol, TermId, VarId};
use crate::prefix::LabeledTree;

/// Deterministic RNG used by all generators.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape parameters for [`random_slp`].
#[derive(Clone, Copy, Debug)]
pub struct SlpParams {
    pub terminals: usize,
    pub vars: usize,
    pub max_rhs: usize,
    /// Upper bound on the length of every variable.
    pub max_len: u64,
    /// Probability of an empty right-hand side.
    pub eps_prob: f64,
}

impl Default for SlpParams {
    fn default() -> Self {
        SlpParams { terminals: 4, vars: 50, max_rhs: 3, max_len: 100_000, eps_prob: 0.0 }
    }
}

/// Random SLP with unit weights; the last variable is the start. Later
/// variables prefer recent ones, which yields long and deep strings.
pub fn random_slp<R: Rng>(rng: &mut R, p: SlpParams) -> Slp {
    assert!(p.terminals > 0 && p.vars > 0 && p.max_rhs > 0);
    let mut g = Slp::new(Alphabet::unit(p.terminals));
    let mut len: Vec<u64> = Vec::with_capacity(p.vars);
    for i in 0..p.vars {
        if i > 0 && rng.gen_bool(p.eps_prob) {
            g.add_rule(Vec::new());
            len.push(0);
            continue;
        }
        let k = rng.gen_range(1..=p.max_rhs);
        let mut rhs = Vec::with_capacity(k);
        let mut l = 0u64;
        for _ in 0..k {
            let mut s = Symbol::Term(TermId(rng.gen_range(0..p.terminals) as u32));
            let mut sl = 1;
            if i > 0 && rng.gen_bool(0.75) {
                let lo = i.saturating_sub(1 + rng.gen_range(0..=i.min(8)));
                let w = if rng.gen_bool(0.7) { rng.gen_range(lo..i) } else { rng.gen_range(0..i) };
                if l + len[w] <= p.max_len {
                    s = Symbol::Var(VarId(w as u32));
                    sl = len[w];
                }
            }
            if l + sl > p.max_len {
                break;
            }
            rhs.push(s);
            l += sl;
        }
        if rhs.is_empty() {
            rhs.push(Symbol::Term(TermId(0)));
            l = 1;
        }
        g.add_rule(rhs);
        len.push(l);
    }
    g.start = Some(VarId((p.vars - 1) as u32));
    g
}

/// Uniform random string over `sigma` terminals.
pub fn random_string<R: Rng>(rng: &mut R, n: usize, sigma: usize) -> Vec<TermId> {
    (0..n).map(|_| TermId(rng.gen_range(0..sigma) as u32)).collect()
}

/// String with long repeats: a random SLP's expansion cut to length `n`.
pub fn repetitive_string<R: Rng>(rng: &mut R, n: usize, sigma: usize) -> Vec<TermId> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let g = random_slp(rng, SlpParams { terminals: sigma, vars: 24, max_rhs: 3, max_len: n as u64, eps_prob: 0.0 });
        let s = g.expand(Symbol::Var(g.start.unwrap()));
        out.extend(s.into_iter().take(n - out.len()));
    }
    out
}

/// Weights in `1..=max_w` for `n` distinct terminals.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize, max_w: u64) -> Vec<u64> {
    (0..n).map(|_| rng.gen_range(1..=max_w)).collect()
}

/// Grammar for `s` built by repeatedly pairing adjacent symbols and sharing
/// equal pairs. The start variable derives `s`.
pub fn compress_string(alphabet: Alphabet, s: &[TermId]) -> Slp {
    assert!(!s.is_empty());
    let mut g = Slp::new(alphabet);
    let mut pairs: HashMap<(Symbol, Symbol), VarId> = HashMap::new();
    let mut cur: Vec<Symbol> = s.iter().map(|&t| Symbol::Term(t)).collect();
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len().div_ceil(2));
        for ch in cur.chunks(2) {
            match *ch {
                [a, b] => next.push(Symbol::Var(*pairs.entry((a, b)).or_insert_with(|| g.add_rule(vec![a, b])))),
                [a] => next.push(a),
                _ => unreachable!(),
            }
        }
        cur = next;
    }
    let start = match cur[0] {
        Symbol::Var(v) => v,
        t => g.add_rule(vec![t]),
    };
    g.start = Some(start);
    g
}

/// Tree shapes for [`random_tree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeShape {
    /// Uniform random recursive tree.
    Recursive,
    /// Long paths with occasional branching.
    Deep,
    /// Every node has at most one non-leaf child.
    Caterpillar,
}

/// Random labeled tree with `n` edges; labels have length `0..=max_label`
/// (at least 1 when `max_label > 0` and `eps_prob` is zero).
pub fn random_tree<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    n: usize,
    shape: TreeShape,
    max_label: usize,
    eps_prob: f64,
) -> LabeledTree {
    let mut t = LabeledTree::new(alphabet.clone());
    let sigma = alphabet.len();
    let label = |rng: &mut R| -> Vec<TermId> {
        if max_label == 0 || rng.gen_bool(eps_prob) {
            return Vec::new();
        }
        let k = rng.gen_range(1..=max_label);
        (0..k).map(|_| TermId(rng.gen_range(0..sigma) as u32)).collect()
    };
    let mut spine = 0usize;
    for i in 0..n {
        let p = match shape {
            TreeShape::Recursive => rng.gen_range(0..=i),
            TreeShape::Deep => {
                if rng.gen_bool(0.8) {
                    i
                } else {
                    rng.gen_range(0..=i)
                }
            }
            TreeShape::Caterpillar => spine,
        };
        let l = label(rng);
        let c = t.add_child(p, l);
        if shape == TreeShape::Caterpillar && rng.gen_bool(0.5) {
            spine = c;
        }
    }
    t
}
