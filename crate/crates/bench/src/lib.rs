//! Fixtures shared by the benchmarks.

use cslp_core::ancestry::WeightedTree;
use cslp_core::finger::{fringe_grammar, SkewForestSet, DEFAULT_T};
use cslp_core::fslp::{parse_fslp, Fslp};
use cslp_core::gen::{compress_string, repetitive_string, rng};
use cslp_core::grammar::{Alphabet, TermId};
use rand::Rng;

/// A repetitive string of length `n` and the finger structure over it.
pub fn finger_fixture(n: usize, seed: u64) -> (Vec<TermId>, SkewForestSet) {
    let mut r = rng(seed);
    let s = repetitive_string(&mut r, n, 4);
    let g = compress_string(Alphabet::unit(4), &s);
    let sf = SkewForestSet::preprocess(&fringe_grammar(&g).expect("nonempty string"), DEFAULT_T).expect("valid grammar");
    (s, sf)
}

/// Random tree of `n` nodes, mostly attaching to the previous `span`
/// nodes, with height at most `max_height`.
pub fn deep_tree(n: usize, span: usize, max_height: usize, seed: u64) -> WeightedTree {
    let mut r = rng(seed);
    let mut level = vec![0usize; n];
    let mut parent = vec![None; n];
    for i in 1..n {
        let mut p = r.gen_range(i.saturating_sub(span)..i);
        while level[p] >= max_height {
            p = r.gen_range(0..i);
        }
        parent[i] = Some(p);
        level[i] = level[p] + 1;
    }
    let w: Vec<u64> = (0..n).map(|_| r.gen_range(0..8)).collect();
    WeightedTree::from_edge_weights(parent, &w, 0).expect("well-formed tree")
}

/// A root whose children are `2^k` leaves, described by a doubling forest.
pub fn wide_fslp(k: u32) -> Fslp {
    let mut src = String::from("fslp v1\nclass E top\nclass T bot\nclass R bot\n");
    for i in 0..=k {
        src += &format!("class F{i} top\n");
    }
    src += "rule E -> eps\nrule T -> c ( E )\nrule F0 -> T E\n";
    for i in 1..=k {
        src += &format!("rule F{i} -> F{} F{}\n", i - 1, i - 1);
    }
    src += &format!("rule R -> a ( F{k} )\nstart R\n");
    parse_fslp(&src).expect("generated grammar is valid")
}
