use anyhow::{ensure, Result};
use cslp_core::ancestry::{WaIndex, WeightedTree};
use cslp_core::finger::{fringe_grammar, FingerState, SkewForestSet, DEFAULT_T};
use cslp_core::fslp::{example_fslp, random_fslp, write_forest, FslpNav, Tau};
use cslp_core::gen::{compress_string, random_slp, random_tree, repetitive_string, rng, SlpParams, TreeShape};
use cslp_core::grammar::{gen_lower_bound, is_contracting, Alphabet};
use cslp_core::make_contracting;
use cslp_core::prefix::{build_prefix_slp, build_tree_prefix_slp};
use rand::Rng;

fn report(name: &str, cases: usize) {
    println!("ok {name} ({cases} cases)");
}

fn contracting(seed: u64, max_len: u64) -> Result<()> {
    let mut r = rng(seed);
    let cases = 40;
    for _ in 0..cases {
        let g = random_slp(&mut r, SlpParams { vars: 80, max_len: 5_000, eps_prob: 0.05, ..Default::default() });
        let c = make_contracting(&g)?;
        ensure!(is_contracting(&c.slp)?, "output is not contracting");
        for v in g.vars() {
            let want = g.eval(v, max_len)?;
            let got = c.repr[v.idx()].map_or(Ok(Vec::new()), |x| c.slp.eval(x, max_len))?;
            ensure!(want == got, "variable {} changed", g.display_var(v));
        }
    }
    for n in 1..=8 {
        for binary in [false, true] {
            let g = gen_lower_bound(n, binary);
            ensure!(is_contracting(&make_contracting(&g)?.slp)?, "lower-bound family n={n} not balanced");
        }
    }
    report("contracting", cases + 16);
    Ok(())
}

fn prefixes(seed: u64, max_len: u64) -> Result<()> {
    let mut r = rng(seed);
    let cases = 20;
    for _ in 0..cases {
        let n = r.gen_range(1..300);
        let s = repetitive_string(&mut r, n, 3);
        let p = build_prefix_slp(&Alphabet::unit(3), &s);
        for (i, v) in p.prefix.iter().enumerate() {
            ensure!(p.slp.eval(*v, max_len)? == s[..=i], "prefix {} differs", i + 1);
        }
        let t = random_tree(&mut r, &Alphabet::unit(3), n, TreeShape::Recursive, 2, 0.1);
        let tp = build_tree_prefix_slp(&t)?;
        for v in 0..t.num_nodes() {
            let got = tp.prefix[v].map_or(Ok(Vec::new()), |x| tp.slp.eval(x, max_len))?;
            ensure!(got == t.path_label(v), "tree prefix of node {v} differs");
        }
    }
    report("prefix", 2 * cases);
    Ok(())
}

fn ancestors(seed: u64) -> Result<()> {
    let mut r = rng(seed);
    let cases = 20;
    for _ in 0..cases {
        let n: usize = r.gen_range(1..2_000);
        let parent: Vec<Option<usize>> = (0..n).map(|i: usize| (i > 0).then(|| r.gen_range(i.saturating_sub(8)..i))).collect();
        let w: Vec<u64> = (0..n).map(|_| r.gen_range(0..4)).collect();
        let t = WeightedTree::from_edge_weights(parent, &w, 0)?;
        let wa = WaIndex::build(&t)?;
        for _ in 0..200 {
            let v = r.gen_range(0..n);
            let p = r.gen_range(0..=t.depth(v) + 1);
            ensure!(wa.query(v, p) == t.query_naive(v, p), "query ({v}, {p}) differs");
        }
    }
    report("weighted-ancestor", cases);
    Ok(())
}

fn finger(seed: u64) -> Result<()> {
    let mut r = rng(seed);
    let cases = 10;
    for _ in 0..cases {
        let n = r.gen_range(1..5_000);
        let s = repetitive_string(&mut r, n, 3);
        let g = compress_string(Alphabet::unit(3), &s);
        let sf = SkewForestSet::preprocess(&fringe_grammar(&g)?, DEFAULT_T)?;
        let mut fs = FingerState::new(&sf)?;
        fs.setfinger(&sf, 1)?;
        for _ in 0..300 {
            let i = r.gen_range(1..=n as u64);
            let out = if r.gen_bool(0.5) { fs.movefinger(&sf, i)? } else { fs.access(&sf, i)? };
            ensure!(out.symbol == s[i as usize - 1], "finger answer at {i} differs");
        }
    }
    report("finger", cases);
    Ok(())
}

fn term(nav: &FslpNav, t: &Tau) -> String {
    let mut out = nav.symbol_name(t).to_string();
    let mut c = nav.first_child(t);
    if c.is_some() {
        out.push('(');
    }
    let mut first = true;
    while let Some(x) = c {
        if !first {
            out.push(',');
        }
        first = false;
        out += &term(nav, &x);
        c = nav.right_sibling(&x);
    }
    if !first {
        out.push(')');
    }
    out
}

fn fslp(seed: u64) -> Result<()> {
    let mut r = rng(seed);
    let cases = 20;
    let mut grammars = vec![example_fslp()];
    grammars.extend((0..cases).map(|_| random_fslp(&mut r, 60, 3, 2_000)));
    for g in &grammars {
        let nav = FslpNav::new(g.clone())?;
        let s = g.start.expect("generated grammars have a start");
        let forest = g.eval_forest(s, 10_000)?;
        let mut got = Vec::new();
        let mut c = nav.root_first(s)?;
        while let Some(t) = c {
            got.push(term(&nav, &t));
            c = nav.right_sibling(&t);
        }
        ensure!(got.join(",") == write_forest(g, &forest), "traversal differs from the derived forest");
    }
    report("fslp", grammars.len());
    Ok(())
}

pub fn run(seed: u64, max_len: u64) -> Result<()> {
    contracting(seed, max_len)?;
    prefixes(seed, max_len)?;
    ancestors(seed)?;
    finger(seed)?;
    fslp(seed)?;
    Ok(())
}
