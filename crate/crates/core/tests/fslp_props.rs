use cslp_core::balancer::make_contracting;
use cslp_core::fslp::{random_fslp, write_forest, FslpNav, Move, SlpNav, Tau, Tree};
use cslp_core::gen::{random_slp, rng, SlpParams};
use cslp_core::grammar::is_contracting;
use proptest::prelude::*;

const MAX_NODES: u64 = 10_000;

/// Walks the explicit forest and the cursors side by side.
fn check_against_tree(nav: &FslpNav, forest: &[Tree], first: Tau) {
    let g = nav.grammar();
    // (tree, cursor, expected parent)
    let mut stack: Vec<(&Tree, Tau, Option<Tau>)> = Vec::new();
    let mut cur = Some(first);
    let mut prev: Option<Tau> = None;
    for t in forest {
        let c = cur.expect("as many roots as trees");
        if let Some(p) = &prev {
            assert_eq!(nav.left_sibling(&c).as_ref(), Some(p));
        } else {
            assert!(nav.left_sibling(&c).is_none());
        }
        cur = nav.right_sibling(&c);
        prev = Some(c.clone());
        stack.push((t, c, None));
    }
    assert!(cur.is_none());
    while let Some((t, c, parent)) = stack.pop() {
        assert_eq!(nav.symbol_name(&c), g.label_name(t.label));
        assert_eq!(nav.degree(&c), t.children.len() as u64);
        assert_eq!(nav.parent_of(&c), parent);
        let d = t.children.len() as u64;
        let mut k = nav.first_child(&c);
        let mut before: Option<Tau> = None;
        for (j, child) in t.children.iter().enumerate() {
            let kc = k.expect("degree many children");
            assert_eq!(nav.nav_child(&c, j as u64 + 1).0.as_ref(), Some(&kc));
            assert_eq!(nav.left_sibling(&kc), before);
            if j as u64 + 1 == d {
                assert_eq!(nav.last_child(&c).as_ref(), Some(&kc));
            }
            k = nav.right_sibling(&kc);
            before = Some(kc.clone());
            stack.push((child, kc, Some(c.clone())));
        }
        assert!(k.is_none());
        assert!(nav.nav_child(&c, d + 1).0.is_none());
        if d == 0 {
            assert!(nav.first_child(&c).is_none() && nav.last_child(&c).is_none());
        }
    }
}

fn term(nav: &FslpNav, t: &Tau) -> String {
    let mut out = nav.symbol_name(t).to_string();
    if let Some(mut c) = nav.first_child(t) {
        out.push('(');
        loop {
            out += &term(nav, &c);
            match nav.right_sibling(&c) {
                Some(d) => {
                    out.push(',');
                    c = d;
                }
                None => break,
            }
        }
        out.push(')');
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn navigation_matches_explicit_forest(seed in any::<u64>(), vars in 5usize..120, sigma in 1usize..4) {
        let mut r = rng(seed);
        let g = random_fslp(&mut r, vars, sigma, MAX_NODES);
        let nav = FslpNav::new(g.clone()).unwrap();
        for a in 0..g.num_vars() {
            if !g.class(a).is_forest() {
                continue;
            }
            let forest = g.eval_forest(a, MAX_NODES).unwrap();
            prop_assert_eq!(nav.rib_len(a), forest.len() as u64);
            match nav.root_first(a).unwrap() {
                None => prop_assert!(forest.is_empty()),
                Some(t) => {
                    let last = nav.root_last(a).unwrap().unwrap();
                    prop_assert!(nav.right_sibling(&last).is_none());
                    if a == g.start.unwrap() {
                        check_against_tree(&nav, &forest, t);
                    } else {
                        prop_assert_eq!(term(&nav, &t), write_forest(&g, &forest[..1]));
                    }
                }
            }
        }
    }

    #[test]
    fn rib_is_contracting(seed in any::<u64>(), vars in 5usize..200) {
        let mut r = rng(seed);
        let g = random_fslp(&mut r, vars, 2, MAX_NODES);
        let nav = FslpNav::new(g).unwrap();
        prop_assert!(is_contracting(&nav.rib().slp).unwrap());
    }
}

#[test]
fn child_steps_grow_with_log_degree() {
    // A node whose forest doubles at every level.
    let mut worst: f64 = 0.0;
    for k in 1..=16u32 {
        let mut src = String::from("fslp v1\nclass E top\nclass T bot\nclass R bot\n");
        for i in 0..=k {
            src += &format!("class F{i} top\n");
        }
        src += "rule E -> eps\nrule T -> c ( E )\nrule F0 -> T E\n";
        for i in 1..=k {
            src += &format!("rule F{i} -> F{} F{}\n", i - 1, i - 1);
        }
        src += &format!("rule R -> a ( F{k} )\nstart R\n");
        let g = cslp_core::fslp::parse_fslp(&src).unwrap();
        let nav = FslpNav::new(g).unwrap();
        let root = nav.root_first(nav.grammar().start.unwrap()).unwrap().unwrap();
        let d = nav.degree(&root);
        assert_eq!(d, 1 << k);
        for j in [1, d / 3 + 1, d / 2, d] {
            let (c, steps) = nav.nav_child(&root, j);
            assert_eq!(nav.symbol_name(&c.unwrap()), "c");
            worst = worst.max(steps as f64 / ((d + 1) as f64).log2());
        }
    }
    assert!(worst < 6.0, "steps per log2 degree {worst}");
}

#[test]
fn sigma_local_moves_are_amortized_constant() {
    let mut r = rng(11);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let g = random_slp(&mut r, SlpParams { vars: 200, max_len: 50_000, eps_prob: 0.05, ..Default::default() });
        let c = make_contracting(&g).unwrap();
        let start = g.start.unwrap();
        let Some(crepr) = c.repr[start.idx()] else { continue };
        for (slp, root) in [(g.clone(), start), (c.slp.clone(), crepr)] {
            let s = SlpNav::new(slp).unwrap();
            for fwd in [true, false] {
                let mut work = 0;
                let mut cur = if fwd { s.first_counted(root, &mut work) } else { s.last_counted(root, &mut work) };
                let mut ops = 1u64;
                while let Some(x) = cur {
                    cur = if fwd { s.succ_counted(&x, &mut work) } else { s.pred_counted(&x, &mut work) };
                    ops += 1;
                }
                assert_eq!(ops, s.len(root) + 1);
                if ops > 1000 {
                    worst = worst.max(work as f64 / ops as f64);
                }
            }
        }
    }
    assert!(worst > 0.0 && worst <= 5.0, "frames per move {worst}");
}

#[test]
fn moves_cost_a_constant_number_of_sigma_ops() {
    let mut r = rng(5);
    let g = random_fslp(&mut r, 300, 3, MAX_NODES);
    let nav = FslpNav::new(g.clone()).unwrap();
    let mut t = nav.root_first(g.start.unwrap()).unwrap().unwrap();
    let moves = [Move::FirstChild, Move::LastChild, Move::Left, Move::Right, Move::Parent];
    let mut max = 0;
    for _ in 0..20_000 {
        let m = moves[rand::Rng::gen_range(&mut r, 0..moves.len())];
        let (next, w) = nav.step(&t, m);
        max = max.max(w.steps);
        if let Some(n) = next {
            t = n;
        }
    }
    assert!(max <= 6, "steps per move {max}");
}
