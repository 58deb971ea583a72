use cslp_core::gen::{self, SlpParams};
use cslp_core::grammar::{is_contracting, to_cnf, CnfOptions, Slp};
use cslp_core::make_contracting;
use proptest::prelude::*;

fn slp() -> impl Strategy<Value = Slp> {
    (1usize..120, 1usize..5, 1usize..5, 0u32..3, any::<u64>()).prop_map(|(vars, terminals, max_rhs, eps, seed)| {
        gen::random_slp(
            &mut gen::rng(seed),
            SlpParams { terminals, vars, max_rhs, max_len: 20_000, eps_prob: eps as f64 * 0.05 },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn make_contracting_preserves_strings(g in slp()) {
        let c = make_contracting(&g).unwrap();
        prop_assert!(is_contracting(&c.slp).unwrap());
        for v in g.vars() {
            let want = g.eval(v, 1 << 20).unwrap();
            match c.repr[v.idx()] {
                None => prop_assert!(want.is_empty()),
                Some(r) => prop_assert_eq!(c.slp.eval(r, 1 << 20).unwrap(), want),
            }
        }
    }

    #[test]
    fn make_contracting_height_is_logarithmic(g in slp()) {
        let c = make_contracting(&g).unwrap();
        let m = c.metrics();
        for v in c.slp.vars() {
            let bound = 2.0 * ((m.len[v.idx()] + 1) as f64).log2() + 2.0;
            prop_assert!((m.height[v.idx()] as f64) <= bound, "height {} len {}", m.height[v.idx()], m.len[v.idx()]);
        }
    }

    #[test]
    fn access_matches_eval(g in slp(), k in any::<prop::sample::Index>()) {
        let c = make_contracting(&g).unwrap();
        let s = g.start.unwrap();
        let val = g.eval(s, 1 << 20).unwrap();
        if !val.is_empty() {
            let i = k.index(val.len());
            let (t, steps) = c.access(s, i as u64 + 1).unwrap();
            prop_assert_eq!(t, val[i]);
            prop_assert!(steps as f64 <= 2.0 * ((val.len() + 1) as f64).log2() + 2.0);
        }
    }

    #[test]
    fn cnf_preserves_strings(g in slp()) {
        let c = to_cnf(&g, CnfOptions { eliminate_epsilon: true }).unwrap();
        prop_assert!(c.slp.is_cnf());
        for v in g.vars() {
            let want = g.eval(v, 1 << 20).unwrap();
            prop_assert_eq!(c.repr[v.idx()].map(|r| c.slp.eval(r, 1 << 20).unwrap()).unwrap_or_default(), want);
        }
    }
}
