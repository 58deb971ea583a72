use std::collections::BTreeMap;

use cslp_core::ancestry::{PredSet, SmallWa, WaIndex, WeightedTree, WORD};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Op {
    Insert(u64, u32),
    Delete(u64),
    Split(u64),
    Pred(u64),
    Succ(u64),
    Rank(u64),
    Select(usize),
}

fn op() -> impl Strategy<Value = Op> {
    let key = 0u64..200;
    prop_oneof![
        4 => (key.clone(), any::<u32>()).prop_map(|(k, v)| Op::Insert(k, v)),
        1 => key.clone().prop_map(Op::Delete),
        1 => key.clone().prop_map(Op::Split),
        2 => key.clone().prop_map(Op::Pred),
        2 => key.clone().prop_map(Op::Succ),
        1 => key.prop_map(Op::Rank),
        1 => (0usize..100).prop_map(Op::Select),
    ]
}

fn tree() -> impl Strategy<Value = WeightedTree> {
    (1usize..=64).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<prop::sample::Index>(), n),
            proptest::collection::vec(0u64..4, n),
        )
            .prop_map(move |(ps, ws)| {
                let parent = (0..n).map(|i| (i > 0).then(|| ps[i].index(i))).collect();
                WeightedTree::from_edge_weights(parent, &ws, 0).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn predset_matches_btreemap(cap in 1usize..150, ops in proptest::collection::vec(op(), 0..400)) {
        let mut s = PredSet::with_capacity(cap);
        let mut m: BTreeMap<u64, u32> = BTreeMap::new();
        for o in ops {
            match o {
                Op::Insert(k, v) => {
                    let fits = m.contains_key(&k) || m.len() < cap;
                    prop_assert_eq!(s.insert(k, v).is_ok(), fits);
                    if fits {
                        m.insert(k, v);
                    }
                }
                Op::Delete(k) => prop_assert_eq!(s.delete(k), m.remove(&k).is_some()),
                Op::Split(k) => {
                    s.split(k);
                    m.retain(|&x, _| x <= k);
                }
                Op::Pred(k) => prop_assert_eq!(s.pred(k), m.range(..k).next_back().map(|(&a, &b)| (a, b))),
                Op::Succ(k) => prop_assert_eq!(s.succ(k), m.range(k + 1..).next().map(|(&a, &b)| (a, b))),
                Op::Rank(k) => prop_assert_eq!(s.rank(k), m.range(..k).count()),
                Op::Select(i) => prop_assert_eq!(s.select(i), m.iter().nth(i).map(|(&a, &b)| (a, b))),
            }
            prop_assert_eq!(s.len(), m.len());
        }
        prop_assert_eq!(s.iter().collect::<Vec<_>>(), m.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn small_index_matches_scan(t in tree()) {
        let s = SmallWa::from_tree(&t).unwrap();
        let ix = WaIndex::build(&t).unwrap();
        let maxd = (0..t.len()).map(|v| t.depth(v)).max().unwrap();
        for v in 0..t.len() {
            for p in 0..=maxd + 1 {
                let want = t.query_naive(v, p);
                prop_assert_eq!(s.query(v, p), want);
                prop_assert_eq!(s.query_perturbed(v, (p as u128 + 1) << 64), want);
                prop_assert_eq!(ix.query(v, p), want);
            }
        }
    }

    #[test]
    fn large_index_matches_scan(
        n in 200usize..3000,
        seed in any::<u64>(),
        branch in 0.05f64..1.0,
    ) {
        use rand::{Rng, SeedableRng};
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut parent = vec![None];
        let mut h = vec![0usize];
        for i in 1..n {
            let mut p = if r.gen_bool(branch) { r.gen_range(0..i) } else { i - 1 };
            while h[p] >= 300 {
                p = parent[p].unwrap();
            }
            parent.push(Some(p));
            h.push(h[p] + 1);
        }
        let w: Vec<u64> = (0..n).map(|_| if r.gen_bool(0.3) { 0 } else { r.gen_range(1..5) }).collect();
        let t = WeightedTree::from_edge_weights(parent, &w, 0).unwrap();
        let ix = WaIndex::build(&t).unwrap();
        prop_assert!(ix.macro_leaves() <= n / WORD);
        for _ in 0..500 {
            let v = r.gen_range(0..n);
            let p = r.gen_range(0..=t.depth(v) + 1);
            let got = ix.query(v, p);
            prop_assert_eq!(got, t.query_naive(v, p));
            if let Some(u) = got {
                prop_assert!(t.parent(u).is_none_or(|q| t.depth(q) <= p));
            }
            let q = r.gen_range(0..=t.depth(v) + 2);
            let want = match t.depth(v).checked_sub(q) {
                Some(p) => t.query_naive(v, p),
                None => Some(t.root()),
            };
            prop_assert_eq!(ix.query_distance(v, q), want);
        }
    }
}
