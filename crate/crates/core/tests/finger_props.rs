use cslp_core::finger::{
    fringe_grammar, random_balanced_slp, FingerState, SkewForestSet, DEFAULT_T,
};
use cslp_core::gen::{compress_string, repetitive_string, random_slp, random_string, rng, SlpParams};
use cslp_core::{Alphabet, VarId};
use proptest::prelude::*;
use rand::Rng;

fn log2p(x: u64) -> f64 {
    ((x + 2) as f64).log2()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fringe_access_matches_eval(seed in any::<u64>(), t in 1usize..5) {
        let mut r = rng(seed);
        let g0 = random_slp(&mut r, SlpParams { vars: 40, max_len: 3000, ..Default::default() });
        let g = fringe_grammar(&g0).unwrap();
        let sf = SkewForestSet::preprocess(&g, t).unwrap();
        let m = g.metrics().unwrap();
        for _ in 0..30 {
            let a = VarId(r.gen_range(0..g.num_vars()) as u32);
            let s = g.eval(a, 1 << 20).unwrap();
            for _ in 0..10 {
                let i = r.gen_range(1..=m.len[a.idx()]);
                let (p, _) = sf.fringe_access(a, i).unwrap();
                prop_assert_eq!(p.symbol, s[(i - 1) as usize]);
                prop_assert!(sf.check_path(&p, i));
                prop_assert!(p.edges.len() <= m.height[a.idx()] as usize);
            }
        }
    }

    #[test]
    fn finger_sessions_match_string(seed in any::<u64>(), n in 1usize..4000, t in 1usize..5) {
        let mut r = rng(seed);
        let s = repetitive_string(&mut r, n, 3);
        let g = fringe_grammar(&compress_string(Alphabet::unit(3), &s)).unwrap();
        let sf = SkewForestSet::preprocess(&g, t).unwrap();
        let mut a = FingerState::new(&sf).unwrap();
        let mut b = FingerState::new(&sf).unwrap();
        let n = n as u64;
        a.setfinger(&sf, r.gen_range(1..=n)).unwrap();
        b.setfinger(&sf, r.gen_range(1..=n)).unwrap();
        for _ in 0..200 {
            let f = a.finger().unwrap();
            let i = if r.gen_bool(0.7) {
                let d = r.gen_range(0..=20u64);
                if r.gen_bool(0.5) { f.saturating_sub(d).max(1) } else { (f + d).min(n) }
            } else {
                r.gen_range(1..=n)
            };
            let out = match r.gen_range(0..3) {
                0 => a.access(&sf, i).unwrap(),
                1 => a.movefinger(&sf, i).unwrap(),
                _ => a.setfinger(&sf, i).unwrap(),
            };
            prop_assert_eq!(out.symbol, s[(i - 1) as usize]);
            prop_assert!(a.is_consistent(&sf));
            let fb = b.finger().unwrap();
            prop_assert_eq!(b.access(&sf, fb).unwrap().symbol, s[(fb - 1) as usize]);
            prop_assert!(b.is_consistent(&sf));
        }
    }

    #[test]
    fn path_balanced_fringe_matches_eval(seed in any::<u64>(), ratio in 0.25f64..=0.5) {
        let mut r = rng(seed);
        let g = random_balanced_slp(&mut r, 2000, 3, ratio);
        let sf = SkewForestSet::preprocess_path_balanced(&g).unwrap();
        let a = g.start.unwrap();
        let s = g.eval(a, 1 << 20).unwrap();
        for i in 1..=s.len() as u64 {
            let (p, _) = sf.fringe_access(a, i).unwrap();
            prop_assert_eq!(p.symbol, s[(i - 1) as usize]);
            prop_assert!(sf.check_path(&p, i));
        }
        let mut f = FingerState::new(&sf).unwrap();
        f.setfinger(&sf, 1).unwrap();
        for _ in 0..200 {
            let i = r.gen_range(1..=s.len() as u64);
            prop_assert_eq!(f.movefinger(&sf, i).unwrap().symbol, s[(i - 1) as usize]);
            prop_assert!(f.is_consistent(&sf));
        }
    }
}

#[test]
#[ignore]
fn calibrate_steps() {
    let mut r = rng(99);
    let (mut wa, mut wm, mut ws, mut wf) = (0f64, 0f64, 0f64, 0f64);
    for _ in 0..20 {
        let n = r.gen_range(1000..100_000usize);
        let s = if r.gen_bool(0.5) { repetitive_string(&mut r, n, 4) } else { random_string(&mut r, n, 2) };
        let g = fringe_grammar(&compress_string(Alphabet::unit(4), &s)).unwrap();
        let sf = SkewForestSet::preprocess(&g, DEFAULT_T).unwrap();
        let mut fs = FingerState::new(&sf).unwrap();
        let nn = n as u64;
        let o = fs.setfinger(&sf, r.gen_range(1..=nn)).unwrap();
        ws = ws.max(o.steps as f64 / log2p(nn));
        for _ in 0..2000 {
            let f = fs.finger().unwrap();
            let d = 1u64 << r.gen_range(0..17);
            let i = if r.gen_bool(0.5) { f.saturating_sub(d).max(1) } else { (f + d).min(nn) };
            let dd = f.abs_diff(i);
            let a = fs.access(&sf, i).unwrap();
            wa = wa.max(a.steps as f64 / log2p(dd));
            let m = fs.movefinger(&sf, i).unwrap();
            wm = wm.max(m.steps as f64 / log2p(dd));
            let st = g.start.unwrap();
            let (_, k) = sf.fringe_access(st, r.gen_range(1..=nn)).unwrap();
            let _ = (st, k);
        }
        let st = g.start.unwrap();
        for i in 1..=nn.min(5000) {
            let (_, k) = sf.fringe_access(st, i).unwrap();
            wf = wf.max(k as f64 / log2p(i));
        }
    }
    println!("access {wa:.2} move {wm:.2} set {ws:.2} fringe {wf:.2}");
}

#[test]
#[ignore]
fn steps_by_distance() {
    let mut r = rng(7);
    for &n in &[1_000usize, 10_000, 100_000, 1_000_000] {
        let s = random_string(&mut r, n, 2);
        let g = fringe_grammar(&compress_string(Alphabet::unit(2), &s)).unwrap();
        let sf = SkewForestSet::preprocess(&g, DEFAULT_T).unwrap();
        let mut fs = FingerState::new(&sf).unwrap();
        let nn = n as u64;
        fs.setfinger(&sf, nn / 2).unwrap();
        let mut line = format!("N={n:>8} h={:>3}:", sf.height(g.start.unwrap()));
        for e in [0u32, 2, 4, 8, 12, 16] {
            let mut worst = (0, 0);
            for _ in 0..3000 {
                let f = fs.finger().unwrap();
                let d = (1u64 << e).min(nn / 3);
                let i = if f > nn / 2 { f - d } else { f + d };
                let a = fs.access(&sf, i).unwrap().steps;
                let m = fs.movefinger(&sf, i).unwrap().steps;
                worst = (worst.0.max(a), worst.1.max(m));
            }
            line += &format!(" d=2^{e}:{}/{}", worst.0, worst.1);
        }
        println!("{line}");
    }
}
