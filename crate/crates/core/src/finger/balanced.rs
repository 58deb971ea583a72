use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grammar::{distinct_children, Alphabet, Slp, Symbol, TermId, VarId};

/// Path-balance constants: every root-to-leaf path below `A` has between
/// `alpha * log2 |A|` and `beta * log2 |A|` binary rules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathBalanceParams {
    pub alpha: f64,
    pub beta: f64,
}

impl PathBalanceParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= beta) {
            return Err(Error::InvalidTree(format!("path balance needs 0 < alpha <= beta, got {alpha}, {beta}")));
        }
        Ok(PathBalanceParams { alpha, beta })
    }

    /// Constants satisfied by [`weight_balanced_slp`] with split ratio
    /// `ratio`, up to one rule of slack on either side.
    pub fn for_ratio(ratio: f64) -> Self {
        // Shortest paths follow the small parts, longest the large ones.
        let alpha = 1.0 / (1.0 / ratio).log2();
        let beta = 1.0 / (1.0 / (1.0 - ratio)).log2();
        PathBalanceParams { alpha, beta }
    }
}

/// Weight-balanced CNF grammar for `s`: a string of length `n > 1` is split
/// after `max(1, floor(n * ratio))` symbols, and equal substrings share one
/// variable. Children are made distinct afterwards.
pub fn weight_balanced_slp(alphabet: Alphabet, s: &[TermId], ratio: f64) -> Slp {
    assert!(!s.is_empty() && ratio > 0.0 && ratio <= 0.5);
    let mut g = Slp::new(alphabet);
    let mut memo: HashMap<&[TermId], VarId> = HashMap::new();
    fn go<'a>(g: &mut Slp, memo: &mut HashMap<&'a [TermId], VarId>, s: &'a [TermId], ratio: f64) -> VarId {
        if let Some(&v) = memo.get(s) {
            return v;
        }
        let v = if s.len() == 1 {
            g.add_rule(vec![Symbol::Term(s[0])])
        } else {
            let k = ((s.len() as f64 * ratio) as usize).clamp(1, s.len() - 1);
            let b = go(g, memo, &s[..k], ratio);
            let c = go(g, memo, &s[k..], ratio);
            g.add_rule(vec![Symbol::Var(b), Symbol::Var(c)])
        };
        memo.insert(s, v);
        v
    }
    let start = go(&mut g, &mut memo, s, ratio);
    g.start = Some(start);
    distinct_children(&g)
}

/// Random weight-balanced grammar over `sigma` symbols for a string of
/// length `n` with repeats.
pub fn random_balanced_slp<R: Rng>(rng: &mut R, n: usize, sigma: usize, ratio: f64) -> Slp {
    let s = crate::gen::repetitive_string(rng, n, sigma);
    weight_balanced_slp(Alphabet::unit(sigma), &s, ratio)
}

/// Samples `samples` random root-to-leaf paths below random variables and
/// checks their lengths against `p`, allowing two rules of slack for the
/// rounding at each split.
pub fn spot_check_path_balance<R: Rng>(rng: &mut R, g: &Slp, p: PathBalanceParams, samples: usize) -> Result<bool> {
    let m = g.metrics()?;
    let nv = g.num_vars();
    if nv == 0 {
        return Ok(true);
    }
    for _ in 0..samples {
        let a = VarId(rng.gen_range(0..nv) as u32);
        let mut x = a;
        let mut len = 0u64;
        while let [Symbol::Var(b), Symbol::Var(c)] = *g.rule(x) {
            x = if rng.gen_bool(0.5) { b } else { c };
            len += 1;
        }
        let lg = (m.len[a.idx()] as f64).log2();
        if (len as f64) < p.alpha * lg - 2.0 || (len as f64) > p.beta * lg + 2.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::rng;

    #[test]
    fn balanced_grammar_derives_input() {
        let mut r = rng(5);
        for ratio in [0.5, 0.4, 0.3] {
            let s = crate::gen::repetitive_string(&mut r, 3000, 3);
            let g = weight_balanced_slp(Alphabet::unit(3), &s, ratio);
            assert!(g.is_cnf());
            assert_eq!(g.eval(g.start.unwrap(), 10_000).unwrap(), s);
            let p = PathBalanceParams::for_ratio(ratio);
            assert!(spot_check_path_balance(&mut r, &g, p, 500).unwrap());
        }
    }

    #[test]
    fn params_validate() {
        assert!(PathBalanceParams::new(0.0, 1.0).is_err());
        assert!(PathBalanceParams::new(2.0, 1.0).is_err());
        let p = PathBalanceParams::for_ratio(0.5);
        assert!((p.alpha - 1.0).abs() < 1e-9 && (p.beta - 1.0).abs() < 1e-9);
    }
}
