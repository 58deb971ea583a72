use super::slp::{Alphabet, Slp, Symbol, TermId, VarId};

/// SLP of size `O(n)` for the witness family whose path-balanced SLPs
/// need size `Ω(n²)`.
///
/// Unary variant (`binary = false`): `b_1 a^{2^n} b_2 … a^{2^n} b_n` over
/// `{a, b_1, …, b_n}`. Binary variant: `T_1 a^{2^n} T_2 … T_n` over
/// `{a, b}` with `T_i = b a^{2i-2} b a^{2i-1} b`.
pub fn gen_lower_bound(n: usize, binary: bool) -> Slp {
    assert!(n >= 1, "n must be positive");
    let mut names = vec!["a".to_string()];
    if binary {
        names.push("b".to_string());
    } else {
        names.extend((1..=n).map(|i| format!("b{i}")));
    }
    let k = names.len();
    let mut g = Slp::new(Alphabet::named(names, vec![1; k]));
    let a = Symbol::Term(TermId(0));

    let mut pow = g.add_named_rule("A0", vec![a]);
    for i in 1..=n {
        pow = g.add_named_rule(format!("A{i}"), vec![Symbol::Var(pow), Symbol::Var(pow)]);
    }

    let mut rhs = Vec::new();
    if binary {
        let b = Symbol::Term(TermId(1));
        // runs[k] derives a^k for 1 <= k <= 2n-1
        let mut runs: Vec<Option<VarId>> = vec![None];
        for k in 1..2 * n {
            let r = if k == 1 {
                g.add_named_rule("R1", vec![a])
            } else {
                let prev = runs[k - 1].unwrap();
                g.add_named_rule(format!("R{k}"), vec![Symbol::Var(prev), a])
            };
            runs.push(Some(r));
        }
        for i in 1..=n {
            let mut t = vec![b];
            t.extend(runs[2 * i - 2].map(Symbol::Var));
            t.push(b);
            t.extend(runs[2 * i - 1].map(Symbol::Var));
            t.push(b);
            let ti = g.add_named_rule(format!("T{i}"), t);
            if i > 1 {
                rhs.push(Symbol::Var(pow));
            }
            rhs.push(Symbol::Var(ti));
        }
    } else {
        for i in 1..=n {
            if i > 1 {
                rhs.push(Symbol::Var(pow));
            }
            rhs.push(Symbol::Term(TermId(i as u32)));
        }
    }
    let s = g.add_named_rule("S", rhs);
    g.start = Some(s);
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unary_n2() {
        let g = gen_lower_bound(2, false);
        let s = g.start.unwrap();
        let names: Vec<String> = g
            .eval(s, 100)
            .unwrap()
            .into_iter()
            .map(|t| g.alphabet.name(t).into_owned())
            .collect();
        assert_eq!(names, ["b1", "a", "a", "a", "a", "b2"]);
        let m = g.metrics().unwrap();
        assert_eq!(m.len[s.idx()], 6);
        assert_eq!(m.height[s.idx()], 4);
        assert_eq!(m.height[g.lookup_var("A0").unwrap().idx()], 1);
    }

    #[test]
    fn binary_first_separator() {
        let g = gen_lower_bound(1, true);
        assert_eq!(g.eval_string(g.start.unwrap(), 100).unwrap(), "bbab");
        let g = gen_lower_bound(2, true);
        let want = format!("bbab{}baabaaab", "a".repeat(4));
        assert_eq!(g.eval_string(g.start.unwrap(), 100).unwrap(), want);
    }
}
