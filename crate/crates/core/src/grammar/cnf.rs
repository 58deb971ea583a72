use crate::error::{Error, Result};

use super::slp::{Slp, Symbol, VarId};

/// Options for [`to_cnf`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CnfOptions {
    /// Drop variables deriving the empty string instead of rejecting them.
    pub eliminate_epsilon: bool,
}

/// A grammar in Chomsky normal form together with the variable that
/// derives each original variable's string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub slp: Slp,
    /// `repr[A]` derives `val(A)`; `None` exactly for variables deriving ε.
    pub repr: Vec<Option<VarId>>,
}

/// Converts a valid SLP into Chomsky normal form.
///
/// Right-hand sides of length `k > 2` become a right-nested chain of
/// `k - 1` binary rules, each terminal gets one rule `X_a -> a`, and unit
/// rules become aliases.
pub fn to_cnf(slp: &Slp, opts: CnfOptions) -> Result<Cnf> {
    let m = slp.metrics()?;
    if !opts.eliminate_epsilon {
        if let Some(v) = slp.vars().find(|v| m.len[v.idx()] == 0) {
            return Err(Error::EpsilonDerivation(slp.display_var(v)));
        }
    }
    let mut out = Slp::new(slp.alphabet.clone());
    let mut term_var: Vec<Option<VarId>> = vec![None; slp.alphabet.len()];
    let mut repr: Vec<Option<VarId>> = vec![None; slp.num_vars()];
    let mut seq: Vec<VarId> = Vec::new();
    for &v in &m.topo_order {
        seq.clear();
        for &s in slp.rule(v) {
            match s {
                Symbol::Term(t) => {
                    let x = *term_var[t.idx()].get_or_insert_with(|| {
                        let x = out.add_rule(vec![Symbol::Term(t)]);
                        if slp.alphabet.is_named() {
                            out.set_name(x, format!("X_{}", slp.alphabet.name(t)));
                        }
                        x
                    });
                    seq.push(x);
                }
                Symbol::Var(w) => {
                    if let Some(r) = repr[w.idx()] {
                        seq.push(r);
                    }
                }
            }
        }
        let r = match seq.len() {
            0 => None,
            1 => Some(seq[0]),
            k => {
                let mut cur = seq[k - 1];
                for i in (0..k - 1).rev() {
                    cur = out.add_rule(vec![Symbol::Var(seq[i]), Symbol::Var(cur)]);
                }
                if let Some(name) = slp.var_name(v) {
                    if out.var_name(cur).is_none() {
                        out.set_name(cur, name);
                    }
                }
                Some(cur)
            }
        };
        repr[v.idx()] = r;
    }
    out.start = slp.start.and_then(|s| repr[s.idx()]);
    Ok(Cnf { slp: out, repr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{Alphabet, TermId};

    fn t(i: u32) -> Symbol {
        Symbol::Term(TermId(i))
    }

    #[test]
    fn long_rule_is_chained() {
        let g = Slp::from_rules(Alphabet::unit(3), vec![vec![t(0), t(1), t(2)]], Some(VarId(0)));
        let c = to_cnf(&g, CnfOptions::default()).unwrap();
        assert!(c.slp.is_cnf());
        let s = c.repr[0].unwrap();
        assert_eq!(c.slp.eval(s, 10).unwrap(), vec![TermId(0), TermId(1), TermId(2)]);
        assert_eq!(c.slp.num_vars(), 5);
    }

    #[test]
    fn unit_rule_aliases() {
        // S -> A, A -> ab
        let g = Slp::from_rules(
            Alphabet::unit(2),
            vec![vec![Symbol::Var(VarId(1))], vec![t(0), t(1)]],
            Some(VarId(0)),
        );
        let c = to_cnf(&g, CnfOptions::default()).unwrap();
        assert_eq!(c.repr[0], c.repr[1]);
        assert_eq!(c.slp.eval(c.repr[0].unwrap(), 10).unwrap().len(), 2);
    }

    #[test]
    fn epsilon_rejected_or_eliminated() {
        let g = Slp::from_rules(
            Alphabet::unit(1),
            vec![vec![Symbol::Var(VarId(1)), t(0), t(0)], vec![]],
            Some(VarId(0)),
        );
        assert!(matches!(
            to_cnf(&g, CnfOptions::default()),
            Err(Error::EpsilonDerivation(_))
        ));
        let c = to_cnf(&g, CnfOptions { eliminate_epsilon: true }).unwrap();
        assert_eq!(c.repr[1], None);
        assert!(c.slp.is_cnf());
        assert_eq!(c.slp.eval(c.repr[0].unwrap(), 10).unwrap(), vec![TermId(0); 2]);
    }
}
