//! Line-based `slp v1` text format.
//!
//! ```text
//! slp v1
//! terminal a weight 2
//! terminal b
//! rule S -> A b
//! rule A -> a a
//! start S
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::slp::{Alphabet, Slp, Symbol, TermId, VarId};

pub(crate) fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses the `slp v1` format and validates the result.
pub fn parse_slp(src: &str) -> Result<Slp> {
    let mut header = false;
    let mut term_names: Vec<String> = Vec::new();
    let mut term_weights: Vec<u64> = Vec::new();
    let mut term_index: HashMap<String, TermId> = HashMap::new();
    let mut rules: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut start: Option<(usize, String)> = None;

    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if !header {
            if toks != ["slp", "v1"] {
                return Err(perr(line, "expected header `slp v1`"));
            }
            header = true;
            continue;
        }
        match toks[0] {
            "terminal" => {
                let (name, weight) = match toks.as_slice() {
                    [_, n] => (*n, 1),
                    [_, n, "weight", w] => {
                        let w: u64 = w.parse().map_err(|_| perr(line, format!("bad weight `{w}`")))?;
                        (*n, w)
                    }
                    _ => return Err(perr(line, "expected `terminal <name> [weight <w>]`")),
                };
                if !valid_name(name) {
                    return Err(perr(line, format!("invalid name `{name}`")));
                }
                if weight == 0 {
                    return Err(Error::NonPositiveWeight(format!("{name} (line {line})")));
                }
                if term_index.contains_key(name) {
                    return Err(Error::Redefinition(format!("terminal {name} (line {line})")));
                }
                term_index.insert(name.to_string(), TermId(term_names.len() as u32));
                term_names.push(name.to_string());
                term_weights.push(weight);
            }
            "rule" => {
                if toks.len() < 3 || toks[2] != "->" {
                    return Err(perr(line, "expected `rule <name> -> <symbols>`"));
                }
                let lhs = toks[1];
                if !valid_name(lhs) {
                    return Err(perr(line, format!("invalid name `{lhs}`")));
                }
                let mut rhs = Vec::new();
                for &s in &toks[3..] {
                    if !valid_name(s) {
                        return Err(perr(line, format!("invalid name `{s}`")));
                    }
                    rhs.push(s.to_string());
                }
                rules.push((line, lhs.to_string(), rhs));
            }
            "start" => {
                if toks.len() != 2 {
                    return Err(perr(line, "expected `start <name>`"));
                }
                if start.is_some() {
                    return Err(Error::Redefinition(format!("start (line {line})")));
                }
                start = Some((line, toks[1].to_string()));
            }
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(perr(1, "missing header `slp v1`"));
    }

    let mut var_index: HashMap<&str, VarId> = HashMap::new();
    for (i, (line, lhs, _)) in rules.iter().enumerate() {
        if term_index.contains_key(lhs.as_str()) {
            return Err(Error::Redefinition(format!("{lhs} is a terminal (line {line})")));
        }
        if var_index.insert(lhs.as_str(), VarId(i as u32)).is_some() {
            return Err(Error::Redefinition(format!("{lhs} (line {line})")));
        }
    }
    let mut slp = Slp::new(Alphabet::named(term_names, term_weights));
    for (line, lhs, rhs) in &rules {
        let mut out = Vec::with_capacity(rhs.len());
        for s in rhs {
            if let Some(&t) = term_index.get(s.as_str()) {
                out.push(Symbol::Term(t));
            } else if let Some(&v) = var_index.get(s.as_str()) {
                out.push(Symbol::Var(v));
            } else {
                return Err(Error::UnknownSymbol(format!("{s} (line {line})")));
            }
        }
        slp.add_named_rule(lhs.clone(), out);
    }
    if let Some((line, s)) = start {
        match var_index.get(s.as_str()) {
            Some(&v) => slp.start = Some(v),
            None => return Err(Error::UnknownSymbol(format!("start {s} (line {line})"))),
        }
    }
    slp.validate()?;
    Ok(slp)
}

/// Unique printable names for all terminals and variables of `slp`.
pub(crate) fn print_names(slp: &Slp) -> (Vec<String>, Vec<String>) {
    let mut used: HashSet<String> = HashSet::new();
    let fresh = |base: String, used: &mut HashSet<String>| {
        let mut n = base;
        while !valid_name(&n) || used.contains(&n) {
            n.push('_');
            if !valid_name(&n) {
                n = n.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
            }
        }
        used.insert(n.clone());
        n
    };
    let terms: Vec<String> = (0..slp.alphabet.len())
        .map(|t| fresh(slp.alphabet.name(TermId(t as u32)).into_owned(), &mut used))
        .collect();
    let vars: Vec<String> = slp
        .vars()
        .map(|v| fresh(slp.display_var(v), &mut used))
        .collect();
    (terms, vars)
}

/// Writes `slp` in the `slp v1` format. Rules are emitted children first.
pub fn write_slp(slp: &Slp) -> String {
    let (terms, vars) = print_names(slp);
    let order = slp.topo_order().unwrap_or_else(|_| slp.vars().collect());
    let mut out = String::from("slp v1\n");
    for (t, name) in terms.iter().enumerate() {
        let w = slp.alphabet.weight(TermId(t as u32));
        if w == 1 {
            let _ = writeln!(out, "terminal {name}");
        } else {
            let _ = writeln!(out, "terminal {name} weight {w}");
        }
    }
    for v in order {
        let _ = write!(out, "rule {} ->", vars[v.idx()]);
        for &s in slp.rule(v) {
            let n = match s {
                Symbol::Term(t) => &terms[t.idx()],
                Symbol::Var(w) => &vars[w.idx()],
            };
            let _ = write!(out, " {n}");
        }
        out.push('\n');
    }
    if let Some(s) = slp.start {
        let _ = writeln!(out, "start {}", vars[s.idx()]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ABC: &str = "slp v1\nterminal a\nterminal b\nterminal c weight 3\nrule S -> A B\nrule A -> a\nrule B -> b c\nstart S\n";

    #[test]
    fn parse_and_eval() {
        let g = parse_slp(ABC).unwrap();
        assert_eq!(g.eval_string(g.start.unwrap(), 10).unwrap(), "abc");
        let m = g.metrics().unwrap();
        assert_eq!(m.weight[g.start.unwrap().idx()], 5);
    }

    #[test]
    fn round_trip() {
        let g = parse_slp(ABC).unwrap();
        let h = parse_slp(&write_slp(&g)).unwrap();
        assert_eq!(write_slp(&g), write_slp(&h));
        assert_eq!(h.eval_string(h.start.unwrap(), 10).unwrap(), "abc");
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(
            parse_slp("slp v1\nterminal a\nrule S -> S a\n"),
            Err(Error::CyclicGrammar(_))
        ));
        assert!(matches!(
            parse_slp("slp v1\nrule S -> A\n"),
            Err(Error::UnknownSymbol(m)) if m.contains("line 2")
        ));
        assert!(matches!(
            parse_slp("slp v1\nterminal a\nrule S -> a\nrule S -> a a\n"),
            Err(Error::Redefinition(_))
        ));
        assert!(matches!(parse_slp("slp v1\nrule S => a\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_slp("terminal a\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_slp("slp v1\nterminal a weight 0\n"),
            Err(Error::NonPositiveWeight(_))
        ));
    }

    #[test]
    fn unnamed_grammar_writes_valid_names() {
        let g = Slp::from_rules(
            Alphabet::unit(2),
            vec![vec![Symbol::Term(TermId(0)), Symbol::Term(TermId(1))], vec![]],
            None,
        );
        let h = parse_slp(&write_slp(&g)).unwrap();
        assert_eq!(h.eval(VarId(0), 10).unwrap(), vec![TermId(0), TermId(1)]);
    }
}
