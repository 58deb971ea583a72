use crate::error::{Error, Result};

use super::nav::{FslpNav, Move, Tau};

/// One line of a navigation script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NavOp {
    /// Root of the first tree of the named variable, or of the start.
    RootFirst(Option<String>),
    RootLast(Option<String>),
    Move(Move),
    Symbol,
    Degree,
    /// Checks the result of the previous operation.
    Expect(String),
}

/// Parses `root-first [var]`, `root-last [var]`, `parent`, `child <j>`,
/// `first-child`, `last-child`, `left`, `right`, `symbol`, `degree` and
/// `expect <token>`; blank lines and `#` comments are skipped.
pub fn parse_nav_script(src: &str) -> Result<Vec<NavOp>> {
    let mut ops = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: k + 1, msg };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let op = match parts.as_slice() {
            ["root-first"] => NavOp::RootFirst(None),
            ["root-first", v] => NavOp::RootFirst(Some(v.to_string())),
            ["root-last"] => NavOp::RootLast(None),
            ["root-last", v] => NavOp::RootLast(Some(v.to_string())),
            ["parent"] => NavOp::Move(Move::Parent),
            ["first-child"] => NavOp::Move(Move::FirstChild),
            ["last-child"] => NavOp::Move(Move::LastChild),
            ["left"] => NavOp::Move(Move::Left),
            ["right"] => NavOp::Move(Move::Right),
            ["child", j] => NavOp::Move(Move::Child(j.parse().map_err(|_| err(format!("bad child index `{j}`")))?)),
            ["symbol"] => NavOp::Symbol,
            ["degree"] => NavOp::Degree,
            ["expect", tok] => NavOp::Expect(tok.to_string()),
            _ => return Err(err(format!("cannot parse `{line}`"))),
        };
        ops.push(op);
    }
    Ok(ops)
}

/// One executed operation. `result` is the label reached (or asked for),
/// the degree, or `none` when the target does not exist; the cursor then
/// stays where it was.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NavRow {
    pub op: String,
    pub result: String,
    pub steps: u64,
}

impl NavRow {
    pub const CSV_HEADER: &'static str = "op,result,steps";

    pub fn csv(&self) -> String {
        format!("{},{},{}", self.op, self.result, self.steps)
    }
}

fn op_name(m: Move) -> String {
    match m {
        Move::Parent => "parent".into(),
        Move::FirstChild => "first-child".into(),
        Move::LastChild => "last-child".into(),
        Move::Left => "left".into(),
        Move::Right => "right".into(),
        Move::Child(j) => format!("child {j}"),
    }
}

/// Runs `ops` against `nav`, starting without a cursor.
pub fn run_nav_script(nav: &FslpNav, ops: &[NavOp]) -> Result<Vec<NavRow>> {
    let g = nav.grammar();
    let mut cur: Option<Tau> = None;
    let mut rows: Vec<NavRow> = Vec::new();
    let var = |name: &Option<String>| -> Result<usize> {
        match name {
            Some(n) => g.lookup(n).ok_or_else(|| Error::UnknownSymbol(n.clone())),
            None => g.start.ok_or(Error::NoStart),
        }
    };
    for op in ops {
        let need = || cur.clone().ok_or(Error::FingerNotSet);
        let (name, result, steps) = match op {
            NavOp::RootFirst(v) | NavOp::RootLast(v) => {
                let a = var(v)?;
                let first = matches!(op, NavOp::RootFirst(_));
                let t = if first { nav.root_first(a)? } else { nav.root_last(a)? };
                let name = if first { "root-first" } else { "root-last" };
                let res = t.as_ref().map_or("none".to_string(), |t| nav.symbol_name(t).to_string());
                if t.is_some() {
                    cur = t;
                }
                (name.to_string(), res, 1)
            }
            NavOp::Move(m) => {
                let (t, w) = nav.step(&need()?, *m);
                let res = t.as_ref().map_or("none".to_string(), |t| nav.symbol_name(t).to_string());
                if t.is_some() {
                    cur = t;
                }
                (op_name(*m), res, w.steps)
            }
            NavOp::Symbol => ("symbol".into(), nav.symbol_name(&need()?).to_string(), 0),
            NavOp::Degree => ("degree".into(), nav.degree(&need()?).to_string(), 0),
            NavOp::Expect(want) => {
                let got = rows.last().map(|r| r.result.clone()).unwrap_or_default();
                if &got != want {
                    return Err(Error::ExpectationFailed { expected: want.clone(), got });
                }
                continue;
            }
        };
        rows.push(NavRow { op: name, result, steps });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::super::grammar::example_fslp;
    use super::*;

    #[test]
    fn script_walks_example() {
        let nav = FslpNav::new(example_fslp()).unwrap();
        let ops = parse_nav_script(
            "root-first\nexpect a\ndegree\nexpect 2\nchild 2\nexpect b\nchild 2 # inner\nlast-child\nexpect c\nright\nexpect none\nparent\nparent\nleft\nexpect b\nsymbol\n",
        )
        .unwrap();
        let rows = run_nav_script(&nav, &ops).unwrap();
        assert_eq!(rows.last().unwrap().result, "b");
        let bad = parse_nav_script("root-first\nexpect c\n").unwrap();
        assert!(matches!(run_nav_script(&nav, &bad), Err(Error::ExpectationFailed { .. })));
        assert!(matches!(parse_nav_script("child x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_nav_script("jump"), Err(Error::Parse { line: 1, .. })));
        let noroot = parse_nav_script("parent").unwrap();
        assert!(matches!(run_nav_script(&nav, &noroot), Err(Error::FingerNotSet)));
    }
}
