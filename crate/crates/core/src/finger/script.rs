use crate::error::{Error, Result};

use super::forests::SkewForestSet;
use super::state::FingerState;

/// One line of a finger script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FingerOp {
    Set(u64),
    Move(u64),
    Access(u64),
    /// Checks the symbol reported by the previous operation.
    Expect(String),
}

/// Parses `set <i>`, `move <i>`, `access <i>` and `expect <symbol>` lines;
/// blank lines and `#` comments are skipped.
pub fn parse_finger_script(src: &str) -> Result<Vec<FingerOp>> {
    let mut ops = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: k + 1, msg };
        let mut parts = line.split_whitespace();
        let op = parts.next().unwrap();
        let arg = parts.next().ok_or_else(|| err(format!("`{op}` needs an argument")))?;
        if parts.next().is_some() {
            return Err(err(format!("trailing input after `{op} {arg}`")));
        }
        let num = || arg.parse::<u64>().map_err(|_| err(format!("bad position `{arg}`")));
        ops.push(match op {
            "set" => FingerOp::Set(num()?),
            "move" => FingerOp::Move(num()?),
            "access" => FingerOp::Access(num()?),
            "expect" => FingerOp::Expect(arg.to_string()),
            _ => return Err(err(format!("unknown operation `{op}`"))),
        });
    }
    Ok(ops)
}

/// One executed operation: name, position, distance to the finger before
/// the operation (0 for the first `set`), steps and the symbol found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptRow {
    pub op: &'static str,
    pub i: u64,
    pub d: u64,
    pub steps: u64,
    pub symbol: String,
}

impl ScriptRow {
    pub const CSV_HEADER: &'static str = "op,i,d,steps";

    pub fn csv(&self) -> String {
        format!("{},{},{},{}", self.op, self.i, self.d, self.steps)
    }
}

/// Runs `ops` on a fresh finger over the start variable of `sf`.
pub fn run_finger_script(sf: &SkewForestSet, ops: &[FingerOp]) -> Result<Vec<ScriptRow>> {
    let mut fs = FingerState::new(sf)?;
    let mut rows: Vec<ScriptRow> = Vec::new();
    let alphabet = &sf.grammar().alphabet;
    for op in ops {
        let d = |i: u64| fs.finger().map_or(0, |f| f.abs_diff(i));
        let (name, i, dist, out) = match *op {
            FingerOp::Set(i) => ("set", i, d(i), fs.setfinger(sf, i)?),
            FingerOp::Move(i) => ("move", i, d(i), fs.movefinger(sf, i)?),
            FingerOp::Access(i) => ("access", i, d(i), fs.access(sf, i)?),
            FingerOp::Expect(ref want) => {
                let got = rows.last().map(|r| r.symbol.clone()).unwrap_or_default();
                if &got != want {
                    return Err(Error::ExpectationFailed { expected: want.clone(), got });
                }
                continue;
            }
        };
        rows.push(ScriptRow { op: name, i, d: dist, steps: out.steps, symbol: alphabet.name(out.symbol).into_owned() });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reports_lines() {
        let ops = parse_finger_script("set 3\n# note\n\nmove 1 # back\naccess 2\nexpect a\n").unwrap();
        assert_eq!(ops, vec![FingerOp::Set(3), FingerOp::Move(1), FingerOp::Access(2), FingerOp::Expect("a".into())]);
        assert_eq!(parse_finger_script("set 1\njump 2").unwrap_err(), Error::Parse { line: 2, msg: "unknown operation `jump`".into() });
        assert!(matches!(parse_finger_script("set x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_finger_script("move"), Err(Error::Parse { line: 1, .. })));
    }
}
