use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cslp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cslp")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const EXAMPLE_FSLP: &str = "fslp v1
class A bot
class B top
class C bot
class D bot
class E top
class X ctx
class Y ctx
rule A -> a ( B )
rule B -> C C
rule C -> X < D >
rule D -> c ( E )
rule X -> Y < Y >
rule Y -> b ( D x D )
rule E -> eps
start A
";

#[test]
fn lower_bound_then_access() {
    let d = tempfile::tempdir().unwrap();
    assert!(cslp(&["gen-lb", "2", "-o", "lb.slp"], d.path()).status.success());
    let o = cslp(&["access", "lb.slp", "S", "3"], d.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("a"));
}

#[test]
fn balance_reports_contracting() {
    let d = tempfile::tempdir().unwrap();
    assert!(cslp(&["gen-lb", "10", "-o", "lb.slp"], d.path()).status.success());
    let o = cslp(&["balance", "lb.slp", "out.slp", "--verify"], d.path());
    assert!(o.status.success());
    let line = stdout(&o);
    let keys: Vec<&str> = line.split_whitespace().map(|kv| kv.split('=').next().unwrap()).collect();
    assert_eq!(keys[..4], ["vars", "rhs_max", "height", "contracting"]);
    assert!(line.contains("contracting=true"));
    let s = cslp(&["stats", "out.slp"], d.path());
    assert!(stdout(&s).contains("contracting=true"));
}

#[test]
fn fslp_script_reaches_second_child() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("g.fslp"), EXAMPLE_FSLP).unwrap();
    fs::write(d.path().join("nav.txt"), "root-first\nchild 2\nsymbol\nexpect b\ndegree\nexpect 3\n").unwrap();
    let o = cslp(&["fslp", "g.fslp", "nav.txt"], d.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "op,result,steps");
    assert!(lines[3].starts_with("symbol,b,"));
}

#[test]
fn finger_csv_schema() {
    let d = tempfile::tempdir().unwrap();
    assert!(cslp(&["gen-lb", "6", "-o", "lb.slp"], d.path()).status.success());
    fs::write(d.path().join("f.txt"), "set 1\nmove 20\naccess 19\nmove 2\n").unwrap();
    let o = cslp(&["finger", "lb.slp", "f.txt", "--t", "2"], d.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "op,i,d,steps");
    assert_eq!(lines.len(), 5);
    assert!(lines[2].starts_with("move,20,19,"));
    assert!(lines[3].starts_with("access,19,1,"));
}

#[test]
fn parse_errors_exit_one_with_line() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("bad.slp"), "slp v1\nterminal a\nrule S -> a q\n").unwrap();
    let o = cslp(&["stats", "bad.slp"], d.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    fs::write(d.path().join("bad.fslp"), "fslp v1\nclass A bot\nrule A -> eps\n").unwrap();
    assert_eq!(cslp(&["stats", "bad.fslp"], d.path()).status.code(), Some(1));
}

#[test]
fn resource_limits_exit_two() {
    let d = tempfile::tempdir().unwrap();
    assert!(cslp(&["gen-lb", "10", "-o", "lb.slp"], d.path()).status.success());
    let o = cslp(&["balance", "lb.slp", "out.slp", "--verify", "--max-len", "10"], d.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generators_are_deterministic_and_round_trip() {
    let d = tempfile::tempdir().unwrap();
    for fmt in ["slp", "fslp", "tree"] {
        let a = cslp(&["gen-random", "--seed", "7", "--format", fmt, "--size", "40"], d.path());
        let b = cslp(&["gen-random", "--seed", "7", "--format", fmt, "--size", "40"], d.path());
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        let text = stdout(&a);
        match fmt {
            "slp" => assert_eq!(cslp_core::grammar::write_slp(&cslp_core::grammar::parse_slp(&text).unwrap()), text),
            "fslp" => assert_eq!(cslp_core::fslp::write_fslp(&cslp_core::fslp::parse_fslp(&text).unwrap()), text),
            _ => assert_eq!(cslp_core::prefix::write_tree(&cslp_core::prefix::parse_tree(&text).unwrap()), text),
        }
    }
}

#[test]
fn selftest_passes() {
    let d = tempfile::tempdir().unwrap();
    let o = cslp(&["selftest"], d.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("ok ")).count(), 5);
}
