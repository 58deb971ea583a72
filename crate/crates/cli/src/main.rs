use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cslp_core::finger::{fringe_grammar, parse_finger_script, run_finger_script, ScriptRow, SkewForestSet};
use cslp_core::fslp::{parse_fslp, parse_nav_script, random_fslp, run_nav_script, write_fslp, FslpNav, NavRow};
use cslp_core::gen::{random_slp, random_tree, rng, SlpParams, TreeShape};
use cslp_core::grammar::{gen_lower_bound, is_contracting, parse_slp, write_slp, Alphabet, Slp};
use cslp_core::prefix::write_tree;
use cslp_core::{make_contracting, Error};

mod selftest;

#[derive(Parser)]
#[command(name = "cslp", version, about = "Contracting SLPs, finger search and FSLP navigation")]
struct Cli {
    /// Largest decompressed length any command will expand.
    #[arg(long, global = true, default_value_t = 1 << 26)]
    max_len: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite an SLP into a contracting one of linear size.
    Balance {
        input: PathBuf,
        output: PathBuf,
        /// Decompress every variable of both grammars and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Print size, height and the contracting property.
    Stats { input: PathBuf },
    /// Print the i-th symbol (1-based) of a variable.
    Access { input: PathBuf, var: String, i: u64 },
    /// Run a finger script; CSV `op,i,d,steps` on stdout.
    Finger {
        input: PathBuf,
        script: PathBuf,
        /// Number of skew forests.
        #[arg(long, default_value_t = 3)]
        t: usize,
    },
    /// Run a navigation script on an FSLP; CSV `op,result,steps` on stdout.
    Fslp { input: PathBuf, script: PathBuf },
    /// Write the quadratic-prefix-grammar family for parameter n.
    GenLb {
        n: usize,
        /// Two-letter variant.
        #[arg(long)]
        binary: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a seeded random SLP, FSLP or labeled tree.
    GenRandom {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Slp)]
        format: Format,
        /// Number of variables (SLP, FSLP) or edges (tree).
        #[arg(long, default_value_t = 50)]
        size: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the oracle suites at reduced scale.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Slp,
    Fslp,
    Tree,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_slp(path: &Path) -> Result<Slp> {
    parse_slp(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn slp_stats(g: &Slp) -> Result<String> {
    let m = g.metrics()?;
    let len = g.start.map_or(0, |s| m.len[s.idx()]);
    Ok(format!(
        "vars={} rhs_max={} height={} contracting={} size={} len={}",
        g.num_vars(),
        g.max_rhs_len(),
        m.max_height(),
        is_contracting(g)?,
        g.size(),
        len
    ))
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Balance { input, output, verify } => {
            let g = load_slp(&input)?;
            let c = make_contracting(&g)?;
            let mut out = c.slp.clone();
            out.start = g.start.and_then(|s| c.repr[s.idx()]);
            if verify {
                for v in g.vars() {
                    let want = g.eval(v, cli.max_len)?;
                    let got = match c.repr[v.idx()] {
                        Some(r) => out.eval(r, cli.max_len)?,
                        None => Vec::new(),
                    };
                    if want != got {
                        bail!("variable {} changed its string", g.display_var(v));
                    }
                }
            }
            fs::write(&output, write_slp(&out)).with_context(|| format!("cannot write {}", output.display()))?;
            println!("{}", slp_stats(&out)?);
        }
        Cmd::Stats { input } => {
            let src = read(&input)?;
            if src.trim_start().starts_with("fslp") {
                let g = parse_fslp(&src).with_context(|| format!("in {}", input.display()))?;
                let sizes = g.sizes()?;
                let nodes = g.start.map_or(0, |s| sizes[s]);
                println!("vars={} size={} nodes={}", g.num_vars(), g.size(), nodes);
            } else {
                let g = parse_slp(&src).with_context(|| format!("in {}", input.display()))?;
                println!("{}", slp_stats(&g)?);
            }
        }
        Cmd::Access { input, var, i } => {
            let g = load_slp(&input)?;
            let v = g.resolve_var(&var).ok_or_else(|| Error::UnknownSymbol(var.clone()))?;
            let c = make_contracting(&g)?;
            let (sym, steps) = c.access(v, i)?;
            println!("{}", g.alphabet.name(sym));
            println!("steps={steps}");
        }
        Cmd::Finger { input, script, t } => {
            if t == 0 {
                bail!("--t must be at least 1");
            }
            let g = load_slp(&input)?;
            let ops = parse_finger_script(&read(&script)?).with_context(|| format!("in {}", script.display()))?;
            let sf = SkewForestSet::preprocess(&fringe_grammar(&g)?, t)?;
            let rows = run_finger_script(&sf, &ops)?;
            println!("{}", ScriptRow::CSV_HEADER);
            for r in rows {
                println!("{}", r.csv());
            }
        }
        Cmd::Fslp { input, script } => {
            let g = parse_fslp(&read(&input)?).with_context(|| format!("in {}", input.display()))?;
            let ops = parse_nav_script(&read(&script)?).with_context(|| format!("in {}", script.display()))?;
            let nav = FslpNav::new(g)?;
            let rows = run_nav_script(&nav, &ops)?;
            println!("{}", NavRow::CSV_HEADER);
            for r in rows {
                println!("{}", r.csv());
            }
        }
        Cmd::GenLb { n, binary, output } => {
            if n == 0 {
                bail!("n must be positive");
            }
            emit(&output, &write_slp(&gen_lower_bound(n, binary)))?;
        }
        Cmd::GenRandom { seed, format, size, output } => {
            let mut r = rng(seed);
            let size = size.max(1);
            let text = match format {
                Format::Slp => write_slp(&random_slp(&mut r, SlpParams { vars: size, max_len: cli.max_len, ..Default::default() })),
                Format::Fslp => write_fslp(&random_fslp(&mut r, size, 3, cli.max_len)),
                Format::Tree => write_tree(&random_tree(&mut r, &Alphabet::unit(3), size, TreeShape::Recursive, 3, 0.1)),
            };
            emit(&output, &text)?;
        }
        Cmd::Selftest { seed } => selftest::run(seed, cli.max_len)?,
    }
    Ok(())
}

/// Exit status 2 for resource limits, 1 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::OutputTooLarge { .. }
            | Error::Overflow(_)
            | Error::CapacityExceeded(_)
            | Error::TreeTooLarge { .. }
            | Error::HeightTooLarge { .. },
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
