use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Variable classes of the normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarClass {
    /// Forest variable (any number of trees).
    Top,
    /// Tree variable (exactly one tree).
    Bot,
    /// Context variable.
    Ctx,
}

impl VarClass {
    pub fn is_forest(self) -> bool {
        self != VarClass::Ctx
    }

    fn keyword(self) -> &'static str {
        match self {
            VarClass::Top => "top",
            VarClass::Bot => "bot",
            VarClass::Ctx => "ctx",
        }
    }
}

/// Normal-form rules. Variables and labels are indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FRule {
    /// `A -> eps`
    Empty,
    /// `A -> B C`
    Concat(usize, usize),
    /// `A -> a(B)`
    Node(u32, usize),
    /// `A -> X<B>`
    Apply(usize, usize),
    /// `X -> Y<Z>`
    Compose(usize, usize),
    /// `X -> a(L x R)`
    CtxNode(u32, usize, usize),
}

/// A forest straight-line program in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fslp {
    labels: Vec<String>,
    names: Vec<String>,
    class: Vec<VarClass>,
    rules: Vec<FRule>,
    pub start: Option<usize>,
}

/// Ordered tree with labels from the grammar's alphabet. The label
/// [`HOLE`] marks the parameter of a context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    pub label: u32,
    pub children: Vec<Tree>,
}

/// Label of the parameter leaf `x` in evaluated contexts.
pub const HOLE: u32 = u32::MAX;

impl Tree {
    pub fn leaf(label: u32) -> Tree {
        Tree { label, children: Vec::new() }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }
}

impl Fslp {
    pub fn new() -> Self {
        Fslp::default()
    }

    /// Index of `name`, adding it to the alphabet if new.
    pub fn label(&mut self, name: &str) -> u32 {
        match self.labels.iter().position(|l| l == name) {
            Some(i) => i as u32,
            None => {
                self.labels.push(name.to_string());
                (self.labels.len() - 1) as u32
            }
        }
    }

    pub fn label_name(&self, a: u32) -> &str {
        if a == HOLE {
            "x"
        } else {
            &self.labels[a as usize]
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Adds a variable with the given rule; the rule is not checked here.
    pub fn add(&mut self, name: impl Into<String>, class: VarClass, rule: FRule) -> usize {
        self.names.push(name.into());
        self.class.push(class);
        self.rules.push(rule);
        self.rules.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.rules.len()
    }

    pub fn rule(&self, v: usize) -> FRule {
        self.rules[v]
    }

    pub fn class(&self, v: usize) -> VarClass {
        self.class[v]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Number of symbols on right-hand sides.
    pub fn size(&self) -> usize {
        self.rules
            .iter()
            .map(|r| match r {
                FRule::Empty => 0,
                FRule::Concat(..) | FRule::Apply(..) | FRule::Compose(..) | FRule::Node(..) => 2,
                FRule::CtxNode(..) => 3,
            })
            .sum()
    }

    fn children(r: FRule) -> Vec<usize> {
        match r {
            FRule::Empty => vec![],
            FRule::Node(_, b) => vec![b],
            FRule::Concat(b, c) | FRule::Apply(b, c) | FRule::Compose(b, c) | FRule::CtxNode(_, b, c) => vec![b, c],
        }
    }

    /// Checks rule shapes against variable classes and acyclicity. Returns
    /// the variables in an order where children come first.
    pub fn validate(&self) -> Result<Vec<usize>> {
        let n = self.num_vars();
        let cls = |v: usize| -> Result<VarClass> {
            self.class.get(v).copied().ok_or_else(|| Error::UnknownSymbol(format!("variable #{v}")))
        };
        for v in 0..n {
            let bad = |what: &str| Error::ShapeViolation(format!("{} ({}): {what}", self.names[v], self.class[v].keyword()));
            let ok = match (self.class[v], self.rules[v]) {
                (VarClass::Top, FRule::Empty) => true,
                (VarClass::Top, FRule::Concat(b, c)) => cls(b)?.is_forest() && cls(c)?.is_forest(),
                (VarClass::Bot, FRule::Node(a, b)) => (a as usize) < self.labels.len() && cls(b)?.is_forest(),
                (VarClass::Bot, FRule::Apply(x, b)) => cls(x)? == VarClass::Ctx && cls(b)? == VarClass::Bot,
                (VarClass::Ctx, FRule::Compose(y, z)) => cls(y)? == VarClass::Ctx && cls(z)? == VarClass::Ctx,
                (VarClass::Ctx, FRule::CtxNode(a, l, r)) => {
                    (a as usize) < self.labels.len() && cls(l)?.is_forest() && cls(r)?.is_forest()
                }
                _ => false,
            };
            if !ok {
                return Err(bad("rule shape does not fit the variable class"));
            }
        }
        if let Some(s) = self.start {
            if !cls(s)?.is_forest() {
                return Err(Error::ShapeViolation(format!("start {} is a context variable", self.names[s])));
            }
        }
        // Iterative DFS for a children-first order.
        let mut state = vec![0u8; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some(&mut (v, ref mut k)) = stack.last_mut() {
                let ch = Self::children(self.rules[v]);
                if *k < ch.len() {
                    let c = ch[*k];
                    *k += 1;
                    match state[c] {
                        0 => {
                            state[c] = 1;
                            stack.push((c, 0));
                        }
                        1 => return Err(Error::CyclicGrammar(self.names[c].clone())),
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    order.push(v);
                    stack.pop();
                }
            }
        }
        Ok(order)
    }

    /// Node counts of every variable's value (the parameter not counted).
    pub fn sizes(&self) -> Result<Vec<u64>> {
        let order = self.validate()?;
        let mut size = vec![0u64; self.num_vars()];
        for v in order {
            size[v] = match self.rules[v] {
                FRule::Empty => 0,
                FRule::Node(_, b) => size[b].saturating_add(1),
                FRule::CtxNode(_, l, r) => size[l].saturating_add(size[r]).saturating_add(1),
                FRule::Concat(b, c) | FRule::Apply(b, c) | FRule::Compose(b, c) => size[b].saturating_add(size[c]),
            };
        }
        Ok(size)
    }

    fn check_size(&self, v: usize, limit: u64) -> Result<()> {
        let len = self.sizes()?[v];
        if len > limit {
            return Err(Error::OutputTooLarge { len, limit });
        }
        Ok(())
    }

    /// The forest derived by forest variable `a`.
    pub fn eval_forest(&self, a: usize, limit: u64) -> Result<Vec<Tree>> {
        if !self.class[a].is_forest() {
            return Err(Error::ShapeViolation(format!("{} is a context variable", self.names[a])));
        }
        self.check_size(a, limit)?;
        let mut out = Vec::new();
        self.expand(a, &mut out);
        Ok(out)
    }

    /// The context derived by context variable `x`, with the parameter as a
    /// [`HOLE`] leaf.
    pub fn eval_context(&self, x: usize, limit: u64) -> Result<Vec<Tree>> {
        if self.class[x] != VarClass::Ctx {
            return Err(Error::ShapeViolation(format!("{} is not a context variable", self.names[x])));
        }
        self.check_size(x, limit)?;
        let mut out = Vec::new();
        self.expand(x, &mut out);
        Ok(out)
    }

    fn expand(&self, v: usize, out: &mut Vec<Tree>) {
        match self.rules[v] {
            FRule::Empty => {}
            FRule::Concat(b, c) => {
                self.expand(b, out);
                self.expand(c, out);
            }
            FRule::Node(a, b) => {
                let mut t = Tree::leaf(a);
                self.expand(b, &mut t.children);
                out.push(t);
            }
            FRule::CtxNode(a, l, r) => {
                let mut t = Tree::leaf(a);
                self.expand(l, &mut t.children);
                t.children.push(Tree::leaf(HOLE));
                self.expand(r, &mut t.children);
                out.push(t);
            }
            FRule::Apply(x, b) | FRule::Compose(x, b) => {
                let mut ctx = Vec::new();
                self.expand(x, &mut ctx);
                let mut arg = Vec::new();
                self.expand(b, &mut arg);
                substitute(&mut ctx, &mut Some(arg));
                out.extend(ctx);
            }
        }
    }
}

/// Replaces the hole in `f` by `arg`; returns whether it was found.
fn substitute(f: &mut Vec<Tree>, arg: &mut Option<Vec<Tree>>) -> bool {
    for k in 0..f.len() {
        if f[k].label == HOLE && f[k].children.is_empty() {
            let ins = arg.take().unwrap();
            f.splice(k..k + 1, ins);
            return true;
        }
        if substitute(&mut f[k].children, arg) {
            return true;
        }
    }
    false
}

/// Term notation, e.g. `a(b(c,c),c)`; contexts show the parameter as `x`.
pub fn write_forest(g: &Fslp, f: &[Tree]) -> String {
    struct W<'a>(&'a Fslp, &'a [Tree]);
    impl fmt::Display for W<'_> {
        fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            for (k, t) in self.1.iter().enumerate() {
                if k > 0 {
                    out.write_str(",")?;
                }
                out.write_str(self.0.label_name(t.label))?;
                if !t.children.is_empty() {
                    write!(out, "({})", W(self.0, &t.children))?;
                }
            }
            Ok(())
        }
    }
    W(g, f).to_string()
}

fn tokens(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in line.chars() {
        if ch.is_whitespace() || "()<>".contains(ch) {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Parses the `fslp v1` text format.
pub fn parse_fslp(src: &str) -> Result<Fslp> {
    let mut g = Fslp::new();
    let mut classes: Vec<(String, VarClass, usize)> = Vec::new();
    let mut rules: Vec<(String, Vec<String>, usize)> = Vec::new();
    let mut start: Option<(String, usize)> = None;
    let mut header = false;
    for (k, raw) in src.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        if !header {
            if line != "fslp v1" {
                return Err(err("expected header `fslp v1`".into()));
            }
            header = true;
            continue;
        }
        let (head, rhs) = match line.split_once("->") {
            Some((h, r)) => (h, Some(tokens(r))),
            None => (line, None),
        };
        let t = tokens(head);
        match t[0].as_str() {
            "class" if t.len() == 3 => {
                let c = match t[2].as_str() {
                    "top" => VarClass::Top,
                    "bot" => VarClass::Bot,
                    "ctx" => VarClass::Ctx,
                    other => return Err(err(format!("unknown class `{other}`"))),
                };
                classes.push((t[1].clone(), c, line_no));
            }
            "rule" if t.len() == 2 && rhs.as_ref().is_some_and(|r| !r.is_empty()) => {
                rules.push((t[1].clone(), rhs.unwrap(), line_no))
            }
            "start" if t.len() == 2 => start = Some((t[1].clone(), line_no)),
            _ => return Err(err(format!("cannot parse `{line}`"))),
        }
    }
    if !header {
        return Err(Error::Parse { line: 1, msg: "missing header `fslp v1`".into() });
    }
    let mut index: HashMap<String, usize> = HashMap::new();
    for (name, c, line) in &classes {
        if index.contains_key(name) {
            return Err(Error::Parse { line: *line, msg: format!("class of {name} declared twice") });
        }
        index.insert(name.clone(), g.add(name.clone(), *c, FRule::Empty));
    }
    let mut defined = vec![false; g.num_vars()];
    for (name, rhs, line) in &rules {
        let err = |msg: String| Error::Parse { line: *line, msg };
        let var = |s: &str| index.get(s).copied().ok_or_else(|| err(format!("undeclared variable `{s}`")));
        let v = var(name)?;
        if defined[v] {
            return Err(Error::Redefinition(name.clone()));
        }
        defined[v] = true;
        let r: Vec<&str> = rhs.iter().map(String::as_str).collect();
        let rule = match r.as_slice() {
            ["eps"] => FRule::Empty,
            [b, c] => FRule::Concat(var(b)?, var(c)?),
            [a, "(", b, ")"] => FRule::Node(g.label(a), var(b)?),
            [a, "(", l, "x", r, ")"] => FRule::CtxNode(g.label(a), var(l)?, var(r)?),
            [x, "<", b, ">"] => match g.class(var(x)?) {
                VarClass::Ctx if g.class(v) == VarClass::Ctx => FRule::Compose(var(x)?, var(b)?),
                _ => FRule::Apply(var(x)?, var(b)?),
            },
            _ => return Err(err(format!("unknown rule shape `{}`", rhs.join(" ")))),
        };
        g.rules[v] = rule;
    }
    if let Some(v) = defined.iter().position(|d| !d) {
        return Err(Error::ShapeViolation(format!("{} has no rule", g.names[v])));
    }
    if let Some((s, line)) = start {
        g.start = Some(*index.get(&s).ok_or(Error::Parse { line, msg: format!("undeclared start `{s}`") })?);
    }
    g.validate()?;
    Ok(g)
}

/// Writes the `fslp v1` text format.
pub fn write_fslp(g: &Fslp) -> String {
    let mut out = String::from("fslp v1\n");
    for v in 0..g.num_vars() {
        out += &format!("class {} {}\n", g.names[v], g.class[v].keyword());
    }
    for v in 0..g.num_vars() {
        let n = |x: usize| g.names[x].as_str();
        let rhs = match g.rules[v] {
            FRule::Empty => "eps".to_string(),
            FRule::Concat(b, c) => format!("{} {}", n(b), n(c)),
            FRule::Node(a, b) => format!("{} ( {} )", g.label_name(a), n(b)),
            FRule::Apply(x, b) | FRule::Compose(x, b) => format!("{} < {} >", n(x), n(b)),
            FRule::CtxNode(a, l, r) => format!("{} ( {} x {} )", g.label_name(a), n(l), n(r)),
        };
        out += &format!("rule {} -> {rhs}\n", g.names[v]);
    }
    if let Some(s) = g.start {
        out += &format!("start {}\n", g.names[s]);
    }
    out
}

/// The grammar of the worked example: a tree `a(b(c,b(c,c,c),c),b(c,b(c,c,c),c))`
/// built from two copies of a context `b<...>` stacked twice.
pub fn example_fslp() -> Fslp {
    let src = "fslp v1
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
    parse_fslp(src).expect("example grammar is valid")
}

/// Random normal-form FSLP whose start variable derives at most
/// `max_nodes` nodes. `vars` bounds the number of variables.
pub fn random_fslp<R: Rng>(rng: &mut R, vars: usize, sigma: usize, max_nodes: u64) -> Fslp {
    let mut g = Fslp::new();
    let labels: Vec<u32> = (0..sigma.max(1)).map(|k| g.label(&format!("l{k}"))).collect();
    let mut size: Vec<u64> = Vec::new();
    let mut forests: Vec<usize> = Vec::new();
    let mut trees: Vec<usize> = Vec::new();
    let mut ctxs: Vec<usize> = Vec::new();
    let add = |g: &mut Fslp, class: VarClass, rule: FRule, s: u64, size: &mut Vec<u64>| {
        let name = format!("{}{}", match class {
            VarClass::Top => "F",
            VarClass::Bot => "T",
            VarClass::Ctx => "X",
        }, g.num_vars());
        let v = g.add(name, class, rule);
        size.push(s);
        v
    };
    let e = add(&mut g, VarClass::Top, FRule::Empty, 0, &mut size);
    forests.push(e);
    let a = labels[rng.gen_range(0..labels.len())];
    let leaf = add(&mut g, VarClass::Bot, FRule::Node(a, e), 1, &mut size);
    trees.push(leaf);
    forests.push(leaf);
    let mut start = leaf;
    let pick = |rng: &mut R, v: &Vec<usize>| v[if rng.gen_bool(0.6) { rng.gen_range(v.len().saturating_sub(6)..v.len()) } else { rng.gen_range(0..v.len()) }];
    let mut tries = 0;
    while g.num_vars() < vars && tries < 20 * vars {
        tries += 1;
        let a = labels[rng.gen_range(0..labels.len())];
        match rng.gen_range(0..6) {
            0 | 1 => {
                let (b, c) = (pick(rng, &forests), pick(rng, &forests));
                let s = size[b] + size[c];
                if s <= max_nodes {
                    let v = add(&mut g, VarClass::Top, FRule::Concat(b, c), s, &mut size);
                    forests.push(v);
                }
            }
            2 => {
                let b = pick(rng, &forests);
                let s = size[b] + 1;
                if s <= max_nodes {
                    let v = add(&mut g, VarClass::Bot, FRule::Node(a, b), s, &mut size);
                    trees.push(v);
                    forests.push(v);
                }
            }
            3 => {
                let (l, r) = (pick(rng, &forests), pick(rng, &forests));
                let s = size[l] + size[r] + 1;
                if s <= max_nodes {
                    let v = add(&mut g, VarClass::Ctx, FRule::CtxNode(a, l, r), s, &mut size);
                    ctxs.push(v);
                }
            }
            4 if !ctxs.is_empty() => {
                let (y, z) = (pick(rng, &ctxs), pick(rng, &ctxs));
                let s = size[y] + size[z];
                if s <= max_nodes {
                    let v = add(&mut g, VarClass::Ctx, FRule::Compose(y, z), s, &mut size);
                    ctxs.push(v);
                }
            }
            5 if !ctxs.is_empty() => {
                let (x, b) = (pick(rng, &ctxs), pick(rng, &trees));
                let s = size[x] + size[b];
                if s <= max_nodes {
                    let v = add(&mut g, VarClass::Bot, FRule::Apply(x, b), s, &mut size);
                    trees.push(v);
                    forests.push(v);
                }
            }
            _ => continue,
        }
        let last = g.num_vars() - 1;
        if g.class(last).is_forest() && size[last] >= size[start] {
            start = last;
        }
    }
    g.start = Some(start);
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::rng;

    #[test]
    fn example_tree() {
        let g = example_fslp();
        let a = g.lookup("A").unwrap();
        let f = g.eval_forest(a, 1000).unwrap();
        assert_eq!(write_forest(&g, &f), "a(b(c,b(c,c,c),c),b(c,b(c,c,c),c))");
        assert_eq!(g.eval_forest(g.lookup("E").unwrap(), 10).unwrap(), vec![]);
        let y = g.eval_context(g.lookup("Y").unwrap(), 10).unwrap();
        assert_eq!(write_forest(&g, &y), "b(c,x,c)");
        assert_eq!(g.sizes().unwrap()[a], 15);
    }

    #[test]
    fn shape_and_parse_errors() {
        assert!(matches!(parse_fslp("fslp v1\nclass A bot\nrule A -> eps\n"), Err(Error::ShapeViolation(_))));
        assert!(matches!(parse_fslp("fslp v1\nclass A top\nrule A -> A A\n"), Err(Error::CyclicGrammar(_))));
        assert!(matches!(parse_fslp("fslp v1\nclass A top\nrule A -> B B\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_fslp("fslp v2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_fslp("fslp v1\nclass A top\n"), Err(Error::ShapeViolation(_))));
        let g = example_fslp();
        assert!(matches!(g.eval_forest(0, 5), Err(Error::OutputTooLarge { len: 15, limit: 5 })));
    }

    #[test]
    fn round_trip() {
        let g = example_fslp();
        assert_eq!(parse_fslp(&write_fslp(&g)).unwrap(), g);
        // Labels are renumbered in order of first use.
        let mut r = rng(3);
        for _ in 0..20 {
            let g = random_fslp(&mut r, 60, 3, 500);
            let text = write_fslp(&g);
            assert_eq!(write_fslp(&parse_fslp(&text).unwrap()), text);
            let s = g.start.unwrap();
            let f = g.eval_forest(s, 500).unwrap();
            assert_eq!(f.iter().map(Tree::size).sum::<usize>() as u64, g.sizes().unwrap()[s]);
        }
    }

    #[test]
    fn compact_syntax_is_accepted() {
        let g = parse_fslp("fslp v1\nclass A bot\nclass E top\nrule A -> a(E)\nrule E -> eps\nstart A\n").unwrap();
        assert_eq!(write_forest(&g, &g.eval_forest(0, 10).unwrap()), "a");
    }
}
