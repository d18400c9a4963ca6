use std::collections::BTreeSet;
use std::fmt;

use crate::model::{Literal, Symbol, Term};

/// Index of a context variable within one rule or query.
pub type CtxVar = u32;

/// Transformed predicate names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TPred {
    /// `p(args, I, O)`: reuse rule, direct rule or positive abducible rule.
    Plain(Symbol),
    /// `p_ab(args, E)`: the tabled predicate.
    Tabled(Symbol),
    /// `not_p(args, I, O)`.
    Neg(Symbol),
    /// `p*i(args, I, O)`: falsifies the i-th rule of p (1-based).
    Star(Symbol, usize),
    /// `false*i(I, O)`: falsifies the i-th integrity constraint.
    FalseStar(usize),
    /// `not_false(I, O)`.
    NotFalse,
    /// `U*`: setup driver asserting every `ic/1` fact.
    UStar,
    /// `U*i`: asserts the `ic/1` facts of the i-th integrity constraint.
    UStarI(usize),
}

impl fmt::Display for TPred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TPred::Plain(p) => write!(f, "{p}"),
            TPred::Tabled(p) => write!(f, "{p}_ab"),
            TPred::Neg(p) => write!(f, "not_{p}"),
            TPred::Star(p, i) => write!(f, "{p}*{i}"),
            TPred::FalseStar(i) => write!(f, "false*{i}"),
            TPred::NotFalse => f.write_str("not_false"),
            TPred::UStar => f.write_str("U*"),
            TPred::UStarI(i) => write!(f, "U*{i}"),
        }
    }
}

/// A context argument: a variable or a literal list written in place.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CtxArg {
    Var(CtxVar),
    /// Abducibles gathered from a rule body; must be ground when evaluated.
    List(Vec<Literal>),
    /// Integrity-constraint patterns; may keep free variables.
    Patterns(Vec<Literal>),
}

impl CtxArg {
    pub fn empty() -> Self {
        CtxArg::List(Vec::new())
    }
}

/// Context arguments of a call.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CallIo {
    None,
    /// Tabled call: output context only.
    Out(CtxVar),
    /// Threaded call: input then output.
    Thread(CtxArg, CtxVar),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Goal {
    Call {
        pred: TPred,
        args: Vec<Term>,
        io: CallIo,
    },
    /// `produce_context(O, I, E)`.
    ProduceContext {
        out: CtxVar,
        input: CtxArg,
        extra: CtxArg,
    },
    /// `insert_abducible(A, I, O)`.
    InsertAbducible {
        lit: Literal,
        input: CtxArg,
        out: CtxVar,
    },
    /// `assert_IC(E)`.
    AssertIc(CtxArg),
    /// `test_IC(I)`.
    TestIc(CtxArg),
    /// `[X1,…,Xn] \= [t1,…,tn]`: succeeds iff the tuples do not unify.
    NotUnifiable(Vec<Term>, Vec<Term>),
}

/// Context arguments of a rule head.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum HeadIo {
    None,
    Out(CtxArg),
    /// Input variable, then the output argument (the input itself for pass-through rules).
    Thread(CtxVar, CtxArg),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct THead {
    pub pred: TPred,
    pub args: Vec<Term>,
    pub io: HeadIo,
}

/// A rule of the transformed program.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TRule {
    pub head: THead,
    pub body: Vec<Goal>,
    /// Display names of the context variables, indexed by [`CtxVar`].
    pub ctx_names: Vec<String>,
}

impl TRule {
    /// One for the head plus one per body goal.
    pub fn size(&self) -> usize {
        1 + self.body.len()
    }

    pub fn arity(&self) -> usize {
        self.head.args.len()
    }
}

/// A transformed query: goals threaded from an initial context to `output`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TQuery {
    pub goals: Vec<Goal>,
    pub output: CtxArg,
    pub ctx_names: Vec<String>,
}

/// Allocates context variables with display names.
#[derive(Default)]
pub(crate) struct CtxAlloc {
    names: Vec<String>,
}

impl CtxAlloc {
    pub(crate) fn fresh(&mut self, name: &str) -> CtxVar {
        self.names.push(name.to_string());
        (self.names.len() - 1) as CtxVar
    }

    pub(crate) fn rename(&mut self, v: CtxVar, name: &str) {
        self.names[v as usize] = name.to_string();
    }

    pub(crate) fn finish(self) -> Vec<String> {
        self.names
    }
}

struct Names {
    ctx: Vec<String>,
}

impl Names {
    /// Context names that do not clash with the rule's term variables.
    fn new(ctx_names: &[String], term_vars: &BTreeSet<String>) -> Self {
        let mut ctx: Vec<String> = Vec::new();
        for n in ctx_names {
            let mut name = n.clone();
            while term_vars.contains(&name) || ctx.contains(&name) {
                name.push('\'');
            }
            ctx.push(name);
        }
        Names { ctx }
    }

    fn arg(&self, a: &CtxArg) -> String {
        match a {
            CtxArg::Var(v) => self.ctx[*v as usize].clone(),
            CtxArg::List(lits) | CtxArg::Patterns(lits) => list(lits),
        }
    }
}

fn list(lits: &[Literal]) -> String {
    let items: Vec<String> = lits.iter().map(|l| l.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn tuple(args: &[Term]) -> String {
    let items: Vec<String> = args.iter().map(|t| t.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn call_text(pred: &TPred, args: &[Term], ctx: &[String]) -> String {
    let mut parts: Vec<String> = args.iter().map(|t| t.to_string()).collect();
    parts.extend(ctx.iter().cloned());
    if parts.is_empty() {
        pred.to_string()
    } else {
        format!("{pred}({})", parts.join(","))
    }
}

fn goal_text(g: &Goal, n: &Names) -> String {
    let v = |x: &CtxVar| n.ctx[*x as usize].clone();
    match g {
        Goal::Call { pred, args, io } => {
            let ctx = match io {
                CallIo::None => vec![],
                CallIo::Out(o) => vec![v(o)],
                CallIo::Thread(i, o) => vec![n.arg(i), v(o)],
            };
            call_text(pred, args, &ctx)
        }
        Goal::ProduceContext { out, input, extra } => {
            format!("produce_context({},{},{})", v(out), n.arg(input), n.arg(extra))
        }
        Goal::InsertAbducible { lit, input, out } => {
            format!("insert_abducible({lit},{},{})", n.arg(input), v(out))
        }
        Goal::AssertIc(a) => format!("assert_IC({})", n.arg(a)),
        Goal::TestIc(a) => format!("test_IC({})", n.arg(a)),
        Goal::NotUnifiable(a, b) => format!("{} \\= {}", tuple(a), tuple(b)),
    }
}

fn goal_vars(g: &Goal, out: &mut Vec<Symbol>) {
    let lits = |a: &CtxArg, out: &mut Vec<Symbol>| {
        if let CtxArg::List(ls) | CtxArg::Patterns(ls) = a {
            ls.iter().for_each(|l| l.collect_vars(out));
        }
    };
    match g {
        Goal::Call { args, io, .. } => {
            args.iter().for_each(|t| t.collect_vars(out));
            if let CallIo::Thread(i, _) = io {
                lits(i, out);
            }
        }
        Goal::ProduceContext { input, extra, .. } => {
            lits(input, out);
            lits(extra, out);
        }
        Goal::InsertAbducible { lit, input, .. } => {
            lit.collect_vars(out);
            lits(input, out);
        }
        Goal::AssertIc(a) | Goal::TestIc(a) => lits(a, out),
        Goal::NotUnifiable(a, b) => a.iter().chain(b).for_each(|t| t.collect_vars(out)),
    }
}

impl TRule {
    /// Term variables of the rule in first-occurrence order.
    pub fn term_vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.head.args.iter().for_each(|t| t.collect_vars(&mut out));
        if let HeadIo::Out(a) | HeadIo::Thread(_, a) = &self.head.io {
            if let CtxArg::List(ls) | CtxArg::Patterns(ls) = a {
                ls.iter().for_each(|l| l.collect_vars(&mut out));
            }
        }
        self.body.iter().for_each(|g| goal_vars(g, &mut out));
        out
    }
}

impl fmt::Display for TRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: BTreeSet<String> = self.term_vars().iter().map(|s| s.to_string()).collect();
        let n = Names::new(&self.ctx_names, &vars);
        let ctx = match &self.head.io {
            HeadIo::None => vec![],
            HeadIo::Out(o) => vec![n.arg(o)],
            HeadIo::Thread(i, o) => vec![n.ctx[*i as usize].clone(), n.arg(o)],
        };
        f.write_str(&call_text(&self.head.pred, &self.head.args, &ctx))?;
        for (i, g) in self.body.iter().enumerate() {
            f.write_str(if i == 0 { " :- " } else { ", " })?;
            f.write_str(&goal_text(g, &n))?;
        }
        f.write_str(".")
    }
}

impl fmt::Display for TQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut vars = Vec::new();
        self.goals.iter().for_each(|g| goal_vars(g, &mut vars));
        let vars: BTreeSet<String> = vars.iter().map(|s| s.to_string()).collect();
        let n = Names::new(&self.ctx_names, &vars);
        f.write_str("?- ")?;
        let goals: Vec<String> = self.goals.iter().map(|g| goal_text(g, &n)).collect();
        f.write_str(&goals.join(", "))?;
        f.write_str(".")
    }
}
