use std::collections::{BTreeSet, HashMap};

use crate::model::{Literal, Symbol, Term};
use crate::transform::{CallIo, CtxArg, Goal, HeadIo, TPred, TQuery, TRule, TransformedProgram};

pub(crate) type PredId = usize;

#[derive(Debug)]
pub(crate) enum CTerm {
    Int(i64),
    Atom(Symbol),
    Struct(Symbol, Vec<CTerm>),
    Var(u32),
}

#[derive(Debug)]
pub(crate) struct CLit {
    pub pred: Symbol,
    pub negative: bool,
    pub args: Vec<CTerm>,
}

#[derive(Debug)]
pub(crate) enum CCtx {
    Slot(u32),
    Lits(Vec<CLit>),
}

#[derive(Debug)]
pub(crate) enum CGoal {
    Call {
        pred: Option<PredId>,
        args: Vec<CTerm>,
        input: Option<CCtx>,
        out: Option<u32>,
    },
    Produce {
        out: u32,
        input: CCtx,
        extra: CCtx,
    },
    Insert {
        lit: CLit,
        input: CCtx,
        out: u32,
    },
    AssertIc(CCtx),
    TestIc(CCtx),
    NotUnify(Vec<CTerm>, Vec<CTerm>),
}

#[derive(Debug)]
pub(crate) enum CHeadIo {
    None,
    Out(CCtx),
    Thread(u32, CCtx),
}

#[derive(Debug)]
pub(crate) struct Clause {
    pub nvars: u32,
    pub nctx: u32,
    pub args: Vec<CTerm>,
    pub io: CHeadIo,
    pub body: Vec<CGoal>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum PredKind {
    Plain,
    Tabled,
    /// Dual of a defined predicate, or a dual-mode constraint predicate.
    Dual { negates: bool },
}

#[derive(Debug)]
pub(crate) struct Pred {
    pub name: TPred,
    pub kind: PredKind,
    pub clauses: Vec<Clause>,
}

/// A subcheck constraint clause `U*i` with the variables of its non-abducible
/// remainder, which setup grounds before evaluation.
#[derive(Debug)]
pub(crate) struct IcClause {
    pub clause: Clause,
    pub ground_vars: Vec<u32>,
}

#[derive(Debug)]
pub(crate) struct CProgram {
    pub preds: Vec<Pred>,
    index: HashMap<(TPred, usize), PredId>,
    pub ic_clauses: Vec<IcClause>,
}

struct Vars {
    map: HashMap<Symbol, u32>,
    names: Vec<Symbol>,
}

impl Vars {
    fn new() -> Self {
        Vars {
            map: HashMap::new(),
            names: Vec::new(),
        }
    }

    fn slot(&mut self, v: &Symbol) -> u32 {
        if let Some(&s) = self.map.get(v) {
            return s;
        }
        let s = self.names.len() as u32;
        self.map.insert(v.clone(), s);
        self.names.push(v.clone());
        s
    }
}

fn term(t: &Term, vars: &mut Vars) -> CTerm {
    match t {
        Term::Int(i) => CTerm::Int(*i),
        Term::Const(c) => CTerm::Atom(c.clone()),
        Term::Var(v) => CTerm::Var(vars.slot(v)),
        Term::Compound(f, args) => CTerm::Struct(f.clone(), args.iter().map(|a| term(a, vars)).collect()),
    }
}

fn lit(l: &Literal, vars: &mut Vars) -> CLit {
    CLit {
        pred: l.pred.clone(),
        negative: l.negative,
        args: l.args.iter().map(|a| term(a, vars)).collect(),
    }
}

fn ctx(a: &CtxArg, vars: &mut Vars) -> CCtx {
    match a {
        CtxArg::Var(v) => CCtx::Slot(*v),
        CtxArg::List(ls) | CtxArg::Patterns(ls) => CCtx::Lits(ls.iter().map(|l| lit(l, vars)).collect()),
    }
}

impl CProgram {
    pub fn new(tp: &TransformedProgram) -> Self {
        let mut prog = CProgram {
            preds: Vec::new(),
            index: HashMap::new(),
            ic_clauses: Vec::new(),
        };
        let abducible_preds: BTreeSet<(TPred, usize)> =
            tp.abducible_rules.iter().map(|r| (r.head.pred.clone(), r.arity())).collect();
        // register every head first so calls resolve regardless of order
        for r in tp.all_rules() {
            let key = (r.head.pred.clone(), r.arity());
            if prog.index.contains_key(&key) {
                continue;
            }
            let kind = match &r.head.pred {
                TPred::Tabled(_) => PredKind::Tabled,
                _ if abducible_preds.contains(&key) => PredKind::Plain,
                TPred::Neg(_) | TPred::NotFalse => PredKind::Dual { negates: true },
                TPred::Star(..) | TPred::FalseStar(_) => PredKind::Dual { negates: false },
                _ => PredKind::Plain,
            };
            prog.index.insert(key, prog.preds.len());
            prog.preds.push(Pred {
                name: r.head.pred.clone(),
                kind,
                clauses: Vec::new(),
            });
        }
        for r in tp.all_rules() {
            let clause = prog.clause(r);
            let id = prog.index[&(r.head.pred.clone(), r.arity())];
            prog.preds[id].clauses.push(clause);
        }
        for r in &tp.ic_rules {
            if let TPred::UStarI(_) = r.head.pred {
                let clause = prog.clause(r);
                let mut ground_vars = BTreeSet::new();
                for g in &clause.body {
                    if let CGoal::Call { args, .. } = g {
                        args.iter().for_each(|a| collect_slots(a, &mut ground_vars));
                    }
                }
                prog.ic_clauses.push(IcClause {
                    clause,
                    ground_vars: ground_vars.into_iter().collect(),
                });
            }
        }
        prog
    }

    pub fn lookup(&self, pred: &TPred, arity: usize) -> Option<PredId> {
        self.index.get(&(pred.clone(), arity)).copied()
    }

    fn goal(&self, g: &Goal, vars: &mut Vars) -> CGoal {
        match g {
            Goal::Call { pred, args, io } => {
                let (input, out) = match io {
                    CallIo::None => (None, None),
                    CallIo::Out(o) => (None, Some(*o)),
                    CallIo::Thread(i, o) => (Some(ctx(i, vars)), Some(*o)),
                };
                CGoal::Call {
                    pred: self.lookup(pred, args.len()),
                    args: args.iter().map(|a| term(a, vars)).collect(),
                    input,
                    out,
                }
            }
            Goal::ProduceContext { out, input, extra } => CGoal::Produce {
                out: *out,
                input: ctx(input, vars),
                extra: ctx(extra, vars),
            },
            Goal::InsertAbducible { lit: l, input, out } => CGoal::Insert {
                lit: lit(l, vars),
                input: ctx(input, vars),
                out: *out,
            },
            Goal::AssertIc(a) => CGoal::AssertIc(ctx(a, vars)),
            Goal::TestIc(a) => CGoal::TestIc(ctx(a, vars)),
            Goal::NotUnifiable(a, b) => CGoal::NotUnify(
                a.iter().map(|t| term(t, vars)).collect(),
                b.iter().map(|t| term(t, vars)).collect(),
            ),
        }
    }

    fn clause(&self, r: &TRule) -> Clause {
        let mut vars = Vars::new();
        let args = r.head.args.iter().map(|a| term(a, &mut vars)).collect();
        let io = match &r.head.io {
            HeadIo::None => CHeadIo::None,
            HeadIo::Out(o) => CHeadIo::Out(ctx(o, &mut vars)),
            HeadIo::Thread(i, o) => CHeadIo::Thread(*i, ctx(o, &mut vars)),
        };
        let body = r.body.iter().map(|g| self.goal(g, &mut vars)).collect();
        Clause {
            nvars: vars.names.len() as u32,
            nctx: r.ctx_names.len() as u32,
            args,
            io,
            body,
        }
    }

    /// The query as a headless clause whose output is the final context.
    pub fn query(&self, q: &TQuery, query_vars: &[Symbol]) -> Clause {
        let mut vars = Vars::new();
        for v in query_vars {
            vars.slot(v);
        }
        let body = q.goals.iter().map(|g| self.goal(g, &mut vars)).collect();
        let io = CHeadIo::Out(ctx(&q.output, &mut vars));
        Clause {
            nvars: vars.names.len() as u32,
            nctx: q.ctx_names.len() as u32,
            args: Vec::new(),
            io,
            body,
        }
    }
}

fn collect_slots(t: &CTerm, out: &mut BTreeSet<u32>) {
    match t {
        CTerm::Var(v) => {
            out.insert(*v);
        }
        CTerm::Struct(_, args) => args.iter().for_each(|a| collect_slots(a, out)),
        _ => {}
    }
}
