use std::collections::HashMap;
use std::rc::Rc;

use crate::model::{Context, Literal, Symbol, Term};
use crate::transform::IcMode;

use super::compile::{CCtx, CGoal, CHeadIo, CLit, CProgram, CTerm, Clause, IcClause, Pred, PredId, PredKind};
use super::ops::check_subset_counted;
use super::table::{Answer, CallKey, TableStatus, TableStore};
use super::{EngineError, Subsumption};

type R = Result<(), EngineError>;

#[derive(Clone, Debug)]
pub(crate) enum RTerm {
    Int(i64),
    Atom(Symbol),
    Struct(Symbol, Rc<[RTerm]>),
    Var(u32),
}

#[derive(Clone, Debug)]
pub(crate) struct RLit {
    pred: Symbol,
    negative: bool,
    args: Rc<[RTerm]>,
}

type RCtx = Rc<Vec<RLit>>;

pub(crate) struct Frame {
    base: u32,
    ctx: Vec<Option<RCtx>>,
}

impl Frame {
    fn new(base: u32, nctx: u32) -> Self {
        Frame {
            base,
            ctx: vec![None; nctx as usize],
        }
    }
}

#[derive(Clone, Copy)]
struct Mark {
    trail: usize,
    vals: usize,
}

pub(crate) fn constant(t: &Term) -> RTerm {
    match t {
        Term::Int(i) => RTerm::Int(*i),
        Term::Const(c) => RTerm::Atom(c.clone()),
        Term::Compound(f, args) => RTerm::Struct(f.clone(), args.iter().map(constant).collect()),
        Term::Var(_) => panic!("constant() applied to a variable"),
    }
}

pub(crate) struct Machine<'p> {
    prog: &'p CProgram,
    store: &'p mut TableStore,
    vals: Vec<Option<RTerm>>,
    trail: Vec<u32>,
    pub inferences: u64,
    max_steps: u64,
    ic_mode: IcMode,
    subsumption: Subsumption,
    neg_depth: u32,
    /// Tables whose clauses are currently being run, innermost last.
    eval_stack: Vec<usize>,
    /// Incomplete tables in creation order.
    completion: Vec<usize>,
    consumed: u64,
    epoch: u64,
    dual_active: Vec<(PredId, Vec<Term>)>,
    /// Collects `assert_IC` lists during setup; `None` afterwards.
    pub setup_facts: Option<Vec<Vec<Literal>>>,
}

impl<'p> Machine<'p> {
    pub fn new(
        prog: &'p CProgram,
        store: &'p mut TableStore,
        ic_mode: IcMode,
        subsumption: Subsumption,
        max_steps: u64,
        setup: bool,
    ) -> Self {
        Machine {
            prog,
            store,
            vals: Vec::new(),
            trail: Vec::new(),
            inferences: 0,
            max_steps,
            ic_mode,
            subsumption,
            neg_depth: 0,
            eval_stack: Vec::new(),
            completion: Vec::new(),
            consumed: 0,
            epoch: 0,
            dual_active: Vec::new(),
            setup_facts: setup.then(Vec::new),
        }
    }

    fn tick(&mut self, n: u64) -> R {
        self.inferences += n;
        if self.inferences > self.max_steps {
            return Err(EngineError::StepBudget(self.max_steps));
        }
        Ok(())
    }

    // ---- bindings

    fn alloc(&mut self, n: u32) -> u32 {
        let base = self.vals.len() as u32;
        self.vals.resize(self.vals.len() + n as usize, None);
        base
    }

    fn mark(&self) -> Mark {
        Mark {
            trail: self.trail.len(),
            vals: self.vals.len(),
        }
    }

    fn undo(&mut self, m: Mark) {
        while self.trail.len() > m.trail {
            let v = self.trail.pop().unwrap();
            self.vals[v as usize] = None;
        }
        self.vals.truncate(m.vals);
    }

    fn deref(&self, t: &RTerm) -> RTerm {
        let mut t = t.clone();
        while let RTerm::Var(v) = t {
            match &self.vals[v as usize] {
                Some(b) => t = b.clone(),
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: u32, t: &RTerm) -> bool {
        match self.deref(t) {
            RTerm::Var(w) => v == w,
            RTerm::Struct(_, args) => args.iter().any(|a| self.occurs(v, a)),
            _ => false,
        }
    }

    fn bind(&mut self, v: u32, t: RTerm) {
        self.vals[v as usize] = Some(t);
        self.trail.push(v);
    }

    fn unify(&mut self, a: &RTerm, b: &RTerm) -> bool {
        let a = self.deref(a);
        let b = self.deref(b);
        match (&a, &b) {
            (RTerm::Var(x), RTerm::Var(y)) if x == y => true,
            (RTerm::Var(x), _) => {
                if self.occurs(*x, &b) {
                    return false;
                }
                self.bind(*x, b.clone());
                true
            }
            (_, RTerm::Var(y)) => {
                if self.occurs(*y, &a) {
                    return false;
                }
                self.bind(*y, a.clone());
                true
            }
            (RTerm::Int(x), RTerm::Int(y)) => x == y,
            (RTerm::Atom(x), RTerm::Atom(y)) => x == y,
            (RTerm::Struct(f, xs), RTerm::Struct(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    fn unify_all(&mut self, xs: &[RTerm], ys: &[RTerm]) -> bool {
        xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
    }

    fn unifiable(&mut self, xs: &[RTerm], ys: &[RTerm]) -> bool {
        let m = self.mark();
        let ok = self.unify_all(xs, ys);
        self.undo(m);
        ok
    }

    fn identical(&self, a: &RTerm, b: &RTerm) -> bool {
        match (self.deref(a), self.deref(b)) {
            (RTerm::Var(x), RTerm::Var(y)) => x == y,
            (RTerm::Int(x), RTerm::Int(y)) => x == y,
            (RTerm::Atom(x), RTerm::Atom(y)) => x == y,
            (RTerm::Struct(f, xs), RTerm::Struct(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| self.identical(x, y))
            }
            _ => false,
        }
    }

    fn is_ground(&self, t: &RTerm) -> bool {
        match self.deref(t) {
            RTerm::Var(_) => false,
            RTerm::Struct(_, args) => args.iter().all(|a| self.is_ground(a)),
            _ => true,
        }
    }

    // ---- conversion

    fn inst(&self, t: &CTerm, base: u32) -> RTerm {
        match t {
            CTerm::Int(i) => RTerm::Int(*i),
            CTerm::Atom(a) => RTerm::Atom(a.clone()),
            CTerm::Var(v) => RTerm::Var(base + v),
            CTerm::Struct(f, args) => RTerm::Struct(f.clone(), args.iter().map(|a| self.inst(a, base)).collect()),
        }
    }

    fn inst_lit(&self, l: &CLit, base: u32) -> RLit {
        RLit {
            pred: l.pred.clone(),
            negative: l.negative,
            args: l.args.iter().map(|a| self.inst(a, base)).collect(),
        }
    }

    fn ctx_val(&self, c: &CCtx, f: &Frame) -> RCtx {
        match c {
            CCtx::Slot(s) => f.ctx[*s as usize].clone().expect("context slot read before it was bound"),
            CCtx::Lits(ls) => Rc::new(ls.iter().map(|l| self.inst_lit(l, f.base)).collect()),
        }
    }

    fn head_out(&self, c: &Clause, f: &Frame) -> Option<RCtx> {
        match &c.io {
            CHeadIo::None => None,
            CHeadIo::Out(o) | CHeadIo::Thread(_, o) => Some(self.ctx_val(o, f)),
        }
    }

    /// Model term with unbound variables named `_0`, `_1`, … by first occurrence.
    fn export(&self, t: &RTerm, names: &mut Vec<u32>) -> Term {
        match self.deref(t) {
            RTerm::Int(i) => Term::Int(i),
            RTerm::Atom(a) => Term::Const(a),
            RTerm::Struct(f, args) => Term::Compound(f, args.iter().map(|a| self.export(a, names)).collect()),
            RTerm::Var(v) => {
                let i = match names.iter().position(|&w| w == v) {
                    Some(i) => i,
                    None => {
                        names.push(v);
                        names.len() - 1
                    }
                };
                Term::Var(Symbol::from(format!("_{i}")))
            }
        }
    }

    fn export_lit(&self, l: &RLit, names: &mut Vec<u32>) -> Literal {
        Literal {
            pred: l.pred.clone(),
            args: l.args.iter().map(|a| self.export(a, names)).collect(),
            negative: l.negative,
        }
    }

    /// `None` when bindings made after construction left a complementary pair.
    /// In subcheck mode a non-ground member outside setup is an error.
    fn export_ctx(&self, c: &RCtx, names: &mut Vec<u32>) -> Result<Option<Context>, EngineError> {
        let lits: Vec<Literal> = c.iter().map(|l| self.export_lit(l, names)).collect();
        let Ok(ctx) = Context::with_patterns(lits) else {
            return Ok(None);
        };
        if self.ic_mode == IcMode::Subcheck && self.setup_facts.is_none() {
            if let Some(l) = ctx.iter().find(|l| !l.is_ground()) {
                return Err(EngineError::NonGroundAbducible(l.to_string()));
            }
        }
        Ok(Some(ctx))
    }

    fn export_args(&self, args: &[RTerm]) -> Vec<Term> {
        let mut names = Vec::new();
        args.iter().map(|a| self.export(a, &mut names)).collect()
    }

    fn import(&mut self, t: &Term, map: &mut HashMap<Symbol, u32>) -> RTerm {
        match t {
            Term::Int(i) => RTerm::Int(*i),
            Term::Const(c) => RTerm::Atom(c.clone()),
            Term::Compound(f, args) => {
                let args: Vec<RTerm> = args.iter().map(|a| self.import(a, map)).collect();
                RTerm::Struct(f.clone(), args.into())
            }
            Term::Var(v) => match map.get(v) {
                Some(&x) => RTerm::Var(x),
                None => {
                    let x = self.alloc(1);
                    map.insert(v.clone(), x);
                    RTerm::Var(x)
                }
            },
        }
    }

    fn import_ctx(&mut self, c: &Context, map: &mut HashMap<Symbol, u32>) -> RCtx {
        let mut out = Vec::with_capacity(c.len());
        for l in c.iter() {
            let args: Vec<RTerm> = l.args.iter().map(|a| self.import(a, map)).collect();
            out.push(RLit {
                pred: l.pred.clone(),
                negative: l.negative,
                args: args.into(),
            });
        }
        Rc::new(out)
    }

    fn render_call(&self, pred: &Pred, args: &[RTerm]) -> String {
        CallKey {
            pred: pred.name.clone(),
            args: self.export_args(args),
        }
        .to_string()
    }

    // ---- context operations

    fn insert(&mut self, l: RLit, i: &RCtx) -> Result<Option<RCtx>, EngineError> {
        match self.ic_mode {
            IcMode::Subcheck => {
                if !l.args.iter().all(|a| self.is_ground(a)) {
                    return Err(EngineError::NonGroundAbducible(self.export_lit(&l, &mut Vec::new()).to_string()));
                }
                for m in i.iter() {
                    if m.pred == l.pred
                        && m.args.len() == l.args.len()
                        && m.args.iter().zip(l.args.iter()).all(|(x, y)| self.identical(x, y))
                    {
                        return Ok((m.negative == l.negative).then(|| i.clone()));
                    }
                }
            }
            IcMode::Dual => {
                // unification-based: clash with a unifiable complement, else
                // reuse the first unifiable member, else add
                for m in i.iter() {
                    if m.pred == l.pred && m.negative != l.negative && self.unifiable(&m.args, &l.args) {
                        return Ok(None);
                    }
                }
                for m in i.iter() {
                    if m.pred == l.pred && m.negative == l.negative {
                        let mk = self.mark();
                        if self.unify_all(&m.args, &l.args) {
                            return Ok(Some(i.clone()));
                        }
                        self.undo(mk);
                    }
                }
            }
        }
        let mut v = Vec::with_capacity(i.len() + 1);
        v.extend(i.iter().cloned());
        v.push(l);
        Ok(Some(Rc::new(v)))
    }

    fn produce(&mut self, i: &RCtx, e: &RCtx) -> Result<Option<RCtx>, EngineError> {
        let mut cur = i.clone();
        for l in e.iter() {
            match self.insert(l.clone(), &cur)? {
                Some(c) => cur = c,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    // ---- resolution

    fn body(&mut self, c: &'p Clause, idx: usize, f: &mut Frame, k: &mut dyn FnMut(&mut Self, &Frame) -> R) -> R {
        let Some(goal) = c.body.get(idx) else {
            return k(self, f);
        };
        match goal {
            CGoal::Call { pred, args, input, out } => {
                self.tick(1)?;
                let Some(pid) = *pred else {
                    return Ok(());
                };
                let args: Vec<RTerm> = args.iter().map(|a| self.inst(a, f.base)).collect();
                let input = input.as_ref().map(|i| self.ctx_val(i, f));
                let out = *out;
                self.call(pid, &args, input, &mut |m, res| {
                    if let Some(o) = out {
                        f.ctx[o as usize] = res;
                    }
                    m.body(c, idx + 1, f, k)
                })
            }
            CGoal::Produce { out, input, extra } => {
                let i = self.ctx_val(input, f);
                let e = self.ctx_val(extra, f);
                self.tick(1 + 4 * e.len() as u64)?;
                let mk = self.mark();
                if let Some(o) = self.produce(&i, &e)? {
                    f.ctx[*out as usize] = Some(o);
                    self.body(c, idx + 1, f, k)?;
                }
                self.undo(mk);
                Ok(())
            }
            CGoal::Insert { lit, input, out } => {
                self.tick(3)?;
                let i = self.ctx_val(input, f);
                let l = self.inst_lit(lit, f.base);
                let mk = self.mark();
                if let Some(o) = self.insert(l, &i)? {
                    f.ctx[*out as usize] = Some(o);
                    self.body(c, idx + 1, f, k)?;
                }
                self.undo(mk);
                Ok(())
            }
            CGoal::AssertIc(a) => {
                self.tick(1)?;
                let v = self.ctx_val(a, f);
                if self.setup_facts.is_none() {
                    return Err(EngineError::AssertAfterSetup);
                }
                // an inconsistent list can never embed in a consistent context
                if let Some(ctx) = self.export_ctx(&v, &mut Vec::new())? {
                    let lits = ctx.into_literals();
                    let facts = self.setup_facts.as_mut().expect("checked above");
                    if !facts.contains(&lits) {
                        facts.push(lits);
                    }
                }
                self.body(c, idx + 1, f, k)
            }
            CGoal::TestIc(a) => {
                self.tick(1)?;
                let v = self.ctx_val(a, f);
                let Some(ctx) = self.export_ctx(&v, &mut Vec::new())? else {
                    return Ok(());
                };
                let mut tried = 0;
                let ok = self.store.ic_facts().iter().all(|fact| check_subset_counted(fact, &ctx, &mut tried));
                self.tick(tried)?;
                if ok {
                    self.body(c, idx + 1, f, k)
                } else {
                    Ok(())
                }
            }
            CGoal::NotUnify(a, b) => {
                self.tick(1)?;
                let a: Vec<RTerm> = a.iter().map(|t| self.inst(t, f.base)).collect();
                let b: Vec<RTerm> = b.iter().map(|t| self.inst(t, f.base)).collect();
                if self.unifiable(&a, &b) {
                    Ok(())
                } else {
                    self.body(c, idx + 1, f, k)
                }
            }
        }
    }

    fn call(
        &mut self,
        pid: PredId,
        args: &[RTerm],
        input: Option<RCtx>,
        k: &mut dyn FnMut(&mut Self, Option<RCtx>) -> R,
    ) -> R {
        let prog = self.prog;
        let pred = &prog.preds[pid];
        match pred.kind {
            PredKind::Tabled => self.call_tabled(pid, args, k),
            PredKind::Plain => self.resolve(pred, args, input, k),
            PredKind::Dual { negates } => {
                if self.ic_mode == IcMode::Subcheck && !args.iter().all(|a| self.is_ground(a)) {
                    return Err(EngineError::NonGroundNegative(self.render_call(pred, args)));
                }
                let key = self.export_args(args);
                if self.dual_active.iter().any(|(p, a)| *p == pid && *a == key) {
                    return Err(EngineError::NegativeCycle(self.render_call(pred, args)));
                }
                let d = negates as u32;
                self.dual_active.push((pid, key));
                self.neg_depth += d;
                let r = self.resolve(pred, args, input, &mut |m, out| {
                    let saved = m.dual_active.pop();
                    m.neg_depth -= d;
                    let r = k(m, out);
                    m.neg_depth += d;
                    m.dual_active.extend(saved);
                    r
                });
                self.neg_depth -= d;
                self.dual_active.pop();
                r
            }
        }
    }

    fn resolve(
        &mut self,
        pred: &'p Pred,
        args: &[RTerm],
        input: Option<RCtx>,
        k: &mut dyn FnMut(&mut Self, Option<RCtx>) -> R,
    ) -> R {
        for clause in &pred.clauses {
            self.tick(1)?;
            let mk = self.mark();
            let base = self.alloc(clause.nvars);
            let head: Vec<RTerm> = clause.args.iter().map(|a| self.inst(a, base)).collect();
            if self.unify_all(&head, args) {
                let mut f = Frame::new(base, clause.nctx);
                if let CHeadIo::Thread(i, _) = clause.io {
                    f.ctx[i as usize] = input.clone();
                }
                self.body(clause, 0, &mut f, &mut |m, f2| {
                    let out = m.head_out(clause, f2);
                    k(m, out)
                })?;
            }
            self.undo(mk);
        }
        Ok(())
    }

    // ---- tabling

    fn call_tabled(&mut self, pid: PredId, args: &[RTerm], k: &mut dyn FnMut(&mut Self, Option<RCtx>) -> R) -> R {
        let key = CallKey {
            pred: self.prog.preds[pid].name.clone(),
            args: self.export_args(args),
        };
        let idx = match self.store.index_of(&key) {
            Some(idx) => {
                let e = self.store.entry(idx);
                if e.status == TableStatus::InProgress {
                    if e.neg_depth < self.neg_depth {
                        return Err(EngineError::NegativeCycle(key.to_string()));
                    }
                    if !e.active && e.epoch != self.epoch {
                        self.evaluate(idx, pid)?;
                    }
                }
                idx
            }
            None => {
                let dfn = self.completion.len();
                let idx = self.store.create(key, self.neg_depth, dfn);
                self.completion.push(idx);
                self.fixpoint(idx, pid)?;
                idx
            }
        };
        let e = self.store.entry(idx);
        if e.status == TableStatus::InProgress {
            self.consumed += 1;
            let low = e.low.min(e.dfn);
            if let Some(&cur) = self.eval_stack.last() {
                let c = self.store.entry_mut(cur);
                c.low = c.low.min(low);
            }
        }
        let answers = self.store.entry(idx).answers.clone();
        for a in &answers {
            self.tick(1)?;
            let mk = self.mark();
            let mut map = HashMap::new();
            let mut ok = true;
            for (t, x) in a.args.iter().zip(args) {
                let t = self.import(t, &mut map);
                if !self.unify(&t, x) {
                    ok = false;
                    break;
                }
            }
            if ok {
                let ctx = self.import_ctx(&a.context, &mut map);
                k(self, Some(ctx))?;
            }
            self.undo(mk);
        }
        Ok(())
    }

    fn version_sum(&self, from: usize) -> u64 {
        self.completion[from..].iter().map(|&e| self.store.entry(e).version).sum()
    }

    /// Re-runs the clauses of a new table and of every table that joined its
    /// group until an iteration adds no answer.
    fn fixpoint(&mut self, idx: usize, pid: PredId) -> R {
        let dfn = self.store.entry(idx).dfn;
        loop {
            self.epoch += 1;
            let v0 = self.version_sum(dfn);
            let c0 = self.consumed;
            self.evaluate(idx, pid)?;
            if self.store.entry(idx).low < dfn {
                return Ok(());
            }
            let mut j = dfn + 1;
            while j < self.completion.len() {
                let f = self.completion[j];
                let e = self.store.entry(f);
                if e.status == TableStatus::InProgress && e.epoch != self.epoch {
                    let fpid = self
                        .prog
                        .lookup(&e.key.pred, e.key.args.len())
                        .expect("tabled entries come from compiled predicates");
                    self.evaluate(f, fpid)?;
                }
                j += 1;
            }
            if self.consumed == c0 || self.version_sum(dfn) == v0 {
                for &e in &self.completion[dfn..] {
                    self.store.entry_mut(e).status = TableStatus::Complete;
                }
                self.completion.truncate(dfn);
                return Ok(());
            }
        }
    }

    /// One pass over the clauses of table `idx`.
    fn evaluate(&mut self, idx: usize, pid: PredId) -> R {
        let prog = self.prog;
        let pred = &prog.preds[pid];
        let saved_depth = self.neg_depth;
        let key_args = {
            let e = self.store.entry_mut(idx);
            e.active = true;
            e.epoch = self.epoch;
            self.neg_depth = e.neg_depth;
            e.key.args.clone()
        };
        self.eval_stack.push(idx);
        let r = self.eval_clauses(idx, pred, &key_args);
        self.eval_stack.pop();
        self.store.entry_mut(idx).active = false;
        self.neg_depth = saved_depth;
        r
    }

    fn eval_clauses(&mut self, idx: usize, pred: &'p Pred, key_args: &[Term]) -> R {
        for clause in &pred.clauses {
            self.tick(1)?;
            let mk = self.mark();
            let mut map = HashMap::new();
            let call_args: Vec<RTerm> = key_args.iter().map(|t| self.import(t, &mut map)).collect();
            let base = self.alloc(clause.nvars);
            let head: Vec<RTerm> = clause.args.iter().map(|a| self.inst(a, base)).collect();
            if self.unify_all(&head, &call_args) {
                let mut f = Frame::new(base, clause.nctx);
                self.body(clause, 0, &mut f, &mut |m, f2| {
                    let out = m.head_out(clause, f2).unwrap_or_default();
                    let mut names = Vec::new();
                    let args = call_args.iter().map(|a| m.export(a, &mut names)).collect();
                    let Some(context) = m.export_ctx(&out, &mut names)? else {
                        return Ok(());
                    };
                    m.tick(1)?;
                    let mode = m.subsumption;
                    m.store.insert_at(idx, Answer { args, context }, mode);
                    Ok(())
                })?;
            }
            self.undo(mk);
        }
        Ok(())
    }

    // ---- entry points

    /// Runs a query clause; each solution is the binding of the first
    /// `nvars` clause variables and the output context.
    pub fn run_query(&mut self, q: &'p Clause, nvars: usize, out: &mut Vec<(Vec<Term>, Context)>) -> R {
        let base = self.alloc(q.nvars);
        let mut f = Frame::new(base, q.nctx);
        self.body(q, 0, &mut f, &mut |m, f2| {
            let ctx = m.head_out(q, f2).unwrap_or_default();
            let mut names = Vec::new();
            let bindings = (0..nvars as u32).map(|i| m.export(&RTerm::Var(base + i), &mut names)).collect();
            if let Some(context) = m.export_ctx(&ctx, &mut names)? {
                out.push((bindings, context));
            }
            Ok(())
        })
    }

    /// Evaluates one constraint clause for every grounding of its remainder
    /// variables over `universe`, collecting the asserted lists.
    pub fn run_ic(&mut self, ic: &'p IcClause, universe: &[RTerm]) -> R {
        let n = ic.ground_vars.len();
        if n > 0 && universe.is_empty() {
            return Ok(());
        }
        let mut choice = vec![0usize; n];
        loop {
            let mk = self.mark();
            let base = self.alloc(ic.clause.nvars);
            for (v, &c) in ic.ground_vars.iter().zip(&choice) {
                self.bind(base + v, universe[c].clone());
            }
            let mut f = Frame::new(base, ic.clause.nctx);
            self.body(&ic.clause, 0, &mut f, &mut |_, _| Ok(()))?;
            self.undo(mk);
            // odometer over assignments
            let mut pos = 0;
            while pos < n {
                choice[pos] += 1;
                if choice[pos] < universe.len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == n {
                return Ok(());
            }
        }
    }
}
