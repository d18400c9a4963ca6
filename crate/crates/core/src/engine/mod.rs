//! Tabled abductive resolution over a transformed program.
//!
//! Tabled calls are keyed by variant. A new table is evaluated by repeating
//! its clauses, together with the incomplete tables that depend on it, until
//! an iteration adds no answer; in-progress tables hand out the answers known
//! so far. Consuming an in-progress table through negation is reported as a
//! negative cycle.
//!
//! Cost model: one inference per goal call, per clause head tried, per tabled
//! answer delivered and per answer insertion. `insert_abducible` costs 3,
//! `produce_context(O, I, E)` costs `1 + 4·|E|` and `test_IC` costs 1 plus one
//! per context member examined while matching.

mod compile;
mod machine;
mod ops;
mod record;
mod table;

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Context, ContextError, Literal, Substitution, Symbol, Term};
use crate::transform::{transform_query, ElisionError, ElisionReport, IcMode, TablingMode, TransformedProgram};

use compile::CProgram;
use machine::Machine;

pub use ops::{check_subset, check_subset_counted, insert_abducible, produce_context, test_ic};
pub use record::{metrics_record, solution_record};
pub use table::{
    Answer, CallKey, InsertOutcome, TableEntry, TableStatus, TableStore, ANSWER_COST, ARG_COST, ENTRY_COST, LIT_COST,
};

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsumption {
    All,
    Minimal,
}

impl fmt::Display for Subsumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subsumption::All => "all",
            Subsumption::Minimal => "minimal",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("step budget of {0} inferences exceeded")]
    StepBudget(u64),
    #[error("negative cycle through `{0}`")]
    NegativeCycle(String),
    #[error("abducible `{0}` is not ground")]
    NonGroundAbducible(String),
    #[error("negative call `{0}` is not ground")]
    NonGroundNegative(String),
    #[error("assert_IC called after setup")]
    AssertAfterSetup,
    #[error("engine options ({0}) do not match the transformed program")]
    IncompatibleOptions(String),
    #[error(transparent)]
    Elision(#[from] ElisionError),
    #[error(transparent)]
    Context(#[from] ContextError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub ic_mode: IcMode,
    pub tabling_mode: TablingMode,
    pub subsumption: Subsumption,
    pub max_steps: u64,
}

impl EngineOptions {
    pub fn new(ic_mode: IcMode, tabling_mode: TablingMode, subsumption: Subsumption) -> Self {
        EngineOptions {
            ic_mode,
            tabling_mode,
            subsumption,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    /// Options matching the modes a program was transformed with.
    pub fn for_program(tp: &TransformedProgram, subsumption: Subsumption) -> Self {
        Self::new(tp.options.ic_mode, tp.options.tabling_mode, subsumption)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Metrics {
    pub inferences: u64,
    pub table_bytes: u64,
    pub table_entries: u64,
    pub table_answers: u64,
    pub wall_ms: f64,
}

impl Metrics {
    fn of(store: &TableStore, inferences: u64, start: Instant) -> Self {
        Metrics {
            inferences,
            table_bytes: store.table_bytes(),
            table_entries: store.len() as u64,
            table_answers: store.answer_count() as u64,
            wall_ms: start.elapsed().as_secs_f64() * 1000.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub context: Context,
    pub bindings: Substitution,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub solutions: Vec<Solution>,
    pub metrics: Metrics,
}

/// A solver bound to one transformed program. Tables persist across
/// [`Solver::solve`] calls until [`Solver::abolish_tables`].
pub struct Solver {
    prog: CProgram,
    store: TableStore,
    opts: EngineOptions,
    elision: ElisionReport,
    constants: BTreeSet<Term>,
    setup: Option<Metrics>,
}

impl Solver {
    pub fn new(tp: &TransformedProgram, opts: EngineOptions) -> Result<Self, EngineError> {
        if opts.ic_mode != tp.options.ic_mode || opts.tabling_mode != tp.options.tabling_mode {
            return Err(EngineError::IncompatibleOptions(format!(
                "{}/{} against {}/{}",
                opts.ic_mode, opts.tabling_mode, tp.options.ic_mode, tp.options.tabling_mode
            )));
        }
        Ok(Solver {
            prog: CProgram::new(tp),
            store: TableStore::new(),
            opts,
            elision: tp.elision.clone(),
            constants: tp.constants.clone(),
            setup: None,
        })
    }

    pub fn options(&self) -> &EngineOptions {
        &self.opts
    }

    pub fn store(&self) -> &TableStore {
        &self.store
    }

    pub fn abolish_tables(&mut self) {
        self.store.abolish_tables();
    }

    /// Cost of evaluating the constraint remainders, once per solver.
    pub fn setup_metrics(&self) -> Option<&Metrics> {
        self.setup.as_ref()
    }

    pub fn solve(&mut self, query: &[Literal], initial: &Context) -> Result<SolveResult, EngineError> {
        let start = Instant::now();
        let query = self.elision.elide_literals(query)?;
        let initial = Context::new(self.elision.elide_literals(initial.literals())?)?;
        if self.opts.ic_mode == IcMode::Subcheck && !self.store.is_sealed() {
            self.run_setup(&query, &initial)?;
        }
        let tq = transform_query(&query, self.opts.ic_mode, &initial);
        let mut qvars: Vec<Symbol> = Vec::new();
        for l in &query {
            for v in l.vars() {
                if !qvars.contains(&v) {
                    qvars.push(v);
                }
            }
        }
        let clause = self.prog.query(&tq, &qvars);
        let mut raw = Vec::new();
        let (r, inferences) = {
            let mut m = Machine::new(
                &self.prog,
                &mut self.store,
                self.opts.ic_mode,
                self.opts.subsumption,
                self.opts.max_steps,
                false,
            );
            let r = m.run_query(&clause, qvars.len(), &mut raw);
            (r, m.inferences)
        };
        if let Err(e) = r {
            self.store.discard_incomplete();
            return Err(e);
        }
        let mut solutions: Vec<Solution> = Vec::new();
        for (terms, ctx) in raw {
            let context = self.elision.restore_context(&ctx).or_else(|_| {
                Context::with_patterns(ctx.iter().map(|l| self.elision.restore_literal(l)))
            })?;
            let bindings: Substitution = qvars.iter().cloned().zip(terms).collect();
            let sol = Solution { context, bindings };
            match self.opts.subsumption {
                Subsumption::All => {
                    if !solutions.contains(&sol) {
                        solutions.push(sol);
                    }
                }
                Subsumption::Minimal => {
                    let same = |s: &Solution| s.bindings == sol.bindings;
                    if solutions.iter().any(|s| same(s) && s.context.is_subset(&sol.context)) {
                        continue;
                    }
                    solutions.retain(|s| !(same(s) && sol.context.is_subset(&s.context)));
                    solutions.push(sol);
                }
            }
        }
        Ok(SolveResult {
            solutions,
            metrics: Metrics::of(&self.store, inferences, start),
        })
    }

    /// Evaluates every `U*i` once, in a scratch table store, grounding the
    /// remainder variables over the framework constants and those of the first
    /// query, then seals the asserted facts.
    fn run_setup(&mut self, query: &[Literal], initial: &Context) -> Result<(), EngineError> {
        let start = Instant::now();
        let mut universe = self.constants.clone();
        let mut acc = Vec::new();
        for l in query.iter().chain(initial.iter()) {
            l.args.iter().for_each(|a| a.collect_constants(&mut acc));
        }
        universe.extend(acc);
        let universe: Vec<machine::RTerm> = universe.iter().map(machine::constant).collect();
        let mut scratch = TableStore::new();
        let (r, facts, inferences) = {
            let mut m = Machine::new(
                &self.prog,
                &mut scratch,
                self.opts.ic_mode,
                self.opts.subsumption,
                self.opts.max_steps,
                true,
            );
            let mut r = Ok(());
            for ic in &self.prog.ic_clauses {
                r = m.run_ic(ic, &universe);
                if r.is_err() {
                    break;
                }
            }
            (r, m.setup_facts.take().unwrap_or_default(), m.inferences)
        };
        r?;
        for f in facts {
            self.store.assert_ic(f)?;
        }
        self.store.seal();
        self.setup = Some(Metrics::of(&scratch, inferences, start));
        Ok(())
    }
}

/// One-shot solve with a fresh table store.
pub fn solve(
    tp: &TransformedProgram,
    query: &[Literal],
    initial: &Context,
    opts: EngineOptions,
) -> Result<SolveResult, EngineError> {
    Solver::new(tp, opts)?.solve(query, initial)
}
