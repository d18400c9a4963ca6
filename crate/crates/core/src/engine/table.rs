use std::collections::HashMap;
use std::fmt;

use crate::model::{Context, Literal, Term};
use crate::transform::TPred;

use super::{EngineError, Subsumption};

pub const ENTRY_COST: u64 = 64;
pub const ANSWER_COST: u64 = 16;
pub const LIT_COST: u64 = 8;
pub const ARG_COST: u64 = 8;

/// A tabled call up to variable renaming: variables are numbered `_0`, `_1`, …
/// in order of first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CallKey {
    pub pred: TPred,
    pub args: Vec<Term>,
}

impl fmt::Display for CallKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", args.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub args: Vec<Term>,
    pub context: Context,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    Added,
    Subsumed,
    Duplicate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableStatus {
    InProgress,
    Complete,
}

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub key: CallKey,
    pub answers: Vec<Answer>,
    pub status: TableStatus,
    pub(crate) version: u64,
    pub(crate) dfn: usize,
    pub(crate) low: usize,
    pub(crate) neg_depth: u32,
    pub(crate) active: bool,
    pub(crate) epoch: u64,
}

#[derive(Clone, Debug, Default)]
pub struct TableStore {
    entries: Vec<TableEntry>,
    index: HashMap<CallKey, usize>,
    ic_facts: Vec<Vec<Literal>>,
    sealed: bool,
}

impl TableStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn get(&self, key: &CallKey) -> Option<&TableEntry> {
        self.index.get(key).map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn answer_count(&self) -> usize {
        self.entries.iter().map(|e| e.answers.len()).sum()
    }

    /// Inserts into the entry for `key`, creating a complete entry if absent.
    pub fn table_insert(&mut self, key: &CallKey, answer: Answer, mode: Subsumption) -> InsertOutcome {
        let idx = match self.index.get(key) {
            Some(&i) => i,
            None => {
                let i = self.create(key.clone(), 0, 0);
                self.entries[i].status = TableStatus::Complete;
                i
            }
        };
        self.insert_at(idx, answer, mode)
    }

    pub(crate) fn index_of(&self, key: &CallKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub(crate) fn entry(&self, idx: usize) -> &TableEntry {
        &self.entries[idx]
    }

    pub(crate) fn entry_mut(&mut self, idx: usize) -> &mut TableEntry {
        &mut self.entries[idx]
    }

    pub(crate) fn create(&mut self, key: CallKey, neg_depth: u32, dfn: usize) -> usize {
        let idx = self.entries.len();
        self.index.insert(key.clone(), idx);
        self.entries.push(TableEntry {
            key,
            answers: Vec::new(),
            status: TableStatus::InProgress,
            version: 0,
            dfn,
            low: dfn,
            neg_depth,
            active: false,
            epoch: 0,
        });
        idx
    }

    pub(crate) fn insert_at(&mut self, idx: usize, answer: Answer, mode: Subsumption) -> InsertOutcome {
        let e = &mut self.entries[idx];
        let out = insert_answer(&mut e.answers, answer, mode);
        if out == InsertOutcome::Added {
            e.version += 1;
        }
        out
    }

    /// Drops entries left in progress by an aborted evaluation.
    pub(crate) fn discard_incomplete(&mut self) {
        if self.entries.iter().all(|e| e.status == TableStatus::Complete) {
            return;
        }
        self.entries.retain(|e| e.status == TableStatus::Complete);
        self.index = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.key.clone(), i))
            .collect();
    }

    /// Clears all answer tables; asserted constraint facts are kept.
    pub fn abolish_tables(&mut self) {
        self.entries.clear();
        self.index.clear();
    }

    pub fn table_bytes(&self) -> u64 {
        self.entries
            .iter()
            .map(|e| {
                ENTRY_COST
                    + e.answers
                        .iter()
                        .map(|a| {
                            ANSWER_COST
                                + a.context
                                    .iter()
                                    .map(|l| LIT_COST + ARG_COST * l.args.len() as u64)
                                    .sum::<u64>()
                        })
                        .sum::<u64>()
            })
            .sum()
    }

    pub fn ic_facts(&self) -> &[Vec<Literal>] {
        &self.ic_facts
    }

    /// Records a constraint pattern list; duplicates are stored once.
    pub fn assert_ic(&mut self, lits: Vec<Literal>) -> Result<(), EngineError> {
        if self.sealed {
            return Err(EngineError::AssertAfterSetup);
        }
        if !self.ic_facts.contains(&lits) {
            self.ic_facts.push(lits);
        }
        Ok(())
    }

    /// Freezes the constraint facts; later asserts are errors.
    pub fn seal(&mut self) {
        self.sealed = true;
    }

    pub fn is_sealed(&self) -> bool {
        self.sealed
    }
}

/// all: set insertion. minimal: keep a ⊆-antichain among answers with equal arguments.
fn insert_answer(answers: &mut Vec<Answer>, a: Answer, mode: Subsumption) -> InsertOutcome {
    match mode {
        Subsumption::All => {
            if answers.contains(&a) {
                return InsertOutcome::Duplicate;
            }
        }
        Subsumption::Minimal => {
            for b in answers.iter().filter(|b| b.args == a.args) {
                if b.context == a.context {
                    return InsertOutcome::Duplicate;
                }
                if b.context.is_subset(&a.context) {
                    return InsertOutcome::Subsumed;
                }
            }
            answers.retain(|b| !(b.args == a.args && a.context.is_subset(&b.context)));
        }
    }
    answers.push(a);
    InsertOutcome::Added
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Symbol, Term};
    use crate::parser::parse_literals;

    fn ctx(s: &str) -> Context {
        Context::new(parse_literals(s).unwrap()).unwrap()
    }

    fn key() -> CallKey {
        CallKey {
            pred: TPred::Tabled(Symbol::new("p")),
            args: vec![Term::Int(0)],
        }
    }

    fn ans(s: &str) -> Answer {
        Answer {
            args: vec![Term::Int(0)],
            context: ctx(s),
        }
    }

    #[test]
    fn superset_is_subsumed() {
        let mut s = TableStore::new();
        s.table_insert(&key(), ans("a(1)"), Subsumption::Minimal);
        assert_eq!(s.table_insert(&key(), ans("a(1), b(1)"), Subsumption::Minimal), InsertOutcome::Subsumed);
    }

    #[test]
    fn subset_evicts() {
        let mut s = TableStore::new();
        s.table_insert(&key(), ans("a(1), b(1)"), Subsumption::Minimal);
        assert_eq!(s.table_insert(&key(), ans("a(1)"), Subsumption::Minimal), InsertOutcome::Added);
        assert_eq!(s.get(&key()).unwrap().answers, vec![ans("a(1)")]);
    }

    #[test]
    fn incomparable_answers_coexist() {
        let mut s = TableStore::new();
        s.table_insert(&key(), ans("a(1)"), Subsumption::Minimal);
        assert_eq!(s.table_insert(&key(), ans("b(1)"), Subsumption::Minimal), InsertOutcome::Added);
        assert_eq!(s.answer_count(), 2);
    }

    #[test]
    fn all_mode_keeps_supersets() {
        let mut s = TableStore::new();
        s.table_insert(&key(), ans("a(1)"), Subsumption::All);
        assert_eq!(s.table_insert(&key(), ans("a(1), b(1)"), Subsumption::All), InsertOutcome::Added);
        assert_eq!(s.table_insert(&key(), ans("a(1)"), Subsumption::All), InsertOutcome::Duplicate);
    }

    #[test]
    fn byte_model() {
        let mut s = TableStore::new();
        assert_eq!(s.table_bytes(), 0);
        s.table_insert(&key(), ans("q(0)"), Subsumption::All);
        assert_eq!(s.table_bytes(), 96);
    }

    #[test]
    fn abolish_keeps_ic_facts() {
        let mut s = TableStore::new();
        s.assert_ic(parse_literals("q(X), r(X)").unwrap()).unwrap();
        s.assert_ic(parse_literals("q(X), r(X)").unwrap()).unwrap();
        s.table_insert(&key(), ans("q(0)"), Subsumption::All);
        s.abolish_tables();
        assert!(s.is_empty());
        assert_eq!(s.ic_facts().len(), 1);
        s.abolish_tables();
        assert!(s.is_empty());
    }

    #[test]
    fn assert_after_seal_fails() {
        let mut s = TableStore::new();
        s.seal();
        assert_eq!(s.assert_ic(parse_literals("a(1)").unwrap()), Err(EngineError::AssertAfterSetup));
    }
}
