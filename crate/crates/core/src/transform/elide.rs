use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{AbductiveFramework, Context, ContextError, IntegrityConstraint, Literal, PredicateKey, Rule, Term};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElisionError {
    #[error("`{lit}` does not carry `{expected}` at elided position {position}")]
    Mismatch {
        lit: String,
        position: usize,
        expected: String,
    },
    #[error(transparent)]
    Context(#[from] ContextError),
}

/// Argument positions removed by [`elide_constant_arguments`], keyed by the
/// original predicate; positions are 0-based and ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElisionReport {
    pub positions: BTreeMap<PredicateKey, Vec<(usize, Term)>>,
}

impl ElisionReport {
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Drops the elided positions of `l`, requiring the recorded constants there.
    pub fn elide_literal(&self, l: &Literal) -> Result<Literal, ElisionError> {
        let Some(pos) = self.positions.get(&l.key()) else {
            return Ok(l.clone());
        };
        for (p, c) in pos {
            if &l.args[*p] != c {
                return Err(ElisionError::Mismatch {
                    lit: l.to_string(),
                    position: *p,
                    expected: c.to_string(),
                });
            }
        }
        let args = l
            .args
            .iter()
            .enumerate()
            .filter(|(i, _)| !pos.iter().any(|(p, _)| p == i))
            .map(|(_, t)| t.clone())
            .collect();
        Ok(Literal { args, ..l.clone() })
    }

    pub fn elide_literals(&self, ls: &[Literal]) -> Result<Vec<Literal>, ElisionError> {
        ls.iter().map(|l| self.elide_literal(l)).collect()
    }

    /// Re-inserts the elided constants of a literal of the elided framework.
    pub fn restore_literal(&self, l: &Literal) -> Literal {
        let found = self.positions.iter().find(|(k, pos)| {
            k.name == l.pred && k.arity == l.args.len() + pos.len()
        });
        let Some((key, pos)) = found else {
            return l.clone();
        };
        let mut rest = l.args.iter();
        let args = (0..key.arity)
            .map(|i| match pos.iter().find(|(p, _)| *p == i) {
                Some((_, c)) => c.clone(),
                None => rest.next().expect("arity checked").clone(),
            })
            .collect();
        Literal { args, ..l.clone() }
    }

    pub fn restore_context(&self, c: &Context) -> Result<Context, ElisionError> {
        Ok(Context::new(c.iter().map(|l| self.restore_literal(l)))?)
    }
}

fn occurrences(fw: &AbductiveFramework) -> impl Iterator<Item = &Literal> {
    fw.program
        .iter()
        .flat_map(|r| std::iter::once(&r.head).chain(&r.body))
        .chain(fw.ics.iter().flat_map(|ic| &ic.body))
}

/// Drops every argument position that holds the same atomic constant in
/// every occurrence of its predicate (rule heads, bodies and ICs).
/// A predicate is left alone when its reduced key would collide with
/// another predicate of the framework.
pub fn elide_constant_arguments(fw: &AbductiveFramework) -> (AbductiveFramework, ElisionReport) {
    let mut candidates: BTreeMap<PredicateKey, Vec<Option<Term>>> = BTreeMap::new();
    for l in occurrences(fw) {
        let slots = candidates
            .entry(l.key())
            .or_insert_with(|| l.args.iter().map(|t| t.is_atomic().then(|| t.clone())).collect());
        for (slot, t) in slots.iter_mut().zip(&l.args) {
            if slot.as_ref() != Some(t) {
                *slot = None;
            }
        }
    }
    let mut keys: BTreeSet<PredicateKey> = candidates.keys().cloned().collect();
    keys.extend(fw.abducibles.iter().cloned());
    let mut report = ElisionReport::default();
    for (key, slots) in candidates {
        let pos: Vec<(usize, Term)> = slots
            .into_iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|t| (i, t)))
            .collect();
        if pos.is_empty() {
            continue;
        }
        let reduced = PredicateKey {
            name: key.name.clone(),
            arity: key.arity - pos.len(),
        };
        if keys.contains(&reduced) {
            continue;
        }
        report.positions.insert(key, pos);
    }
    let lit = |l: &Literal| report.elide_literal(l).expect("positions are constant everywhere");
    let program = fw
        .program
        .iter()
        .map(|r| Rule::new(lit(&r.head), r.body.iter().map(lit).collect()))
        .collect();
    let ics = fw
        .ics
        .iter()
        .map(|ic| IntegrityConstraint {
            body: ic.body.iter().map(lit).collect(),
        })
        .collect();
    let abducibles = fw
        .abducibles
        .iter()
        .map(|k| match report.positions.get(k) {
            Some(pos) => PredicateKey {
                name: k.name.clone(),
                arity: k.arity - pos.len(),
            },
            None => k.clone(),
        })
        .collect();
    (
        AbductiveFramework {
            program,
            abducibles,
            ics,
        },
        report,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_literal, parse_program_str};

    #[test]
    fn phase_argument_is_dropped() {
        let fw = parse_program_str(
            "abducible induced/2.\n\
             active(phase0, G) :- induced(phase0, G).\n\
             goal :- active(phase0, aif).\n\
             ic :- induced(phase0, apoptosis).",
        )
        .unwrap();
        let (out, report) = elide_constant_arguments(&fw);
        assert_eq!(
            out.to_string(),
            "abducible induced/1.\nactive(G) :- induced(G).\ngoal :- active(aif).\nic :- induced(apoptosis).\n"
        );
        let l = parse_literal("active(phase0,aif)").unwrap();
        let e = report.elide_literal(&l).unwrap();
        assert_eq!(e.to_string(), "active(aif)");
        assert_eq!(report.restore_literal(&e), l);
        assert!(report.elide_literal(&parse_literal("active(phase1,aif)").unwrap()).is_err());
    }

    #[test]
    fn varying_argument_is_kept() {
        let fw = parse_program_str("p(0). q :- p(X).").unwrap();
        let (out, report) = elide_constant_arguments(&fw);
        assert!(report.is_empty());
        assert_eq!(out, fw);
    }

    #[test]
    fn empty_program() {
        let (out, report) = elide_constant_arguments(&AbductiveFramework::default());
        assert!(report.is_empty());
        assert_eq!(out, AbductiveFramework::default());
    }

    #[test]
    fn collisions_are_skipped() {
        let fw = parse_program_str("p(a, X) :- q(X, 2). p(Y) :- q(Y, 2). q(1, 2).").unwrap();
        let (_, report) = elide_constant_arguments(&fw);
        assert!(!report.positions.contains_key(&PredicateKey::new("p", 2)));
        assert!(report.positions.contains_key(&PredicateKey::new("q", 2)));
    }
}
