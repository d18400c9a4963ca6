//! Brute-force reference semantics over the ground program.
//!
//! For a candidate S the program P ∪ P_S gets a fact for every positive
//! member of S, no rule for an atom whose negation is in S, and `a ← u`
//! for every other ground abducible, where `u ← not u` is undefined.

mod ground;
mod wfm;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AbductiveFramework, Context, Literal};

pub use ground::{ground_program, GroundBody, GroundProgram, GroundRule, GroundUniverse};
pub use wfm::{wfm, ThreeValuedModel, Truth};

use ground::GroundRule as Rule;

/// Largest candidate count enumerated before relevance pruning kicks in.
pub const MAX_CANDIDATES: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Every constraint body is false.
    Classic,
    /// No constraint body is true.
    Modified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Minimality {
    All,
    Minimal,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Classic => "classic",
            Semantics::Modified => "modified",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("`{0}` contains a compound term")]
    CompoundTerm(String),
    #[error("query literal `{0}` is not ground")]
    NonGroundQuery(String),
    #[error("{abducibles} ground abducibles give more than {MAX_CANDIDATES} candidate sets")]
    UniverseTooLarge { abducibles: usize },
}

/// Abducible state in a candidate set.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Pick {
    Absent,
    Pos,
    Neg,
}

struct Evaluator {
    gp: GroundProgram,
    abducibles: Vec<usize>,
    undefined: usize,
    query: Vec<(usize, bool)>,
}

impl Evaluator {
    fn new(fw: &AbductiveFramework, query: &[Literal]) -> Result<(Self, GroundUniverse), OracleError> {
        if let Some(l) = query.iter().find(|l| !l.is_ground()) {
            return Err(OracleError::NonGroundQuery(l.to_string()));
        }
        let (mut gp, universe) = ground_program(fw, query)?;
        let undefined = gp.atoms.len();
        // reserved atom, outside the literal namespace
        gp.atoms.push(Literal::pos("$undefined", vec![]));
        gp.rules.push(Rule {
            head: undefined,
            pos: vec![],
            neg: vec![undefined],
        });
        let abducibles = universe
            .ground_abducibles
            .iter()
            .map(|a| gp.atom_id(a).expect("interned during grounding"))
            .collect();
        let query = query
            .iter()
            .map(|l| (gp.atom_id(&l.atom()).expect("interned during grounding"), l.negative))
            .collect();
        Ok((
            Evaluator {
                gp,
                abducibles,
                undefined,
                query,
            },
            universe,
        ))
    }

    /// (true, not-false) masks of P ∪ P_S.
    fn model(&self, picks: &[(usize, Pick)]) -> (Vec<bool>, Vec<bool>) {
        let mut rules = self.gp.rules.clone();
        for &(a, p) in picks {
            match p {
                Pick::Pos => rules.push(Rule {
                    head: a,
                    pos: vec![],
                    neg: vec![],
                }),
                Pick::Neg => {}
                Pick::Absent => rules.push(Rule {
                    head: a,
                    pos: vec![self.undefined],
                    neg: vec![],
                }),
            }
        }
        wfm::wfm_masks(self.gp.atoms.len(), &rules)
    }

    fn accepts(&self, picks: &[(usize, Pick)], semantics: Semantics) -> bool {
        let (t, u) = self.model(picks);
        let lit_true = |a: usize, neg: bool| if neg { !u[a] } else { t[a] };
        let lit_false = |a: usize, neg: bool| if neg { t[a] } else { !u[a] };
        if !self.query.iter().all(|&(a, neg)| lit_true(a, neg)) {
            return false;
        }
        self.gp.ics.iter().all(|b| {
            let lits = || b.pos.iter().map(|&a| (a, false)).chain(b.neg.iter().map(|&a| (a, true)));
            match semantics {
                Semantics::Classic => lits().any(|(a, n)| lit_false(a, n)),
                Semantics::Modified => !lits().all(|(a, n)| lit_true(a, n)),
            }
        })
    }

    /// Ground abducible atoms reachable from the query and constraint bodies.
    fn relevant(&self) -> Vec<bool> {
        let n = self.gp.atoms.len();
        let mut by_head: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, r) in self.gp.rules.iter().enumerate() {
            by_head[r.head].push(i);
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = self.query.iter().map(|&(a, _)| a).collect();
        for b in &self.gp.ics {
            stack.extend(b.pos.iter().chain(&b.neg).copied());
        }
        while let Some(a) = stack.pop() {
            if std::mem::replace(&mut seen[a], true) {
                continue;
            }
            for &ri in &by_head[a] {
                let r = &self.gp.rules[ri];
                stack.extend(r.pos.iter().chain(&r.neg).copied());
            }
        }
        seen
    }
}

fn candidates(n: usize) -> Option<u64> {
    3u64.checked_pow(n as u32).filter(|&c| c <= MAX_CANDIDATES)
}

/// Every consistent S over the ground abducibles accepted under `semantics`,
/// sorted; `Minimal` keeps only the ⊆-minimal ones.
pub fn enumerate_solutions(
    fw: &AbductiveFramework,
    query: &[Literal],
    semantics: Semantics,
    minimality: Minimality,
) -> Result<Vec<Context>, OracleError> {
    let (ev, _) = Evaluator::new(fw, query)?;
    let mut free: Vec<usize> = ev.abducibles.clone();
    if candidates(free.len()).is_none() {
        let rel = ev.relevant();
        free.retain(|&a| rel[a]);
    }
    let fixed: Vec<(usize, Pick)> = ev
        .abducibles
        .iter()
        .filter(|a| !free.contains(a))
        .map(|&a| (a, Pick::Absent))
        .collect();
    let total = candidates(free.len()).ok_or(OracleError::UniverseTooLarge {
        abducibles: free.len(),
    })?;
    let mut out = Vec::new();
    let mut picks: Vec<(usize, Pick)> = free.iter().map(|&a| (a, Pick::Absent)).chain(fixed).collect();
    for code in 0..total {
        let mut c = code;
        for p in picks.iter_mut().take(free.len()) {
            p.1 = match c % 3 {
                0 => Pick::Absent,
                1 => Pick::Pos,
                _ => Pick::Neg,
            };
            c /= 3;
        }
        if ev.accepts(&picks, semantics) {
            let lits = picks.iter().filter(|p| p.1 != Pick::Absent).map(|&(a, p)| {
                let atom = ev.gp.atoms[a].clone();
                if p == Pick::Neg {
                    atom.complement()
                } else {
                    atom
                }
            });
            out.push(Context::new(lits).expect("one pick per atom is consistent"));
        }
    }
    if minimality == Minimality::Minimal {
        out = minimal_antichain(out);
    }
    out.sort();
    Ok(out)
}

/// The ⊆-minimal members of `sets`, deduplicated.
pub fn minimal_antichain(mut sets: Vec<Context>) -> Vec<Context> {
    sets.sort_by_key(Context::len);
    sets.dedup();
    let mut kept: Vec<Context> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept
}

/// The well-founded model of P ∪ P_S for a given candidate S.
pub fn model_for(fw: &AbductiveFramework, query: &[Literal], s: &Context) -> Result<ThreeValuedModel, OracleError> {
    let (ev, _) = Evaluator::new(fw, query)?;
    let picks: Vec<(usize, Pick)> = ev
        .abducibles
        .iter()
        .map(|&a| {
            let atom = &ev.gp.atoms[a];
            let p = if s.contains(atom) {
                Pick::Pos
            } else if s.contains(&atom.complement()) {
                Pick::Neg
            } else {
                Pick::Absent
            };
            (a, p)
        })
        .collect();
    let (t, u) = ev.model(&picks);
    let mut m = ThreeValuedModel::default();
    for (i, atom) in ev.gp.atoms.iter().enumerate() {
        if i == ev.undefined {
            continue;
        }
        let set = match (t[i], u[i]) {
            (true, _) => &mut m.true_atoms,
            (false, true) => &mut m.undefined_atoms,
            (false, false) => &mut m.false_atoms,
        };
        set.insert(atom.clone());
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::RUNNING_EXAMPLE;
    use crate::parser::{parse_literal, parse_literals, parse_program_str, parse_query};

    fn ctx(s: &str) -> Context {
        Context::new(parse_literals(s).unwrap()).unwrap()
    }

    fn lit(s: &str) -> Literal {
        parse_literal(s).unwrap()
    }

    #[test]
    fn grounding_running_example() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let (gp, u) = ground_program(&fw, &parse_query("p(0)").unwrap()).unwrap();
        assert_eq!(u.constants.len(), 2);
        assert_eq!(gp.rules.len(), 6);
        assert_eq!(u.ground_abducibles.len(), 6);
    }

    #[test]
    fn propositional_program_is_unchanged() {
        let fw = parse_program_str("a :- b, not c. b.").unwrap();
        let (gp, _) = ground_program(&fw, &[]).unwrap();
        assert_eq!(gp.rules.len(), 2);
    }

    #[test]
    fn compound_terms_are_rejected() {
        let fw = parse_program_str("p(f(g(X))) :- q(X).").unwrap();
        assert!(matches!(ground_program(&fw, &[]), Err(OracleError::CompoundTerm(_))));
    }

    #[test]
    fn even_loop_is_undefined() {
        let fw = parse_program_str("a :- not b. b :- not a.").unwrap();
        let (gp, _) = ground_program(&fw, &[]).unwrap();
        let m = wfm(&gp);
        assert_eq!(m.truth(&lit("a")), Truth::Undefined);
        assert_eq!(m.truth(&lit("b")), Truth::Undefined);
    }

    #[test]
    fn positive_loop_is_false() {
        let fw = parse_program_str("a :- a.").unwrap();
        let (gp, _) = ground_program(&fw, &[]).unwrap();
        assert_eq!(wfm(&gp).truth(&lit("a")), Truth::False);
    }

    #[test]
    fn running_example_model() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let s = ctx("q(0), q(1), not t(0), not r(0), not r(1)");
        let m = model_for(&fw, &parse_query("p(0)").unwrap(), &s).unwrap();
        assert_eq!(m.truth(&lit("s(0)")), Truth::True);
        assert_eq!(m.truth(&lit("p(0)")), Truth::True);
        assert_eq!(m.truth(&lit("u(0)")), Truth::False);
    }

    #[test]
    fn modified_minimal_running_example() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let sols = enumerate_solutions(&fw, &parse_query("p(0)").unwrap(), Semantics::Modified, Minimality::Minimal)
            .unwrap();
        assert_eq!(sols, vec![ctx("q(0), q(1), not t(0)")]);
    }

    #[test]
    fn classic_minimal_running_example() {
        // u(1) stays undefined unless t(1) is fixed, so classic needs not t(1) too
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let sols = enumerate_solutions(&fw, &parse_query("p(0)").unwrap(), Semantics::Classic, Minimality::Minimal)
            .unwrap();
        assert_eq!(sols, vec![ctx("q(0), q(1), not t(0), not t(1), not r(0), not r(1)")]);
    }

    #[test]
    fn undefined_query_has_no_solutions() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let sols =
            enumerate_solutions(&fw, &parse_query("w").unwrap(), Semantics::Modified, Minimality::All).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn classic_is_contained_in_modified() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let q = parse_query("p(0)").unwrap();
        let classic = enumerate_solutions(&fw, &q, Semantics::Classic, Minimality::All).unwrap();
        let modified = enumerate_solutions(&fw, &q, Semantics::Modified, Minimality::All).unwrap();
        assert!(!classic.is_empty());
        assert!(classic.iter().all(|c| modified.contains(c)));
    }

    #[test]
    fn large_universe_is_refused() {
        let fw = parse_program_str("abducible a/1. p :- a(0). ic :- a(X). d(0). d(1). d(2). d(3). d(4). d(5). d(6). d(7). d(8). d(9). d(10). d(11). d(12).").unwrap();
        let err = enumerate_solutions(&fw, &parse_query("p").unwrap(), Semantics::Modified, Minimality::All);
        assert_eq!(err, Err(OracleError::UniverseTooLarge { abducibles: 13 }));
    }

    #[test]
    fn relevance_pruning_keeps_minimal_solutions() {
        let fw = parse_program_str("abducible a/1. p :- a(0). d(0). d(1). d(2). d(3). d(4). d(5). d(6). d(7). d(8). d(9). d(10). d(11). d(12).").unwrap();
        let sols = enumerate_solutions(&fw, &parse_query("p").unwrap(), Semantics::Modified, Minimality::Minimal).unwrap();
        assert_eq!(sols, vec![ctx("a(0)")]);
    }
}
