use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::literal::{Literal, PredicateKey};
use super::term::Term;

/// `head :- body.`; a fact when the body is empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Literal,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn new(head: Literal, body: Vec<Literal>) -> Self {
        debug_assert!(!head.negative, "rule heads are positive");
        Rule { head, body }
    }

    pub fn fact(head: Literal) -> Self {
        Rule::new(head, Vec::new())
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// Contribution to program size: one for the head plus the body length.
    pub fn size(&self) -> usize {
        1 + self.body.len()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        write_body(f, &self.body)?;
        f.write_str(".")
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn write_body(f: &mut fmt::Formatter<'_>, body: &[Literal]) -> fmt::Result {
    for (i, l) in body.iter().enumerate() {
        f.write_str(if i == 0 { " :- " } else { ", " })?;
        write!(f, "{l}")?;
    }
    Ok(())
}

/// A denial: the body must not become true in an accepted solution.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegrityConstraint {
    pub body: Vec<Literal>,
}

impl fmt::Display for IntegrityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ic")?;
        write_body(f, &self.body)?;
        f.write_str(".")
    }
}

impl fmt::Debug for IntegrityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrameworkError {
    #[error("rule head `{0}` is abducible")]
    AbducibleHead(String),
    #[error("integrity constraint has an empty body")]
    EmptyIcBody,
}

/// A program, its abducible predicates and its integrity constraints.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct AbductiveFramework {
    pub program: Vec<Rule>,
    pub abducibles: BTreeSet<PredicateKey>,
    pub ics: Vec<IntegrityConstraint>,
}

impl AbductiveFramework {
    /// Validates that no rule defines an abducible and no IC body is empty.
    pub fn new(
        program: Vec<Rule>,
        abducibles: BTreeSet<PredicateKey>,
        ics: Vec<IntegrityConstraint>,
    ) -> Result<Self, FrameworkError> {
        let fw = AbductiveFramework {
            program,
            abducibles,
            ics,
        };
        fw.validate()?;
        Ok(fw)
    }

    pub fn validate(&self) -> Result<(), FrameworkError> {
        if let Some(r) = self.program.iter().find(|r| self.is_abducible(&r.head.key())) {
            return Err(FrameworkError::AbducibleHead(r.head.to_string()));
        }
        if self.ics.iter().any(|ic| ic.body.is_empty()) {
            return Err(FrameworkError::EmptyIcBody);
        }
        Ok(())
    }

    pub fn is_abducible(&self, key: &PredicateKey) -> bool {
        self.abducibles.contains(key)
    }

    pub fn is_abducible_literal(&self, l: &Literal) -> bool {
        self.abducibles.contains(&l.key())
    }

    /// Rules grouped by head predicate, in source order within each group.
    pub fn rules_by_predicate(&self) -> BTreeMap<PredicateKey, Vec<&Rule>> {
        let mut out: BTreeMap<PredicateKey, Vec<&Rule>> = BTreeMap::new();
        for r in &self.program {
            out.entry(r.head.key()).or_default().push(r);
        }
        out
    }

    /// Predicates that have at least one rule, in first-definition order.
    pub fn defined_predicates(&self) -> Vec<PredicateKey> {
        let mut seen = Vec::new();
        for r in &self.program {
            let k = r.head.key();
            if !seen.contains(&k) {
                seen.push(k);
            }
        }
        seen
    }

    /// Every non-abducible predicate mentioned anywhere, sorted.
    pub fn mentioned_predicates(&self) -> BTreeSet<PredicateKey> {
        let mut out = BTreeSet::new();
        for r in &self.program {
            out.insert(r.head.key());
            out.extend(r.body.iter().map(Literal::key));
        }
        for ic in &self.ics {
            out.extend(ic.body.iter().map(Literal::key));
        }
        out.retain(|k| !self.abducibles.contains(k));
        out
    }

    /// Atomic constants occurring in rules and ICs, sorted.
    pub fn constants(&self) -> BTreeSet<Term> {
        let mut acc = Vec::new();
        for r in &self.program {
            r.head.args.iter().for_each(|a| a.collect_constants(&mut acc));
            for l in &r.body {
                l.args.iter().for_each(|a| a.collect_constants(&mut acc));
            }
        }
        for ic in &self.ics {
            for l in &ic.body {
                l.args.iter().for_each(|a| a.collect_constants(&mut acc));
            }
        }
        acc.into_iter().collect()
    }
}

impl fmt::Display for AbductiveFramework {
    /// Renders in the `.ablp` source syntax; parsing the output yields the same framework.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.abducibles.is_empty() {
            f.write_str("abducible ")?;
            for (i, k) in self.abducibles.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{k}")?;
            }
            f.write_str(".\n")?;
        }
        for r in &self.program {
            writeln!(f, "{r}")?;
        }
        for ic in &self.ics {
            writeln!(f, "{ic}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AbductiveFramework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Σ over rules of (1 + body length).
pub fn program_size(rules: &[Rule]) -> usize {
    rules.iter().map(Rule::size).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program_str;

    #[test]
    fn size_of_running_example_is_eight() {
        let fw = parse_program_str(crate::fixtures::RUNNING_EXAMPLE).unwrap();
        assert_eq!(program_size(&fw.program), 8);
    }

    #[test]
    fn size_of_empty_and_fact() {
        assert_eq!(program_size(&[]), 0);
        let fw = parse_program_str("b(1).").unwrap();
        assert_eq!(program_size(&fw.program), 1);
    }

    #[test]
    fn size_is_additive() {
        let a = parse_program_str(crate::fixtures::RUNNING_EXAMPLE).unwrap().program;
        let b = parse_program_str("x :- y, z. w.").unwrap().program;
        let joined: Vec<Rule> = a.iter().chain(&b).cloned().collect();
        assert_eq!(program_size(&joined), program_size(&a) + program_size(&b));
    }
}
