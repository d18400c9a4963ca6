use std::fmt;

use thiserror::Error;

use super::literal::Literal;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContextError {
    #[error("context contains both `{0}` and its complement")]
    Inconsistent(String),
    #[error("context literal `{0}` is not ground")]
    NonGround(String),
}

/// A consistent set of abducible literals in canonical order.
///
/// Canonical order is the derived `Literal` order: predicate name, then
/// arguments, with a negative literal immediately after its positive form.
/// Two contexts holding the same literals are therefore structurally equal.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    lits: Vec<Literal>,
}

impl Context {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a ground context, rejecting non-ground literals and complementary pairs.
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Result<Self, ContextError> {
        let ctx = Self::with_patterns(lits)?;
        if let Some(l) = ctx.lits.iter().find(|l| !l.is_ground()) {
            return Err(ContextError::NonGround(l.to_string()));
        }
        Ok(ctx)
    }

    /// Like [`Context::new`] but admits non-ground members. Consistency is
    /// checked structurally. Used for integrity-constraint patterns.
    pub fn with_patterns(lits: impl IntoIterator<Item = Literal>) -> Result<Self, ContextError> {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        lits.sort();
        lits.dedup();
        // complementary literals are adjacent in canonical order
        for w in lits.windows(2) {
            if w[0].pred == w[1].pred && w[0].args == w[1].args && w[0].negative != w[1].negative {
                return Err(ContextError::Inconsistent(w[0].to_string()));
            }
        }
        Ok(Context { lits })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn into_literals(self) -> Vec<Literal> {
        self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.lits.iter().all(Literal::is_ground)
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.lits.binary_search(l).is_ok()
    }

    pub fn is_subset(&self, other: &Context) -> bool {
        self.len() <= other.len() && self.lits.iter().all(|l| other.contains(l))
    }

    /// Adds `l` non-redundantly; `None` if its complement is present.
    pub fn try_insert(&self, l: &Literal) -> Option<Context> {
        match self.lits.binary_search(l) {
            Ok(_) => Some(self.clone()),
            Err(pos) => {
                if self.contains(&l.complement()) {
                    return None;
                }
                let mut lits = self.lits.clone();
                lits.insert(pos, l.clone());
                Some(Context { lits })
            }
        }
    }

    /// Adds every literal of `other`; `None` on the first complement clash.
    pub fn union(&self, other: &Context) -> Option<Context> {
        let mut out = self.clone();
        for l in other.literals() {
            out = out.try_insert(l)?;
        }
        Some(out)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Literal> {
        self.lits.iter()
    }

    /// Canonical string rendering of each literal.
    pub fn to_strings(&self) -> Vec<String> {
        self.lits.iter().map(|l| l.to_string()).collect()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> IntoIterator for &'a Context {
    type Item = &'a Literal;
    type IntoIter = std::slice::Iter<'a, Literal>;

    fn into_iter(self) -> Self::IntoIter {
        self.lits.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_literals;

    fn ctx(s: &str) -> Context {
        Context::new(parse_literals(s).unwrap()).unwrap()
    }

    #[test]
    fn canonical_order_puts_negation_after_positive() {
        let c = ctx("not t(0), q(1), r(0), q(0), not r(1)");
        assert_eq!(c.to_string(), "[q(0),q(1),r(0),not r(1),not t(0)]");
    }

    #[test]
    fn rejects_complementary_pair() {
        let lits = parse_literals("r(0), q(1), not r(0)").unwrap();
        assert!(matches!(Context::new(lits), Err(ContextError::Inconsistent(_))));
    }

    #[test]
    fn rejects_non_ground_but_patterns_allow_it() {
        let lits = parse_literals("q(X), r(X)").unwrap();
        assert!(matches!(Context::new(lits.clone()), Err(ContextError::NonGround(_))));
        assert_eq!(Context::with_patterns(lits).unwrap().len(), 2);
    }

    #[test]
    fn duplicates_collapse() {
        assert_eq!(ctx("q(0), q(0)").len(), 1);
    }

    #[test]
    fn try_insert_cases() {
        let c = ctx("q(0)");
        assert_eq!(c.try_insert(&parse_literals("q(0)").unwrap()[0]), Some(c.clone()));
        assert_eq!(c.try_insert(&parse_literals("not q(0)").unwrap()[0]), None);
        assert_eq!(c.try_insert(&parse_literals("q(1)").unwrap()[0]).unwrap().len(), 2);
    }
}
