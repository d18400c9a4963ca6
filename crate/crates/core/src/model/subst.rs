use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::literal::Literal;
use super::term::{Symbol, Term};

/// A finite map from variables to terms, kept idempotent: no bound
/// variable occurs in any binding's right-hand side.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Symbol, Term>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchError {
    #[error("match target `{0}` is not ground")]
    NonGroundTarget(String),
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &Symbol) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.bindings.iter()
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.bindings.get(v) {
                Some(b) => b.clone(),
                None => t.clone(),
            },
            Term::Int(_) | Term::Const(_) => t.clone(),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal {
            pred: l.pred.clone(),
            args: l.args.iter().map(|a| self.apply(a)).collect(),
            negative: l.negative,
        }
    }

    /// Adds `var ↦ t`, rewriting existing bindings so the map stays idempotent.
    /// The caller guarantees `var` is unbound and does not occur in `t` after application.
    fn bind(&mut self, var: Symbol, t: Term) {
        let single = Substitution {
            bindings: BTreeMap::from([(var.clone(), t.clone())]),
        };
        for v in self.bindings.values_mut() {
            *v = single.apply(v);
        }
        self.bindings.insert(var, t);
    }

    fn unify_terms(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.apply(a);
        let b = self.apply(b);
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if other.occurs(x) {
                    return false;
                }
                self.bind(x.clone(), other.clone());
                true
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| self.unify_terms(x, y))
            }
            _ => a == b,
        }
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}↦{v}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<(Symbol, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Symbol, Term)>>(iter: I) -> Self {
        Substitution {
            bindings: iter.into_iter().collect(),
        }
    }
}

/// Most general unifier of two terms, with occurs check.
pub fn unify(a: &Term, b: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    s.unify_terms(a, b).then_some(s)
}

/// Most general unifier of two literals; polarity, predicate and arity must agree.
pub fn unify_literals(a: &Literal, b: &Literal) -> Option<Substitution> {
    if a.negative != b.negative || a.pred != b.pred || a.args.len() != b.args.len() {
        return None;
    }
    let mut s = Substitution::new();
    a.args
        .iter()
        .zip(&b.args)
        .all(|(x, y)| s.unify_terms(x, y))
        .then_some(s)
}

/// One-way matching: finds θ with `pattern·θ = ground`, extending `base`.
/// Returns `Ok(None)` when no such θ exists.
pub fn match_literal_with(
    pattern: &Literal,
    ground: &Literal,
    base: &Substitution,
) -> Result<Option<Substitution>, MatchError> {
    if !ground.is_ground() {
        return Err(MatchError::NonGroundTarget(ground.to_string()));
    }
    if pattern.negative != ground.negative
        || pattern.pred != ground.pred
        || pattern.args.len() != ground.args.len()
    {
        return Ok(None);
    }
    let mut s = base.clone();
    for (p, g) in pattern.args.iter().zip(&ground.args) {
        if !match_term(p, g, &mut s) {
            return Ok(None);
        }
    }
    Ok(Some(s))
}

/// One-way matching of a pattern literal against a ground literal.
pub fn match_literal(pattern: &Literal, ground: &Literal) -> Result<Option<Substitution>, MatchError> {
    match_literal_with(pattern, ground, &Substitution::new())
}

fn match_term(p: &Term, g: &Term, s: &mut Substitution) -> bool {
    match p {
        Term::Var(v) => match s.bindings.get(v) {
            Some(bound) => bound == g,
            None => {
                s.bindings.insert(v.clone(), g.clone());
                true
            }
        },
        Term::Compound(f, xs) => match g {
            Term::Compound(h, ys) if f == h && xs.len() == ys.len() => {
                xs.iter().zip(ys).all(|(x, y)| match_term(x, y, s))
            }
            _ => false,
        },
        _ => p == g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> Literal {
        crate::parser::parse_literal(s).unwrap()
    }

    #[test]
    fn unify_binds_single_variable() {
        let s = unify_literals(&lit("p(X)"), &lit("p(0)")).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.get(&Symbol::new("X")), Some(&Term::Int(0)));
    }

    #[test]
    fn unify_rejects_predicate_mismatch() {
        assert!(unify_literals(&lit("p(X)"), &lit("q(X)")).is_none());
    }

    #[test]
    fn unify_rejects_inconsistent_bindings() {
        assert!(unify_literals(&lit("p(X,X)"), &lit("p(0,1)")).is_none());
    }

    #[test]
    fn unify_occurs_check() {
        let x = Term::var("X");
        let fx = Term::compound("f", vec![x.clone()]);
        assert!(unify(&x, &fx).is_none());
    }

    #[test]
    fn unify_is_idempotent_across_chains() {
        let s = unify_literals(&lit("p(X,Y,Z)"), &lit("p(Y,Z,a)")).unwrap();
        for (_, t) in s.iter() {
            assert_eq!(t, &Term::constant("a"));
        }
    }

    #[test]
    fn match_binds_pattern_variables() {
        let s = match_literal(&lit("q(X)"), &lit("q(1)")).unwrap().unwrap();
        assert_eq!(s.get(&Symbol::new("X")), Some(&Term::Int(1)));
        assert_eq!(match_literal(&lit("q(0)"), &lit("q(1)")).unwrap(), None);
    }

    #[test]
    fn match_errors_on_non_ground_target() {
        assert!(matches!(
            match_literal(&lit("q(X)"), &lit("q(X)")),
            Err(MatchError::NonGroundTarget(_))
        ));
    }

    #[test]
    fn complement_is_an_involution() {
        let l = lit("r(1,2)");
        assert_eq!(l.complement().complement(), l);
        assert_eq!(lit("q(0)").complement(), lit("not q(0)"));
        assert_eq!(lit("not q(0)").complement(), lit("q(0)"));
    }
}
