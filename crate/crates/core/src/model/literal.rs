use std::fmt;

use super::term::{write_args, Symbol, Term};

/// Predicate name plus arity, written `name/arity`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PredicateKey {
    pub name: Symbol,
    pub arity: usize,
}

impl PredicateKey {
    pub fn new(name: &str, arity: usize) -> Self {
        PredicateKey {
            name: Symbol::new(name),
            arity,
        }
    }
}

impl fmt::Display for PredicateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// An atom or a negated atom.
///
/// Field order matters: the derived `Ord` compares the predicate name, then
/// the arguments, then the polarity, so `not p(t)` sorts right after `p(t)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub pred: Symbol,
    pub args: Vec<Term>,
    pub negative: bool,
}

impl Literal {
    pub fn new(negative: bool, pred: &str, args: Vec<Term>) -> Self {
        Literal {
            pred: Symbol::new(pred),
            args,
            negative,
        }
    }

    pub fn pos(pred: &str, args: Vec<Term>) -> Self {
        Literal::new(false, pred, args)
    }

    pub fn neg(pred: &str, args: Vec<Term>) -> Self {
        Literal::new(true, pred, args)
    }

    pub fn key(&self) -> PredicateKey {
        PredicateKey {
            name: self.pred.clone(),
            arity: self.args.len(),
        }
    }

    /// Flips the polarity; an involution.
    pub fn complement(&self) -> Literal {
        Literal {
            pred: self.pred.clone(),
            args: self.args.clone(),
            negative: !self.negative,
        }
    }

    /// The same atom with positive polarity.
    pub fn atom(&self) -> Literal {
        Literal {
            negative: false,
            ..self.clone()
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut Vec<Symbol>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }

    pub fn vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_args(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Complement of a literal.
pub fn complement(l: &Literal) -> Literal {
    l.complement()
}
