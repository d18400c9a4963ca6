use std::fmt;
use std::sync::Arc;

/// Interned-by-refcount name used for predicates, constants and variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// A first-order term.
///
/// The variant order is significant: the derived `Ord` sorts integers
/// first (numerically), then constants, compounds and finally variables.
/// Context canonicalization relies on this order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Int(i64),
    Const(Symbol),
    Compound(Symbol, Vec<Term>),
    Var(Symbol),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Symbol::new(name))
    }

    /// An integer when `name` is a decimal literal, so that built terms agree with parsed ones.
    pub fn constant(name: &str) -> Self {
        match name.parse::<i64>() {
            Ok(i) => Term::Int(i),
            Err(_) => Term::Const(Symbol::new(name)),
        }
    }

    /// Builds a compound term; an empty argument list collapses to a constant.
    pub fn compound(functor: &str, args: Vec<Term>) -> Self {
        if args.is_empty() {
            Term::constant(functor)
        } else {
            Term::Compound(Symbol::new(functor), args)
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Int(_) | Term::Const(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Ground and not compound.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Term::Int(_) | Term::Const(_))
    }

    /// Nesting depth; constants, integers and variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Compound(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn occurs(&self, var: &Symbol) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Int(_) | Term::Const(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    /// Appends the variables of this term to `out` in first-occurrence order.
    pub fn collect_vars(&self, out: &mut Vec<Symbol>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Int(_) | Term::Const(_) => {}
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Appends the atomic ground subterms (constants and integers).
    pub fn collect_constants(&self, out: &mut Vec<Term>) {
        match self {
            Term::Var(_) => {}
            Term::Int(_) | Term::Const(_) => {
                if !out.contains(self) {
                    out.push(self.clone());
                }
            }
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_constants(out)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Int(i) => write!(f, "{i}"),
            Term::Compound(name, args) => {
                write!(f, "{name}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}
