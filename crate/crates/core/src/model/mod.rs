//! Terms, literals, rules, frameworks and contexts.

mod context;
mod literal;
mod program;
mod subst;
mod term;

pub use context::{Context, ContextError};
pub use literal::{complement, Literal, PredicateKey};
pub use program::{program_size, AbductiveFramework, FrameworkError, IntegrityConstraint, Rule};
pub use subst::{match_literal, match_literal_with, unify, unify_literals, MatchError, Substitution};
pub use term::{Symbol, Term};
