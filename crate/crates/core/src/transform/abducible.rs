use crate::model::{Literal, PredicateKey, Term};

use super::ir::{CtxAlloc, CtxArg, Goal, HeadIo, THead, TPred, TRule};

/// `a(X̄, I, O) :- insert_abducible(a(X̄), I, O)` and its negative twin.
pub fn transform_abducible(key: &PredicateKey) -> (TRule, TRule) {
    let args: Vec<Term> = match key.arity {
        0 => vec![],
        1 => vec![Term::var("X")],
        n => (1..=n).map(|i| Term::var(&format!("X{i}"))).collect(),
    };
    let atom = Literal {
        pred: key.name.clone(),
        args: args.clone(),
        negative: false,
    };
    let make = |pred: TPred, lit: Literal| {
        let mut alloc = CtxAlloc::default();
        let i = alloc.fresh("I");
        let o = alloc.fresh("O");
        TRule {
            head: THead {
                pred,
                args: args.clone(),
                io: HeadIo::Thread(i, CtxArg::Var(o)),
            },
            body: vec![Goal::InsertAbducible {
                lit,
                input: CtxArg::Var(i),
                out: o,
            }],
            ctx_names: alloc.finish(),
        }
    };
    (
        make(TPred::Plain(key.name.clone()), atom.clone()),
        make(TPred::Neg(key.name.clone()), atom.complement()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unary_abducible() {
        let (p, n) = transform_abducible(&PredicateKey::new("q", 1));
        assert_eq!(p.to_string(), "q(X,I,O) :- insert_abducible(q(X),I,O).");
        assert_eq!(n.to_string(), "not_q(X,I,O) :- insert_abducible(not q(X),I,O).");
    }

    #[test]
    fn zero_arity_abducible() {
        let (p, n) = transform_abducible(&PredicateKey::new("a", 0));
        assert_eq!(p.to_string(), "a(I,O) :- insert_abducible(a,I,O).");
        assert_eq!(n.to_string(), "not_a(I,O) :- insert_abducible(not a,I,O).");
    }
}
