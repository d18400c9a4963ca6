use std::collections::BTreeSet;

use crate::model::{IntegrityConstraint, Literal, PredicateKey};

use super::ir::{CallIo, CtxAlloc, CtxArg, Goal, HeadIo, THead, TPred, TRule};
use super::thread::thread;

/// Subset-checking integrity constraints.
///
/// Each body B_i is split into its abducibles A_i and the remainder B_i′.
/// `U*i` evaluates B_i′ starting from the context A_i and asserts every
/// resulting context as an `ic/1` fact; `U* :- U*1, …, U*m` drives them.
pub fn transform_ics_subcheck(
    ics: &[IntegrityConstraint],
    abducibles: &BTreeSet<PredicateKey>,
) -> Vec<TRule> {
    let mut out = Vec::with_capacity(ics.len() + 1);
    out.push(TRule {
        head: THead {
            pred: TPred::UStar,
            args: vec![],
            io: HeadIo::None,
        },
        body: (1..=ics.len())
            .map(|i| Goal::Call {
                pred: TPred::UStarI(i),
                args: vec![],
                io: CallIo::None,
            })
            .collect(),
        ctx_names: vec![],
    });
    for (idx, ic) in ics.iter().enumerate() {
        let (abd, rest): (Vec<Literal>, Vec<Literal>) = ic
            .body
            .iter()
            .cloned()
            .partition(|l| abducibles.contains(&l.key()));
        let mut alloc = CtxAlloc::default();
        let (mut body, last) = thread(&rest, false, CtxArg::Patterns(abd), &mut alloc, "E");
        body.push(Goal::AssertIc(last));
        out.push(TRule {
            head: THead {
                pred: TPred::UStarI(idx + 1),
                args: vec![],
                io: HeadIo::None,
            },
            body,
            ctx_names: alloc.finish(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::RUNNING_EXAMPLE;
    use crate::parser::parse_program_str;

    fn render(fw_text: &str) -> Vec<String> {
        let fw = parse_program_str(fw_text).unwrap();
        transform_ics_subcheck(&fw.ics, &fw.abducibles)
            .iter()
            .map(|r| r.to_string())
            .collect()
    }

    #[test]
    fn running_example() {
        assert_eq!(
            render(RUNNING_EXAMPLE),
            [
                "U* :- U*1, U*2.",
                "U*1 :- assert_IC([q(X),r(X)]).",
                "U*2 :- u(X,[],E), assert_IC(E).",
            ]
        );
    }

    #[test]
    fn no_constraints() {
        assert_eq!(render("p."), ["U*."]);
    }

    #[test]
    fn abducible_only_constraint() {
        assert_eq!(render("abducible a/1. ic :- a(1)."), ["U* :- U*1.", "U*1 :- assert_IC([a(1)])."]);
    }

    #[test]
    fn mixed_constraint_threads_the_remainder() {
        assert_eq!(
            render("abducible a/1. ic :- p(X), a(X), not q(X)."),
            ["U* :- U*1.", "U*1 :- p(X,[a(X)],T), not_q(X,T,E), assert_IC(E)."]
        );
    }
}
