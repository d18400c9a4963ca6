use std::collections::BTreeSet;

use crate::model::{IntegrityConstraint, Literal, PredicateKey, Rule, Symbol, Term};

use super::ir::{CallIo, CtxAlloc, CtxArg, Goal, HeadIo, THead, TPred, TRule};
use super::tabling::{generic_args, is_general_head};
use super::thread::thread;

/// Falsification alternatives for one rule body under the head `pred(args)`:
/// the j-th alternative calls α(L1), …, α(Lj-1) and then the complement of Lj.
/// Without `prefix` it calls only the complement of Lj.
fn falsifiers(pred: &TPred, args: &[Term], body: &[Literal], prefix: bool) -> Vec<TRule> {
    (1..=body.len())
        .map(|j| {
            let mut alloc = CtxAlloc::default();
            let i = alloc.fresh("I");
            let from = if prefix { 0 } else { j - 1 };
            let (goals, out) = thread(&body[from..j], true, CtxArg::Var(i), &mut alloc, "O");
            TRule {
                head: THead {
                    pred: pred.clone(),
                    args: args.to_vec(),
                    io: HeadIo::Thread(i, out),
                },
                body: goals,
                ctx_names: alloc.finish(),
            }
        })
        .collect()
}

/// `p*i(V̄, I, I) :- V̄ \= t̄` for a rule whose head is not a tuple of distinct variables.
fn head_mismatch(pred: &TPred, head_args: &[Term]) -> TRule {
    let mut taken = Vec::new();
    head_args.iter().for_each(|t| t.collect_vars(&mut taken));
    let mut fresh = Vec::with_capacity(head_args.len());
    let mut n = 1;
    while fresh.len() < head_args.len() {
        let name = Symbol::from(format!("V{n}"));
        n += 1;
        if !taken.contains(&name) {
            fresh.push(Term::Var(name));
        }
    }
    let mut alloc = CtxAlloc::default();
    let i = alloc.fresh("I");
    TRule {
        head: THead {
            pred: pred.clone(),
            args: fresh.clone(),
            io: HeadIo::Thread(i, CtxArg::Var(i)),
        },
        body: vec![Goal::NotUnifiable(fresh, head_args.to_vec())],
        ctx_names: alloc.finish(),
    }
}

/// `head(args, I, O) :- c1(args, I, T1), …, cn(args, Tn-1, O)`, or the
/// pass-through fact `head(args, I, I)` when there are no conjuncts.
fn conjunction(head: TPred, args: &[Term], conjuncts: impl Iterator<Item = TPred>) -> TRule {
    let mut alloc = CtxAlloc::default();
    let i = alloc.fresh("I");
    let conjuncts: Vec<TPred> = conjuncts.collect();
    let mut body = Vec::new();
    let mut cur = i;
    let mut inter = Vec::new();
    for (k, c) in conjuncts.iter().enumerate() {
        let out = if k + 1 == conjuncts.len() {
            alloc.fresh("O")
        } else {
            let v = alloc.fresh(&format!("T{}", k + 1));
            inter.push(v);
            v
        };
        body.push(Goal::Call {
            pred: c.clone(),
            args: args.to_vec(),
            io: CallIo::Thread(CtxArg::Var(cur), out),
        });
        cur = out;
    }
    if inter.len() == 1 {
        alloc.rename(inter[0], "T");
    }
    TRule {
        head: THead {
            pred: head,
            args: args.to_vec(),
            io: HeadIo::Thread(i, CtxArg::Var(cur)),
        },
        body,
        ctx_names: alloc.finish(),
    }
}

/// Dual rules of a non-abducible predicate: the `p*i` alternatives of each
/// rule in source order, then `not_p(X̄, T0, Tn) :- p*1(X̄,T0,T1), …`.
/// A predicate without rules gets the fact `not_p(X̄, I, I)`.
///
/// Rules whose head is not a tuple of distinct variables get one extra
/// alternative that succeeds when the call does not unify with the head.
pub fn transform_dual(pred: &PredicateKey, rules: &[&Rule]) -> Vec<TRule> {
    transform_dual_with(pred, rules, true)
}

/// [`transform_dual`] with the falsification prefix optional.
pub fn transform_dual_with(pred: &PredicateKey, rules: &[&Rule], prefix: bool) -> Vec<TRule> {
    let mut out = Vec::new();
    for (idx, r) in rules.iter().enumerate() {
        let star = TPred::Star(pred.name.clone(), idx + 1);
        out.extend(falsifiers(&star, &r.head.args, &r.body, prefix));
        if !is_general_head(&r.head.args) {
            out.push(head_mismatch(&star, &r.head.args));
        }
    }
    let args = generic_args(rules, pred.arity);
    let stars = (1..=rules.len()).map(|i| TPred::Star(pred.name.clone(), i));
    out.push(conjunction(TPred::Neg(pred.name.clone()), &args, stars));
    out
}

/// Dual-mode integrity constraints: `false*i` alternatives per constraint
/// and `not_false(I, O)` conjoining them.
pub fn transform_ics_dual(ics: &[IntegrityConstraint]) -> Vec<TRule> {
    transform_ics_dual_with(ics, true)
}

pub fn transform_ics_dual_with(ics: &[IntegrityConstraint], prefix: bool) -> Vec<TRule> {
    let mut out = Vec::new();
    for (idx, ic) in ics.iter().enumerate() {
        out.extend(falsifiers(&TPred::FalseStar(idx + 1), &[], &ic.body, prefix));
    }
    out.push(conjunction(TPred::NotFalse, &[], (1..=ics.len()).map(TPred::FalseStar)));
    out
}

/// Predicates that need dual rules: every non-abducible predicate mentioned.
pub(crate) fn dual_predicates(
    mentioned: &BTreeSet<PredicateKey>,
    order: &[PredicateKey],
) -> Vec<PredicateKey> {
    let mut out: Vec<PredicateKey> = order.to_vec();
    out.extend(mentioned.iter().filter(|k| !order.contains(k)).cloned());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::RUNNING_EXAMPLE;
    use crate::parser::parse_program_str;

    fn render(rules: &[TRule]) -> Vec<String> {
        rules.iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn dual_of_p_in_running_example() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let by = fw.rules_by_predicate();
        let key = PredicateKey::new("p", 1);
        assert_eq!(
            render(&transform_dual(&key, &by[&key])),
            [
                "p*1(X,I,O) :- not_q(0,I,O).",
                "p*1(X,I,O) :- q(0,I,T), not_q(1,T,O).",
                "p*1(X,I,O) :- q(0,I,T1), q(1,T1,T2), not_s(X,T2,O).",
                "not_p(X,I,O) :- p*1(X,I,O).",
            ]
        );
    }

    #[test]
    fn dual_of_undefined_predicate_is_a_fact() {
        let key = PredicateKey::new("w", 1);
        assert_eq!(render(&transform_dual(&key, &[])), ["not_w(X,I,I)."]);
    }

    #[test]
    fn dual_of_negative_body() {
        let fw = parse_program_str("u(X) :- not p(X).").unwrap();
        let by = fw.rules_by_predicate();
        let key = PredicateKey::new("u", 1);
        assert_eq!(
            render(&transform_dual(&key, &by[&key])),
            ["u*1(X,I,O) :- p(X,I,O).", "not_u(X,I,O) :- u*1(X,I,O)."]
        );
    }

    #[test]
    fn ground_heads_get_a_mismatch_alternative() {
        let fw = parse_program_str("b(1). b(2) :- c.").unwrap();
        let by = fw.rules_by_predicate();
        let key = PredicateKey::new("b", 1);
        assert_eq!(
            render(&transform_dual(&key, &by[&key])),
            [
                "b*1(V1,I,I) :- [V1] \\= [1].",
                "b*2(2,I,O) :- not_c(I,O).",
                "b*2(V1,I,I) :- [V1] \\= [2].",
                "not_b(X,I,O) :- b*1(X,I,T), b*2(X,T,O).",
            ]
        );
    }

    #[test]
    fn ics_of_running_example() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        assert_eq!(
            render(&transform_ics_dual(&fw.ics)),
            [
                "false*1(I,O) :- not_q(X,I,O).",
                "false*1(I,O) :- q(X,I,T), not_r(X,T,O).",
                "false*2(I,O) :- not_u(X,I,O).",
                "not_false(I,O) :- false*1(I,T), false*2(T,O).",
            ]
        );
        assert_eq!(render(&transform_ics_dual(&[])), ["not_false(I,I)."]);
    }

    #[test]
    fn single_ic_over_u() {
        let fw = parse_program_str("ic :- u(X).").unwrap();
        assert_eq!(
            render(&transform_ics_dual(&fw.ics)),
            ["false*1(I,O) :- not_u(X,I,O).", "not_false(I,O) :- false*1(I,O)."]
        );
    }
}
