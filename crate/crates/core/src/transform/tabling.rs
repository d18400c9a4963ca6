use std::collections::{BTreeMap, BTreeSet};

use crate::model::{AbductiveFramework, Literal, PredicateKey, Rule, Symbol, Term};

use super::ir::{CallIo, CtxAlloc, CtxArg, Goal, HeadIo, THead, TPred, TRule};
use super::thread::thread;
use super::TablingMode;

/// Which predicates get a tabled `p_ab` version.
///
/// `Normal` tables every non-abducible predicate that has rules. `Reduce`
/// leaves out predicates all of whose rules have bodies built only from
/// abducibles and positive calls to fact-only predicates (fact-only
/// predicates themselves included).
pub fn select_tabled_predicates(fw: &AbductiveFramework, mode: TablingMode) -> BTreeSet<PredicateKey> {
    let by_pred = fw.rules_by_predicate();
    let all: BTreeSet<PredicateKey> = by_pred.keys().cloned().collect();
    if mode == TablingMode::Normal {
        return all;
    }
    let fact_only: BTreeSet<&PredicateKey> = by_pred
        .iter()
        .filter(|(_, rules)| rules.iter().all(|r| r.is_fact()))
        .map(|(k, _)| k)
        .collect();
    let simple = |l: &Literal| {
        fw.is_abducible_literal(l) || (!l.negative && fact_only.contains(&l.key()))
    };
    all.into_iter()
        .filter(|k| !by_pred[k].iter().all(|r| r.body.iter().all(simple)))
        .collect()
}

/// Head variables for the per-predicate rules (`p(X̄,I,O)`, `not_p(X̄,I,O)`):
/// the first rule's head arguments when they are distinct variables,
/// `X1…Xn` otherwise.
pub(crate) fn generic_args(rules: &[&Rule], arity: usize) -> Vec<Term> {
    if let Some(r) = rules.first() {
        if is_general_head(&r.head.args) {
            return r.head.args.clone();
        }
    }
    match arity {
        1 => vec![Term::var("X")],
        _ => (1..=arity).map(|i| Term::var(&format!("X{i}"))).collect(),
    }
}

/// True when the arguments are pairwise distinct variables.
pub(crate) fn is_general_head(args: &[Term]) -> bool {
    let mut seen: Vec<&Symbol> = Vec::new();
    for a in args {
        match a {
            Term::Var(v) if !seen.contains(&v) => seen.push(v),
            _ => return false,
        }
    }
    true
}

/// The tabled rule `p_ab(t̄, O)` for one source rule, together with the
/// reuse rule `p(X̄, I, O) :- p_ab(X̄, E), produce_context(O, I, E)`.
///
/// The body's abducibles, in body order, become the input context of the
/// first remaining literal; contexts are then threaded left to right.
pub fn transform_rule_tabling(rule: &Rule, abducibles: &BTreeSet<PredicateKey>) -> (TRule, TRule) {
    let reuse = reuse_rule(&rule.head.pred, &generic_args(&[rule], rule.head.args.len()));
    (tabled_rule(rule, abducibles), reuse)
}

pub(crate) fn tabled_rule(rule: &Rule, abducibles: &BTreeSet<PredicateKey>) -> TRule {
    let (abd, rest): (Vec<Literal>, Vec<Literal>) = rule
        .body
        .iter()
        .cloned()
        .partition(|l| abducibles.contains(&l.key()));
    let mut alloc = CtxAlloc::default();
    let pred = TPred::Tabled(rule.head.pred.clone());
    let (body, io) = if rest.is_empty() && abd.is_empty() {
        (Vec::new(), HeadIo::Out(CtxArg::empty()))
    } else if rest.is_empty() {
        let o = alloc.fresh("O");
        let g = Goal::ProduceContext {
            out: o,
            input: CtxArg::empty(),
            extra: CtxArg::List(abd),
        };
        (vec![g], HeadIo::Out(CtxArg::Var(o)))
    } else {
        let (goals, out) = thread(&rest, false, CtxArg::List(abd), &mut alloc, "O");
        (goals, HeadIo::Out(out))
    };
    TRule {
        head: THead {
            pred,
            args: rule.head.args.clone(),
            io,
        },
        body,
        ctx_names: alloc.finish(),
    }
}

pub(crate) fn reuse_rule(pred: &Symbol, args: &[Term]) -> TRule {
    let mut alloc = CtxAlloc::default();
    let i = alloc.fresh("I");
    let o = alloc.fresh("O");
    let e = alloc.fresh("E");
    TRule {
        head: THead {
            pred: TPred::Plain(pred.clone()),
            args: args.to_vec(),
            io: HeadIo::Thread(i, CtxArg::Var(o)),
        },
        body: vec![
            Goal::Call {
                pred: TPred::Tabled(pred.clone()),
                args: args.to_vec(),
                io: CallIo::Out(e),
            },
            Goal::ProduceContext {
                out: o,
                input: CtxArg::Var(i),
                extra: CtxArg::Var(e),
            },
        ],
        ctx_names: alloc.finish(),
    }
}

/// `p(t̄, I, O) :- α(L1), …, α(Ln)` for a predicate evaluated without tabling.
pub(crate) fn direct_rule(rule: &Rule) -> TRule {
    let mut alloc = CtxAlloc::default();
    let i = alloc.fresh("I");
    let (body, out) = thread(&rule.body, false, CtxArg::Var(i), &mut alloc, "O");
    TRule {
        head: THead {
            pred: TPred::Plain(rule.head.pred.clone()),
            args: rule.head.args.clone(),
            io: HeadIo::Thread(i, out),
        },
        body,
        ctx_names: alloc.finish(),
    }
}

/// Plain-call rules for every defined predicate: reuse rules for tabled
/// predicates, direct rules for the rest.
pub(crate) fn plain_rules(
    by_pred: &BTreeMap<PredicateKey, Vec<&Rule>>,
    order: &[PredicateKey],
    tabled: &BTreeSet<PredicateKey>,
    abducibles: &BTreeSet<PredicateKey>,
) -> (Vec<TRule>, Vec<TRule>, Vec<TRule>) {
    let mut tabled_rules = Vec::new();
    let mut reuse = Vec::new();
    let mut direct = Vec::new();
    for key in order {
        let rules = &by_pred[key];
        if tabled.contains(key) {
            tabled_rules.extend(rules.iter().map(|r| tabled_rule(r, abducibles)));
            reuse.push(reuse_rule(&key.name, &generic_args(rules, key.arity)));
        } else {
            direct.extend(rules.iter().map(|r| direct_rule(r)));
        }
    }
    (tabled_rules, reuse, direct)
}
