use crate::model::{match_literal_with, Context, Literal, Substitution};

use super::EngineError;

/// `i` extended with every literal of `e`; `None` if some literal of `e`
/// has its complement in `i`.
pub fn produce_context(i: &Context, e: &Context) -> Option<Context> {
    i.union(e)
}

pub fn insert_abducible(a: &Literal, i: &Context) -> Result<Option<Context>, EngineError> {
    if !a.is_ground() {
        return Err(EngineError::NonGroundAbducible(a.to_string()));
    }
    Ok(i.try_insert(a))
}

/// True iff no single substitution embeds every pattern literal in `i`.
pub fn check_subset(pattern: &[Literal], i: &Context) -> bool {
    check_subset_counted(pattern, i, &mut 0)
}

/// [`check_subset`] that adds one to `tried` per candidate member examined.
pub fn check_subset_counted(pattern: &[Literal], i: &Context, tried: &mut u64) -> bool {
    !embed(pattern, i, &Substitution::new(), tried)
}

fn embed(pattern: &[Literal], i: &Context, theta: &Substitution, tried: &mut u64) -> bool {
    let Some((first, rest)) = pattern.split_first() else {
        return true;
    };
    let lits = i.literals();
    let start = lits.partition_point(|m| m.pred < first.pred);
    for m in lits[start..].iter().take_while(|m| m.pred == first.pred) {
        *tried += 1;
        if let Ok(Some(t)) = match_literal_with(first, m, theta) {
            if embed(rest, i, &t, tried) {
                return true;
            }
        }
    }
    false
}

/// True iff `i` passes `check_subset` against every fact.
pub fn test_ic(facts: &[Vec<Literal>], i: &Context) -> bool {
    facts.iter().all(|f| check_subset(f, i))
}
