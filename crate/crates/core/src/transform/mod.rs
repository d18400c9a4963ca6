//! Source-to-source transformation of an abductive framework into a tabled
//! program with explicit context arguments.

mod abducible;
mod dual;
mod elide;
mod ic;
pub mod ir;
mod query;
mod tabling;
mod thread;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{program_size, AbductiveFramework, FrameworkError, PredicateKey, Term};

pub use abducible::transform_abducible;
pub use dual::{transform_dual, transform_dual_with, transform_ics_dual, transform_ics_dual_with};
pub use elide::{elide_constant_arguments, ElisionError, ElisionReport};
pub use ic::transform_ics_subcheck;
pub use ir::{CallIo, CtxArg, CtxVar, Goal, HeadIo, THead, TPred, TQuery, TRule};
pub use query::transform_query;
pub use tabling::{select_tabled_predicates, transform_rule_tabling};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IcMode {
    Dual,
    Subcheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TablingMode {
    Normal,
    Reduce,
}

impl fmt::Display for IcMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IcMode::Dual => "dual",
            IcMode::Subcheck => "subcheck",
        })
    }
}

impl fmt::Display for TablingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TablingMode::Normal => "normal",
            TablingMode::Reduce => "reduce",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TransformOptions {
    pub ic_mode: IcMode,
    pub tabling_mode: TablingMode,
    pub elide_constants: bool,
    /// Dual alternatives re-prove the preceding body literals. Disabling
    /// this yields alternatives that only falsify one literal, which admits
    /// ⊆-smaller explanations for negative goals.
    pub prefix_duals: bool,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            ic_mode: IcMode::Subcheck,
            tabling_mode: TablingMode::Normal,
            elide_constants: false,
            prefix_duals: true,
        }
    }
}

impl TransformOptions {
    pub fn new(ic_mode: IcMode, tabling_mode: TablingMode) -> Self {
        TransformOptions {
            ic_mode,
            tabling_mode,
            elide_constants: false,
            prefix_duals: true,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("invalid framework: {0}")]
    Framework(#[from] FrameworkError),
}

#[derive(Clone, Debug)]
pub struct TransformedProgram {
    pub tabled_rules: Vec<TRule>,
    pub reuse_rules: Vec<TRule>,
    /// Context-threaded rules of predicates outside the tabling set.
    pub direct_rules: Vec<TRule>,
    pub dual_rules: Vec<TRule>,
    pub abducible_rules: Vec<TRule>,
    pub ic_rules: Vec<TRule>,
    pub tabling_set: BTreeSet<PredicateKey>,
    pub ic_mode: IcMode,
    pub options: TransformOptions,
    pub abducibles: BTreeSet<PredicateKey>,
    /// Constants of the (possibly elided) framework.
    pub constants: BTreeSet<Term>,
    /// The framework the rules were generated from, after elision.
    pub framework: AbductiveFramework,
    pub elision: ElisionReport,
}

impl TransformedProgram {
    pub fn all_rules(&self) -> impl Iterator<Item = &TRule> {
        self.tabled_rules
            .iter()
            .chain(&self.reuse_rules)
            .chain(&self.direct_rules)
            .chain(&self.dual_rules)
            .chain(&self.abducible_rules)
            .chain(&self.ic_rules)
    }

    pub fn size(&self) -> usize {
        self.all_rules().map(TRule::size).sum()
    }

    pub fn rule_count(&self) -> usize {
        self.all_rules().count()
    }
}

impl fmt::Display for TransformedProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tabled: Vec<String> = self.tabling_set.iter().map(|k| format!("{}_ab/{}", k.name, k.arity + 1)).collect();
        if !tabled.is_empty() {
            writeln!(f, "table {}.", tabled.join(", "))?;
        }
        let sections = [
            ("tabled", &self.tabled_rules),
            ("reuse", &self.reuse_rules),
            ("direct", &self.direct_rules),
            ("dual", &self.dual_rules),
            ("abducible", &self.abducible_rules),
            ("integrity constraints", &self.ic_rules),
        ];
        for (name, rules) in sections {
            if rules.is_empty() {
                continue;
            }
            writeln!(f, "% {name}")?;
            for r in rules {
                writeln!(f, "{r}")?;
            }
        }
        Ok(())
    }
}

pub fn transform_program(
    fw: &AbductiveFramework,
    opts: TransformOptions,
) -> Result<TransformedProgram, TransformError> {
    fw.validate()?;
    let (fw, elision) = if opts.elide_constants {
        elide_constant_arguments(fw)
    } else {
        (fw.clone(), ElisionReport::default())
    };
    let by_pred = fw.rules_by_predicate();
    let order = fw.defined_predicates();
    let tabling_set = select_tabled_predicates(&fw, opts.tabling_mode);
    let (tabled_rules, reuse_rules, direct_rules) =
        tabling::plain_rules(&by_pred, &order, &tabling_set, &fw.abducibles);
    let mut dual_rules = Vec::new();
    for key in dual::dual_predicates(&fw.mentioned_predicates(), &order) {
        let rules = by_pred.get(&key).map(Vec::as_slice).unwrap_or(&[]);
        dual_rules.extend(transform_dual_with(&key, rules, opts.prefix_duals));
    }
    let mut abducible_rules = Vec::new();
    for key in &fw.abducibles {
        let (pos, neg) = transform_abducible(key);
        abducible_rules.push(pos);
        abducible_rules.push(neg);
    }
    let ic_rules = match opts.ic_mode {
        IcMode::Dual => transform_ics_dual_with(&fw.ics, opts.prefix_duals),
        IcMode::Subcheck => transform_ics_subcheck(&fw.ics, &fw.abducibles),
    };
    Ok(TransformedProgram {
        tabled_rules,
        reuse_rules,
        direct_rules,
        dual_rules,
        abducible_rules,
        ic_rules,
        tabling_set,
        ic_mode: opts.ic_mode,
        options: opts,
        abducibles: fw.abducibles.clone(),
        constants: fw.constants(),
        framework: fw,
        elision,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SizeBound {
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

/// `size(τ(P)) ≤ 8·size(P) + 4·|AB| + 3`, with all emitted rules on the left
/// and only the rules of P on the right.
pub fn check_size_bound(fw: &AbductiveFramework, tp: &TransformedProgram) -> SizeBound {
    bound(tp.size(), program_size(&fw.program), fw.abducibles.len())
}

/// As [`check_size_bound`], but each constraint also counts as a rule
/// `⊥ ← body` in size(P).
pub fn check_size_bound_with_ics(fw: &AbductiveFramework, tp: &TransformedProgram) -> SizeBound {
    let ics: usize = fw.ics.iter().map(|ic| 1 + ic.body.len()).sum();
    bound(tp.size(), program_size(&fw.program) + ics, fw.abducibles.len())
}

fn bound(lhs: usize, size_p: usize, abducibles: usize) -> SizeBound {
    let rhs = 8 * size_p + 4 * abducibles + 3;
    SizeBound {
        lhs,
        rhs,
        holds: lhs <= rhs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::RUNNING_EXAMPLE;
    use crate::parser::parse_program_str;

    fn lines(tp: &TransformedProgram) -> Vec<String> {
        tp.all_rules().map(|r| r.to_string()).collect()
    }

    #[test]
    fn dual_mode_contains_the_worked_rules() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let tp = transform_program(&fw, TransformOptions::new(IcMode::Dual, TablingMode::Normal)).unwrap();
        let out = lines(&tp);
        for expected in [
            "p_ab(X,O) :- s(X,[q(0),q(1)],O).",
            "p(X,I,O) :- p_ab(X,E), produce_context(O,I,E).",
            "q(X,I,O) :- insert_abducible(q(X),I,O).",
            "not_q(X,I,O) :- insert_abducible(not q(X),I,O).",
            "not_p(X,I,O) :- p*1(X,I,O).",
            "not_false(I,O) :- false*1(I,T), false*2(T,O).",
        ] {
            assert!(out.iter().any(|l| l == expected), "missing {expected}");
        }
        assert!(!out.iter().any(|l| l.contains("U*") || l.contains("assert_IC")));
    }

    #[test]
    fn subcheck_mode_excludes_dual_constraints() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let tp = transform_program(&fw, TransformOptions::default()).unwrap();
        let out = lines(&tp);
        assert!(!out.iter().any(|l| l.contains("false")));
        assert!(out.iter().any(|l| l == "U*2 :- u(X,[],E), assert_IC(E)."));
    }

    #[test]
    fn reduce_mode_gives_s_a_direct_rule() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let tp = transform_program(&fw, TransformOptions::new(IcMode::Subcheck, TablingMode::Reduce)).unwrap();
        let out = lines(&tp);
        assert!(!out.iter().any(|l| l.starts_with("s_ab")));
        assert!(out.iter().any(|l| l == "s(X,I,O) :- not_t(X,I,O)."));
    }

    #[test]
    fn running_example_meets_the_bound() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let tp = transform_program(&fw, TransformOptions::default()).unwrap();
        let b = check_size_bound(&fw, &tp);
        assert_eq!(b.rhs, 79);
        assert!(b.holds, "{b:?}");
    }

    #[test]
    fn empty_framework_bound() {
        let fw = AbductiveFramework::default();
        let tp = transform_program(&fw, TransformOptions::default()).unwrap();
        let b = check_size_bound(&fw, &tp);
        assert_eq!(b, SizeBound { lhs: 1, rhs: 3, holds: true });
    }

    #[test]
    fn constraints_only_exceed_the_rules_only_bound() {
        let fw = parse_program_str("abducible a/0. ic :- a. ic :- not a. ic :- a.").unwrap();
        for ic_mode in [IcMode::Dual, IcMode::Subcheck] {
            let tp = transform_program(&fw, TransformOptions::new(ic_mode, TablingMode::Normal)).unwrap();
            assert_eq!(check_size_bound(&fw, &tp).rhs, 7);
            assert!(check_size_bound_with_ics(&fw, &tp).holds);
        }
        let tp = transform_program(&fw, TransformOptions::default()).unwrap();
        assert!(!check_size_bound(&fw, &tp).holds);
    }

    #[test]
    fn duals_without_prefix() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let opts = TransformOptions {
            prefix_duals: false,
            ..Default::default()
        };
        let out = transform_program(&fw, opts).unwrap().to_string();
        assert!(out.lines().any(|l| l == "p*1(X,I,O) :- not_q(1,I,O)."));
        assert!(out.lines().any(|l| l == "p*1(X,I,O) :- not_s(X,I,O)."));
    }

    #[test]
    fn transformation_is_deterministic() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let a = transform_program(&fw, TransformOptions::default()).unwrap().to_string();
        let b = transform_program(&fw, TransformOptions::default()).unwrap().to_string();
        assert_eq!(a, b);
    }
}
