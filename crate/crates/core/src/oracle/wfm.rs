use std::collections::BTreeSet;

use crate::model::Literal;

use super::ground::{GroundProgram, GroundRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Undefined,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThreeValuedModel {
    pub true_atoms: BTreeSet<Literal>,
    pub false_atoms: BTreeSet<Literal>,
    pub undefined_atoms: BTreeSet<Literal>,
}

impl ThreeValuedModel {
    /// Truth of a ground literal; atoms outside the universe are false.
    pub fn truth(&self, l: &Literal) -> Truth {
        let atom = l.atom();
        let t = if self.true_atoms.contains(&atom) {
            Truth::True
        } else if self.undefined_atoms.contains(&atom) {
            Truth::Undefined
        } else {
            Truth::False
        };
        match (l.negative, t) {
            (true, Truth::True) => Truth::False,
            (true, Truth::False) => Truth::True,
            _ => t,
        }
    }
}

/// Least model of the reduct of `rules` by `assumed`, where a negative
/// literal `not a` holds iff `a` is not in `assumed`.
pub(crate) fn gamma(n: usize, rules: &[GroundRule], assumed: &[bool]) -> Vec<bool> {
    let mut truth = vec![false; n];
    let mut missing: Vec<usize> = Vec::with_capacity(rules.len());
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut queue = Vec::new();
    for (ri, r) in rules.iter().enumerate() {
        let blocked = r.neg.iter().any(|&a| assumed[a]);
        missing.push(if blocked { usize::MAX } else { r.pos.len() });
        if blocked {
            continue;
        }
        for &a in &r.pos {
            watch[a].push(ri);
        }
        if r.pos.is_empty() && !truth[r.head] {
            truth[r.head] = true;
            queue.push(r.head);
        }
    }
    while let Some(a) = queue.pop() {
        for &ri in &watch[a] {
            missing[ri] -= 1;
            let h = rules[ri].head;
            if missing[ri] == 0 && !truth[h] {
                truth[h] = true;
                queue.push(h);
            }
        }
    }
    truth
}

/// Alternating fixpoint: returns (true, not-false) atom masks.
pub(crate) fn wfm_masks(n: usize, rules: &[GroundRule]) -> (Vec<bool>, Vec<bool>) {
    let mut lower = vec![false; n];
    loop {
        let upper = gamma(n, rules, &lower);
        let next = gamma(n, rules, &upper);
        if next == lower {
            return (lower, upper);
        }
        lower = next;
    }
}

/// The well-founded model of a ground program.
pub fn wfm(gp: &GroundProgram) -> ThreeValuedModel {
    let n = gp.atoms.len();
    let (lower, upper) = wfm_masks(n, &gp.rules);
    let mut m = ThreeValuedModel::default();
    for (i, atom) in gp.atoms.iter().enumerate() {
        let set = match (lower[i], upper[i]) {
            (true, _) => &mut m.true_atoms,
            (false, true) => &mut m.undefined_atoms,
            (false, false) => &mut m.false_atoms,
        };
        set.insert(atom.clone());
    }
    m
}
