use std::collections::{BTreeSet, HashMap};

use crate::model::{AbductiveFramework, Literal, Substitution, Symbol, Term};

use super::OracleError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundRule {
    pub head: usize,
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

/// A ground conjunction: positive and negated atom ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundBody {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct GroundProgram {
    pub atoms: Vec<Literal>,
    index: HashMap<Literal, usize>,
    pub rules: Vec<GroundRule>,
    pub ics: Vec<GroundBody>,
}

impl GroundProgram {
    pub fn atom_id(&self, atom: &Literal) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub(crate) fn intern(&mut self, atom: Literal) -> usize {
        if let Some(&i) = self.index.get(&atom) {
            return i;
        }
        let i = self.atoms.len();
        self.index.insert(atom.clone(), i);
        self.atoms.push(atom);
        i
    }

    pub(crate) fn body(&mut self, lits: &[Literal]) -> GroundBody {
        let mut body = GroundBody {
            pos: Vec::new(),
            neg: Vec::new(),
        };
        for l in lits {
            let id = self.intern(l.atom());
            if l.negative {
                body.neg.push(id);
            } else {
                body.pos.push(id);
            }
        }
        body
    }

    /// Adds `head ← pos, not neg` over atom literals.
    pub fn add_rule(&mut self, head: Literal, body: &[Literal]) {
        let head = self.intern(head);
        let GroundBody { pos, neg } = self.body(body);
        self.rules.push(GroundRule { head, pos, neg });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundUniverse {
    pub constants: BTreeSet<Term>,
    /// Positive ground abducible atoms over `constants`.
    pub ground_abducibles: Vec<Literal>,
}

fn check_flat(l: &Literal) -> Result<(), OracleError> {
    if l.args.iter().any(|t| matches!(t, Term::Compound(..))) {
        return Err(OracleError::CompoundTerm(l.to_string()));
    }
    Ok(())
}

/// All substitutions of `vars` over `constants`.
fn groundings(vars: &[Symbol], constants: &[Term]) -> Vec<Substitution> {
    let mut out = vec![Substitution::new()];
    for v in vars {
        let mut next = Vec::with_capacity(out.len() * constants.len());
        for s in &out {
            for c in constants {
                let mut pairs: Vec<(Symbol, Term)> = s.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
                pairs.push((v.clone(), c.clone()));
                next.push(pairs.into_iter().collect());
            }
        }
        out = next;
    }
    out
}

fn vars_of(lits: &[&Literal]) -> Vec<Symbol> {
    let mut out = Vec::new();
    for l in lits {
        for v in l.vars() {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

fn tuples(constants: &[Term], arity: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                constants.iter().map(move |c| {
                    let mut t = t.clone();
                    t.push(c.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Instantiates every rule and constraint over the constants of the
/// framework and the query. Only function-free programs are supported.
pub fn ground_program(
    fw: &AbductiveFramework,
    query: &[Literal],
) -> Result<(GroundProgram, GroundUniverse), OracleError> {
    for r in &fw.program {
        check_flat(&r.head)?;
        r.body.iter().try_for_each(check_flat)?;
    }
    for ic in &fw.ics {
        ic.body.iter().try_for_each(check_flat)?;
    }
    query.iter().try_for_each(check_flat)?;
    let mut constants = fw.constants();
    let mut acc = Vec::new();
    for l in query {
        l.args.iter().for_each(|a| a.collect_constants(&mut acc));
    }
    constants.extend(acc);
    let consts: Vec<Term> = constants.iter().cloned().collect();

    let mut gp = GroundProgram::default();
    for r in &fw.program {
        let lits: Vec<&Literal> = std::iter::once(&r.head).chain(&r.body).collect();
        for s in groundings(&vars_of(&lits), &consts) {
            let body: Vec<Literal> = r.body.iter().map(|l| s.apply_literal(l)).collect();
            gp.add_rule(s.apply_literal(&r.head), &body);
        }
    }
    for ic in &fw.ics {
        let lits: Vec<&Literal> = ic.body.iter().collect();
        for s in groundings(&vars_of(&lits), &consts) {
            let body: Vec<Literal> = ic.body.iter().map(|l| s.apply_literal(l)).collect();
            let g = gp.body(&body);
            gp.ics.push(g);
        }
    }
    let mut ground_abducibles = Vec::new();
    for key in &fw.abducibles {
        for args in tuples(&consts, key.arity) {
            let atom = Literal {
                pred: key.name.clone(),
                args,
                negative: false,
            };
            gp.intern(atom.clone());
            ground_abducibles.push(atom);
        }
    }
    for l in query {
        if l.is_ground() {
            gp.intern(l.atom());
        }
    }
    Ok((
        gp,
        GroundUniverse {
            constants,
            ground_abducibles,
        },
    ))
}
