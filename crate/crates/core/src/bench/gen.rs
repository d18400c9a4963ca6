use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::Subsumption;
use crate::model::{AbductiveFramework, IntegrityConstraint, Literal, PredicateKey, Rule, Term};
use crate::transform::{IcMode, TablingMode};

use super::{CallStyle, Mode, Scenario};

fn one() -> Term {
    Term::constant("1")
}

fn x() -> Term {
    Term::var("X")
}

fn lit(pred: &str, args: Vec<Term>) -> Literal {
    Literal::pos(pred, args)
}

/// Chained abduction: `p_i(X) :- a_1(X)..a_i(X), b_1(X)..b_i(X)` and
/// `q_i(X) :- p_1(X)..p_i(X)`, queried as `q_1(1)` .. `q_n(1)`.
pub fn gen_exp1(n: usize) -> Scenario {
    assert!(n >= 1, "n must be positive");
    let mut program = Vec::new();
    let mut abducibles = BTreeSet::new();
    for i in 1..=n {
        program.push(Rule::fact(lit(&format!("b_{i}"), vec![one()])));
        abducibles.insert(PredicateKey::new(&format!("a_{i}"), 1));
    }
    for i in 1..=n {
        let body = (1..=i)
            .map(|j| lit(&format!("a_{j}"), vec![x()]))
            .chain((1..=i).map(|j| lit(&format!("b_{j}"), vec![x()])))
            .collect();
        program.push(Rule::new(lit(&format!("p_{i}"), vec![x()]), body));
    }
    for i in 1..=n {
        let body = (1..=i).map(|j| lit(&format!("p_{j}"), vec![x()])).collect();
        program.push(Rule::new(lit(&format!("q_{i}"), vec![x()]), body));
    }
    Scenario {
        name: "exp1".into(),
        n,
        framework: AbductiveFramework::new(program, abducibles, vec![]).expect("valid by construction"),
        queries: (1..=n).map(|i| format!("q_{i}(1)")).collect(),
        modes: vec![
            Mode::new(IcMode::Subcheck, TablingMode::Normal, Subsumption::All),
            Mode::new(IcMode::Subcheck, TablingMode::Reduce, Subsumption::All),
        ],
        call_style: CallStyle::NonIncremental,
        repetitions: 1,
    }
}

/// Accepted and rejected solutions against `ic :- p(X), not q(X)`.
pub fn gen_exp3(n: usize) -> Scenario {
    assert!(n >= 1, "n must be positive");
    let c = |i: usize| Term::constant(&i.to_string());
    let abducibles = ["a", "b", "c"].iter().map(|a| PredicateKey::new(a, 1)).collect();
    let mut program = vec![
        Rule::new(lit("p", vec![x()]), vec![lit("a", vec![x()])]),
        Rule::new(lit("q", vec![x()]), vec![lit("b", vec![x()])]),
        Rule::new(lit("t", vec![x()]), vec![lit("c", vec![x()])]),
    ];
    let first = (1..=n)
        .map(|i| lit("a", vec![c(i)]))
        .chain((1..=n).map(|i| Literal::neg("q", vec![c(i)])))
        .collect();
    program.push(Rule::new(lit("r", vec![]), first));
    program.push(Rule::new(lit("r", vec![]), (1..=n).map(|i| lit("p", vec![c(i)])).collect()));
    let ics = vec![IntegrityConstraint {
        body: vec![lit("p", vec![x()]), Literal::neg("q", vec![x()])],
    }];
    let query = std::iter::once("r".to_string())
        .chain((1..=n).map(|i| format!("t({i})")))
        .collect::<Vec<_>>()
        .join(", ");
    Scenario {
        name: "exp3".into(),
        n,
        framework: AbductiveFramework::new(program, abducibles, ics).expect("valid by construction"),
        queries: vec![query],
        modes: vec![
            Mode::new(IcMode::Dual, TablingMode::Normal, Subsumption::All),
            Mode::new(IcMode::Subcheck, TablingMode::Normal, Subsumption::All),
        ],
        call_style: CallStyle::NonIncremental,
        repetitions: 1,
    }
}

/// Every predicate carries the constant `k` as first argument:
/// `p_i(k,X) :- p_{i-1}(k,X), a_i(k,X)` and `p_i(k,X) :- p_{i-1}(k,X), not a_i(k,X), c(k,X)`.
pub fn gen_phase0(n: usize) -> Scenario {
    assert!(n >= 1, "n must be positive");
    let k = || Term::constant("k");
    let kx = || vec![k(), x()];
    let mut program = vec![
        Rule::fact(lit("b", vec![k(), one()])),
        Rule::fact(lit("b", vec![k(), Term::constant("2")])),
        Rule::fact(lit("c", vec![k(), one()])),
    ];
    let mut abducibles = BTreeSet::new();
    for i in 1..=n {
        abducibles.insert(PredicateKey::new(&format!("a_{i}"), 2));
        let prev = if i == 1 { lit("b", kx()) } else { lit(&format!("p_{}", i - 1), kx()) };
        let a = lit(&format!("a_{i}"), kx());
        program.push(Rule::new(lit(&format!("p_{i}"), kx()), vec![prev.clone(), a.clone()]));
        program.push(Rule::new(lit(&format!("p_{i}"), kx()), vec![prev, a.complement(), lit("c", kx())]));
    }
    let ics = if n >= 2 {
        vec![IntegrityConstraint {
            body: vec![lit("a_1", kx()), Literal::neg("a_2", kx())],
        }]
    } else {
        vec![]
    };
    Scenario {
        name: "phase0".into(),
        n,
        framework: AbductiveFramework::new(program, abducibles, ics).expect("valid by construction"),
        queries: vec![format!("p_{n}(k, 1)"), format!("p_{n}(k, 2)")],
        modes: vec![Mode::new(IcMode::Subcheck, TablingMode::Normal, Subsumption::Minimal)],
        call_style: CallStyle::NonIncremental,
        repetitions: 1,
    }
}

/// Limits for [`gen_random`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    /// Defined (non-abducible) predicates.
    pub predicates: usize,
    pub abducibles: usize,
    pub constants: usize,
    pub max_rules_per_pred: usize,
    pub max_body: usize,
    pub max_ics: usize,
    pub max_ic_body: usize,
    pub max_arity: usize,
    pub queries: usize,
}

impl Default for RandomParams {
    /// The oracle-corpus size class: at most 4 predicates, 6 ground abducibles and 3 ICs.
    fn default() -> Self {
        RandomParams {
            predicates: 4,
            abducibles: 3,
            constants: 2,
            max_rules_per_pred: 3,
            max_body: 4,
            max_ics: 3,
            max_ic_body: 3,
            max_arity: 1,
            queries: 2,
        }
    }
}

/// A generated framework together with ground queries over it.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub framework: AbductiveFramework,
    pub queries: Vec<Vec<Literal>>,
}

struct Sig {
    name: String,
    arity: usize,
}

fn arg(rng: &mut ChaCha8Rng, head_var: bool, consts: &[Term]) -> Term {
    if head_var && rng.gen_bool(0.75) {
        x()
    } else {
        consts.choose(rng).expect("constants non-empty").clone()
    }
}

/// Deterministic function-free framework. Predicate `d_i` may only depend on
/// `d_j` with `j < i`, so the program is stratified, and every body variable
/// occurs in the head.
pub fn gen_random(seed: u64, params: &RandomParams) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let consts: Vec<Term> = (0..params.constants.max(1)).map(|i| Term::constant(&i.to_string())).collect();
    let abd: Vec<Sig> = (0..params.abducibles)
        .map(|i| Sig {
            name: format!("ab{i}"),
            arity: rng.gen_range(0..=params.max_arity),
        })
        .collect();
    let defs: Vec<Sig> = (0..params.predicates.max(1))
        .map(|i| Sig {
            name: format!("d{i}"),
            arity: rng.gen_range(0..=params.max_arity),
        })
        .collect();
    let mut program = Vec::new();
    for (i, sig) in defs.iter().enumerate() {
        let rules = rng.gen_range(1..=params.max_rules_per_pred.max(1));
        for _ in 0..rules {
            let head_args: Vec<Term> = (0..sig.arity).map(|_| arg(&mut rng, true, &consts)).collect();
            let has_var = head_args.iter().any(Term::is_var);
            let len = rng.gen_range(0..=params.max_body);
            let mut body = Vec::with_capacity(len);
            for _ in 0..len {
                let pick_abd = i == 0 || (!abd.is_empty() && rng.gen_bool(0.5));
                let target = if pick_abd && !abd.is_empty() {
                    &abd[rng.gen_range(0..abd.len())]
                } else if i > 0 {
                    &defs[rng.gen_range(0..i)]
                } else {
                    break;
                };
                let args = (0..target.arity).map(|_| arg(&mut rng, has_var, &consts)).collect();
                body.push(Literal::new(rng.gen_bool(0.35), &target.name, args));
            }
            program.push(Rule::new(lit(&sig.name, head_args), body));
        }
    }
    let mut ics = Vec::new();
    for _ in 0..rng.gen_range(0..=params.max_ics) {
        let len = rng.gen_range(1..=params.max_ic_body.max(1));
        let body = (0..len)
            .map(|_| {
                let all = abd.len() + defs.len();
                let j = rng.gen_range(0..all);
                let target = if j < abd.len() { &abd[j] } else { &defs[j - abd.len()] };
                let args = (0..target.arity).map(|_| arg(&mut rng, true, &consts)).collect();
                Literal::new(rng.gen_bool(0.35), &target.name, args)
            })
            .collect();
        ics.push(IntegrityConstraint { body });
    }
    let queries = (0..params.queries.max(1))
        .map(|_| {
            let len = rng.gen_range(1..=2);
            (0..len)
                .map(|_| {
                    let target = &defs[rng.gen_range(0..defs.len())];
                    let args = (0..target.arity).map(|_| arg(&mut rng, false, &consts)).collect();
                    Literal::new(rng.gen_bool(0.2), &target.name, args)
                })
                .collect()
        })
        .collect();
    let abducibles = abd.iter().map(|s| PredicateKey::new(&s.name, s.arity)).collect();
    RandomInstance {
        framework: AbductiveFramework::new(program, abducibles, ics).expect("no abducible heads"),
        queries,
    }
}
