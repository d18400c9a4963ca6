use ablp_core::bench::{gen_exp1, gen_exp3, run_scenario, Mode};
use ablp_core::check::engine_solutions;
use ablp_core::engine::Subsumption;
use ablp_core::model::Context;
use ablp_core::oracle::{enumerate_solutions, Minimality, Semantics};
use ablp_core::parser::{parse_literals, parse_query};
use ablp_core::transform::{IcMode, TablingMode, TransformOptions};

fn ctx(s: &str) -> Context {
    Context::new(parse_literals(s).unwrap()).unwrap()
}

#[test]
fn exp1_two_has_one_solution() {
    let s = gen_exp1(2);
    let q = parse_query("q_2(1)").unwrap();
    let opts = TransformOptions::new(IcMode::Subcheck, TablingMode::Normal);
    let sols = engine_solutions(&s.framework, &q, opts, Subsumption::All).unwrap();
    assert_eq!(sols, vec![ctx("a_1(1), a_2(1)")]);
    let oracle = enumerate_solutions(&s.framework, &q, Semantics::Modified, Minimality::Minimal).unwrap();
    assert_eq!(oracle, sols);
}

#[test]
fn exp3_one_keeps_the_undefined_branch() {
    // [a(1), not b(1), c(1)] makes p(1), not q(1) true; via p(1) alone q(1) stays undefined
    let s = gen_exp3(1);
    let q = parse_query("r, t(1)").unwrap();
    let opts = TransformOptions::new(IcMode::Subcheck, TablingMode::Normal);
    let sols = engine_solutions(&s.framework, &q, opts, Subsumption::All).unwrap();
    assert_eq!(sols, vec![ctx("a(1), c(1)")]);
    let oracle = enumerate_solutions(&s.framework, &q, Semantics::Modified, Minimality::Minimal).unwrap();
    assert_eq!(oracle, sols);
    assert!(!enumerate_solutions(&s.framework, &q, Semantics::Modified, Minimality::All)
        .unwrap()
        .contains(&ctx("a(1), not b(1), c(1)")));
}

#[test]
fn exp1_reduce_uses_less_table_space() {
    let rows = run_scenario(&gen_exp1(3));
    assert_eq!(rows.len(), 6);
    let normal: Vec<_> = rows.iter().filter(|r| r.tabling_mode == TablingMode::Normal).collect();
    let reduce: Vec<_> = rows.iter().filter(|r| r.tabling_mode == TablingMode::Reduce).collect();
    for (n, r) in normal.iter().zip(&reduce) {
        assert_eq!(n.query_index, r.query_index);
        assert!(r.table_bytes < n.table_bytes, "{n:?} {r:?}");
    }
}

#[test]
fn exp3_subcheck_uses_no_more_table_space() {
    let rows = run_scenario(&gen_exp3(3));
    let dual = rows.iter().find(|r| r.ic_mode == IcMode::Dual).unwrap();
    let sub = rows.iter().find(|r| r.ic_mode == IcMode::Subcheck).unwrap();
    assert!(sub.table_bytes <= dual.table_bytes);
}

#[test]
fn repetitions_reuse_tables_only_incrementally() {
    use ablp_core::bench::CallStyle;
    let mut s = gen_exp1(3).with_modes(vec![Mode::new(IcMode::Subcheck, TablingMode::Normal, Subsumption::All)]);
    s.repetitions = 2;
    let non = run_scenario(&s);
    assert_eq!(non[0].inferences, non[1].inferences);
    let inc = run_scenario(&s.with_call_style(CallStyle::Incremental));
    assert!(inc[1].inferences < inc[0].inferences);
}
