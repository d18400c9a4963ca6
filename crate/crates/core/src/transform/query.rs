use crate::model::{Context, Literal};

use super::ir::{CallIo, CtxAlloc, CtxArg, Goal, TPred, TQuery};
use super::thread::alpha;
use super::IcMode;

/// Threads the query goals from `initial`.
///
/// Dual mode appends `not_false(T, O)`; subcheck mode follows every goal
/// with `test_IC(Ti)`.
pub fn transform_query(goals: &[Literal], mode: IcMode, initial: &Context) -> TQuery {
    let mut alloc = CtxAlloc::default();
    let mut out = Vec::new();
    let mut cur = CtxArg::List(initial.literals().to_vec());
    let n = goals.len();
    let names: Vec<String> = match mode {
        IcMode::Dual if n == 1 => vec!["T".into()],
        IcMode::Subcheck if n == 1 => vec!["O".into()],
        _ => (1..=n).map(|i| format!("T{i}")).collect(),
    };
    for (g, name) in goals.iter().zip(&names) {
        let v = alloc.fresh(name);
        out.push(alpha(g, cur, v));
        cur = CtxArg::Var(v);
        if mode == IcMode::Subcheck {
            out.push(Goal::TestIc(cur.clone()));
        }
    }
    if mode == IcMode::Dual {
        let o = alloc.fresh("O");
        out.push(Goal::Call {
            pred: TPred::NotFalse,
            args: vec![],
            io: CallIo::Thread(cur, o),
        });
        cur = CtxArg::Var(o);
    }
    TQuery {
        goals: out,
        output: cur,
        ctx_names: alloc.finish(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_literals, parse_query};

    fn ctx(s: &str) -> Context {
        Context::new(parse_literals(s).unwrap()).unwrap()
    }

    #[test]
    fn dual_query() {
        let q = transform_query(&parse_query("p(0)").unwrap(), IcMode::Dual, &Context::empty());
        assert_eq!(q.to_string(), "?- p(0,[],T), not_false(T,O).");
    }

    #[test]
    fn subcheck_query() {
        let q = transform_query(&parse_query("p(0)").unwrap(), IcMode::Subcheck, &Context::empty());
        assert_eq!(q.to_string(), "?- p(0,[],O), test_IC(O).");
    }

    #[test]
    fn subcheck_query_with_initial_context() {
        let q = transform_query(&parse_query("p(0)").unwrap(), IcMode::Subcheck, &ctx("r(1)"));
        assert_eq!(q.to_string(), "?- p(0,[r(1)],O), test_IC(O).");
    }

    #[test]
    fn multi_goal_subcheck_tests_after_each_goal() {
        let q = transform_query(&parse_query("r, not t(1)").unwrap(), IcMode::Subcheck, &Context::empty());
        assert_eq!(q.to_string(), "?- r([],T1), test_IC(T1), not_t(1,T1,T2), test_IC(T2).");
    }
}
