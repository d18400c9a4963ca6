use crate::model::Literal;

use super::ir::{CallIo, CtxAlloc, CtxArg, CtxVar, Goal, TPred};

/// α: a literal as a context-threaded call.
pub(crate) fn alpha(l: &Literal, input: CtxArg, out: CtxVar) -> Goal {
    let pred = if l.negative {
        TPred::Neg(l.pred.clone())
    } else {
        TPred::Plain(l.pred.clone())
    };
    Goal::Call {
        pred,
        args: l.args.clone(),
        io: CallIo::Thread(input, out),
    }
}

/// Threads `lits` left to right starting from `input`. When `negate_last`
/// is set the final literal is called through its complement. Returns the
/// goals and the output context (the input itself when `lits` is empty).
pub(crate) fn thread(
    lits: &[Literal],
    negate_last: bool,
    input: CtxArg,
    alloc: &mut CtxAlloc,
    out_name: &str,
) -> (Vec<Goal>, CtxArg) {
    let mut goals = Vec::with_capacity(lits.len());
    let mut cur = input;
    let mut inter = Vec::new();
    for (i, l) in lits.iter().enumerate() {
        let last = i + 1 == lits.len();
        let out = if last {
            alloc.fresh(out_name)
        } else {
            let v = alloc.fresh(&format!("T{}", inter.len() + 1));
            inter.push(v);
            v
        };
        let lit = if last && negate_last { l.complement() } else { l.clone() };
        goals.push(alpha(&lit, cur, out));
        cur = CtxArg::Var(out);
    }
    if inter.len() == 1 {
        alloc.rename(inter[0], "T");
    }
    (goals, cur)
}
