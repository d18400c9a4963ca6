//! Differential check of the engine against the oracle.

use std::fmt;

use thiserror::Error;

use crate::engine::{solve, EngineError, EngineOptions, Subsumption};
use crate::model::{AbductiveFramework, Context, Literal};
use crate::oracle::{enumerate_solutions, Minimality, OracleError, Semantics};
use crate::transform::{transform_program, IcMode, TablingMode, TransformError, TransformOptions};

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub engine: Vec<Context>,
    pub oracle: Vec<Context>,
    pub only_engine: Vec<Context>,
    pub only_oracle: Vec<Context>,
}

impl CheckReport {
    pub fn new(mut engine: Vec<Context>, mut oracle: Vec<Context>) -> Self {
        engine.sort();
        engine.dedup();
        oracle.sort();
        oracle.dedup();
        let only_engine = engine.iter().filter(|c| !oracle.contains(c)).cloned().collect();
        let only_oracle = oracle.iter().filter(|c| !engine.contains(c)).cloned().collect();
        CheckReport {
            engine,
            oracle,
            only_engine,
            only_oracle,
        }
    }

    pub fn agrees(&self) -> bool {
        self.only_engine.is_empty() && self.only_oracle.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.only_engine {
            writeln!(f, "engine only: {c}")?;
        }
        for c in &self.only_oracle {
            writeln!(f, "oracle only: {c}")?;
        }
        Ok(())
    }
}

/// Solution contexts of the engine for `query` from the empty context.
pub fn engine_solutions(
    fw: &AbductiveFramework,
    query: &[Literal],
    topts: TransformOptions,
    subsumption: Subsumption,
) -> Result<Vec<Context>, CheckError> {
    let tp = transform_program(fw, topts)?;
    let opts = EngineOptions::new(topts.ic_mode, topts.tabling_mode, subsumption);
    let r = solve(&tp, query, &Context::empty(), opts)?;
    Ok(r.solutions.into_iter().map(|s| s.context).collect())
}

fn subcheck() -> TransformOptions {
    TransformOptions::new(IcMode::Subcheck, TablingMode::Normal)
}

/// Compares `engine` against oracle(modified, minimal).
pub fn check_with<F>(fw: &AbductiveFramework, query: &[Literal], engine: F) -> Result<CheckReport, CheckError>
where
    F: FnOnce(&AbductiveFramework, &[Literal]) -> Result<Vec<Context>, CheckError>,
{
    let oracle = enumerate_solutions(fw, query, Semantics::Modified, Minimality::Minimal)?;
    Ok(CheckReport::new(engine(fw, query)?, oracle))
}

/// engine(subcheck, minimal) against oracle(modified, minimal).
pub fn check(fw: &AbductiveFramework, query: &[Literal]) -> Result<CheckReport, CheckError> {
    check_with(fw, query, |fw, q| engine_solutions(fw, q, subcheck(), Subsumption::Minimal))
}

/// For all-mode answers: every engine answer is an oracle solution and every
/// oracle solution extends some engine answer. Returns the offending sets.
pub fn compare_all(engine: &[Context], oracle: &[Context]) -> (Vec<Context>, Vec<Context>) {
    let unsound = engine.iter().filter(|c| !oracle.contains(c)).cloned().collect();
    let uncovered = oracle
        .iter()
        .filter(|s| !engine.iter().any(|c| c.is_subset(s)))
        .cloned()
        .collect();
    (unsound, uncovered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::RUNNING_EXAMPLE;
    use crate::parser::{parse_program_str, parse_query};

    #[test]
    fn running_example_agrees() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let r = check(&fw, &parse_query("p(0)").unwrap()).unwrap();
        assert!(r.agrees(), "{r}");
        assert_eq!(r.engine.len(), 1);
    }

    #[test]
    fn faulty_engine_is_caught() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        let r = check_with(&fw, &parse_query("p(0)").unwrap(), |fw, q| {
            let mut sols = engine_solutions(fw, q, subcheck(), Subsumption::Minimal)?;
            // drop the last literal of every answer
            for s in &mut sols {
                let mut lits = s.literals().to_vec();
                lits.pop();
                *s = Context::new(lits).unwrap();
            }
            Ok(sols)
        })
        .unwrap();
        assert!(!r.agrees());
        assert_eq!(r.only_engine.len(), 1);
        assert_eq!(r.only_oracle.len(), 1);
        assert!(r.to_string().contains("oracle only: [q(0),q(1),not t(0)]"));
    }
}
