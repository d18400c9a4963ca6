//! Benchmark families and a scenario runner producing metric rows.

mod gen;

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::engine::{EngineOptions, Solver, Subsumption, DEFAULT_MAX_STEPS};
use crate::model::{AbductiveFramework, Context};
use crate::parser::parse_query;
use crate::transform::{transform_program, IcMode, TablingMode, TransformOptions};

pub use gen::{gen_exp1, gen_exp3, gen_phase0, gen_random, RandomInstance, RandomParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CallStyle {
    /// Tables persist across queries.
    Incremental,
    /// Tables are abolished before every query.
    NonIncremental,
}

impl fmt::Display for CallStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CallStyle::Incremental => "incremental",
            CallStyle::NonIncremental => "non_incremental",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mode {
    pub ic_mode: IcMode,
    pub tabling_mode: TablingMode,
    pub subsumption: Subsumption,
}

impl Mode {
    pub fn new(ic_mode: IcMode, tabling_mode: TablingMode, subsumption: Subsumption) -> Self {
        Mode {
            ic_mode,
            tabling_mode,
            subsumption,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub n: usize,
    pub framework: AbductiveFramework,
    pub queries: Vec<String>,
    pub modes: Vec<Mode>,
    pub call_style: CallStyle,
    pub repetitions: usize,
}

impl Scenario {
    pub fn with_modes(mut self, modes: Vec<Mode>) -> Self {
        self.modes = modes;
        self
    }

    pub fn with_call_style(mut self, style: CallStyle) -> Self {
        self.call_style = style;
        self
    }
}

/// Per-run settings not tied to the scenario itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub elide_constants: bool,
    pub max_steps: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            elide_constants: false,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// One CSV row. `inferences` includes constraint setup when the query
/// triggered it; `table_bytes` and `table_entries` describe the store after
/// the query.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub scenario: String,
    pub n: usize,
    pub ic_mode: IcMode,
    pub tabling_mode: TablingMode,
    pub subsumption: Subsumption,
    pub call_style: CallStyle,
    pub query_index: usize,
    pub repetition: usize,
    pub inferences: u64,
    pub table_bytes: u64,
    pub table_entries: u64,
    pub solutions: usize,
    pub wall_ms: f64,
    pub error: String,
}

impl Row {
    fn new(s: &Scenario, mode: &Mode, query_index: usize, repetition: usize) -> Self {
        Row {
            scenario: s.name.clone(),
            n: s.n,
            ic_mode: mode.ic_mode,
            tabling_mode: mode.tabling_mode,
            subsumption: mode.subsumption,
            call_style: s.call_style,
            query_index,
            repetition,
            inferences: 0,
            table_bytes: 0,
            table_entries: 0,
            solutions: 0,
            wall_ms: 0.0,
            error: String::new(),
        }
    }
}

pub fn run_scenario(s: &Scenario) -> Vec<Row> {
    run_scenario_with(s, RunOptions::default())
}

/// Rows ordered by mode, then query index (1-based), then repetition.
pub fn run_scenario_with(s: &Scenario, run: RunOptions) -> Vec<Row> {
    let mut rows = Vec::new();
    for mode in &s.modes {
        let topts = TransformOptions {
            ic_mode: mode.ic_mode,
            tabling_mode: mode.tabling_mode,
            elide_constants: run.elide_constants,
            prefix_duals: true,
        };
        let solver = transform_program(&s.framework, topts)
            .map_err(|e| e.to_string())
            .and_then(|tp| {
                let mut opts = EngineOptions::new(mode.ic_mode, mode.tabling_mode, mode.subsumption);
                opts.max_steps = run.max_steps;
                Solver::new(&tp, opts).map_err(|e| e.to_string())
            });
        let mut solver = match solver {
            Ok(sv) => Some(sv),
            Err(e) => {
                for qi in 0..s.queries.len() {
                    for rep in 0..s.repetitions {
                        let mut row = Row::new(s, mode, qi + 1, rep + 1);
                        row.error = e.clone();
                        rows.push(row);
                    }
                }
                None
            }
        };
        let Some(solver) = solver.as_mut() else { continue };
        for (qi, q) in s.queries.iter().enumerate() {
            for rep in 0..s.repetitions {
                let mut row = Row::new(s, mode, qi + 1, rep + 1);
                if s.call_style == CallStyle::NonIncremental {
                    solver.abolish_tables();
                }
                let had_setup = solver.setup_metrics().is_some();
                let result = parse_query(q)
                    .map_err(|e| e.to_string())
                    .and_then(|goals| solver.solve(&goals, &Context::empty()).map_err(|e| e.to_string()));
                let setup = if had_setup { None } else { solver.setup_metrics().cloned() };
                match result {
                    Ok(r) => {
                        row.inferences = r.metrics.inferences;
                        row.table_bytes = r.metrics.table_bytes;
                        row.table_entries = r.metrics.table_entries;
                        row.solutions = r.solutions.len();
                        row.wall_ms = r.metrics.wall_ms;
                    }
                    Err(e) => row.error = e,
                }
                if let Some(m) = setup {
                    row.inferences += m.inferences;
                    row.wall_ms += m.wall_ms;
                }
                rows.push(row);
            }
        }
    }
    rows
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "scenario",
            "n",
            "ic_mode",
            "tabling_mode",
            "subsumption",
            "call_style",
            "query_index",
            "repetition",
            "inferences",
            "table_bytes",
            "table_entries",
            "solutions",
            "wall_ms",
            "error",
        ])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp1_shapes() {
        let s = gen_exp1(1);
        assert_eq!(s.framework.program.iter().filter(|r| r.is_fact()).count(), 1);
        assert_eq!(s.framework.program.len(), 3);
        assert_eq!(s.queries, vec!["q_1(1)"]);
        let s = gen_exp1(10);
        assert_eq!(s.framework.program.iter().filter(|r| r.is_fact()).count(), 10);
        assert_eq!(s.framework.program.iter().filter(|r| !r.is_fact()).count(), 20);
    }

    #[test]
    fn exp3_shapes() {
        let s = gen_exp3(1);
        let r: Vec<String> = s.framework.program.iter().filter(|r| r.head.pred.as_str() == "r").map(|r| r.to_string()).collect();
        assert_eq!(r, vec!["r :- a(1), not q(1).", "r :- p(1)."]);
        assert_eq!(s.queries, vec!["r, t(1)"]);
        let s = gen_exp3(3);
        let lens: Vec<usize> =
            s.framework.program.iter().filter(|r| r.head.pred.as_str() == "r").map(|r| r.body.len()).collect();
        assert_eq!(lens, vec![6, 3]);
    }

    #[test]
    fn random_is_deterministic() {
        let p = RandomParams::default();
        assert_eq!(gen_random(1, &p).framework, gen_random(1, &p).framework);
        assert_eq!(gen_random(1, &p).queries, gen_random(1, &p).queries);
    }

    #[test]
    fn empty_mode_list_gives_no_rows() {
        let s = gen_exp1(2).with_modes(vec![]);
        let rows = run_scenario(&s);
        assert!(rows.is_empty());
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("scenario,n,ic_mode,"));
    }

    #[test]
    fn csv_header_and_rows() {
        let rows = run_scenario(&gen_exp1(3));
        assert_eq!(rows.len(), 6);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "scenario,n,ic_mode,tabling_mode,subsumption,call_style,query_index,repetition,inferences,table_bytes,table_entries,solutions,wall_ms,error"
        );
        assert!(lines.next().unwrap().starts_with("exp1,3,subcheck,normal,all,non_incremental,1,1,"));
    }
}
