//! `ablp`: transform, solve, benchmark and check abductive logic programs.
//!
//! Exit codes: 0 success, 1 input or argument error, 2 transformation error,
//! 3 no solutions, 4 engine or oracle error, 5 engine/oracle mismatch.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};

use ablp_core::bench::{
    gen_exp1, gen_exp3, gen_phase0, gen_random, run_scenario_with, write_csv, CallStyle, Mode, RandomParams,
    RunOptions, Scenario,
};
use ablp_core::check::check;
use ablp_core::engine::{metrics_record, solution_record, EngineOptions, Solver, Subsumption, DEFAULT_MAX_STEPS};
use ablp_core::model::{AbductiveFramework, Context, Literal};
use ablp_core::parser::{parse_literals, parse_program, parse_query, SourceProgram};
use ablp_core::transform::{
    check_size_bound, check_size_bound_with_ics, transform_program, IcMode, TablingMode, TransformOptions,
};

const STACK_BYTES: usize = 512 << 20;

#[derive(Parser)]
#[command(name = "ablp", version, about = "Tabled contextual abduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the transformed program and its size-bound report.
    Transform {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Stream solution records, then a metrics record, as JSON lines.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        goal: Goal,
    },
    /// Run a benchmark scenario and write its CSV table.
    Bench {
        #[arg(value_enum)]
        scenario: ScenarioName,
        /// Family size; for `exp3` every size from 1 to N is run, for `random` N seeds.
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        repetitions: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compare engine(subcheck, minimal) with oracle(modified, minimal).
    Check {
        input: PathBuf,
        #[command(flatten)]
        goal: Goal,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = IcArg::Subcheck)]
    ic_mode: IcArg,
    #[arg(long, value_enum, default_value_t = TablingArg::Normal)]
    tabling: TablingArg,
    #[arg(long, value_enum, default_value_t = SubsumptionArg::All)]
    subsumption: SubsumptionArg,
    /// Keep tables across queries.
    #[arg(long, overrides_with = "no_incremental")]
    incremental: bool,
    #[arg(long)]
    no_incremental: bool,
    #[arg(long)]
    elide_constants: bool,
    /// Dual alternatives falsify one body literal without re-proving the preceding ones.
    #[arg(long)]
    no_dual_prefix: bool,
    #[arg(long, env = "ABLP_MAX_STEPS", default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Goal {
    /// Comma-separated goals, e.g. "p(0), not q".
    #[arg(long)]
    query: String,
    /// Initial context, e.g. "r(1), not t(0)".
    #[arg(long)]
    context: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum IcArg {
    Dual,
    Subcheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum TablingArg {
    Normal,
    Reduce,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubsumptionArg {
    All,
    Minimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioName {
    Exp1,
    Exp3,
    Phase0,
    Random,
}

impl Common {
    fn transform_options(&self) -> TransformOptions {
        let mut t = TransformOptions::new(
            match self.ic_mode {
                IcArg::Dual => IcMode::Dual,
                IcArg::Subcheck => IcMode::Subcheck,
            },
            match self.tabling {
                TablingArg::Normal => TablingMode::Normal,
                TablingArg::Reduce => TablingMode::Reduce,
            },
        );
        t.elide_constants = self.elide_constants;
        t.prefix_duals = !self.no_dual_prefix;
        t
    }

    fn subsumption(&self) -> Subsumption {
        match self.subsumption {
            SubsumptionArg::All => Subsumption::All,
            SubsumptionArg::Minimal => Subsumption::Minimal,
        }
    }
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

type Outcome = Result<u8, Failure>;

fn fail<E: Into<anyhow::Error>>(code: u8) -> impl FnOnce(E) -> Failure {
    move |e| Failure { code, error: e.into() }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display())).map_err(fail(1))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn load(path: &Path) -> Result<AbductiveFramework, Failure> {
    let src = SourceProgram::from_file(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(fail(1))?;
    parse_program(&src).map_err(fail(1))
}

fn goal(g: &Goal) -> Result<(Vec<Literal>, Context), Failure> {
    let query = parse_query(&g.query).map_err(fail(1))?;
    let initial = match &g.context {
        Some(c) => Context::new(parse_literals(c).map_err(fail(1))?).map_err(fail(1))?,
        None => Context::empty(),
    };
    Ok((query, initial))
}

fn io_fail(e: io::Error) -> Failure {
    fail(1)(e)
}

fn cmd_transform(input: &Path, common: &Common) -> Outcome {
    let fw = load(input)?;
    let tp = transform_program(&fw, common.transform_options()).map_err(fail(2))?;
    let mut out = output(&common.out)?;
    write!(out, "{tp}").map_err(io_fail)?;
    let b = check_size_bound_with_ics(&fw, &tp);
    writeln!(out, "% size bound: lhs={} rhs={} holds={}", b.lhs, b.rhs, b.holds).map_err(io_fail)?;
    let r = check_size_bound(&fw, &tp);
    writeln!(out, "% size bound (rules only): lhs={} rhs={} holds={}", r.lhs, r.rhs, r.holds).map_err(io_fail)?;
    out.flush().map_err(io_fail)?;
    Ok(0)
}

fn cmd_solve(input: &Path, common: &Common, g: &Goal) -> Outcome {
    let fw = load(input)?;
    let (query, initial) = goal(g)?;
    let tp = transform_program(&fw, common.transform_options()).map_err(fail(2))?;
    let mut opts = EngineOptions::for_program(&tp, common.subsumption());
    opts.max_steps = common.max_steps;
    let mut solver = Solver::new(&tp, opts).map_err(fail(4))?;
    let r = solver.solve(&query, &initial).map_err(fail(4))?;
    let mut out = output(&common.out)?;
    for s in &r.solutions {
        writeln!(out, "{}", solution_record(s)).map_err(io_fail)?;
    }
    writeln!(out, "{}", metrics_record(&r.metrics)).map_err(io_fail)?;
    out.flush().map_err(io_fail)?;
    Ok(if r.solutions.is_empty() { 3 } else { 0 })
}

fn cmd_bench(name: ScenarioName, n: usize, seed: u64, repetitions: usize, common: &Common) -> Outcome {
    if n == 0 || repetitions == 0 {
        return Err(fail(1)(anyhow::anyhow!("--n and --repetitions must be positive")));
    }
    let style = if common.incremental && !common.no_incremental {
        CallStyle::Incremental
    } else {
        CallStyle::NonIncremental
    };
    let scenarios: Vec<Scenario> = match name {
        ScenarioName::Exp1 => vec![gen_exp1(n)],
        ScenarioName::Exp3 => (1..=n).map(gen_exp3).collect(),
        ScenarioName::Phase0 => vec![gen_phase0(n)],
        ScenarioName::Random => (0..n as u64)
            .map(|i| {
                let inst = gen_random(seed + i, &RandomParams::default());
                let t = common.transform_options();
                Scenario {
                    name: "random".into(),
                    n: (seed + i) as usize,
                    framework: inst.framework,
                    queries: inst
                        .queries
                        .iter()
                        .map(|q| q.iter().map(Literal::to_string).collect::<Vec<_>>().join(", "))
                        .collect(),
                    modes: vec![Mode::new(t.ic_mode, t.tabling_mode, common.subsumption())],
                    call_style: style,
                    repetitions: 1,
                }
            })
            .collect(),
    };
    let run = RunOptions {
        elide_constants: common.elide_constants,
        max_steps: common.max_steps,
    };
    let mut rows = Vec::new();
    for mut s in scenarios {
        s.call_style = style;
        s.repetitions = repetitions;
        rows.extend(run_scenario_with(&s, run));
    }
    let out = output(&common.out)?;
    write_csv(&rows, out).map_err(fail(1))?;
    Ok(0)
}

fn cmd_check(input: &Path, g: &Goal, out: &Option<PathBuf>) -> Outcome {
    let fw = load(input)?;
    let (query, _) = goal(g)?;
    let report = check(&fw, &query).map_err(|e| match e {
        ablp_core::check::CheckError::Transform(_) => fail(2)(e),
        _ => fail(4)(e),
    })?;
    let mut w = output(out)?;
    for c in &report.engine {
        writeln!(w, "solution: {c}").map_err(io_fail)?;
    }
    write!(w, "{report}").map_err(io_fail)?;
    writeln!(w, "{}", if report.agrees() { "agree" } else { "mismatch" }).map_err(io_fail)?;
    w.flush().map_err(io_fail)?;
    Ok(if report.agrees() { 0 } else { 5 })
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Transform { input, common } => cmd_transform(input, common),
        Command::Solve { input, common, goal } => cmd_solve(input, common, goal),
        Command::Bench {
            scenario,
            n,
            seed,
            repetitions,
            common,
        } => cmd_bench(*scenario, *n, *seed, *repetitions, common),
        Command::Check { input, goal, out } => cmd_check(input, goal, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    // deep recursion in the engine needs more than the default main stack
    let handle = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || run(cli))
        .expect("spawn solver thread");
    match handle.join() {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(f)) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
        Err(_) => ExitCode::from(4),
    }
}
