//! Command-line front end: prove, normalize, clausify and check-solution.

pub mod input;
pub mod report;

use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand};
use resmod_core::clausal::clausal_form;
use resmod_core::kernel::Prop;
use resmod_core::prover::{saturate, ConstraintStrategy, ProverConfig, SearchResult};
use resmod_core::rewrite::{normalize, NormalizeOutcome, DEFAULT_FUEL};
use resmod_core::syntax::{parse_term, UnknownIdents};
use resmod_core::unify::{check_equations, EquationVerdict};

use input::{load_goal, load_theory, parse_constraints, parse_substitution, read_file, InputError};
use report::{RunReport, INPUT_ERROR};

#[derive(Debug, Parser)]
#[command(name = "resmod", version, about = "Resolution modulo a rewrite system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Refute the negation of a goal; exit 0 PROVED, 1 SATURATED, 2 RESOURCE_OUT, 3 input error, 4 PROVED_UNVERIFIED.
    Prove {
        /// Preset name, theory file, or inline rules `{l -> r, ...}`.
        #[arg(long)]
        theory: String,
        /// Goal name from the theory, a file holding the goal, or the goal itself.
        #[arg(long)]
        goal: String,
        /// freeze or onfly; defaults to the theory's choice.
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        #[arg(long, default_value_t = resmod_core::prover::DEFAULT_MAX_CLAUSES)]
        max_clauses: usize,
        #[arg(long, default_value_t = resmod_core::unify::DEFAULT_DEPTH)]
        narrow_depth: usize,
        /// Also write the trace here; a `.json` name gets the JSON report.
        #[arg(long)]
        trace: Option<String>,
        /// Do not normalize clauses.
        #[arg(long)]
        no_normalize: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the reduction sequence of a term or proposition.
    Normalize {
        theory: String,
        input: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Print the clausal form of a proposition.
    Clausify {
        theory: String,
        input: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Check that a substitution solves a constraint file.
    CheckSolution {
        theory: String,
        constraints: String,
        substitution: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
}

/// Parse `args` and run; returns the exit code.
pub fn main_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            0
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            INPUT_ERROR
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Prove {
            theory,
            goal,
            strategy,
            fuel,
            max_clauses,
            narrow_depth,
            trace,
            no_normalize,
            json,
        } => (|| {
            let t = load_theory(&theory)?;
            let strategy = match strategy {
                Some(s) => s
                    .parse::<ConstraintStrategy>()
                    .map_err(|_| InputError::Invalid(format!("unknown strategy `{s}`")))?,
                None => t.strategy,
            };
            let cfg = ProverConfig {
                strategy,
                fuel,
                max_clauses,
                narrowing_depth: narrow_depth,
                normalize_clauses: !no_normalize,
                ..ProverConfig::default()
            };
            cfg.validate()
                .map_err(|e| InputError::Invalid(e.to_string()))?;
            let (g, sig) = load_goal(&t, &goal)?;
            prove(&t, &g, sig, &cfg, trace, json, out)
        })(),
        Command::Normalize {
            theory,
            input,
            fuel,
        } => load_theory(&theory).and_then(|t| cmd_normalize(&t, &input, fuel, out)),
        Command::Clausify {
            theory,
            input,
            fuel,
        } => load_theory(&theory).and_then(|t| {
            let (p, mut sig) = t.parse_statement(&input)?;
            let cf = clausal_form(&p, &t.rules, fuel, &mut sig);
            for (i, c) in cf.clauses.iter().enumerate() {
                writeln!(out, "{} {c}", i + 1).ok();
            }
            for s in &cf.skolems {
                writeln!(out, "skolem {} for {}", s.symbol.name, s.source).ok();
            }
            if cf.unnormalized {
                writeln!(out, "UNNORMALIZED").ok();
            }
            Ok(0)
        }),
        Command::CheckSolution {
            theory,
            constraints,
            substitution,
            fuel,
        } => load_theory(&theory)
            .and_then(|t| cmd_check_solution(t, &constraints, &substitution, fuel, out)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            INPUT_ERROR
        }
    }
}

fn prove(
    t: &resmod_core::theories::Theory,
    goal: &Prop,
    sig: resmod_core::kernel::Signature,
    cfg: &ProverConfig,
    trace_file: Option<String>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, InputError> {
    let start = Instant::now();
    let problem = t.problem(goal, sig, cfg.fuel);
    let mut sig = problem.signature;
    let search = saturate(problem.clauses, &t.rules, cfg, &mut sig);
    let report = RunReport::new(&search, start.elapsed(), trace_file.clone());
    if let Some(path) = &trace_file {
        let text = if path.ends_with(".json") {
            serde_json::to_string_pretty(&report).expect("report serializes")
        } else {
            match &search.result {
                SearchResult::Proved { trace, .. } => trace.to_string(),
                _ => String::new(),
            }
        };
        std::fs::write(path, text).map_err(|source| InputError::Io {
            path: path.clone(),
            source,
        })?;
    }
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        )
        .ok();
    } else {
        writeln!(out, "{report}").ok();
    }
    Ok(report.exit_code())
}

fn print_outcome<T: std::fmt::Display>(o: &NormalizeOutcome<T>, out: &mut dyn Write) -> i32 {
    for (i, x) in o.sequence().iter().enumerate() {
        writeln!(out, "{i}: {x}").ok();
    }
    match o {
        NormalizeOutcome::Normal { value, steps, .. } => {
            writeln!(out, "NORMAL {value} in {steps} steps").ok();
            0
        }
        NormalizeOutcome::FuelExhausted { prefix, .. } => {
            writeln!(out, "FUEL EXHAUSTED after {} steps", prefix.len() - 1).ok();
            2
        }
    }
}

/// Terms are tried first, then propositions.
fn cmd_normalize(
    t: &resmod_core::theories::Theory,
    src: &str,
    fuel: usize,
    out: &mut dyn Write,
) -> Result<i32, InputError> {
    if fuel == 0 {
        return Err(InputError::Invalid("fuel must be positive".into()));
    }
    if let Ok(term) = parse_term(src, &t.signature, UnknownIdents::Constants) {
        return Ok(print_outcome(&normalize(&term, &t.rules, fuel), out));
    }
    let (p, _) = t.parse_statement(src)?;
    Ok(print_outcome(&normalize(&p, &t.rules, fuel), out))
}

fn cmd_check_solution(
    mut t: resmod_core::theories::Theory,
    constraints: &str,
    substitution: &str,
    fuel: usize,
    out: &mut dyn Write,
) -> Result<i32, InputError> {
    let cs = parse_constraints(&mut t, &read_file(constraints)?)?;
    let s = parse_substitution(&mut t, &read_file(substitution)?)?;
    let eqs: Vec<_> = cs.iter().map(|(_, c)| c.clone()).collect();
    let verdicts = check_equations(&s, &eqs, &t.rules, fuel);
    let mut code = 0;
    for ((name, c), v) in cs.iter().zip(&verdicts) {
        match v {
            EquationVerdict::Joinable(nf) => {
                writeln!(out, "{name}: {c} JOINABLE {nf}").ok();
            }
            EquationVerdict::Distinct(l, r) => {
                writeln!(out, "{name}: {c} DISTINCT {l} <> {r}").ok();
                code = code.max(1);
            }
            EquationVerdict::FuelExhausted => {
                writeln!(out, "{name}: {c} FUEL EXHAUSTED").ok();
                code = 2;
            }
        }
    }
    writeln!(
        out,
        "{}",
        match code {
            0 => "SOLUTION VERIFIED",
            1 => "SOLUTION REJECTED",
            _ => "SOLUTION UNDECIDED",
        }
    )
    .ok();
    Ok(code)
}
