//! `qprefix`: manipulate indeterminate-length qubit strings from the
//! command line: evaluate expressions, verify codebooks, emit Kraft
//! reports and run oracle comparisons.
//!
//! Exit codes: 0 success/checked-true, 1 checked-false, 2 parse or input
//! error, 3 precondition or evaluation error, 4 resource guard.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qprefix::analysis::{
    check_prefix_free, kraft_report, sufficient_suffix_len, CodeSet, Condition, PrefixFreeVerdict,
};
use qprefix::dsl::{self, Env, Value};
use qprefix::random::{random_density, random_finite_set, random_hermitian, random_index_set};
use qprefix::tape::{
    concat, duality_deviation, restrict, restrict_oracle_deviation, IndexSet, ORACLE_MAX_CELLS,
};
use qprefix::DEFAULT_TOLERANCE;

use qprefix_cli::codebook::CodebookFile;
use qprefix_cli::render::{fmt_complex, fmt_sig, render_operator, render_value, value_to_json};

const EXIT_OK: i32 = 0;
const EXIT_CHECKED_FALSE: i32 = 1;
const EXIT_INPUT: i32 = 2;
const EXIT_PRECONDITION: i32 = 3;
const EXIT_GUARD: i32 = 4;

#[derive(Parser)]
#[command(
    name = "qprefix",
    version,
    about = "Indeterminate-length qubit strings: expressions, prefix-free checks, Kraft reports and oracle trials"
)]
struct Cli {
    /// Comparison tolerance (default: QPREFIX_TOLERANCE env var, else 1e-9)
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Emit machine-readable JSON
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized trials
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression (with optional `let` bindings)
    Eval {
        expr: String,
        /// Codebook file whose labelled vectors become variables
        #[arg(long)]
        bindings: Option<PathBuf>,
    },
    /// Check a codebook for prefix-freeness
    Check {
        codebook: PathBuf,
        /// Which condition to check: 1, 2, 3, 4 or all
        #[arg(long, default_value = "all")]
        condition: String,
        /// Override the classical-suffix enumeration bound
        #[arg(long)]
        max_suffix_len: Option<usize>,
    },
    /// Kraft inequality report for an orthonormal codebook
    Kraft { codebook: PathBuf },
    /// Restrict an operator expression to a set of bit positions
    Restrict {
        expr: String,
        /// Index set: `[m,n]`, `{i,j,...}` or `[m,inf)`
        set: String,
    },
    /// Concatenate two vector expressions
    Concat { left: String, right: String },
    /// Differential trials: sparse restriction vs the dense tape oracle,
    /// plus the restriction/tensor trace duality
    Oracle {
        /// Expression whose value (vector or operator) is swept over all
        /// index sets within the window
        #[arg(long)]
        expr: Option<String>,
        /// Codebook whose vectors are swept
        #[arg(long)]
        codebook: Option<PathBuf>,
        /// Tape window size (dense dimension 3^N)
        #[arg(long, default_value_t = 5)]
        cells: usize,
        /// Number of random trials per suite
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

/// A command failure: message plus process exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PRECONDITION,
            message: message.into(),
        }
    }

    fn guard(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_GUARD,
            message: message.into(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    };
    std::process::exit(code);
}

fn resolve_tolerance(flag: Option<f64>) -> Result<f64, Failure> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("QPREFIX_TOLERANCE") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| Failure::input(format!("QPREFIX_TOLERANCE is not a number: {text:?}"))),
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

fn read_codebook(path: &Path) -> Result<CodebookFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    CodebookFile::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn code_set_from(path: &Path) -> Result<CodeSet, Failure> {
    read_codebook(path)?
        .to_code_set()
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_program(src: &str) -> Result<dsl::Program, Failure> {
    dsl::parse_program(src).map_err(|e| Failure::input(e.to_string()))
}

fn eval_program(src: &str, env: &Env, tol: f64) -> Result<Value, Failure> {
    let program = parse_program(src)?;
    dsl::eval_program(&program, env, tol).map_err(|e| {
        let (line, column) = dsl::line_col(src, e.span.start);
        Failure::precondition(format!(
            "evaluation error at line {line}, column {column}: {e}"
        ))
    })
}

fn bindings_env(path: Option<&Path>) -> Result<Env, Failure> {
    let mut env = Env::new();
    if let Some(path) = path {
        let file = read_codebook(path)?;
        let vectors = file
            .parse_vectors()
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        for (label, v) in vectors {
            env.insert(label, Value::Vector(v));
        }
    }
    Ok(env)
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let tol = resolve_tolerance(cli.tolerance)?;
    match cli.command {
        Command::Eval { expr, bindings } => cmd_eval(&expr, bindings.as_deref(), tol, cli.json),
        Command::Check {
            codebook,
            condition,
            max_suffix_len,
        } => cmd_check(&codebook, &condition, max_suffix_len, tol, cli.json),
        Command::Kraft { codebook } => cmd_kraft(&codebook, tol, cli.json),
        Command::Restrict { expr, set } => cmd_restrict(&expr, &set, tol, cli.json),
        Command::Concat { left, right } => cmd_concat(&left, &right, tol, cli.json),
        Command::Oracle {
            expr,
            codebook,
            cells,
            trials,
        } => cmd_oracle(
            expr.as_deref(),
            codebook.as_deref(),
            cells,
            trials,
            cli.seed,
            tol,
            cli.json,
        ),
    }
}

/// For a top-level product or concatenation, report how much weight the
/// bit-string projection discarded: input norms, output norm and the lost
/// squared weight. Norm loss is a meaningful outcome of such placements,
/// not an error, so it is surfaced rather than flagged.
fn normalization_report(
    program: &dsl::Program,
    value: &Value,
    env: &Env,
    tol: f64,
) -> Option<(f64, f64, f64, f64)> {
    use qprefix::dsl::ExprKind;
    let (left, right) = match &program.body.kind {
        ExprKind::Concat(l, r) | ExprKind::Tensor(l, r) | ExprKind::TensorAt(l, _, r) => (l, r),
        _ => return None,
    };
    let output_norm = match value {
        Value::Vector(v) => v.norm(),
        _ => return None,
    };
    let mut scope = env.clone();
    for b in &program.bindings {
        let bound = dsl::eval_expr(&b.expr, &scope, tol).ok()?;
        scope.insert(b.name.clone(), bound);
    }
    let norm_of = |e: &dsl::Expr| match dsl::eval_expr(e, &scope, tol) {
        Ok(Value::Vector(v)) => Some(v.norm()),
        _ => None,
    };
    let (a, b) = (norm_of(left)?, norm_of(right)?);
    let lost = (a * b).powi(2) - output_norm.powi(2);
    Some((a, b, output_norm, lost))
}

fn cmd_eval(expr: &str, bindings: Option<&Path>, tol: f64, json: bool) -> Result<i32, Failure> {
    let env = bindings_env(bindings)?;
    let program = parse_program(expr)?;
    let value = dsl::eval_program(&program, &env, tol).map_err(|e| {
        let (line, column) = dsl::line_col(expr, e.span.start);
        Failure::precondition(format!(
            "evaluation error at line {line}, column {column}: {e}"
        ))
    })?;
    let report = normalization_report(&program, &value, &env, tol);
    if json {
        let mut out = value_to_json(&value);
        if let (Some((a, b, output, lost)), Some(map)) = (report, out.as_object_mut()) {
            map.insert(
                "normalization_report".into(),
                serde_json::json!({
                    "input_norms": [a, b],
                    "output_norm": output,
                    "lost_weight": lost,
                }),
            );
        }
        println!("{out}");
    } else {
        println!("{}", render_value(&value, tol));
        if let Some((a, b, output, lost)) = report {
            println!(
                "normalization: input norms {} * {}, output norm {}, lost weight {}",
                fmt_sig(a),
                fmt_sig(b),
                fmt_sig(output),
                fmt_sig(lost.max(0.0)),
            );
        }
    }
    Ok(EXIT_OK)
}

fn witness_json(set: &CodeSet, verdict: &PrefixFreeVerdict) -> serde_json::Value {
    match &verdict.witness {
        None => serde_json::Value::Null,
        Some(w) => serde_json::json!({
            "phi": set.label(w.phi),
            "psi": set.label(w.psi),
            "suffix": w.suffix.to_string(),
            "bra_suffix": w.bra_suffix.as_ref().map(|s| s.to_string()),
            "overlap_re": w.overlap.re,
            "overlap_im": w.overlap.im,
            "overlap_abs": w.overlap.norm(),
        }),
    }
}

fn cmd_check(
    path: &Path,
    condition: &str,
    max_suffix_len: Option<usize>,
    tol: f64,
    json: bool,
) -> Result<i32, Failure> {
    let set = code_set_from(path)?;
    let conditions: Vec<Condition> = match condition {
        "all" => Condition::ALL.to_vec(),
        other => {
            let n: u8 = other
                .parse()
                .map_err(|_| Failure::input(format!("bad condition {other:?}: use 1-4 or all")))?;
            vec![Condition::from_number(n)
                .ok_or_else(|| Failure::input(format!("bad condition {n}: use 1-4 or all")))?]
        }
    };
    let bound = max_suffix_len.unwrap_or_else(|| sufficient_suffix_len(&set, tol));
    let orthonormal = set.orthonormality(tol);
    let verdicts: Vec<PrefixFreeVerdict> = conditions
        .iter()
        .map(|&c| check_prefix_free(&set, c, bound, tol))
        .collect();
    let prefix_free = verdicts.iter().all(|v| v.is_prefix_free);

    if json {
        println!(
            "{}",
            serde_json::json!({
                "vectors": set.len(),
                "orthonormal": orthonormal.is_ok(),
                "max_suffix_len": bound,
                "conditions": verdicts.iter().map(|v| serde_json::json!({
                    "condition": v.condition.number(),
                    "prefix_free": v.is_prefix_free,
                    "witness": witness_json(&set, v),
                })).collect::<Vec<_>>(),
                "prefix_free": prefix_free,
                "tolerance": tol,
            })
        );
    } else {
        println!("codebook: {} vector(s), suffix bound {bound}", set.len());
        match &orthonormal {
            Ok(()) => println!("orthonormal: yes"),
            Err(e) => println!("orthonormal: no ({e})"),
        }
        for v in &verdicts {
            let verdict_text = if v.is_prefix_free {
                "prefix-free".to_string()
            } else {
                let w = v.witness.as_ref().expect("failed verdicts carry witnesses");
                let pair = match &w.bra_suffix {
                    Some(t) => format!("suffixes s={} t={}", w.suffix, t),
                    None => format!("suffix s={}", w.suffix),
                };
                format!(
                    "NOT prefix-free: witness {}, {} overlap {}",
                    format_args!("phi={} psi={}", set.label(w.phi), set.label(w.psi)),
                    pair,
                    fmt_complex(w.overlap),
                )
            };
            println!("condition {}: {verdict_text}", v.condition.number());
        }
        println!(
            "verdict: {}",
            if prefix_free {
                "prefix-free"
            } else {
                "not prefix-free"
            }
        );
    }
    Ok(if prefix_free {
        EXIT_OK
    } else {
        EXIT_CHECKED_FALSE
    })
}

fn cmd_kraft(path: &Path, tol: f64, json: bool) -> Result<i32, Failure> {
    let set = code_set_from(path)?;
    let report = kraft_report(&set, tol)
        .map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))?;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "sum_base": report.sum_base,
                "sum_avg": report.sum_avg,
                "trace_term": report.trace_term,
                "chain_holds": report.chain_holds,
                "bounded_by_one": report.bounded_by_one,
                "equality_case": report.equality_case,
                "prefix_free": report.prefix_free,
                "tolerance": report.tolerance,
                "contributions": report.contributions.iter().map(|c| serde_json::json!({
                    "label": c.label,
                    "base_length": c.base_length,
                    "base_term": c.base_term,
                    "average_length": c.average_length,
                    "average_term": c.average_term,
                    "length_weight": c.length_weight,
                    "length_eigenstate": c.is_length_eigenstate,
                })).collect::<Vec<_>>(),
            })
        );
    } else {
        println!(
            "codebook: {} vector(s), prefix-free: {}",
            set.len(),
            if report.prefix_free { "yes" } else { "no" }
        );
        for c in &report.contributions {
            println!(
                "  {}: l={} 2^-l={}  lbar={} 2^-lbar={}  weight={}",
                c.label,
                c.base_length,
                fmt_sig(c.base_term),
                fmt_sig(c.average_length),
                fmt_sig(c.average_term),
                fmt_sig(c.length_weight),
            );
        }
        println!("sum_base   = {}", fmt_sig(report.sum_base));
        println!("sum_avg    = {}", fmt_sig(report.sum_avg));
        println!("trace_term = {}", fmt_sig(report.trace_term));
        let chain_ok = report.chain_holds && report.bounded_by_one;
        println!(
            "chain: {} <= {} <= {} <= 1 : {}",
            fmt_sig(report.sum_base),
            fmt_sig(report.sum_avg),
            fmt_sig(report.trace_term),
            if chain_ok { "HOLDS" } else { "VIOLATED" },
        );
        println!(
            "equality case (all length eigenstates): {}",
            if report.equality_case { "yes" } else { "no" }
        );
    }
    Ok(EXIT_OK)
}

fn cmd_restrict(expr: &str, set_text: &str, tol: f64, json: bool) -> Result<i32, Failure> {
    let set: IndexSet = set_text.parse().map_err(Failure::input)?;
    let value = eval_program(expr, &Env::new(), tol)?;
    let op = match value {
        Value::Operator(op) => op,
        other => {
            return Err(Failure::precondition(format!(
                "restrict expects an operator expression (wrap vectors in dm), found {}",
                other.type_name()
            )))
        }
    };
    let restricted = restrict(&op, &set);
    if json {
        println!("{}", value_to_json(&Value::Operator(restricted)));
    } else {
        println!("{}", render_operator(&restricted));
    }
    Ok(EXIT_OK)
}

fn cmd_concat(left: &str, right: &str, tol: f64, json: bool) -> Result<i32, Failure> {
    let env = Env::new();
    let values = (
        eval_program(left, &env, tol)?,
        eval_program(right, &env, tol)?,
    );
    let (a, b) = match values {
        (Value::Vector(a), Value::Vector(b)) => (a, b),
        (Value::Vector(_), other) | (other, _) => {
            return Err(Failure::precondition(format!(
                "concat expects two vector expressions, found {}",
                other.type_name()
            )))
        }
    };
    let joined = concat(&a, &b);
    if json {
        println!("{}", value_to_json(&Value::Vector(joined)));
    } else {
        println!("{}", render_value(&Value::Vector(joined), tol));
    }
    Ok(EXIT_OK)
}

/// All subsets of `[1, cells]` plus the tails `[m, inf)` for `m` up to
/// `cells + 1`: a deterministic sweep for expression/codebook inputs.
fn sweep_sets(cells: usize) -> Vec<IndexSet> {
    let mut sets = Vec::new();
    for mask in 0u32..(1 << cells) {
        let members = (1..=cells).filter(|i| mask >> (i - 1) & 1 == 1);
        sets.push(IndexSet::finite(members).expect("valid indices"));
    }
    for m in 1..=cells + 1 {
        sets.push(IndexSet::tail(m).expect("valid tail"));
    }
    sets
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    // independent stream per trial, stable under reordering
    ChaCha8Rng::seed_from_u64(seed ^ (trial + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn cmd_oracle(
    expr: Option<&str>,
    codebook: Option<&Path>,
    cells: usize,
    trials: usize,
    seed: u64,
    tol: f64,
    json: bool,
) -> Result<i32, Failure> {
    if cells > ORACLE_MAX_CELLS {
        return Err(Failure::guard(format!(
            "--cells {cells} exceeds the dense-oracle guard of {ORACLE_MAX_CELLS}"
        )));
    }
    let mut sections: Vec<(String, usize, f64)> = Vec::new();

    let mut sweep_operator = |label: String, op: qprefix::QOperator| -> Result<(), Failure> {
        let mut max_dev = 0.0f64;
        let sets = sweep_sets(cells);
        for set in &sets {
            let dev = restrict_oracle_deviation(&op, set, cells)
                .map_err(|e| Failure::precondition(e.to_string()))?;
            max_dev = max_dev.max(dev);
        }
        sections.push((label, sets.len(), max_dev));
        Ok(())
    };

    if let Some(expr) = expr {
        let op = match eval_program(expr, &Env::new(), tol)? {
            Value::Operator(op) => op,
            Value::Vector(v) => v.outer(),
            other => {
                return Err(Failure::precondition(format!(
                    "oracle --expr expects a vector or operator, found {}",
                    other.type_name()
                )))
            }
        };
        sweep_operator("expr sweep".to_string(), op)?;
    }
    if let Some(path) = codebook {
        let vectors = read_codebook(path)?
            .parse_vectors()
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        for (label, v) in vectors {
            sweep_operator(format!("codebook sweep [{label}]"), v.outer())?;
        }
    }

    // randomized restrict-vs-oracle trials
    let mut max_restrict_dev = 0.0f64;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let rho = random_density(&mut rng, cells.min(4), 2, 2);
        let set = random_index_set(&mut rng, cells);
        let dev = restrict_oracle_deviation(&rho, &set, cells)
            .map_err(|e| Failure::precondition(e.to_string()))?;
        max_restrict_dev = max_restrict_dev.max(dev);
    }
    sections.push((
        "random restrict trials".to_string(),
        trials,
        max_restrict_dev,
    ));

    // duality trials: Tr(rho_I A) vs Tr(rho (A (x)_I 1))
    let mut max_duality_dev = 0.0f64;
    for t in 0..trials {
        let mut rng = trial_rng(seed, (trials + t) as u64);
        let rho = random_density(&mut rng, 3, 2, 2);
        let set = random_finite_set(&mut rng, cells.min(5));
        let cap = set.len().unwrap_or(5);
        let a = random_hermitian(&mut rng, cap, 3);
        let dev = duality_deviation(&rho, &a, &set, 6)
            .map_err(|e| Failure::precondition(e.to_string()))?;
        max_duality_dev = max_duality_dev.max(dev);
    }
    sections.push(("duality trials".to_string(), trials, max_duality_dev));

    let overall = sections.iter().map(|s| s.2).fold(0.0f64, f64::max);
    let pass = overall < tol;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "cells": cells,
                "seed": seed,
                "tolerance": tol,
                "sections": sections.iter().map(|(label, count, dev)| serde_json::json!({
                    "label": label, "count": count, "max_deviation": dev,
                })).collect::<Vec<_>>(),
                "max_deviation": overall,
                "pass": pass,
            })
        );
    } else {
        println!("oracle comparison: cells={cells}, seed={seed}");
        for (label, count, dev) in &sections {
            println!(
                "  {label}: {count} case(s), max deviation {}",
                fmt_sig(*dev)
            );
        }
        println!(
            "max deviation {} vs tolerance {}: {}",
            fmt_sig(overall),
            fmt_sig(tol),
            if pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(if pass { EXIT_OK } else { EXIT_CHECKED_FALSE })
}
