//! The `intdec` command line.
//!
//! Exit codes: 0 true / success, 1 false / unsat / not included,
//! 2 usage or input error, 3 backend capacity exceeded.
//!
//! Formula arguments name a file, `-` for stdin, or (when no such file
//! exists) are the formula text itself.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::dbm::timed_demo;
use crate::error::Error;
use crate::frontend::{compile, decide, free_vars, parse, parse_point, Formula, VarContext};
use crate::idf::IdfSet;
use crate::json::{decompose_input, idf_to_json};
use crate::presburger::set_var_limit;

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "intdec", version, about = "Decide and represent sets definable in FO(R,Z,+,<=)")]
struct Cli {
    /// Maximum number of integer coordinates in an automaton.
    #[arg(long, global = true, value_name = "INT")]
    var_limit: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truth value of a closed formula.
    Decide { formula: String },
    /// Satisfiability over the free variables, with a witness.
    Sat { formula: String },
    /// Whether two formulas define the same set.
    Equiv { left: String, right: String },
    /// Whether the first formula's set is included in the second's.
    Subset { left: String, right: String },
    /// Membership of a point, given as "x=3/2,y=7".
    Member {
        formula: String,
        #[arg(long)]
        point: String,
    },
    /// Cell count, automaton states and decimal regions of the compiled set.
    Stats {
        formula: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The compiled set in the IdfSet JSON schema.
    Export {
        formula: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decompose a CP-DBM+ (or DBM, or array of them) given as JSON.
    CpdbmDecompose { input: String },
    /// Build the timed-automaton zone family three ways and compare them.
    Demo {
        #[arg(long, default_value_t = 5)]
        max_const: i64,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Capacity { .. } => EXIT_CAPACITY,
            _ => EXIT_INPUT,
        };
        let message = match &e {
            Error::Parse { line, column, message } => format!("parse error at line {line}, column {column}: {message}"),
            other => other.to_string(),
        };
        Failure { code, message }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

type Outcome = Result<i32, Failure>;

fn read_source(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_failure(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| input_failure(format!("cannot read {arg}: {e}")));
    }
    Ok(arg.to_string())
}

fn load_formula(arg: &str) -> Result<Formula, Failure> {
    Ok(parse(&read_source(arg)?)?)
}

fn compiled(f: &Formula) -> Result<(VarContext, IdfSet), Failure> {
    let ctx = free_vars(f);
    let set = compile(f, &ctx)?;
    Ok((ctx, set))
}

fn show_point(ctx: &VarContext, p: &[BigRational]) -> String {
    ctx.names()
        .iter()
        .zip(p)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn pair(left: &str, right: &str) -> Result<(VarContext, IdfSet, IdfSet), Failure> {
    let (a, b) = (load_formula(left)?, load_formula(right)?);
    let (na, nb) = (a.free_names(), b.free_names());
    if na != nb {
        return Err(input_failure(format!(
            "free variables differ: {:?} versus {:?}",
            na.into_iter().collect::<Vec<_>>(),
            nb.into_iter().collect::<Vec<_>>()
        )));
    }
    let ctx = free_vars(&a);
    Ok((ctx.clone(), compile(&a, &ctx)?, compile(&b, &ctx)?))
}

fn stdout_err(e: std::io::Error) -> Failure {
    input_failure(format!("write failed: {e}"))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Decide { formula } => {
            let f = load_formula(&formula)?;
            let truth = decide(&f)?;
            writeln!(out, "{}", if truth { "TRUE" } else { "FALSE" }).map_err(stdout_err)?;
            Ok(if truth { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Sat { formula } => {
            let f = load_formula(&formula)?;
            let (ctx, set) = compiled(&f)?;
            match set.witness() {
                None => {
                    writeln!(out, "UNSAT").map_err(stdout_err)?;
                    Ok(EXIT_FALSE)
                }
                Some(p) => {
                    writeln!(out, "SAT").map_err(stdout_err)?;
                    if !ctx.is_empty() {
                        writeln!(out, "{}", show_point(&ctx, &p)).map_err(stdout_err)?;
                    }
                    Ok(EXIT_TRUE)
                }
            }
        }
        Command::Equiv { left, right } => {
            let (ctx, a, b) = pair(&left, &right)?;
            if a.equals(&b)? {
                writeln!(out, "EQUIVALENT").map_err(stdout_err)?;
                Ok(EXIT_TRUE)
            } else {
                writeln!(out, "DIFFERENT").map_err(stdout_err)?;
                let diff = a.difference(&b)?.union(&b.difference(&a)?)?;
                if let (Some(p), false) = (diff.witness(), ctx.is_empty()) {
                    writeln!(out, "{}", show_point(&ctx, &p)).map_err(stdout_err)?;
                }
                Ok(EXIT_FALSE)
            }
        }
        Command::Subset { left, right } => {
            let (ctx, a, b) = pair(&left, &right)?;
            let diff = a.difference(&b)?;
            match diff.witness() {
                None => {
                    writeln!(out, "INCLUDED").map_err(stdout_err)?;
                    Ok(EXIT_TRUE)
                }
                Some(p) => {
                    writeln!(out, "NOT INCLUDED").map_err(stdout_err)?;
                    if !ctx.is_empty() {
                        writeln!(out, "{}", show_point(&ctx, &p)).map_err(stdout_err)?;
                    }
                    Ok(EXIT_FALSE)
                }
            }
        }
        Command::Member { formula, point } => {
            let f = load_formula(&formula)?;
            let (ctx, set) = compiled(&f)?;
            let given: HashMap<String, BigRational> = parse_point(&point)?.into_iter().collect();
            let mut p = Vec::with_capacity(ctx.len());
            for name in ctx.names() {
                let v = given
                    .get(&name)
                    .ok_or_else(|| input_failure(format!("no value for free variable `{name}`")))?;
                p.push(v.clone());
            }
            if let Some(extra) = given.keys().find(|k| ctx.index_of(k).is_none()) {
                return Err(input_failure(format!("`{extra}` is not a free variable of the formula")));
            }
            let inside = set.contains(&p)?;
            writeln!(out, "{}", if inside { "TRUE" } else { "FALSE" }).map_err(stdout_err)?;
            Ok(if inside { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Stats { formula, format } => {
            let (ctx, set) = compiled(&load_formula(&formula)?)?;
            let s = set.stats();
            match format {
                Format::Text => {
                    writeln!(out, "variables: {}", ctx.names().join(" ")).map_err(stdout_err)?;
                    writeln!(out, "cells: {}", s.cells).map_err(stdout_err)?;
                    writeln!(out, "states: {}", s.states).map_err(stdout_err)?;
                    writeln!(out, "regions: {}", s.regions).map_err(stdout_err)?;
                }
                Format::Json => {
                    let v = serde_json::json!({
                        "variables": ctx.names(),
                        "cells": s.cells,
                        "states": s.states,
                        "regions": s.regions,
                    });
                    writeln!(out, "{v}").map_err(stdout_err)?;
                }
            }
            Ok(EXIT_TRUE)
        }
        Command::Export { formula, format } => {
            let (ctx, set) = compiled(&load_formula(&formula)?)?;
            if format == Format::Text {
                write!(out, "# variables: {}\n{set}", ctx.names().join(" ")).map_err(stdout_err)?;
            } else {
                writeln!(out, "{}", idf_to_json(&set)).map_err(stdout_err)?;
            }
            Ok(EXIT_TRUE)
        }
        Command::CpdbmDecompose { input } => {
            let text = read_source(&input)?;
            let v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| input_failure(format!("malformed JSON: {e}")))?;
            let set = decompose_input(&v)?;
            writeln!(out, "{}", idf_to_json(&set)).map_err(stdout_err)?;
            Ok(EXIT_TRUE)
        }
        Command::Demo { max_const } => demo(max_const, out),
    }
}

fn demo(m: i64, out: &mut dyn Write) -> Outcome {
    let start = Instant::now();
    let d = timed_demo(m)?;
    let built = start.elapsed();
    let t = Instant::now();
    let decomposed = d.cpdbm.decompose()?;
    let decompose_time = t.elapsed();
    let t = Instant::now();
    let formula = compile(&d.formula, &VarContext::reals(&["x", "y"]))?;
    let compile_time = t.elapsed();
    let a = decomposed.equals(&d.shapes)?;
    let b = formula.equals(&d.shapes)?;
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(stdout_err);
    w(out, format!("max constant: {m}"))?;
    w(out, format!("parameter automaton states: {}", d.cpdbm.phi().num_states()))?;
    w(out, format!("direct shapes: {} cells", d.shapes.cells().len()))?;
    w(out, format!("decomposed CP-DBM+: {} cells ({:.3?})", decomposed.cells().len(), decompose_time))?;
    w(out, format!("compiled formula: {} cells ({:.3?})", formula.cells().len(), compile_time))?;
    w(out, format!("decomposed == direct: {a}"))?;
    w(out, format!("compiled == direct: {b}"))?;
    w(out, format!("total: {:.3?} (construction {:.3?})", start.elapsed(), built))?;
    Ok(if a && b { EXIT_TRUE } else { EXIT_FALSE })
}

/// Run the command line with `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_TRUE };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    if let Some(limit) = cli.var_limit {
        set_var_limit(limit);
    }
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
