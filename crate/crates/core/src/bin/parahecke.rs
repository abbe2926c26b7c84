//! Command-line front end. JSON in, JSON out.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 precision exhausted
//! after retries, 3 malformed or invalid input.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use parahecke::decompose::Cell;
use parahecke::hecke::{coset_reps, hecke_apply, validate_reps, verify_eigen, HeckeGenerator};
use parahecke::matrix::{MatrixJson, SeriesMatrix};
use parahecke::perm::Permutation;
use parahecke::quiver::decompose::decompose as quiver_decompose;
use parahecke::quiver::filtration::{constant_degree_filtration, elementary_filtration, Filtration};
use parahecke::quiver::homext::{ext1_dim, hom_dim};
use parahecke::quiver::{enumerate_classes, QuiverJson, QuiverRep, Validation};
use parahecke::scalars::Prime;
use parahecke::series::{with_retry, Window};
use parahecke::trace::{k_label, l_values, verify_lemma54, verify_unweighted};
use parahecke::whittaker::{whittaker_eval, whittaker_eval_detailed, whittaker_formula, WhittakerContext};
use parahecke::Error;

#[derive(Parser)]
#[command(name = "parahecke", version, about = "Steinberg Whittaker values, Hecke operators and cyclic-quiver sheaves")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Rank of GL_n or number of quiver nodes.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Residue characteristic.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Precision window lo:hi with lo < 0 < hi.
    #[arg(long, global = true, value_parser = parse_window)]
    prec: Option<Window>,
    /// How many times to double the window after a precision failure.
    #[arg(long, global = true, default_value_t = 3)]
    retries: u32,
    /// Seed for sampled cells.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Whittaker function values.
    #[command(subcommand)]
    Whittaker(WhittakerCmd),
    /// Hecke operators.
    #[command(subcommand)]
    Hecke(HeckeCmd),
    /// Cyclic-quiver representations.
    #[command(subcommand)]
    Quiver(QuiverCmd),
    /// Trace recursion tables.
    #[command(subcommand)]
    Trace(TraceCmd),
}

#[derive(Subcommand)]
enum WhittakerCmd {
    /// Closed formula at a cell.
    Eval {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        d: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<usize>,
    },
    /// Value at a matrix read from JSON.
    EvalMatrix {
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HeckeCmd {
    /// Check the eigenvalue identity at a set of cells.
    Verify {
        #[arg(long)]
        gen: String,
        /// JSON list of cells; defaults to all cells with |d_i| ≤ bound.
        #[arg(long)]
        cells: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        bound: i64,
        /// Use this many cells sampled with --seed instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Coset representatives and their validation.
    Reps {
        #[arg(long)]
        gen: String,
    },
    /// (T_gen W)(x) at a matrix read from JSON.
    Apply {
        #[arg(long)]
        gen: String,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QuiverCmd {
    /// Split into segments, with a certificate.
    Decompose {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Isomorphism classes with a given dimension vector.
    Enumerate {
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
    },
    /// Dimensions of Hom and Ext¹.
    Homext {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// A filtration by subrepresentations.
    Filter {
        #[arg(long)]
        file: Option<PathBuf>,
        /// Constant-degree steps instead of elementary ones.
        #[arg(long)]
        constant: bool,
    },
}

#[derive(Subcommand)]
enum TraceCmd {
    /// L(k) for 0 ≤ k ≤ d.
    Table {
        #[arg(long)]
        d: u32,
    },
    /// Check the difference and unweighted identities for every d ≤ d-max.
    Verify {
        #[arg(long, default_value_t = 8)]
        d_max: u32,
    },
}

enum Failure {
    Verification(Value),
    Precision(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_precision() {
            Failure::Precision(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<Value, Failure>;

fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: i64 = lo.trim().parse().map_err(|_| "bad lo")?;
    let hi: i64 = hi.trim().parse().map_err(|_| "bad hi")?;
    Window::new(lo, hi).ok_or_else(|| format!("window [{lo}, {hi}) must satisfy lo < 0 < hi"))
}

fn input(msg: impl ToString) -> Failure {
    Failure::Input(msg.to_string())
}

fn read_text(file: &Option<PathBuf>) -> Result<String, Failure> {
    match file {
        Some(path) => fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(input)?;
            Ok(s)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(file: &Option<PathBuf>) -> Result<T, Failure> {
    serde_json::from_str(&read_text(file)?).map_err(input)
}

fn prime(g: &Global) -> Result<Prime, Failure> {
    Prime::new(g.p.ok_or_else(|| input("--p is required"))?).map_err(input)
}

fn rank(g: &Global) -> Result<usize, Failure> {
    match g.n {
        Some(n) if n >= 1 => Ok(n),
        Some(_) => Err(input("--n must be positive")),
        None => Err(input("--n is required")),
    }
}

fn generator(s: &str, n: usize) -> Result<HeckeGenerator, Failure> {
    let g: HeckeGenerator = s.parse().map_err(|e: parahecke::hecke::HeckeError| input(e))?;
    g.validate(n).map_err(input)?;
    Ok(g)
}

/// Reads a matrix file at `window`, applying `--n`/`--p` consistency checks.
fn load_matrix(mj: &MatrixJson, g: &Global, window: Window) -> Result<SeriesMatrix, Failure> {
    if g.p.is_some_and(|p| p != mj.p) || g.n.is_some_and(|n| n != mj.n) {
        return Err(input("--n/--p disagree with the matrix file"));
    }
    mj.to_matrix(window).map_err(input)
}

fn start_window(mj: &MatrixJson, g: &Global) -> Result<Window, Failure> {
    Ok(match g.prec {
        Some(w) => w,
        None => mj.file_window().map_err(input)?.unwrap_or_default(),
    })
}

fn run_whittaker(cmd: &WhittakerCmd, g: &Global) -> Outcome {
    match cmd {
        WhittakerCmd::Eval { d, sigma } => {
            let sigma = Permutation::from_one_line(sigma).map_err(input)?;
            let cell = Cell::new(d.clone(), sigma).map_err(input)?;
            let w = whittaker_formula(&cell);
            Ok(json!({ "cell": cell, "value": w, "text": w.to_string() }))
        }
        WhittakerCmd::EvalMatrix { file } => {
            let mj: MatrixJson = read_json(file)?;
            let window = start_window(&mj, g)?;
            let p = Prime::new(mj.p).map_err(input)?;
            let ev = with_retry(window, g.retries, |w| -> Result<_, Failure> {
                let m = load_matrix(&mj, g, w)?;
                let ctx = WhittakerContext::new(mj.n, Some(p)).with_window(w, 0);
                whittaker_eval_detailed(&ctx, &m).map_err(Failure::from)
            })?;
            Ok(json!({
                "cell": ev.cell,
                "residue": ev.residue,
                "value": ev.value,
                "text": ev.value.to_string(),
            }))
        }
    }
}

impl parahecke::series::RetryableError for Failure {
    fn is_precision(&self) -> bool {
        matches!(self, Failure::Precision(_))
    }
}

fn hecke_ctx(g: &Global) -> Result<WhittakerContext, Failure> {
    let ctx = WhittakerContext::new(rank(g)?, Some(prime(g)?));
    Ok(ctx.with_window(g.prec.unwrap_or_default(), g.retries))
}

fn run_hecke(cmd: &HeckeCmd, g: &Global) -> Outcome {
    let ctx = hecke_ctx(g)?;
    let n = ctx.n;
    match cmd {
        HeckeCmd::Verify {
            gen,
            cells,
            bound,
            sample,
        } => {
            let gen = generator(gen, n)?;
            let mut cells: Vec<Cell> = match cells {
                Some(path) => read_json(&Some(path.clone()))?,
                None => Cell::all_bounded(n, *bound),
            };
            if let Some(k) = sample {
                let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
                let mut picked = Vec::with_capacity(*k);
                for _ in 0..*k {
                    if cells.is_empty() {
                        break;
                    }
                    picked.push(cells.swap_remove(rng.gen_range(0..cells.len())));
                }
                picked.sort();
                cells = picked;
            }
            let report = verify_eigen(&gen, &cells, &ctx)?;
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| json!({ "cell": r.cell, "lhs": r.lhs, "rhs": r.rhs, "pass": r.passed() }))
                .collect();
            let out = json!({
                "generator": gen,
                "eigenvalue": report.eigenvalue,
                "eigenvalue_text": report.eigenvalue.to_string(),
                "passed": report.passed(),
                "cells": rows,
            });
            if report.passed() {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
        HeckeCmd::Reps { gen } => {
            let gen = generator(gen, n)?;
            let p = ctx.p.expect("set above");
            let reps = coset_reps(&gen, p, n).map_err(|e| Failure::from(Error::from(e)))?;
            let report = validate_reps(&gen, &ctx)?;
            let window = ctx.window;
            let out = json!({
                "generator": gen,
                "count": reps.len(),
                "representatives": reps.iter().map(|m| MatrixJson::from_matrix(m, window)).collect::<Vec<_>>(),
                "validation": report,
            });
            if report.passed() {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
        HeckeCmd::Apply { gen, file } => {
            let gen = generator(gen, n)?;
            let mj: MatrixJson = read_json(file)?;
            let window = start_window(&mj, g)?;
            let value = with_retry(window, g.retries, |w| -> Result<_, Failure> {
                let x = load_matrix(&mj, g, w)?;
                let c = ctx.clone().with_window(w, 0);
                let f = |y: &SeriesMatrix| whittaker_eval(&c, y);
                hecke_apply(&gen, &f, &x, &c).map_err(Failure::from)
            })?;
            Ok(json!({ "generator": gen, "value": value, "text": value.to_string() }))
        }
    }
}

fn load_rep(file: &Option<PathBuf>, g: &Global) -> Result<QuiverRep, Failure> {
    let qj: QuiverJson = read_json(file)?;
    if g.p.is_some_and(|p| p != qj.p) || g.n.is_some_and(|n| n != qj.n) {
        return Err(input("--n/--p disagree with the representation file"));
    }
    let r = qj.to_rep().map_err(input)?;
    r.validate(Validation::Nilpotent).map_err(input)?;
    Ok(r)
}

fn filtration_json(f: &Filtration) -> Value {
    let steps: Vec<Value> = f
        .steps
        .iter()
        .map(|s| json!({ "dims": s.dims(), "bases": s.bases }))
        .collect();
    json!({ "steps": steps })
}

fn run_quiver(cmd: &QuiverCmd, g: &Global) -> Outcome {
    match cmd {
        QuiverCmd::Decompose { file } => {
            let r = load_rep(file, g)?;
            let dec = quiver_decompose(&r).map_err(|e| Failure::from(Error::from(e)))?;
            let cert: Vec<Vec<Vec<i64>>> = dec.certificate.iter().map(|m| m.to_rows()).collect();
            Ok(json!({ "segments": dec.multisegment.segments(), "certificate": cert }))
        }
        QuiverCmd::Enumerate { dims } => {
            let n = g.n.unwrap_or(dims.len());
            if n != dims.len() || n == 0 {
                return Err(input("--dims needs one entry per node"));
            }
            let classes = enumerate_classes(dims, n);
            Ok(json!({ "n": n, "dims": dims, "count": classes.len(), "classes": classes }))
        }
        QuiverCmd::Homext { x, y } => {
            let x = load_rep(&Some(x.clone()), g)?;
            let y = load_rep(&Some(y.clone()), g)?;
            let hom = hom_dim(&x, &y).map_err(input)?;
            let ext1 = ext1_dim(&x, &y).map_err(input)?;
            Ok(json!({ "hom": hom, "ext1": ext1 }))
        }
        QuiverCmd::Filter { file, constant } => {
            let r = load_rep(file, g)?;
            let f = if *constant {
                constant_degree_filtration(&r)
            } else {
                elementary_filtration(&r)
            }
            .map_err(input)?;
            Ok(filtration_json(&f))
        }
    }
}

fn run_trace(cmd: &TraceCmd) -> Outcome {
    match cmd {
        TraceCmd::Table { d } => {
            if *d == 0 {
                return Err(input("--d must be positive"));
            }
            let t = l_values(*d);
            let rows: Vec<Value> = t
                .rows()
                .map(|(tk, v)| json!({ "k": k_label(tk), "value": v, "text": v.to_string() }))
                .collect();
            Ok(json!({ "d": d, "rows": rows }))
        }
        TraceCmd::Verify { d_max } => {
            let mut passed = true;
            let mut reports = Vec::new();
            for d in 1..=*d_max {
                let a = verify_lemma54(d);
                let b = verify_unweighted(d);
                passed &= a.passed() && b.passed();
                reports.push(json!({ "d": d, "difference": a, "unweighted": b }));
            }
            let out = json!({ "passed": passed, "reports": reports });
            if passed {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
    }
}

fn emit(value: &Value, out: &Option<PathBuf>) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("valid JSON") + "\n";
    match out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; --help and --version are not errors
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let g = &cli.global;
    let outcome = match &cli.command {
        Command::Whittaker(c) => run_whittaker(c, g),
        Command::Hecke(c) => run_hecke(c, g),
        Command::Quiver(c) => run_quiver(c, g),
        Command::Trace(c) => run_trace(c),
    };
    let (value, code) = match outcome {
        Ok(v) => (v, 0),
        Err(Failure::Verification(v)) => (v, 1),
        Err(Failure::Precision(m)) => (json!({ "error": "precision", "message": m }), 2),
        Err(Failure::Input(m)) => (json!({ "error": "input", "message": m }), 3),
    };
    if let Err(e) = emit(&value, &g.out) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(3);
    }
    if code != 0 {
        if let Some(msg) = value.get("message").and_then(Value::as_str) {
            eprintln!("error: {msg}");
        }
    }
    ExitCode::from(code)
}
