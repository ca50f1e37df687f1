//! The `torsionpoly` command line.

use std::ffi::OsString;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::polyalg::Poly;
use crate::scalar::BigReal;
use crate::torsion::{
    enumerate_reps, normalization_value, sigma, torsion_value, ParityCase, RepClass,
    SurgeryDescriptor, TorsionError, TorsionPolynomial,
};
use crate::verify::{self, Grid, Scope, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const PRECISION_ENV: &str = "TORSIONPOLY_PRECISION";
const PRECISION_RANGE: std::ops::RangeInclusive<u32> = 32..=16384;

#[derive(Debug, Parser)]
#[command(
    name = "torsionpoly",
    version,
    about = "Torsion polynomials of surgeries on torus knots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute sigma_(p,q,n)(t).
    Compute(ComputeArgs),
    /// List representation classes with traces and inverse torsion values.
    Reps(RepsArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Surgery {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    q: u32,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    surgery: Surgery,
    #[arg(long, conflicts_with = "latex")]
    json: bool,
    #[arg(long)]
    latex: bool,
    /// Emit sigma(4t), the normalisation of the published tables.
    #[arg(long)]
    scaled: bool,
    /// Include the acyclic classes in JSON output.
    #[arg(long)]
    classes: bool,
    #[arg(long)]
    precision: Option<u32>,
    /// Append the JSON record to this file (one record per line).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RepsArgs {
    #[command(flatten)]
    surgery: Surgery,
    /// Include classes with non-acyclic (a, b).
    #[arg(long)]
    all: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    #[arg(long, requires = "q", conflicts_with = "grid")]
    p: Option<u32>,
    #[arg(long, requires = "p")]
    q: Option<u32>,
    /// "pmax,qmax,nmax"
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    precision: Option<u32>,
    /// Coefficient tolerance against the root-product oracle.
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    /// Tolerance for matching roots to inverse torsion values.
    #[arg(long, default_value_t = 1e-6)]
    root_tol: f64,
}

/// One serialized polynomial. Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub p: u32,
    pub q: u32,
    pub n: i64,
    #[serde(rename = "N")]
    pub order: u64,
    pub degree: usize,
    pub normalization: i32,
    pub sign_corrected: bool,
    pub coefficients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaled_coefficients: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acyclic_classes: Option<Vec<ClassRecord>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub a: u32,
    pub b: u32,
    pub k: u64,
    pub trace_x: f64,
    pub trace_y: f64,
    pub trace_m: f64,
    /// `1/τ` as a decimal string at the working precision; absent for non-acyclic classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv_torsion: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepsRecord {
    pub p: u32,
    pub q: u32,
    pub n: i64,
    #[serde(rename = "N")]
    pub order: u64,
    pub classes: Vec<ClassRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Decimal with an explicit sign on nonzero values: `+1`, `-480`, `0`.
pub fn render_coefficient(c: &BigInt) -> String {
    match c.sign() {
        num_bigint::Sign::Plus => format!("+{c}"),
        _ => c.to_string(),
    }
}

fn render_all(p: &Poly<BigInt>) -> Vec<String> {
    p.coeffs().iter().map(render_coefficient).collect()
}

pub fn exit_code_for(e: &TorsionError) -> i32 {
    if e.is_internal() {
        EXIT_INTERNAL
    } else {
        EXIT_INVALID_INPUT
    }
}

/// Flag, then environment, then the built-in default.
fn resolve_precision(flag: Option<u32>) -> Result<u32, String> {
    let prec = match flag {
        Some(p) => p,
        None => match std::env::var(PRECISION_ENV) {
            Ok(v) => v
                .trim()
                .parse::<u32>()
                .map_err(|_| format!("{PRECISION_ENV}={v:?} is not a bit count"))?,
            Err(_) => crate::DEFAULT_PRECISION,
        },
    };
    if PRECISION_RANGE.contains(&prec) {
        Ok(prec)
    } else {
        Err(format!(
            "precision {prec} outside {}..={} bits",
            PRECISION_RANGE.start(),
            PRECISION_RANGE.end()
        ))
    }
}

fn class_record(
    d: &SurgeryDescriptor,
    r: &RepClass,
    prec: u32,
) -> Result<ClassRecord, TorsionError> {
    let inv_torsion = if r.acyclic {
        Some(
            torsion_value::<BigReal>(d, r, prec)?
                .inverse
                .to_decimal_string(),
        )
    } else {
        None
    };
    Ok(ClassRecord {
        a: r.a,
        b: r.b,
        k: r.k,
        trace_x: r.trace_x,
        trace_y: r.trace_y,
        trace_m: r.trace_m,
        inv_torsion,
    })
}

fn class_records(
    d: &SurgeryDescriptor,
    all: bool,
    prec: u32,
) -> Result<Vec<ClassRecord>, TorsionError> {
    if d.parity() == ParityCase::NZero {
        return Ok(Vec::new());
    }
    enumerate_reps(d)?
        .iter()
        .filter(|r| all || r.acyclic)
        .map(|r| class_record(d, r, prec))
        .collect()
}

pub fn output_record(
    tp: &TorsionPolynomial,
    scaled: bool,
    classes: bool,
    prec: u32,
) -> Result<OutputRecord, TorsionError> {
    let d = tp.descriptor();
    Ok(OutputRecord {
        p: d.p(),
        q: d.q(),
        n: d.n(),
        order: d.order(),
        degree: tp.degree(),
        normalization: normalization_value(d),
        sign_corrected: tp.sign_corrected(),
        coefficients: render_all(tp.sigma()),
        scaled_coefficients: scaled.then(|| render_all(&tp.scaled_by_four())),
        acyclic_classes: if classes {
            Some(class_records(d, false, prec)?)
        } else {
            None
        },
    })
}

/// Paper-style layout: descending powers, three terms per line.
pub fn latex(d: &SurgeryDescriptor, poly: &Poly<BigInt>) -> String {
    let mut terms = Vec::new();
    for (k, c) in poly.coeffs().iter().enumerate().rev() {
        if c.sign() == num_bigint::Sign::NoSign {
            continue;
        }
        let sign = match (terms.is_empty(), c.sign()) {
            (_, num_bigint::Sign::Minus) => "-",
            (true, _) => "",
            _ => "+",
        };
        let mag = c.magnitude().to_string();
        let mag = if k > 0 && mag == "1" {
            String::new()
        } else {
            mag
        };
        let var = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{{{k}}}"),
        };
        terms.push(format!("{sign}{mag}{var}"));
    }
    let head = format!("\\sigma_{{({},{},{})}}(t)", d.p(), d.q(), d.n());
    if terms.len() <= 1 {
        return format!(
            "{head}&={}.",
            terms.first().map(String::as_str).unwrap_or("0")
        );
    }
    let lines: Vec<String> = terms.chunks(3).map(|c| c.concat()).collect();
    let mut out = format!("{head}\n&={}", lines[0]);
    for l in &lines[1..] {
        out.push_str("\\\\\n&");
        out.push_str(l);
    }
    out.push('.');
    out
}

fn descriptor(s: &Surgery) -> Result<SurgeryDescriptor, TorsionError> {
    SurgeryDescriptor::new(s.p, s.q, s.n)
}

fn cmd_compute(args: &ComputeArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let prec = match resolve_precision(args.precision) {
        Ok(p) => p,
        Err(m) => return fail(err, EXIT_INVALID_INPUT, &m),
    };
    let d = match descriptor(&args.surgery) {
        Ok(d) => d,
        Err(e) => return fail(err, exit_code_for(&e), &e.to_string()),
    };
    let tp = match sigma(&d) {
        Ok(tp) => tp,
        Err(e) => return fail(err, exit_code_for(&e), &e.to_string()),
    };
    let record = match output_record(&tp, args.scaled, args.classes, prec) {
        Ok(r) => r,
        Err(e) => return fail(err, exit_code_for(&e), &e.to_string()),
    };
    let json = serde_json::to_string(&record).expect("records always serialize");
    if let Some(path) = &args.cache {
        let appended = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .and_then(|mut f| writeln!(f, "{json}"));
        if let Err(e) = appended {
            return fail(
                err,
                EXIT_INVALID_INPUT,
                &format!("cannot append to {}: {e}", path.display()),
            );
        }
    }
    let shown = if args.scaled {
        tp.scaled_by_four()
    } else {
        tp.sigma().clone()
    };
    let text = if args.json {
        json
    } else if args.latex {
        latex(&d, &shown)
    } else {
        shown.to_string()
    };
    emit(out, &text)
}

fn cmd_reps(args: &RepsArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let prec = match resolve_precision(args.precision) {
        Ok(p) => p,
        Err(m) => return fail(err, EXIT_INVALID_INPUT, &m),
    };
    let d = match descriptor(&args.surgery) {
        Ok(d) => d,
        Err(e) => return fail(err, exit_code_for(&e), &e.to_string()),
    };
    let classes = match class_records(&d, args.all, prec) {
        Ok(c) => c,
        Err(e) => return fail(err, exit_code_for(&e), &e.to_string()),
    };
    let note = (d.parity() == ParityCase::NZero).then(|| "S^3".to_string());
    if args.json {
        let rec = RepsRecord {
            p: d.p(),
            q: d.q(),
            n: d.n(),
            order: d.order(),
            classes,
            note,
        };
        return emit(
            out,
            &serde_json::to_string(&rec).expect("records always serialize"),
        );
    }
    let mut text = format!(
        "{d}  N = {}  ({})",
        d.order(),
        verify::parity_label(d.parity())
    );
    if let Some(n) = note {
        text.push_str(&format!("\n{n}: no irreducible representations"));
        return emit(out, &text);
    }
    text.push_str(&format!(
        "\n{:>3} {:>3} {:>6} {:>10} {:>10} {:>10}  {}",
        "a", "b", "k", "trace_x", "trace_y", "trace_m", "1/tau"
    ));
    for c in &classes {
        text.push_str(&format!(
            "\n{:>3} {:>3} {:>6} {:>10.6} {:>10.6} {:>10.6}  {}",
            c.a,
            c.b,
            c.k,
            c.trace_x,
            c.trace_y,
            c.trace_m,
            c.inv_torsion.as_deref().unwrap_or("-")
        ));
    }
    emit(out, &text)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let precision = match resolve_precision(args.precision) {
        Ok(p) => p,
        Err(m) => return fail(err, EXIT_INVALID_INPUT, &m),
    };
    if !(args.rel_tol > 0.0 && args.root_tol > 0.0 && args.root_tol < 1.0) {
        return fail(
            err,
            EXIT_INVALID_INPUT,
            "tolerances must be positive (and root tolerance below 1)",
        );
    }
    let scope = match (&args.grid, args.p.zip(args.q)) {
        (Some(g), _) => match Grid::parse(g) {
            Ok(g) => Scope::Grid(g),
            Err(m) => return fail(err, EXIT_INVALID_INPUT, &m),
        },
        (None, Some((p, q))) => match Scope::pair(p, q) {
            Ok(s) => s,
            Err(e) => return fail(err, exit_code_for(&e), &e.to_string()),
        },
        (None, None) => Scope::Grid(Grid::STANDARD),
    };
    let opts = VerifyOptions {
        precision,
        rel_tol: args.rel_tol,
        root_tol: args.root_tol,
    };
    let results = verify::run(args.suite, &scope, &opts);
    let mut text: Vec<String> = results.iter().map(ToString::to_string).collect();
    let failed = results.iter().filter(|c| !c.passed).count();
    text.push(format!("{} checks, {} failed", results.len(), failed));
    let code = emit(out, &text.join("\n"));
    if code != EXIT_OK {
        code
    } else if results.iter().any(|c| c.internal) {
        EXIT_INTERNAL
    } else if failed > 0 {
        EXIT_VERIFY_FAILED
    } else {
        EXIT_OK
    }
}

fn emit(out: &mut dyn Write, text: &str) -> i32 {
    match writeln!(out, "{text}") {
        Ok(()) => EXIT_OK,
        Err(_) => EXIT_INTERNAL,
    }
}

fn fail(err: &mut dyn Write, code: i32, msg: &str) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    code
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INVALID_INPUT
                }
            };
        }
    };
    match &cli.command {
        Command::Compute(a) => cmd_compute(a, out, err),
        Command::Reps(a) => cmd_reps(a, out, err),
        Command::Verify(a) => cmd_verify(a, out, err),
    }
}
