//! `primecurve`: command-line access to the prime-frequency Fourier curves.
//!
//! Exit codes: 0 on success with every check passing, 1 when a check or
//! measurement fails, 2 on a usage error or a violated numeric precondition.

pub mod svg;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use prime_curves::geometry::{self, MeasuredCurve};
use prime_curves::verify::{self, CheckId, GrowthRow, Verifier, VerifyOptions};
use prime_curves::{coefficient_table, spectral_summary, Curve, DerivativeOrder, Error, Method};

#[derive(Debug, Parser)]
#[command(name = "primecurve", version, about = "Fourier curves with prime frequencies and factorial-valuation weights")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Spectral,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Spectral => Method::Spectral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficient table `p,v` of F_n.
    Coeffs {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact spectral moments as one JSON object.
    Norms {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Samples of F_n^(order) on t_j = -pi + 2 pi j / M, as `re,im` rows.
    Eval {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        order: u32,
        #[arg(long, value_enum, default_value = "spectral")]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arc length by grid doubling.
    Length {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Certified diameter interval from M samples.
    Diameter {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        samples: usize,
    },
    /// Grid box counts of the sampled polyline, one row per epsilon.
    Cover {
        #[arg(long)]
        n: u64,
        #[arg(long = "eps", required = true, num_args = 1.., value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long)]
        samples: usize,
    },
    /// Run one check or all of them.
    Verify {
        #[arg(long)]
        n: u64,
        #[arg(long, conflicts_with = "all")]
        check: Option<String>,
        #[arg(long)]
        all: bool,
        /// Cell side for the covering checks.
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
    },
    /// Growth table over n = start, start*factor, ... <= end.
    Sweep {
        #[arg(long)]
        n_start: u64,
        #[arg(long)]
        n_end: u64,
        #[arg(long, default_value_t = 2)]
        factor: u64,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: SweepFormat,
    },
    /// SVG polyline of the curve.
    Plot {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure of a dispatched command, mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or a violated precondition (exit 2).
    Usage(String),
    /// A check failed or a measurement could not be completed (exit 1).
    Failed(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Failed(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ConvergenceCap { .. } => Failure::Failed(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

fn require(cond: bool, condition: &str, got: impl std::fmt::Display) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure::Usage(format!("precondition `{condition}` failed (got {got})")))
    }
}

/// Shortest round-trip decimal, `-0` printed as `0`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_owned()
    } else {
        format!("{x}")
    }
}

fn open_output<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Failed(format!("cannot write {}: {e}", p.display())))?,
        )),
        None => Box::new(stdout),
    })
}

fn big(x: &BigUint) -> Value {
    Value::String(x.to_string())
}

fn growth_row_json(r: &GrowthRow) -> Value {
    json!({
        "n": r.n,
        "length": r.length,
        "length_per_n": r.length_per_n,
        "diam_lo": big(&r.diam_lo),
        "diam_ratio": r.diam_ratio,
        "sup1": big(&r.sup1),
        "sup2": big(&r.sup2),
        "l2sq1": big(&r.l2sq_1),
        "l2sq2": big(&r.l2sq_2),
        "mertens_gap": r.mertens_gap,
        "cover_floor": r.cover_floor,
    })
}

pub const SWEEP_HEADER: &str = "n,length,length_per_n,diam_lo,diam_ratio,sup1,sup2,l2sq1,l2sq2,mertens_gap";

fn growth_row_csv(r: &GrowthRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.n,
        fmt_f64(r.length),
        fmt_f64(r.length_per_n),
        r.diam_lo,
        fmt_f64(r.diam_ratio),
        r.sup1,
        r.sup2,
        r.l2sq_1,
        r.l2sq_2,
        fmt_f64(r.mertens_gap)
    )
}

/// Executes one parsed command.
pub fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Coeffs { n, out: path } => {
            require(*n >= 1, "n >= 1", n)?;
            let mut w = open_output(path.as_deref(), out)?;
            writeln!(w, "p,v")?;
            for e in coefficient_table(*n).iter() {
                writeln!(w, "{},{}", e.p, e.v)?;
            }
            w.flush()?;
        }

        Command::Norms { n, out: path } => {
            require(*n >= 1, "n >= 1", n)?;
            let s = spectral_summary(*n)?;
            let doc = json!({
                "n": s.n,
                "sq0": big(&s.sq0),
                "sq2": big(&s.sq2),
                "sq4": big(&s.sq4),
                "lin0": big(&s.lin0),
                "lin1": big(&s.lin1),
                "lin2": big(&s.lin2),
                "chord": big(&s.chord),
            });
            let mut w = open_output(path.as_deref(), out)?;
            writeln!(w, "{doc}")?;
            w.flush()?;
        }

        Command::Eval {
            n,
            samples,
            order,
            method,
            out: path,
        } => {
            require(*n >= 1, "n >= 1", n)?;
            require(*samples >= 1, "samples >= 1", samples)?;
            let order = DerivativeOrder::try_from(*order)?;
            let s = Curve::new(*n).sample(*samples, order, (*method).into())?;
            let mut w = open_output(path.as_deref(), out)?;
            writeln!(w, "re,im")?;
            for z in &s.values {
                writeln!(w, "{},{}", fmt_f64(z.re), fmt_f64(z.im))?;
            }
            w.flush()?;
        }

        Command::Length { n, tol } => {
            require(*n >= 1, "n >= 1", n)?;
            let (result, converged) = match geometry::arc_length(*n, *tol) {
                Ok(r) => (r, true),
                Err(Error::ConvergenceCap { result }) => (result, false),
                Err(e) => return Err(e.into()),
            };
            writeln!(out, "n,length,samples,est_rel_error")?;
            writeln!(
                out,
                "{},{},{},{}",
                n,
                fmt_f64(result.value),
                result.samples_used,
                fmt_f64(result.est_rel_error)
            )?;
            if !converged {
                return Err(Failure::Failed(format!(
                    "arc length did not reach tol {tol} below the sample cap"
                )));
            }
        }

        Command::Diameter { n, samples } => {
            require(*n >= 1, "n >= 1", n)?;
            require(*samples >= 2, "samples >= 2", samples)?;
            let d = geometry::diameter(*n, *samples)?;
            writeln!(out, "n,samples,lo,hi")?;
            writeln!(out, "{},{},{},{}", n, samples, fmt_f64(d.lo), fmt_f64(d.hi))?;
        }

        Command::Cover { n, eps, samples } => {
            require(*n >= 1, "n >= 1", n)?;
            require(*samples >= 2, "samples >= 2", samples)?;
            for e in eps {
                require(*e > 0.0 && e.is_finite(), "eps > 0", e)?;
            }
            let curve = MeasuredCurve::new(*n);
            writeln!(out, "n,eps,samples,grid_count,theorem_floor,polyline_diameter")?;
            for &e in eps {
                let c = geometry::box_count_of(&curve, e, *samples)?;
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    n,
                    fmt_f64(e),
                    samples,
                    c.grid_count,
                    fmt_f64(c.theorem_floor),
                    fmt_f64(c.polyline_diameter)
                )?;
                if c.undersampled {
                    writeln!(
                        err,
                        "warning: eps={} with {} samples is below the recommended {:.0}",
                        fmt_f64(e),
                        samples,
                        geometry::recommended_samples(&curve, e).ceil()
                    )?;
                }
            }
            writeln!(
                err,
                "# grid_count >= N(eps) >= theorem_floor; grid_count <= 4 N(eps) is expected but not certified"
            )?;
        }

        Command::Verify { n, check, all: _, eps } => {
            require(*n >= 1, "n >= 1", n)?;
            require(*eps > 0.0 && eps.is_finite(), "eps > 0", eps)?;
            let checks: Vec<CheckId> = match check {
                Some(id) => vec![id.parse()?],
                None => CheckId::ALL.to_vec(),
            };
            let verifier = Verifier::with_options(
                *n,
                VerifyOptions {
                    epsilon: *eps,
                    ..VerifyOptions::default()
                },
            );
            let mut failed = 0;
            for c in checks {
                if !c.applies_to(*n) {
                    if check.is_some() {
                        return Err(Failure::Usage(format!("{c} requires n >= {}", c.min_n())));
                    }
                    writeln!(out, "SKIP {c} n={n} requires n >= {}", c.min_n())?;
                    continue;
                }
                let report = verifier.run(c)?;
                if !report.pass {
                    failed += 1;
                }
                writeln!(out, "{report}")?;
            }
            if failed > 0 {
                return Err(Failure::Failed(format!("{failed} check(s) failed")));
            }
        }

        Command::Sweep {
            n_start,
            n_end,
            factor,
            eps,
            tol,
            out: path,
            format,
        } => {
            require(*n_start >= 3, "n-start >= 3", n_start)?;
            let ns = verify::geometric_range(*n_start, *n_end, *factor)?;
            let report = verify::sweep(&ns, *eps, *tol)?;
            let mut w = open_output(Some(path), out)?;
            match format {
                SweepFormat::Csv => {
                    writeln!(w, "{SWEEP_HEADER}")?;
                    for (_, row) in &report.rows {
                        if let Ok(r) = row {
                            writeln!(w, "{}", growth_row_csv(r))?;
                        }
                    }
                }
                SweepFormat::Json => {
                    let rows: Vec<Value> = report
                        .rows
                        .iter()
                        .map(|(n, row)| match row {
                            Ok(r) => growth_row_json(r),
                            Err(e) => json!({ "n": n, "error": e.to_string() }),
                        })
                        .collect();
                    writeln!(w, "{}", Value::Array(rows))?;
                }
            }
            w.flush()?;
            for (n, row) in &report.rows {
                if let Err(e) = row {
                    writeln!(err, "n={n}: {e}")?;
                }
            }
            for v in &report.violations {
                writeln!(err, "{} did not increase from n={} to n={}", v.column, v.from_n, v.to_n)?;
            }
            if !report.passed() {
                return Err(Failure::Failed("sweep had failing rows or growth violations".into()));
            }
        }

        Command::Plot { n, samples, out: path } => {
            require(*n >= 1, "n >= 1", n)?;
            require(*samples >= 2, "samples >= 2", samples)?;
            let s = MeasuredCurve::new(*n).samples(*samples, DerivativeOrder::Value)?;
            svg::render_svg(&s, path)?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Failed(msg)) = &f;
            let _ = writeln!(err, "error: {msg}");
            f.exit_code()
        }
    }
}
