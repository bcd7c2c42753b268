//! Command-line front end. [`run`] parses arguments and returns the text to
//! print and the process exit code, so every command is testable in-process.
//!
//! Exit codes: 0 when everything holds, 1 on input errors, 2 when an identity
//! residual exceeds its tolerance.

use crate::analysis::analyze_point;
use crate::catenoid::{golden_report, slice_samples, write_slice_csv, CatenoidReport, Slice};
use crate::classify::ClassifyTolerances;
use crate::manifest::Manifest;
use crate::qbasis::QBasisReport;
use crate::report::{to_json, PointReport, ReportDocument};
use crate::tensor::Vec3;
use crate::tolerances;
use crate::verify;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_IDENTITY: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qmanifold",
    version,
    about = "Curvature and identity checks for metrics diag(A, A, B)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full per-point reports for a manifest, as JSON.
    Analyze(AnalyzeArgs),
    /// Seeded randomized check of the universal identities.
    Verify(VerifyArgs),
    /// Catenoid values against their closed forms.
    Catenoid(CatenoidArgs),
    /// Q-basis report for a vector at every manifest point, as JSON.
    Basis(BasisArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub manifest: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Also compute the Q-basis report for this vector (overrides `[basis] x`).
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub x: Option<Vec3>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,
    /// Sampling box `a,b` for every coordinate.
    #[arg(long = "box", value_parser = parse_box, default_value = "-2,2", allow_hyphen_values = true)]
    pub sample_box: [f64; 2],
    /// Print the summary as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CatenoidArgs {
    /// Comma-separated values of u (non-zero).
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1",
        allow_hyphen_values = true
    )]
    pub u: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub v: f64,
    #[arg(long, default_value_t = 0.0)]
    pub w: f64,
    /// Write s1.csv and s2.csv with an n-by-n grid each.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(2..))]
    pub emit_slices: Option<u64>,
    /// Directory for the slice files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Print the reports as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    pub manifest: PathBuf,
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub x: Option<Vec3>,
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0f64; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .trim()
            .parse()
            .map_err(|_| format!("invalid number `{}`", p.trim()))?;
        if !o.is_finite() {
            return Err(format!("number must be finite, got `{}`", p.trim()));
        }
    }
    Ok(out)
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    parse_floats::<3>(s)
}

fn parse_box(s: &str) -> Result<[f64; 2], String> {
    let b = parse_floats::<2>(s)?;
    if b[0] < b[1] {
        Ok(b)
    } else {
        Err(format!("box needs a < b, got {},{}", b[0], b[1]))
    }
}

/// What a command produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String, passed: bool) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: if passed { EXIT_OK } else { EXIT_IDENTITY },
        }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_INPUT,
        }
    }
}

/// Parses `args` (including the program name) and runs the command. `tol_env`
/// is the value of [`tolerances::TOL_ENV`], if set.
pub fn run<I, T>(args: I, tol_env: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    stdout: text,
                    ..Default::default()
                }
            } else {
                Outcome {
                    stderr: text,
                    code,
                    ..Default::default()
                }
            };
        }
    };
    let env = match tol_env.map(tolerances::parse_override).transpose() {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(format!("{}: {e}", tolerances::TOL_ENV)),
    };
    match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, env),
        Command::Verify(a) => cmd_verify(&a, env),
        Command::Catenoid(a) => cmd_catenoid(&a, env),
        Command::Basis(a) => cmd_basis(&a, env),
    }
}

fn env_tolerances(env: Option<(f64, f64)>) -> ClassifyTolerances {
    match env {
        Some((first, curv)) => ClassifyTolerances { first, curv },
        None => ClassifyTolerances::default(),
    }
}

/// Loads a manifest; tolerances set in the manifest win over the environment,
/// which wins over the built-in defaults.
fn load_manifest(
    path: &Path,
    env: Option<(f64, f64)>,
) -> Result<(Manifest, ClassifyTolerances), Outcome> {
    let mut m = Manifest::load(path).map_err(Outcome::input_error)?;
    let from_env = env_tolerances(env);
    let explicit = m.text.options.clone().unwrap_or_default();
    m.options.tol_first = explicit.tol_first.unwrap_or(from_env.first);
    m.options.tol_curv = explicit.tol_curv.unwrap_or(from_env.curv);
    let tol = m.tolerances();
    Ok((m, tol))
}

fn point_reports(
    m: &Manifest,
    x: Option<Vec3>,
    tol: ClassifyTolerances,
) -> crate::Result<Vec<PointReport>> {
    m.points
        .par_iter()
        .map(|p| {
            let a = analyze_point(&m.spec, *p, tol)?;
            let q = x.map(|x| QBasisReport::from_analysis(&a, &x)).transpose()?;
            Ok(PointReport::new(a, q, tol))
        })
        .collect()
}

fn json<T: Serialize>(v: &T) -> Result<String, Outcome> {
    to_json(v).map_err(|e| Outcome::input_error(format!("cannot serialize report: {e}")))
}

pub fn cmd_analyze(args: &AnalyzeArgs, env: Option<(f64, f64)>) -> Outcome {
    let (m, tol) = match load_manifest(&args.manifest, env) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let points = match point_reports(&m, args.x.or(m.basis), tol) {
        Ok(p) => p,
        Err(e) => return Outcome::input_error(e),
    };
    let doc = ReportDocument::new(m.text.clone(), m.options.clone(), points);
    let text = match json(&doc) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let mut out = Outcome::ok(String::new(), doc.passed);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return Outcome::input_error(format!("cannot write {}: {e}", path.display()));
            }
        }
        None => out.stdout = text,
    }
    out.stderr = failure_lines(&doc.points);
    out
}

fn failure_lines(points: &[PointReport]) -> String {
    let mut s = String::new();
    for p in points {
        for f in &p.failures {
            writeln!(
                s,
                "identity failed at {:?}: {} residual {:.3e} > tol {:.1e}",
                p.point, f.name, f.residual, f.tol
            )
            .unwrap();
        }
    }
    s
}

pub fn cmd_verify(args: &VerifyArgs, env: Option<(f64, f64)>) -> Outcome {
    let summary = verify::run(
        args.seed,
        args.count as usize,
        args.sample_box,
        env_tolerances(env),
    );
    let text = if args.json {
        match json(&summary) {
            Ok(t) => t,
            Err(o) => return o,
        }
    } else {
        summary.render()
    };
    Outcome::ok(text, summary.passed())
}

/// Fixed-width text table of one catenoid report.
pub fn render_catenoid(r: &CatenoidReport) -> String {
    let mut s = String::new();
    writeln!(s, "catenoid at u = {}, v = {}, w = {}", r.u, r.v, r.w).unwrap();
    writeln!(
        s,
        "{:<12} {:>20} {:<36} {:>20} {:>10}  ",
        "quantity", "computed", "formula", "formula value", "|diff|"
    )
    .unwrap();
    for row in &r.rows {
        writeln!(
            s,
            "{:<12} {:>20.12e} {:<36} {:>20.12e} {:>10.2e}  {}",
            row.name,
            row.computed,
            row.formula,
            row.formula_value,
            row.diff,
            if row.pass { "ok" } else { "MISMATCH" }
        )
        .unwrap();
    }
    let t = &r.theta_discrepancy;
    writeln!(
        s,
        "theta(e1): computed {:.12e} ({}), printed {} = {:.12e}",
        t.computed, t.computed_formula, t.printed_formula, t.printed
    )
    .unwrap();
    writeln!(
        s,
        "  W1 residual with computed theta {:.2e}, with printed theta {:.2e}",
        t.w1_residual_computed, t.w1_residual_printed
    )
    .unwrap();
    writeln!(s, "  note: {}", t.note).unwrap();
    let c = &r.commutators;
    writeln!(
        s,
        "commutators: [e1,e2] = {:.12e} e2, [e1,e3] = {:.12e} e3, [e2,e3] = {:.1e} e3, residual {:.2e}",
        c.c12, c.c13, c.c23, c.residual
    )
    .unwrap();
    writeln!(
        s,
        "W1 residual {:.2e}, con-AE residual {:.2e}, con-AE coefficients ({:.2e}, {:.2e}), max|rho~ - rho| {:.2e}",
        r.w1_residual, r.con_ae_residual, r.con_ae_coefficients.0, r.con_ae_coefficients.1, r.rho_tilde_minus_rho
    )
    .unwrap();
    writeln!(s, "classification: {}", r.einstein).unwrap();
    s
}

fn catenoid_passed(r: &CatenoidReport, tol: ClassifyTolerances) -> bool {
    r.all_rows_pass()
        && r.w1_residual < tol.first
        && r.con_ae_residual < tol.first
        && r.commutators.residual < tolerances::SECOND_DERIVATIVE
        && r.einstein.is_generic()
}

pub fn cmd_catenoid(args: &CatenoidArgs, env: Option<(f64, f64)>) -> Outcome {
    let tol = env_tolerances(env);
    if args.u.contains(&0.0) {
        return Outcome::input_error(
            "catenoid parameter u must be non-zero (B = u^2 degenerates at u = 0)",
        );
    }
    let reports: Result<Vec<CatenoidReport>, _> = args
        .u
        .iter()
        .map(|&u| golden_report(u, args.v, args.w, tol))
        .collect();
    let reports = match reports {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(e),
    };
    let passed = reports.iter().all(|r| catenoid_passed(r, tol));
    let mut stdout = if args.json {
        match json(&reports) {
            Ok(t) => t,
            Err(o) => return o,
        }
    } else {
        reports
            .iter()
            .map(render_catenoid)
            .collect::<Vec<_>>()
            .join("\n")
    };
    if let Some(n) = args.emit_slices {
        for (which, name) in [(Slice::S1, "s1.csv"), (Slice::S2, "s2.csv")] {
            let path = args.out_dir.join(name);
            let written = std::fs::File::create(&path)
                .map(std::io::BufWriter::new)
                .and_then(|f| write_slice_csv(f, &slice_samples(which, n as usize)));
            if let Err(e) = written {
                return Outcome::input_error(format!("cannot write {}: {e}", path.display()));
            }
            if !args.json {
                writeln!(stdout, "wrote {} ({} points)", path.display(), n * n).unwrap();
            }
        }
    }
    Outcome::ok(stdout, passed)
}

pub fn cmd_basis(args: &BasisArgs, env: Option<(f64, f64)>) -> Outcome {
    let (m, tol) = match load_manifest(&args.manifest, env) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let Some(x) = args.x.or(m.basis) else {
        return Outcome::input_error(
            "no vector given: pass --x a,b,c or set [basis] x in the manifest",
        );
    };
    let reports = match point_reports(&m, Some(x), tol) {
        Ok(p) => p,
        Err(e) => return Outcome::input_error(e),
    };
    let passed = reports.iter().all(|p| p.failures.is_empty());
    let stderr = failure_lines(&reports);
    let q: Vec<BasisEntry> = reports
        .into_iter()
        .map(|p| BasisEntry {
            point: p.point,
            qbasis: p.qbasis.expect("requested"),
        })
        .collect();
    match json(&q) {
        Ok(t) => Outcome {
            stderr,
            ..Outcome::ok(t, passed)
        },
        Err(o) => o,
    }
}

#[derive(Serialize)]
struct BasisEntry {
    point: Vec3,
    qbasis: QBasisReport,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_rejects_zero_count() {
        let o = run(["qmanifold", "verify", "--count", "0"], None);
        assert_eq!(o.code, EXIT_INPUT);
    }

    #[test]
    fn catenoid_rejects_zero() {
        let o = run(["qmanifold", "catenoid", "--u", "0"], None);
        assert_eq!(o.code, EXIT_INPUT);
        assert!(o.stderr.contains("non-zero"));
    }

    #[test]
    fn bad_env() {
        let o = run(["qmanifold", "catenoid"], Some("nope"));
        assert_eq!(o.code, EXIT_INPUT);
        assert!(o.stderr.contains(tolerances::TOL_ENV));
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vec3("1,-2, 3.5"), Ok([1.0, -2.0, 3.5]));
        assert!(parse_vec3("1,2").is_err());
        assert!(parse_box("2,1").is_err());
    }
}
