//! Command-line front end: argument types, symbol resolution and the five
//! subcommands. Commands return their output as text so the binary only has
//! to route it to a file or stdout.

pub mod expr;
pub mod report;
pub mod verify;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::koenigs::{self, PowerMembership, SelfMap};
use crate::maps::{ppf_map, FixedPointInfo, PPFParams, DEFAULT_BOUNDARY_SAMPLES, SELF_MAP_TOL};
use crate::operator::{
    build_matrix, classify, default_grid, ladder_distances, spectrum, OperatorMatrix, Tolerances,
};
use crate::series::TruncatedSeries;
use crate::space::WeightSequence;
use expr::Expr;
use report::{cx_vec, fmt_f64, to_json, Csv, Cx};

pub const DEFAULT_TRUNC: usize = 32;
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const SCHEMA: &str = "wco-report/1";
const LADDER_POWERS: usize = 4;
const MEMBERSHIP_POWERS: u32 = 4;
const DECAY_ROWS: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "wco",
    version,
    about = "Weighted composition operators on weighted Hardy spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the truncated operator matrix as CSV (row, col, re, im).
    Matrix(MatrixArgs),
    /// Symmetry, hermitian and normality report as JSON.
    Check(CheckArgs),
    /// Eigenvalues of the truncated matrix as CSV.
    Spectrum(SpectrumArgs),
    /// Koenigs eigenfunction at the interior fixed point, as JSON.
    Koenigs(KoenigsArgs),
    /// Run the registered verification checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SymbolArgs {
    /// Kernel exponent of the space, (1 - conj(w) z)^(-kappa); 1 is the Hardy space.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub kappa: f64,
    /// Truncation size (default 32).
    #[arg(long)]
    pub trunc: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub a0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Series symbol phi as an expression in z.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Series symbol psi as an expression in z (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub symbols: SymbolArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub symbols: SymbolArgs,
    /// Tolerance for the exact identities.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Points per axis of the normality grid.
    #[arg(long, default_value_t = 5)]
    pub grid: usize,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub symbols: SymbolArgs,
    /// Append distances from the eigenvalue ladder psi(w0) phi'(w0)^n.
    #[arg(long)]
    pub ladder: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct KoenigsArgs {
    #[command(flatten)]
    pub symbols: SymbolArgs,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Only run checks whose id contains this substring.
    #[arg(long)]
    pub filter: Option<String>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Expression(_)
            | Error::InvalidKappa(_)
            | Error::NotSelfMap(_)
            | Error::ParameterOutsideDisk(_)
            | Error::PoleInsideDisk
            | Error::InnerConstantTooLarge(_)
            | Error::DegenerateMap(_)
            | Error::GridDegenerate(_)
            | Error::GridOutsideDomain
            | Error::MatrixTooLarge(_) => CliError::Usage(msg),
            _ => CliError::Numerical(msg),
        }
    }
}

/// Text produced by a command, the file it should go to, and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub body: String,
    pub path: Option<PathBuf>,
    pub code: u8,
    pub summary: Option<String>,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Matrix(a) => Ok(Outcome {
            body: cmd_matrix(a)?,
            path: a.csv.clone(),
            code: 0,
            summary: None,
        }),
        Command::Check(a) => Ok(Outcome {
            body: cmd_check(a)?,
            path: a.json.clone(),
            code: 0,
            summary: None,
        }),
        Command::Spectrum(a) => Ok(Outcome {
            body: cmd_spectrum(a)?,
            path: a.csv.clone(),
            code: 0,
            summary: None,
        }),
        Command::Koenigs(a) => Ok(Outcome {
            body: cmd_koenigs(a)?,
            path: a.json.clone(),
            code: 0,
            summary: None,
        }),
        Command::Verify(a) => {
            let report = verify::run_suite(a.seed.unwrap_or(DEFAULT_SEED), a.filter.as_deref());
            let failed: Vec<&str> = report
                .records
                .iter()
                .filter(|r| !r.pass)
                .map(|r| r.test_id.as_str())
                .collect();
            let mut summary = format!(
                "verify: {}/{} checks passed",
                report.records.len() - failed.len(),
                report.records.len()
            );
            if !failed.is_empty() {
                summary.push_str(&format!("; failed: {}", failed.join(", ")));
            }
            Ok(Outcome {
                body: to_json(&report),
                path: a.json.clone(),
                code: if report.all_pass { 0 } else { 3 },
                summary: Some(summary),
            })
        }
    }
}

/// The symbol pair after parsing the command line.
#[derive(Debug, Clone)]
pub enum Symbols {
    Ppf(PPFParams),
    Series {
        phi: Expr,
        psi: Expr,
        phi_src: String,
        psi_src: String,
    },
}

#[derive(Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
enum SymbolsJson {
    Ppf { a0: Cx, a1: Cx, b: Cx, kappa: f64 },
    Series { phi: String, psi: String },
}

impl Symbols {
    pub fn resolve(args: &SymbolArgs) -> Result<Self, CliError> {
        let ppf_given = args.a0.is_some() || args.a1.is_some() || args.b.is_some();
        let series_given = args.phi.is_some() || args.psi.is_some();
        match (ppf_given, series_given) {
            (true, true) => Err(CliError::Usage(
                "give either --a0/--a1/--b or --phi/--psi, not both".into(),
            )),
            (false, false) => Err(CliError::Usage(
                "no symbols: give --a0/--a1/--b or --phi/--psi".into(),
            )),
            (true, false) => {
                let parse = |v: &Option<String>, default: f64| -> Result<Complex64, CliError> {
                    match v {
                        Some(s) => Ok(expr::parse_complex(s)?),
                        None => Ok(Complex64::new(default, 0.0)),
                    }
                };
                let a1 = match &args.a1 {
                    Some(s) => expr::parse_complex(s)?,
                    None => return Err(CliError::Usage("PPF symbols need --a1".into())),
                };
                Ok(Symbols::Ppf(PPFParams::new(
                    parse(&args.a0, 0.0)?,
                    a1,
                    parse(&args.b, 1.0)?,
                    args.kappa,
                )?))
            }
            (false, true) => {
                let phi_src = args
                    .phi
                    .clone()
                    .ok_or_else(|| CliError::Usage("--psi needs --phi".into()))?;
                let psi_src = args.psi.clone().unwrap_or_else(|| "1".into());
                let phi = Expr::parse(&phi_src)?;
                let psi = Expr::parse(&psi_src)?;
                let worst = boundary_sup(&phi);
                if worst.is_nan() || worst > 1.0 + SELF_MAP_TOL {
                    return Err(Error::NotSelfMap(worst).into());
                }
                Ok(Symbols::Series {
                    phi,
                    psi,
                    phi_src,
                    psi_src,
                })
            }
        }
    }

    pub fn series(&self, degree: usize) -> Result<(TruncatedSeries, TruncatedSeries), CliError> {
        Ok(match self {
            Symbols::Ppf(p) => (p.phi_series(degree), p.psi_series(degree)),
            Symbols::Series { phi, psi, .. } => (phi.to_series(degree)?, psi.to_series(degree)?),
        })
    }

    pub fn psi_at(&self, z: Complex64) -> Complex64 {
        match self {
            Symbols::Ppf(p) => p.psi(z),
            Symbols::Series { psi, .. } => psi.evaluate(z),
        }
    }

    fn describe(&self) -> String {
        match self {
            Symbols::Ppf(p) => format!(
                "ppf a0={} a1={} b={} kappa={}",
                fmt_cx(p.a0),
                fmt_cx(p.a1),
                fmt_cx(p.b),
                p.kappa
            ),
            Symbols::Series {
                phi_src, psi_src, ..
            } => format!("phi={phi_src} psi={psi_src}"),
        }
    }

    fn to_json(&self) -> SymbolsJson {
        match self {
            Symbols::Ppf(p) => SymbolsJson::Ppf {
                a0: Cx(p.a0),
                a1: Cx(p.a1),
                b: Cx(p.b),
                kappa: p.kappa,
            },
            Symbols::Series {
                phi_src, psi_src, ..
            } => SymbolsJson::Series {
                phi: phi_src.clone(),
                psi: psi_src.clone(),
            },
        }
    }
}

fn fmt_cx(z: Complex64) -> String {
    format!("{}{:+}i", z.re + 0.0, z.im + 0.0)
}

/// Largest `|φ|` over the unit circle, evaluated from the expression itself.
fn boundary_sup(phi: &Expr) -> f64 {
    let n = DEFAULT_BOUNDARY_SAMPLES;
    (0..n)
        .map(|k| {
            phi.evaluate(Complex64::from_polar(
                1.0,
                std::f64::consts::TAU * k as f64 / n as f64,
            ))
            .norm()
        })
        .fold(0.0, |acc: f64, v| {
            if v.is_nan() {
                f64::INFINITY
            } else {
                acc.max(v)
            }
        })
}

struct Setup {
    n: usize,
    defaulted: bool,
    weights: WeightSequence,
    symbols: Symbols,
}

/// `extra` is the number of series degrees needed beyond `n - 1`.
fn setup(args: &SymbolArgs, extra: usize) -> Result<Setup, CliError> {
    let n = args.trunc.unwrap_or(DEFAULT_TRUNC);
    if n == 0 {
        return Err(CliError::Usage("--trunc must be positive".into()));
    }
    let weights = WeightSequence::beta_kappa(args.kappa, n - 1 + extra)?;
    let symbols = Symbols::resolve(args)?;
    Ok(Setup {
        n,
        defaulted: args.trunc.is_none(),
        weights,
        symbols,
    })
}

fn header_lines(command: &str, s: &Setup) -> String {
    let trunc_note = if s.defaulted { " (default)" } else { "" };
    format!(
        "wco {command} schema={SCHEMA}\ntrunc={}{trunc_note} space={}\nsymbols: {}",
        s.n,
        s.weights.label(),
        s.symbols.describe()
    )
}

fn matrix_of(s: &Setup) -> Result<OperatorMatrix, CliError> {
    let (phi, psi) = s.symbols.series(s.n - 1)?;
    Ok(build_matrix(&phi, &psi, &s.weights, s.n)?)
}

pub fn cmd_matrix(args: &MatrixArgs) -> Result<String, CliError> {
    let s = setup(&args.symbols, 0)?;
    let m = matrix_of(&s)?;
    let mut csv = Csv::new();
    csv.comment(&header_lines("matrix", &s));
    csv.comment("M[row][col] = [z^row](psi phi^col) beta(row)/beta(col), row-major");
    csv.header(&["row", "col", "re", "im"]);
    for row in 0..m.dim() {
        for col in 0..m.dim() {
            let v = m.get(row, col);
            csv.row([
                row.to_string(),
                col.to_string(),
                fmt_f64(v.re),
                fmt_f64(v.im),
            ]);
        }
    }
    Ok(csv.finish())
}

#[derive(Serialize)]
struct PpfFitJson {
    a0: Cx,
    a1: Cx,
    b: Cx,
    kappa: f64,
    residual: f64,
    recognized: bool,
}

#[derive(Serialize)]
struct VerdictsJson {
    #[serde(rename = "complex_symmetric_standard_J")]
    complex_symmetric_standard_j: bool,
    hermitian: bool,
    normal: bool,
}

#[derive(Serialize)]
struct CheckJson {
    schema: &'static str,
    command: &'static str,
    trunc: usize,
    trunc_defaulted: bool,
    space: String,
    kappa: f64,
    symbols: SymbolsJson,
    max_entry: f64,
    transpose_sym_residual: f64,
    hermitian_residual: f64,
    normality_residual: f64,
    normality_method: &'static str,
    commutator_block_residual: f64,
    grid_points_per_axis: usize,
    ppf_fit: PpfFitJson,
    tolerances: Tolerances,
    verdicts: VerdictsJson,
}

pub fn cmd_check(args: &CheckArgs) -> Result<String, CliError> {
    let s = setup(&args.symbols, 0)?;
    let m = matrix_of(&s)?;
    let mut tol = Tolerances::default();
    if let Some(t) = args.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
        tol.exact = t;
    }
    let r = classify(&m, args.symbols.kappa, &default_grid(args.grid), tol)?;
    let out = CheckJson {
        schema: SCHEMA,
        command: "check",
        trunc: s.n,
        trunc_defaulted: s.defaulted,
        space: s.weights.label().to_string(),
        kappa: args.symbols.kappa,
        symbols: s.symbols.to_json(),
        max_entry: r.max_entry,
        transpose_sym_residual: r.transpose_sym_residual,
        hermitian_residual: r.hermitian_residual,
        normality_residual: r.normality_residual,
        normality_method: r.normality_method,
        commutator_block_residual: r.commutator_block_residual,
        grid_points_per_axis: args.grid,
        ppf_fit: PpfFitJson {
            a0: Cx(r.ppf_fit.a0),
            a1: Cx(r.ppf_fit.a1),
            b: Cx(r.ppf_fit.b),
            kappa: r.ppf_fit.kappa,
            residual: r.ppf_fit.residual,
            recognized: r.ppf.is_some(),
        },
        tolerances: r.tolerances,
        verdicts: VerdictsJson {
            complex_symmetric_standard_j: r.verdicts.complex_symmetric_standard_j,
            hermitian: r.verdicts.hermitian,
            normal: r.verdicts.normal,
        },
    };
    Ok(to_json(&out))
}

fn fixed_point(symbols: &Symbols, phi_series: &TruncatedSeries) -> Result<FixedPointInfo, Error> {
    match symbols {
        Symbols::Ppf(p) => ppf_map(p)?.fixed_point_in_disk(),
        Symbols::Series { .. } => koenigs::fixed_point_of_series(phi_series),
    }
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<String, CliError> {
    let s = setup(&args.symbols, 0)?;
    let m = matrix_of(&s)?;
    let eig = spectrum(&m)?;
    let mut csv = Csv::new();
    csv.comment(&header_lines("spectrum", &s));
    csv.comment(
        "eigenvalues of the truncated matrix, by decreasing modulus;\n\
         they approximate the operator spectrum only as trunc grows",
    );
    csv.header(&["index", "re", "im", "modulus"]);
    for (k, e) in eig.iter().enumerate() {
        csv.row([
            k.to_string(),
            fmt_f64(e.re),
            fmt_f64(e.im),
            fmt_f64(e.norm()),
        ]);
    }
    if args.ladder {
        match fixed_point(&s.symbols, m.phi()) {
            Ok(fp) if fp.interior => {
                let psi_w0 = s.symbols.psi_at(fp.w0);
                let d = ladder_distances(&eig, &fp, psi_w0, LADDER_POWERS);
                csv.comment(&format!(
                    "ladder: w0={} phi'(w0)={} psi(w0)={}",
                    fmt_cx(fp.w0),
                    fmt_cx(fp.derivative_at_w0),
                    fmt_cx(psi_w0)
                ));
                csv.header(&["n", "target_re", "target_im", "distance"]);
                let mut target = psi_w0;
                for (n, dist) in d.iter().enumerate() {
                    csv.row([
                        n.to_string(),
                        fmt_f64(target.re),
                        fmt_f64(target.im),
                        fmt_f64(*dist),
                    ]);
                    target *= fp.derivative_at_w0;
                }
            }
            Ok(fp) => {
                csv.comment(&format!(
                    "ladder: no interior fixed point (boundary point {})",
                    fmt_cx(fp.w0)
                ));
            }
            Err(e) => {
                csv.comment(&format!("ladder: {e}"));
            }
        }
    }
    Ok(csv.finish())
}

#[derive(Serialize)]
struct ObstructionJson {
    status: &'static str,
    /// |K^(1)(w0)| / (||K|| ||K^(1)||), always reported.
    obstruction_value: f64,
    lhs: Option<f64>,
    residual: Option<f64>,
    reason: Option<String>,
}

#[derive(Serialize)]
struct DecayJson {
    rigorous: bool,
    note: &'static str,
    eigenvalue_moduli: Vec<f64>,
    lambda_power_moduli: Vec<f64>,
}

#[derive(Serialize)]
struct KoenigsJson {
    schema: &'static str,
    command: &'static str,
    trunc: usize,
    trunc_defaulted: bool,
    space: String,
    kappa: f64,
    symbols: SymbolsJson,
    w0: Cx,
    lambda: Cx,
    iterations: usize,
    orbit_length: u64,
    schroeder_residual: f64,
    koenigs_recentered: Vec<Cx>,
    koenigs: Vec<Cx>,
    membership: Vec<PowerMembership>,
    obstruction: ObstructionJson,
    eigenvalue_decay: DecayJson,
}

pub fn cmd_koenigs(args: &KoenigsArgs) -> Result<String, CliError> {
    // Series are carried through degree `trunc`.
    let s = setup(&args.symbols, 1)?;
    let degree = s.n;
    let (phi_series, _) = s.symbols.series(degree)?;
    let (map, fp) = match &s.symbols {
        Symbols::Ppf(p) => {
            let m = ppf_map(p)?;
            let fp = m.fixed_point_in_disk()?;
            (SelfMap::Mobius(m), fp)
        }
        Symbols::Series { .. } => {
            let fp = koenigs::fixed_point_of_series(&phi_series)?;
            (SelfMap::Series(phi_series.clone()), fp)
        }
    };
    let kr = koenigs::koenigs_iterate(&map, &fp, degree, koenigs::DEFAULT_MAX_ITER)?;
    let membership = koenigs::power_membership_report(&kr, &s.weights, MEMBERSHIP_POWERS);
    let value = koenigs::obstruction_value(kr.w0, &s.weights, degree)?;
    let obstruction = match koenigs::consistency_check(&kr, &s.weights) {
        Ok(c) => ObstructionJson {
            status: "ok",
            obstruction_value: value,
            lhs: Some(c.lhs),
            residual: Some(c.residual),
            reason: None,
        },
        Err(e @ Error::DivergentKoenigsNorm(_)) => ObstructionJson {
            status: "refused",
            obstruction_value: value,
            lhs: None,
            residual: None,
            reason: Some(e.to_string()),
        },
        Err(e) => return Err(e.into()),
    };

    let cphi = build_matrix(&phi_series, &TruncatedSeries::one(degree), &s.weights, s.n)?;
    let moduli: Vec<f64> = spectrum(&cphi)?
        .iter()
        .take(DECAY_ROWS)
        .map(|e| e.norm())
        .collect();
    let lambda_power_moduli = (0..moduli.len())
        .map(|k| kr.lambda.norm().powi(k as i32))
        .collect();

    let out = KoenigsJson {
        schema: SCHEMA,
        command: "koenigs",
        trunc: s.n,
        trunc_defaulted: s.defaulted,
        space: s.weights.label().to_string(),
        kappa: args.symbols.kappa,
        symbols: s.symbols.to_json(),
        w0: Cx(kr.w0),
        lambda: Cx(kr.lambda),
        iterations: kr.iterations,
        orbit_length: kr.orbit_length,
        schroeder_residual: kr.schroeder_residual,
        koenigs_recentered: cx_vec(kr.kappa_series.coeffs()),
        koenigs: cx_vec(kr.kappa_original.coeffs()),
        membership,
        obstruction,
        eigenvalue_decay: DecayJson {
            rigorous: false,
            note: "heuristic: leading eigenvalue moduli of the truncated composition matrix next to |lambda|^k",
            eigenvalue_moduli: moduli,
            lambda_power_moduli,
        },
    };
    Ok(to_json(&out))
}
