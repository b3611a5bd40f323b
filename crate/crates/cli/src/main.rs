//! `gllog`: command line front end for the Gauss-Legendre matrix logarithm.

mod commands;
mod output;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "gllog", version, about = "Principal matrix logarithm by Gauss-Legendre quadrature")]
struct Cli {
    /// Worker threads for the library (default: all cores). Output does not
    /// depend on this setting.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute log(A) and write it with a parameter report.
    Logm(LogmArgs),
    /// Select (s, k) and report the predicted error without computing the log.
    Params(SelectArgs),
    /// Scalar error scan: z, |log(1+z) - z R(z)|, asymptotic bound.
    Bound(BoundArgs),
    /// Boundary of the field of values as CSV.
    Fov(FovArgs),
    /// Resolvent-norm grid and epsilon-pseudospectrum contour as CSV.
    Pseudo(PseudoArgs),
    /// Rational Krylov approximation of log(A) v against a dense reference.
    Krylov(KrylovArgs),
    /// Write a test matrix.
    Gallery(GalleryArgs),
    /// Gauss-Legendre nodes and weights on [-1, 1].
    Nodes(NodesArgs),
    /// Parameter choices and errors for the three classic test matrices.
    Table1(TableArgs),
    /// Parameter choices and errors for parter, hanowa and dorr, beside the
    /// published double exponential figures.
    Table2(TableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Matrix Market array format.
    Mm,
    Csv,
}

/// Which set the error bound is evaluated on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SetMode {
    Fov,
    Pseudo(f64),
    /// Real interval; without bounds, the range of the Hermitian part.
    Interval(Option<(f64, f64)>),
}

fn parse_set_mode(s: &str) -> Result<SetMode, String> {
    let number = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number '{t}' in set mode '{s}'"));
    match s.split(':').collect::<Vec<_>>().as_slice() {
        ["fov"] => Ok(SetMode::Fov),
        ["pseudo", eps] => {
            let eps = number(eps)?;
            if eps > 0.0 && eps.is_finite() {
                Ok(SetMode::Pseudo(eps))
            } else {
                Err(format!("epsilon must be positive, got {eps}"))
            }
        }
        ["interval"] => Ok(SetMode::Interval(None)),
        ["interval", lo, hi] => {
            let (lo, hi) = (number(lo)?, number(hi)?);
            if lo <= hi {
                Ok(SetMode::Interval(Some((lo, hi))))
            } else {
                Err(format!("empty interval [{lo}, {hi}]"))
            }
        }
        _ => Err(format!("expected fov, pseudo:EPS, interval or interval:LO:HI, got '{s}'")),
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected LO,HI, got '{s}'"))?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad number '{a}'"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad number '{b}'"))?;
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(format!("range must satisfy LO < HI, got '{s}'"))
    }
}

fn parse_positive_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got '{s}'")),
    }
}

#[derive(Args, Debug, Clone)]
pub struct SelectArgs {
    /// Input matrix (Matrix Market, or CSV when the name ends in .csv).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-15, value_parser = parse_positive_tol)]
    tol: f64,
    /// Angles used to sample the field of values.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..))]
    fov_angles: u32,
    /// fov | pseudo:EPS | interval | interval:LO:HI
    #[arg(long = "set", default_value = "fov", value_parser = parse_set_mode)]
    set_mode: SetMode,
    /// Real range of the pseudospectrum grid (default: field of values box).
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    re: Option<(f64, f64)>,
    /// Imaginary range of the pseudospectrum grid.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    im: Option<(f64, f64)>,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(2..))]
    nx: u32,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(2..))]
    ny: u32,
    /// Re-estimate the field of values after each square root.
    #[arg(long)]
    recompute: bool,
    #[arg(long, default_value_t = logm_defaults::S_MAX)]
    s_max: u32,
    #[arg(long, default_value_t = logm_defaults::K_MAX, value_parser = clap::value_parser!(u32).range(1..=200))]
    k_max: u32,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

mod logm_defaults {
    pub const S_MAX: u32 = gllog::logm::DEFAULT_S_MAX;
    pub const K_MAX: u32 = gllog::logm::DEFAULT_K_MAX as u32;
}

#[derive(Args, Debug)]
pub struct LogmArgs {
    #[command(flatten)]
    select: SelectArgs,
    /// Use exactly this many square roots (requires --k).
    #[arg(long, requires = "k")]
    s: Option<u32>,
    /// Use exactly this many quadrature nodes (requires --s).
    #[arg(long, requires = "s", value_parser = clap::value_parser!(u32).range(1..=200))]
    k: Option<u32>,
    /// Output matrix file; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Mm)]
    format: Format,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=200))]
    k: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = -0.95)]
    zmin: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 3.0)]
    zmax: f64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    samples: u32,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FovArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..))]
    fov_angles: u32,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PseudoArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Level epsilon of the contour.
    #[arg(long)]
    eps: f64,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    re: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    im: Option<(f64, f64)>,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
    nx: u32,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
    ny: u32,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..))]
    fov_angles: u32,
    /// Contour CSV (component, re, im); standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Grid CSV (re, im, 1/sigma_min).
    #[arg(long, value_name = "FILE")]
    grid_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct KrylovArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Start vector file (n-by-1 matrix).
    #[arg(long, value_name = "FILE", conflicts_with = "ones")]
    vector: Option<PathBuf>,
    /// Use the all-ones start vector.
    #[arg(long)]
    ones: bool,
    /// Seed for the random start vector used when neither --vector nor --ones is given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=200))]
    kmin: u32,
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..=200))]
    kmax: u32,
    /// Tolerance of the dense reference logarithm.
    #[arg(long, default_value_t = 1e-15, value_parser = parse_positive_tol)]
    tol: f64,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..))]
    fov_angles: u32,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GalleryArgs {
    /// forsythe, forsythe_exp, rotation, triw_shift, parter, hanowa_neg, dorr, toeplitz_t
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Family parameters, comma separated (forsythe: alpha,lambda; rotation: theta; dorr: theta).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    param: Vec<f64>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Mm)]
    format: Format,
}

#[derive(Args, Debug)]
pub struct NodesArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=200))]
    k: u32,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, default_value_t = 1e-15, value_parser = parse_positive_tol)]
    tol: f64,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..))]
    fov_angles: u32,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> gllog::Result<()> {
    match cli.command {
        Command::Logm(a) => commands::logm(&a),
        Command::Params(a) => commands::params(&a),
        Command::Bound(a) => commands::bound(&a),
        Command::Fov(a) => commands::fov(&a),
        Command::Pseudo(a) => commands::pseudo(&a),
        Command::Krylov(a) => commands::krylov(&a),
        Command::Gallery(a) => commands::gallery(&a),
        Command::Nodes(a) => commands::nodes(&a),
        Command::Table1(a) => tables::table1(&a),
        Command::Table2(a) => tables::table2(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.into()).build_global() {
            eprintln!("InvalidParams: cannot configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}: {e}", e.class());
            ExitCode::from(1)
        }
    }
}
