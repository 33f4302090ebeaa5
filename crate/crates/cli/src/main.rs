//! `ccr`: command-line runs of the ccr-core workbench.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 configuration error, 3 identity-suite
//! failure, 4 numeric precondition failure. `CCR_THREADS` sets the worker count.

mod config;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ccr_core::algebra::{AlgebraElement, GroupPoint};
use ccr_core::grid::{GridModel, PotentialSpec, TruncatedLattice};
use ccr_core::linalg::{eig_hermitian, CMatrix};
use ccr_core::rep::{write_matrix_csv, MatrixRep};
use ccr_core::spectra::{self, band_spectrum, butterfly, measure_trend};
use ccr_core::verify::{run_all, VerifyOptions};
use ccr_core::witness::{extension_gap_report, write_witness_csv};
use ccr_core::{sample, Theta};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use config::{ConfigError, ConfigFile};

pub const THREADS_VAR: &str = "CCR_THREADS";
const MAX_OSCILLATOR_DIM: usize = 8192;
const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Error)]
enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric precondition failed: {0}")]
    Numeric(#[from] ccr_core::Error),
    #[error("identity suite failed: first failure `{0}`")]
    Suite(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Suite(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "ccr", version, about = "Discretized CCR workbench: identity suites, band spectra, oscillator levels")]
struct Cli {
    /// Flat `key = value` run file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for output files (created if missing). Default: current directory.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every identity suite and write verify_report.json.
    Verify(VerifyArgs),
    /// Band spectrum at one flux p/q: bands.csv and measures.csv.
    Spectrum(SpectrumArgs),
    /// Bands for all reduced p/q with q <= q_max: butterfly.csv and butterfly_measures.csv.
    Butterfly(ButterflyArgs),
    /// Spectrum measures along golden-mean approximants: trend.csv.
    Trend(TrendArgs),
    /// Eigenvalues of the discretized Hamiltonian: eigenvalues.csv.
    Oscillator(OscillatorArgs),
    /// Chebyshev witness table: witness.csv.
    Witness(WitnessArgs),
    /// Export one representation matrix: matrix.csv.
    Matrix(MatrixArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Negative control: flips the sign convention of ω on the expected side.
    #[arg(long, hide = true)]
    corrupt_omega_sign: bool,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    p: Option<i64>,
    #[arg(long)]
    q: Option<i64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    n_phase: Option<usize>,
}

#[derive(Debug, Args)]
struct ButterflyArgs {
    #[arg(long)]
    q_max: Option<i64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    n_phase: Option<usize>,
}

#[derive(Debug, Args)]
struct TrendArgs {
    #[arg(long)]
    c: Option<f64>,
    /// Comma-separated denominators, e.g. 5,8,13,21,34.
    #[arg(long)]
    q_list: Option<String>,
}

#[derive(Debug, Args)]
struct OscillatorArgs {
    /// `periodic` (exact Weyl grid) or `truncated` (Dirichlet lattice for continuum limits).
    #[arg(long)]
    mode: Option<String>,
    /// Grid points (periodic) or largest allowed site count (truncated).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m_steps: Option<i64>,
    #[arg(long)]
    k: Option<i64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Half width L of the truncated lattice.
    #[arg(long)]
    l: Option<f64>,
    /// `harmonic:C`, `quartic:A,B`, `constant:V0` or `table:PATH` (lines `x,v`).
    #[arg(long)]
    potential: Option<String>,
    /// Number of lowest eigenvalues to write. Default: all.
    #[arg(long)]
    count: Option<usize>,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Debug, Args)]
struct MatrixArgs {
    #[arg(long)]
    p: Option<i64>,
    #[arg(long)]
    q: Option<i64>,
    #[arg(long)]
    phi1: Option<f64>,
    #[arg(long)]
    phi2: Option<f64>,
    /// `u`, `v`, `weyl:M,N`, `d:M,N`, `parity`, or `element` (with --element).
    #[arg(long)]
    which: Option<String>,
    /// JSON algebra element to represent.
    #[arg(long)]
    element: Option<PathBuf>,
}

struct Run {
    cfg: ConfigFile,
    out: PathBuf,
    seed: u64,
}

impl Run {
    fn create(&self, name: &str) -> CliResult<(PathBuf, BufWriter<File>)> {
        fs::create_dir_all(&self.out)?;
        let path = self.out.join(name);
        let file = File::create(&path)?;
        Ok((path, BufWriter::new(file)))
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot start thread pool: {e}")))
}

fn parse_pair(text: &str, what: &str) -> CliResult<(i64, i64)> {
    let bad = || CliError::Config(format!("{what}: expected `M,N`, got `{text}`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_potential(text: &str) -> CliResult<PotentialSpec> {
    let bad = |msg: &str| CliError::Config(format!("potential `{text}`: {msg}"));
    let (kind, args) = text.split_once(':').ok_or_else(|| bad("expected KIND:ARGS"))?;
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let potential = match kind.trim() {
        "harmonic" => PotentialSpec::harmonic(number(args)?)?,
        "constant" => PotentialSpec::constant(number(args)?)?,
        "quartic" => {
            let (a, b) = args.split_once(',').ok_or_else(|| bad("expected quartic:A,B"))?;
            PotentialSpec::quartic(number(a)?, number(b)?)?
        }
        "table" => {
            let table = fs::read_to_string(args.trim()).map_err(|e| bad(&e.to_string()))?;
            let (mut xs, mut vs) = (Vec::new(), Vec::new());
            for (i, line) in table.lines().map(str::trim).enumerate() {
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let row = line.split_once(',').and_then(|(x, v)| Some((x.trim().parse().ok()?, v.trim().parse().ok()?)));
                match row {
                    Some((x, v)) => {
                        xs.push(x);
                        vs.push(v);
                    }
                    // a header line is allowed before the data
                    None if i == 0 => {}
                    None => return Err(bad(&format!("line {}: expected `x,v`", i + 1))),
                }
            }
            PotentialSpec::tabulated(xs, vs)?
        }
        other => return Err(bad(&format!("unknown kind `{other}`"))),
    };
    Ok(potential)
}

#[derive(Serialize)]
struct SampleElements {
    f: AlgebraElement,
    g: AlgebraElement,
    f_star_g: AlgebraElement,
}

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: ccr_core::verify::VerifyReport,
    sample: SampleElements,
}

fn run_verify(run: &Run, args: &VerifyArgs) -> CliResult<()> {
    let report = run_all(VerifyOptions { seed: run.seed, corrupt_omega_sign: args.corrupt_omega_sign })?;
    let theta = Theta::rational(13, 34)?;
    let mut rng = sample::rng(run.seed);
    let f = sample::random_element(&mut rng, theta, 4, 3);
    let g = sample::random_element(&mut rng, theta, 4, 3);
    let f_star_g = f.convolve(&g)?;
    let output = VerifyOutput { report, sample: SampleElements { f, g, f_star_g } };

    let (path, mut w) = run.create("verify_report.json")?;
    serde_json::to_writer_pretty(&mut w, &output).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    for c in &output.report.checks {
        println!(
            "{:<28} {}  max deviation {:.3e} (tolerance {:.0e})",
            c.name,
            if c.passed { "ok  " } else { "FAIL" },
            c.max_deviation,
            c.tolerance
        );
    }
    println!("wrote {}", path.display());
    match &output.report.first_failure {
        Some(name) => Err(CliError::Suite(name.clone())),
        None => Ok(()),
    }
}

fn run_spectrum(run: &Run, args: &SpectrumArgs) -> CliResult<()> {
    let p = run.cfg.resolve(args.p, "p", None)?;
    let q = run.cfg.resolve(args.q, "q", None)?;
    let c = run.cfg.resolve(args.c, "c", Some(1.0))?;
    let n_phase = run.cfg.resolve(args.n_phase, "n_phase", Some(spectra::DEFAULT_PHASES))?;
    let s = band_spectrum(p, q, c, n_phase)?;
    let (bands, mut w) = run.create("bands.csv")?;
    spectra::write_bands_csv(&mut w, std::slice::from_ref(&s))?;
    w.flush()?;
    let (measures, mut w) = run.create("measures.csv")?;
    spectra::write_measures_csv(&mut w, std::slice::from_ref(&s))?;
    w.flush()?;
    println!("p/q = {p}/{q}, c = {c}: {} bands, measure {}", s.bands.len(), s.measure);
    println!("wrote {} and {}", bands.display(), measures.display());
    Ok(())
}

fn run_butterfly(run: &Run, args: &ButterflyArgs) -> CliResult<()> {
    let q_max = run.cfg.resolve(args.q_max, "q_max", None)?;
    let c = run.cfg.resolve(args.c, "c", Some(1.0))?;
    let n_phase = run.cfg.resolve(args.n_phase, "n_phase", Some(spectra::DEFAULT_PHASES))?;
    let all = butterfly(q_max, c, n_phase)?;
    let (bands, mut w) = run.create("butterfly.csv")?;
    spectra::write_bands_csv(&mut w, &all)?;
    w.flush()?;
    let (measures, mut w) = run.create("butterfly_measures.csv")?;
    spectra::write_measures_csv(&mut w, &all)?;
    w.flush()?;
    println!("{} spectra up to q = {q_max}", all.len());
    println!("wrote {} and {}", bands.display(), measures.display());
    Ok(())
}

fn run_trend(run: &Run, args: &TrendArgs) -> CliResult<()> {
    let c = run.cfg.resolve(args.c, "c", Some(1.0))?;
    let raw: String = run.cfg.resolve(args.q_list.clone(), "q_list", Some("5,8,13,21,34,55,89".into()))?;
    let q_list = raw
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Config(format!("q_list: expected comma-separated integers, got `{raw}`")))?;
    let trend = measure_trend(c, &q_list)?;
    let (path, mut w) = run.create("trend.csv")?;
    writeln!(w, "p,q,c,measure")?;
    for pt in &trend.points {
        writeln!(w, "{},{},{},{}", pt.p, pt.q, c, pt.measure)?;
    }
    w.flush()?;
    println!("monotone decreasing: {}", trend.monotone_decreasing);
    println!("wrote {}", path.display());
    Ok(())
}

fn run_oscillator(run: &Run, args: &OscillatorArgs) -> CliResult<()> {
    let mode: String = run.cfg.resolve(args.mode.clone(), "mode", Some("periodic".into()))?;
    let potential_text: String = run.cfg.resolve(args.potential.clone(), "potential", Some("harmonic:1".into()))?;
    let potential = parse_potential(&potential_text)?;
    let count: Option<usize> = match args.count {
        Some(c) => Some(c),
        None => run.cfg.get("count")?,
    };
    let h = match mode.as_str() {
        "periodic" => {
            let n = run.cfg.resolve(args.n, "n", None)?;
            let m_steps = run.cfg.resolve(args.m_steps, "m_steps", Some(1))?;
            let k = run.cfg.resolve(args.k, "k", Some(1))?;
            if n > MAX_OSCILLATOR_DIM {
                return Err(ccr_core::Error::DimensionTooLarge { dim: n, limit: MAX_OSCILLATOR_DIM }.into());
            }
            let grid = GridModel::build(n, m_steps, k)?;
            println!("periodic grid: N = {n}, tau = {}, theta_eff = {}", grid.tau(), grid.theta_eff());
            grid.hamiltonian(&potential)
        }
        "truncated" => {
            let cap = run.cfg.resolve(args.n, "n", Some(4096))?.min(MAX_OSCILLATOR_DIM);
            let tau = run.cfg.resolve(args.tau, "tau", None)?;
            let l = run.cfg.resolve(args.l, "l", None)?;
            let lattice = TruncatedLattice::new(cap, l, tau)?;
            println!("truncated lattice: {} sites, spacing {}", lattice.points().len(), 2.0 * tau);
            lattice.hamiltonian(&potential)
        }
        other => return Err(CliError::Config(format!("mode must be `periodic` or `truncated`, got `{other}`"))),
    };
    let eig = eig_hermitian(&h)?;
    let shown = count.unwrap_or(eig.len()).min(eig.len());
    let (path, mut w) = run.create("eigenvalues.csv")?;
    writeln!(w, "index,value")?;
    for (i, e) in eig.iter().take(shown).enumerate() {
        writeln!(w, "{i},{e}")?;
    }
    w.flush()?;
    if let Some(e0) = eig.first() {
        println!("lowest eigenvalue {e0}");
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn run_witness(run: &Run, args: &WitnessArgs) -> CliResult<()> {
    let lambda = run.cfg.resolve(args.lambda, "lambda", Some(0.0))?;
    let n_max = run.cfg.resolve(args.n_max, "n_max", Some(25))?;
    let report = extension_gap_report(lambda, n_max)?;
    let (path, mut w) = run.create("witness.csv")?;
    write_witness_csv(&mut w, &report)?;
    w.flush()?;
    println!("{}", report.interpretation);
    println!("wrote {}", path.display());
    Ok(())
}

fn matrix_of(run: &Run, args: &MatrixArgs) -> CliResult<CMatrix> {
    let p = run.cfg.resolve(args.p, "p", None)?;
    let q = run.cfg.resolve(args.q, "q", None)?;
    let phi1 = run.cfg.resolve(args.phi1, "phi1", Some(0.0))?;
    let phi2 = run.cfg.resolve(args.phi2, "phi2", Some(0.0))?;
    let which: String = run.cfg.resolve(args.which.clone(), "which", Some("u".into()))?;
    let rep = MatrixRep::clock_shift(p, q, phi1, phi2)?;
    let (kind, rest) = which.split_once(':').unwrap_or((which.as_str(), ""));
    let m = match kind {
        "u" => rep.u().clone(),
        "v" => rep.v().clone(),
        "parity" => rep.parity()?,
        "weyl" => {
            let (m, n) = parse_pair(rest, "weyl")?;
            rep.weyl(GroupPoint::new(m, n))
        }
        "d" => {
            let (m, n) = parse_pair(rest, "d")?;
            rep.d_op(GroupPoint::new(m, n)).into_inner()
        }
        "element" => {
            let path: PathBuf = match &args.element {
                Some(p) => p.clone(),
                None => run.cfg.resolve(None::<PathBuf>, "element", None)?,
            };
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let f: AlgebraElement = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            rep.represent(&f)?
        }
        other => return Err(CliError::Config(format!("unknown matrix `{other}`"))),
    };
    Ok(m)
}

fn run_matrix(run: &Run, args: &MatrixArgs) -> CliResult<()> {
    let m = matrix_of(run, args)?;
    let (path, mut w) = run.create("matrix.csv")?;
    write_matrix_csv(&mut w, &m)?;
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}

fn execute(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let out = match cli.output_dir {
        Some(dir) => dir,
        None => cfg.get::<PathBuf>("output_dir")?.unwrap_or_else(|| Path::new(".").to_path_buf()),
    };
    let seed = cfg.resolve(cli.seed, "seed", Some(DEFAULT_SEED))?;
    let run = Run { cfg, out, seed };
    match &cli.command {
        Command::Verify(a) => run_verify(&run, a),
        Command::Spectrum(a) => run_spectrum(&run, a),
        Command::Butterfly(a) => run_butterfly(&run, a),
        Command::Trend(a) => run_trend(&run, a),
        Command::Oscillator(a) => run_oscillator(&run, a),
        Command::Witness(a) => run_witness(&run, a),
        Command::Matrix(a) => run_matrix(&run, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ccr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
