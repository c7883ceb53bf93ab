//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 numerical failure,
//! 4 incomplete correlation data. Warnings go to stderr through `log`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::warn;
use num_complex::Complex64;

use crate::error::Error;
use crate::io::{
    to_json, CorrelationFile, MatrixRecord, McsoFile, ReportFile, StateDiagnostics, StateFile, SymmetrySpecFile,
    FORMAT_VERSION,
};
use crate::linalg;
use crate::models::{run_ising_demo, DemoConfig, DemoState, IsingParameters};
use crate::opspace::{DensityOperator, HermitianOperator};
use crate::reconstruction::{build_reconstruction_map, psd_repair, reconstruct, DEFAULT_COEFF_TOL};
use crate::simulate::{fidelity, mix_seed, random_symmetric_state, reduction_report, sample_correlations, ShotPlan};
use crate::symmetry::{commutant, default_rank_tol, is_symmetric, SymmetrySpec, SYMMETRY_TOL};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INCOMPLETE: i32 = 4;

/// Eigenvalues below this count as a PSD violation worth a warning.
const PSD_WARN_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "symrecon", version, about = "Symmetry-reduced quantum state reconstruction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the fixed observable space and the minimal reconstruction basis.
    Mcso(McsoArgs),
    /// Rebuild a state from correlation values.
    Reconstruct(ReconstructArgs),
    /// Sample correlations of a symmetric state with finite shots.
    Simulate(SimulateArgs),
    /// Print how many correlations the symmetry saves.
    Report(ReportArgs),
    /// Worked examples.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct McsoArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub correlations: PathBuf,
    /// Clip negative eigenvalues and renormalize.
    #[arg(long)]
    pub psd: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Shots per Pauli string.
    #[arg(long)]
    pub shots: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// State file to sample instead of a random symmetric state.
    #[arg(long)]
    pub state: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[command(subcommand)]
    pub model: DemoModel,
}

#[derive(Debug, Subcommand)]
pub enum DemoModel {
    /// Ising chain reduced to its first two sites.
    Ising(IsingArgs),
}

#[derive(Debug, Args)]
pub struct IsingArgs {
    #[arg(long)]
    pub sites: usize,
    #[arg(long = "J", allow_negative_numbers = true)]
    pub coupling: f64,
    #[arg(long = "g", allow_negative_numbers = true)]
    pub field: f64,
    /// Cat-state amplitude on all-up, e.g. 0.6 or 0.6+0.1i.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<String>,
    /// Cat-state amplitude on all-down.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<String>,
    /// Use the thermal state at this inverse temperature.
    #[arg(long, conflicts_with_all = ["alpha", "beta", "ground"])]
    pub thermal: Option<f64>,
    /// Use the (uniformly mixed) ground state.
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    pub ground: bool,
    #[arg(long)]
    pub periodic: bool,
    /// Also reconstruct from sampled correlations with this many shots per string.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MissingCorrelations(_) => EXIT_INCOMPLETE,
            Error::Numerical(_) | Error::NonPositiveTrace(_) => EXIT_NUMERICAL,
            _ => EXIT_PARSE,
        };
        CliError { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError { code: 1, message: format!("cannot write {}: {e}", path.display()) })
}

fn load_spec(path: &Path) -> CliResult<SymmetrySpec> {
    let text = read(path)?;
    let file = SymmetrySpecFile::parse(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    file.to_spec().map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

/// Runs a parsed command and returns what should be printed on stdout.
pub fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Mcso(a) => cmd_mcso(&a),
        Command::Reconstruct(a) => cmd_reconstruct(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Report(a) => cmd_report(&a),
        Command::Demo(DemoArgs { model: DemoModel::Ising(a) }) => cmd_demo_ising(&a),
    }
}

pub fn cmd_mcso(args: &McsoArgs) -> CliResult<String> {
    let spec = load_spec(&args.spec)?;
    let subspace = commutant(&spec, default_rank_tol(spec.space()))?;
    let basis = build_reconstruction_map(&subspace, DEFAULT_COEFF_TOL).basis();
    let labels: Vec<String> = basis.iter().map(|p| p.to_string()).collect();
    if let Some(out) = &args.out {
        let file = McsoFile {
            version: FORMAT_VERSION.into(),
            num_sites: spec.space().num_sites(),
            mcso_dim: subspace.dim(),
            orthonormal_basis: subspace.basis().iter().map(|b| MatrixRecord::from_matrix(b.matrix())).collect(),
            minimal_basis: labels.clone(),
        };
        write(out, &to_json(&file))?;
    }
    Ok(format!(
        "dim={}, minimal basis size={}, minimal basis: {}\n",
        subspace.dim(),
        labels.len(),
        labels.join(" ")
    ))
}

fn diagnostics(a: &HermitianOperator) -> StateDiagnostics {
    StateDiagnostics {
        hermiticity_residual: linalg::hermiticity_residual(a.matrix()),
        min_eigenvalue: a.eigenvalues()[0],
        trace: a.trace(),
    }
}

pub fn cmd_reconstruct(args: &ReconstructArgs) -> CliResult<String> {
    let spec = load_spec(&args.spec)?;
    let corr_text = read(&args.correlations)?;
    let g = CorrelationFile::parse(&corr_text)
        .and_then(|f| f.to_set())
        .map_err(|e| CliError::parse(format!("{}: {e}", args.correlations.display())))?;
    if g.space() != spec.space() {
        return Err(CliError::parse(format!(
            "correlations are for {} sites but the spec has {}",
            g.space().num_sites(),
            spec.space().num_sites()
        )));
    }
    let subspace = commutant(&spec, default_rank_tol(spec.space()))?;
    let map = build_reconstruction_map(&subspace, DEFAULT_COEFF_TOL);
    let raw = reconstruct(&map, &g)?;
    let diag = diagnostics(&raw);
    if diag.min_eigenvalue < -PSD_WARN_TOL {
        warn!(
            "reconstructed operator is not positive semidefinite (min eigenvalue {:.3e}){}",
            diag.min_eigenvalue,
            if args.psd { "; repairing" } else { "; pass --psd to repair" }
        );
    }
    let state = if args.psd { psd_repair(&raw)?.into_operator() } else { raw };
    let file = StateFile {
        version: FORMAT_VERSION.into(),
        num_sites: spec.space().num_sites(),
        state: MatrixRecord::from_matrix(state.matrix()),
        psd_repaired: args.psd,
        diagnostics: Some(diag.clone()),
    };
    write(&args.out, &to_json(&file))?;
    Ok(format!(
        "hermiticity_residual={:e}, min_eigenvalue={:e}, trace={}\n",
        diag.hermiticity_residual, diag.min_eigenvalue, diag.trace
    ))
}

fn load_state(path: &Path, spec: &SymmetrySpec) -> CliResult<DensityOperator> {
    let text = read(path)?;
    let file = StateFile::parse(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let matrix = file.state.to_matrix()?;
    if matrix.nrows() != spec.space().dim() {
        return Err(CliError::parse(format!(
            "{}: state has dimension {} but the spec space has {}",
            path.display(),
            matrix.nrows(),
            spec.space().dim()
        )));
    }
    let op = HermitianOperator::new(spec.space(), matrix)?;
    let rho = DensityOperator::new(op)?;
    let check = is_symmetric(&rho, spec, SYMMETRY_TOL)?;
    if !check.symmetric {
        warn!(
            "state in {} is not symmetric under the spec (residual {:.3e}); reconstruction returns its projection",
            path.display(),
            check.max_residual()
        );
    }
    Ok(rho)
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<String> {
    let spec = load_spec(&args.spec)?;
    let plan = ShotPlan::new(args.shots, mix_seed(args.seed, 1))?;
    let truth = match &args.state {
        Some(path) => load_state(path, &spec)?,
        None => random_symmetric_state(&spec, args.seed)?,
    };
    let subspace = commutant(&spec, default_rank_tol(spec.space()))?;
    let map = build_reconstruction_map(&subspace, DEFAULT_COEFF_TOL);
    let g = sample_correlations(&truth, &map.basis(), &plan)?;
    let rebuilt = psd_repair(&reconstruct(&map, &g)?)?;
    let f = fidelity(&truth, &rebuilt)?;
    let mut file = CorrelationFile::from_set(&g);
    file.shots_per_string = Some(args.shots);
    file.seed = Some(args.seed);
    file.true_state = Some(MatrixRecord::from_matrix(truth.matrix()));
    file.true_state_fidelity_after_reconstruction = Some(f);
    write(&args.out, &to_json(&file))?;
    Ok(format!("strings={}, shots_per_string={}, fidelity={f}\n", g.len(), args.shots))
}

pub fn cmd_report(args: &ReportArgs) -> CliResult<String> {
    let spec = load_spec(&args.spec)?;
    let report = reduction_report(&spec)?;
    Ok(to_json(&ReportFile { version: FORMAT_VERSION.into(), report }))
}

fn parse_amplitude(name: &str, text: &str) -> CliResult<Complex64> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    cleaned
        .replace('j', "i")
        .parse::<Complex64>()
        .map_err(|_| CliError::parse(format!("--{name}: cannot parse {text:?} as a complex number")))
}

fn cat_amplitudes(alpha: Option<&str>, beta: Option<&str>) -> CliResult<(Complex64, Complex64)> {
    let fill = |known: Complex64| Complex64::new((1.0 - known.norm_sqr()).max(0.0).sqrt(), 0.0);
    Ok(match (alpha, beta) {
        (None, None) => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            (Complex64::new(h, 0.0), Complex64::new(h, 0.0))
        }
        (Some(a), None) => {
            let a = parse_amplitude("alpha", a)?;
            (a, fill(a))
        }
        (None, Some(b)) => {
            let b = parse_amplitude("beta", b)?;
            (fill(b), b)
        }
        (Some(a), Some(b)) => (parse_amplitude("alpha", a)?, parse_amplitude("beta", b)?),
    })
}

pub fn cmd_demo_ising(args: &IsingArgs) -> CliResult<String> {
    let params = IsingParameters::new(args.sites, args.coupling, args.field)?.periodic(args.periodic);
    let state = if let Some(inv_temperature) = args.thermal {
        DemoState::Thermal { inv_temperature }
    } else if args.ground {
        DemoState::Ground
    } else {
        let (alpha, beta) = cat_amplitudes(args.alpha.as_deref(), args.beta.as_deref())?;
        DemoState::Cat { alpha, beta }
    };
    let shots = args.shots.map(|n| ShotPlan::new(n, args.seed)).transpose()?;
    let report = run_ising_demo(&DemoConfig { params, state, shots })?;
    Ok(to_json(&report))
}
