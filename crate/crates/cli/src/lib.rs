//! Command dispatch for the `thermoshift` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use thermoshift::bimodule::{bimodule_pressure, BimoduleSystem, DPotential};
use thermoshift::io::{self, MarkovFile};
use thermoshift::kms::kms_analyze;
use thermoshift::measures::{variational_search, FreeEnergyReport};
use thermoshift::pressure::{pressure_estimate, pressure_law_suite, LawReport, PressureEstimate};
use thermoshift::transfer::{RpfData, TransferOperator};
use thermoshift::{Error, KmsReport, LocallyConstantPotential, TransitionMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "thermoshift", version, about = "Pressure, equilibrium states and KMS data for subshifts of finite type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Transition matrix file: a line `d` then `d` rows of 0/1 entries.
    #[arg(long, global = true)]
    pub matrix: Option<PathBuf>,

    /// Potential JSON file. Defaults to the zero potential.
    #[arg(long, global = true)]
    pub potential: Option<PathBuf>,

    /// Bimodule system JSON file.
    #[arg(long, global = true)]
    pub system: Option<PathBuf>,

    /// Largest word length or number of iterates reported.
    #[arg(long, global = true, default_value_t = 12)]
    pub n_max: usize,

    /// Tolerance of the Perron-Frobenius-Ruelle solver.
    #[arg(long, global = true, default_value_t = thermoshift::RPF_TOL)]
    pub tol: f64,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads, default all available cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file, default standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Topological entropy log r(A).
    Entropy,
    /// Partition-function pressure bracket for n = 1..=n-max.
    Pressure,
    /// Leading eigendata of the transfer operator; CSV gives the convergence profile.
    Rpf {
        /// Emit the KMS report instead.
        #[arg(long)]
        kms: bool,
    },
    /// Equilibrium state as a Markov measure.
    Equilibrium,
    /// Seeded search for the Markov measure of largest free energy.
    Variational {
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
    },
    /// KMS inverse temperature, its bounds and the uniqueness flag.
    Kms,
    /// Pressure of a positive element of the diagonal algebra of a bimodule system.
    BimodulePressure,
    /// Pressure laws for the potential and a seeded random companion.
    Laws,
}

/// Failures of a run, with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_convergence_failure() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    #[serde(rename = "log_rA")]
    pub log_ra: f64,
    pub spectral_radius: f64,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub log_lambda: f64,
    pub measure: MarkovFile,
    pub free_energy: FreeEnergyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalReport {
    pub measure: MarkovFile,
    pub free_energy: FreeEnergyReport,
    pub restart: usize,
    pub iterations: usize,
}

/// Rendered report plus human-readable notes for standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    pub diagnostics: Vec<String>,
}

impl Cli {
    fn validate(&self) -> CliResult<()> {
        if self.n_max == 0 {
            return Err(CliError::Usage("--n-max must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage("--tol must be a positive number".into()));
        }
        if self.threads == Some(0) {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        Ok(())
    }

    fn matrix(&self) -> CliResult<TransitionMatrix> {
        let path = self
            .matrix
            .as_ref()
            .ok_or_else(|| CliError::Usage("--matrix is required".into()))?;
        Ok(io::read_matrix(path)?)
    }

    fn potential(&self, a: &TransitionMatrix) -> CliResult<LocallyConstantPotential> {
        match &self.potential {
            Some(path) => Ok(io::read_potential(path, a)?),
            None => Ok(LocallyConstantPotential::zero(a)),
        }
    }

    fn require_json(&self, what: &str) -> CliResult<()> {
        match self.format {
            Format::Json => Ok(()),
            Format::Csv => Err(CliError::Usage(format!("{what} has no CSV form; use --format json"))),
        }
    }
}

fn csv_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with columns `n, estimate, lower, upper`.
pub fn pressure_csv(est: &PressureEstimate) -> String {
    let mut out = String::from("n,estimate,lower,upper\n");
    for r in &est.per_n {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.n,
            csv_number(r.estimate),
            csv_number(r.lower),
            csv_number(r.upper)
        );
    }
    out
}

/// CSV with columns `n, e_n`.
pub fn profile_csv(profile: &[f64]) -> String {
    let mut out = String::from("n,e_n\n");
    for (i, e) in profile.iter().enumerate() {
        let _ = writeln!(out, "{},{}", i + 1, csv_number(*e));
    }
    out
}

fn kms_notes(r: &KmsReport) -> Vec<String> {
    let mut notes = vec![
        format!(
            "beta = {:.16e}, a priori bounds [{:.16e}, {:.16e}]",
            r.beta, r.lower_bound, r.upper_bound
        ),
        format!(
            "var_0 = {:.16e}, log r(A) = {:.16e}, aperiodicity index {}, unique = {}",
            r.var0, r.log_ra, r.aperiodicity_index, r.unique
        ),
    ];
    if let Some(w) = &r.warning {
        notes.push(format!("warning: {w}"));
    }
    notes
}

/// Executes one command. Thread configuration is left to the caller.
pub fn run(cli: &Cli) -> CliResult<Output> {
    cli.validate()?;
    let mut diagnostics = Vec::new();
    let body = match &cli.command {
        Command::Entropy => {
            cli.require_json("entropy")?;
            let a = cli.matrix()?;
            let s = a.spectral_radius(thermoshift::SPECTRAL_TOL, thermoshift::SPECTRAL_MAX_ITER)?;
            let report = EntropyReport {
                log_ra: s.radius.ln(),
                spectral_radius: s.radius,
                iterations: s.iterations,
                residual: s.residual,
            };
            io::to_json(&report)
        }
        Command::Pressure => {
            let a = cli.matrix()?;
            let f = cli.potential(&a)?;
            let est = pressure_estimate(&f, cli.n_max)?;
            diagnostics.push(format!(
                "pressure bracket [{:.16e}, {:.16e}]",
                est.bracket.0, est.bracket.1
            ));
            match cli.format {
                Format::Json => io::to_json(&est),
                Format::Csv => pressure_csv(&est),
            }
        }
        Command::Rpf { kms } => {
            let a = cli.matrix()?;
            let f = cli.potential(&a)?;
            if *kms {
                cli.require_json("the KMS report")?;
                let r = kms_analyze(&f, cli.tol)?;
                diagnostics.extend(kms_notes(&r));
                io::to_json(&r)
            } else {
                let op = TransferOperator::new(&f)?;
                let rpf = op.rpf_solve(cli.tol, thermoshift::RPF_MAX_ITER)?;
                diagnostics.push(format!(
                    "lambda = {:.16e}, residuals {:.3e} {:.3e} after {} iterations",
                    rpf.lambda, rpf.residuals[0], rpf.residuals[1], rpf.iterations
                ));
                match cli.format {
                    Format::Json => io::to_json(&rpf),
                    Format::Csv => {
                        let mut e0 = vec![0.0; op.dim()];
                        e0[0] = 1.0;
                        profile_csv(&op.convergence_profile(&rpf, &e0, cli.n_max))
                    }
                }
            }
        }
        Command::Equilibrium => {
            cli.require_json("equilibrium")?;
            let a = cli.matrix()?;
            let f = cli.potential(&a)?;
            let op = TransferOperator::new(&f)?;
            let rpf: RpfData = op.rpf_solve(cli.tol, thermoshift::RPF_MAX_ITER)?;
            let measure = op.equilibrium_markov(&rpf)?;
            let free_energy = measure.free_energy(&f, rpf.log_lambda)?;
            diagnostics.push(format!("free energy gap {:.3e}", free_energy.pressure_gap));
            io::to_json(&EquilibriumReport {
                log_lambda: rpf.log_lambda,
                measure: MarkovFile::from_measure(&measure),
                free_energy,
            })
        }
        Command::Variational { restarts, iters } => {
            cli.require_json("variational")?;
            let a = cli.matrix()?;
            let f = cli.potential(&a)?;
            let best = variational_search(&f, *restarts, *iters, cli.seed)?;
            diagnostics.push(format!(
                "best free energy {:.16e}, gap to pressure {:.3e}",
                best.report.free_energy, best.report.pressure_gap
            ));
            io::to_json(&VariationalReport {
                measure: MarkovFile::from_measure(&best.measure),
                free_energy: best.report,
                restart: best.restart,
                iterations: best.iterations,
            })
        }
        Command::Kms => {
            cli.require_json("kms")?;
            let a = cli.matrix()?;
            let f = cli.potential(&a)?;
            let r = kms_analyze(&f, cli.tol)?;
            diagnostics.extend(kms_notes(&r));
            io::to_json(&r)
        }
        Command::BimodulePressure => {
            let (sys, a) = match &cli.system {
                Some(path) => {
                    let sys = io::read_system(path)?;
                    let a = match &cli.potential {
                        Some(p) => io::read_dpotential(p, &sys)?,
                        None => DPotential::identity(&sys).scale(0.0),
                    };
                    (sys, a)
                }
                None => {
                    let m = cli.matrix()?;
                    let f = cli.potential(&m)?;
                    let sys = BimoduleSystem::cuntz_krieger(&m);
                    let a = DPotential::from_classical(&sys, &f)?;
                    (sys, a)
                }
            };
            let est = bimodule_pressure(&sys, &a, cli.n_max)?;
            diagnostics.push(format!(
                "bracket [h_top, ||a|| + h_top] = [{:.16e}, {:.16e}], ||a|| = {:.16e}",
                est.bracket.0,
                est.bracket.0 + a.norm(),
                a.norm()
            ));
            match cli.format {
                Format::Json => io::to_json(&est),
                Format::Csv => pressure_csv(&est),
            }
        }
        Command::Laws => {
            cli.require_json("laws")?;
            let a = cli.matrix()?;
            let f = cli.potential(&a)?;
            let g = LocallyConstantPotential::random(&a, f.k(), 1.0, &mut seeded(cli.seed));
            let report: LawReport = pressure_law_suite(&f, &g, cli.seed)?;
            for c in report.checks.iter().filter(|c| !c.holds) {
                diagnostics.push(format!("law violated: {} ({} vs {})", c.law, c.lhs, c.rhs));
            }
            io::to_json(&report)
        }
    };
    Ok(Output { body, diagnostics })
}

fn seeded(seed: u64) -> impl rand::Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15)
}
