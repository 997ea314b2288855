//! Command-line front end.
//!
//! `parse_args` turns argv (plus an optional `--config` file) into a validated
//! [`RunConfig`]; `run` executes it and returns a [`Report`] ready for CSV or
//! JSON output. Exit codes: 0 success, 1 a check exceeded its tolerance,
//! 2 usage, 3 range or precondition, 4 Bessel-root singularity,
//! 5 truncation overflow, 6 numeric failure, 7 I/O.

pub mod config;
pub mod emit;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{CommandFactory, Parser, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::algebra::{phase_operators, reorder, su11_generators, verify_bch_with, BchCheck, BchParams, Ordering};
use crate::error::Error;
use crate::fock::FockVector;
use crate::lattice::{
    compare_to_oracle_with, default_dim, default_oracle_edge, default_steps_per_sample, impulse_profile, propagate,
    LatticeKind, LatticeSpec, Sign,
};
use crate::states::{
    bg_default_guard, bg_state_ordered, deformed_annihilation, eigen_residual, london_state_ordered,
    phase_state_perelomov, su11_perelomov_state_ordered, StateFamily, StateSpec,
};

pub use config::parse_complex;
pub use emit::{num, Report};
pub use verify::{Check, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Clap(#[from] clap::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                Error::BesselRoot { .. } => 4,
                Error::TruncationOverflow { .. } => 5,
                Error::Numeric(_) => 6,
                Error::Dimension(_)
                | Error::Range(_)
                | Error::SingularParameter(_)
                | Error::Branch
                | Error::UnsupportedOracle { .. } => 3,
            },
            CliError::Io(_) => 7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Phase,
    Bg,
    London,
    Su11,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LatticeArg {
    Su11,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    MinusI,
    PlusI,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderingArg {
    Normal,
    Antinormal,
}

/// How a state is built: from its amplitude formula or as exponentials acting on `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateForm {
    Series,
    Ordered,
}

#[derive(Debug, Parser)]
#[command(
    name = "fockphase",
    version,
    about = "Coherent states on a truncated Fock space and waveguide-lattice propagation"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,

    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Flat `key = value` file; flags on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, clap::Subcommand)]
enum CommandArgs {
    /// Amplitude table of a coherent or phase state.
    #[command(args_override_self = true)]
    State(StateArgs),
    /// Propagate light launched into guide 0 and compare with the closed form.
    #[command(args_override_self = true)]
    Impulse(ImpulseArgs),
    /// Propagate light launched into any guide.
    #[command(args_override_self = true)]
    Propagate(PropagateArgs),
    /// Check the normal/antinormal reordering identity.
    #[command(name = "bch-check", args_override_self = true)]
    BchCheck(BchArgs),
    /// Run an invariant suite.
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, clap::Args)]
struct StateArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Phase angle (phase family).
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Coherent parameter as `a+bi` (real for london).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Bargmann index (su11 family).
    #[arg(long, default_value_t = 0.5)]
    k: f64,
    #[arg(long, default_value_t = 64)]
    dim: usize,
    #[arg(long, value_enum, default_value = "series")]
    form: StateForm,
    /// Extra levels for `--form ordered`.
    #[arg(long)]
    guard: Option<usize>,
    /// Rescale to unit norm before printing.
    #[arg(long)]
    normalize: bool,
    /// Report the eigenvalue residual of the family's lowering operator.
    #[arg(long)]
    eigen: bool,
}

#[derive(Debug, clap::Args)]
struct LatticeArgs {
    #[arg(long, value_enum)]
    lattice: LatticeArg,
    #[arg(long, allow_hyphen_values = true)]
    zmax: f64,
    /// Number of guides (default grows with zmax).
    #[arg(long)]
    dim: Option<usize>,
    /// RK4 substeps between samples (default keeps h·ρ(H) ≤ 0.01).
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum, default_value = "minus-i")]
    sign: SignArg,
    /// Bargmann index of the su11 couplings.
    #[arg(long, default_value_t = 0.5)]
    k: f64,
    /// Guides next to the truncation wall left out of the oracle comparison (default ⌈N/4⌉).
    #[arg(long)]
    oracle_edge: Option<usize>,
}

#[derive(Debug, clap::Args)]
struct ImpulseArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    /// Print the closed form instead of the propagated field.
    #[arg(long)]
    analytic: bool,
    /// Largest tolerated deviation from the closed form.
    #[arg(long, default_value = "1e-8")]
    tol: f64,
}

#[derive(Debug, clap::Args)]
struct PropagateArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    input_waveguide: usize,
}

#[derive(Debug, clap::Args)]
struct BchArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    plus: String,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    zero: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    minus: String,
    /// Ordering of the given parameters.
    #[arg(long, value_enum, default_value = "antinormal")]
    ordering: OrderingArg,
    #[arg(long, default_value_t = 64)]
    dim: usize,
    /// Edge exclusion (default ⌈N/4⌉).
    #[arg(long)]
    edge: Option<usize>,
    /// Extra levels the products are built with (default 2N).
    #[arg(long)]
    guard: Option<usize>,
    /// Check this many random sets with |X±| ≤ radius, |X₀| = 1 instead.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0.3)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "1e-9")]
    tol: f64,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 64)]
    dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateJob {
    pub spec: StateSpec,
    pub form: StateForm,
    pub guard: Option<usize>,
    pub normalize: bool,
    pub eigen: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeJob {
    pub spec: LatticeSpec,
    pub zmax: f64,
    pub samples: usize,
    pub steps_per_sample: usize,
    pub input_waveguide: usize,
    pub oracle_edge: usize,
    /// `impulse` only: emit closed-form values.
    pub analytic: bool,
    /// `impulse` only: oracle tolerance.
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BchJob {
    pub sets: Vec<BchParams>,
    pub check: BchCheck,
    pub tol: f64,
    pub random: Option<(usize, f64, u64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    State(StateJob),
    Impulse(LatticeJob),
    Propagate(LatticeJob),
    BchCheck(BchJob),
    Verify { suite: Suite, dim: usize },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::State(_) => "state",
            Job::Impulse(_) => "impulse",
            Job::Propagate(_) => "propagate",
            Job::BchCheck(_) => "bch-check",
            Job::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub job: Job,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// Result of [`run`]: the report and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub ok: bool,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.report.to_csv(),
            Format::Json => self.report.to_json(),
        }
    }
}

const SUBCOMMANDS: [&str; 5] = ["state", "impulse", "propagate", "bch-check", "verify"];

/// Parses argv (including the program name). A `--config` file contributes
/// flags placed before the command-line ones, so the command line wins.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let merged = merge_config(argv)?;
    let cli = Cli::try_parse_from(merged)?;
    let job = build_job(cli.command)?;
    Ok(RunConfig { job, format: cli.format, output: cli.output })
}

fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut rest = Vec::new();
    let mut config_path = None;
    let mut it = argv.into_iter();
    let prog = it.next().unwrap_or_else(|| "fockphase".into());
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            let p = it.next().ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
            config_path = Some(PathBuf::from(p));
        } else if let Some(p) = s.strip_prefix("--config=") {
            config_path = Some(PathBuf::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config_path else {
        let mut out = vec![prog];
        out.extend(rest);
        return Ok(out);
    };
    let entries = config::load_config(&path)?;

    let sub_pos = rest.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()));
    let file_command = entries.iter().find(|(k, _)| k == "command").map(|(_, v)| v.clone());
    let (sub, before, after) = match sub_pos {
        Some(i) => {
            let sub = rest[i].to_string_lossy().into_owned();
            (sub, rest[..i].to_vec(), rest[i + 1..].to_vec())
        }
        None => {
            let sub = file_command.clone().ok_or_else(|| {
                CliError::Usage("no command given on the command line or as `command` in the config".into())
            })?;
            (sub, Vec::new(), rest)
        }
    };
    if let Some(fc) = &file_command {
        if *fc != sub {
            return Err(CliError::Usage(format!("config is for `{fc}` but the command is `{sub}`")));
        }
    }

    let root = Cli::command();
    let sub_cmd = root.find_subcommand(&sub).ok_or_else(|| CliError::Usage(format!("unknown command `{sub}`")))?;
    let mut injected: Vec<OsString> = Vec::new();
    for (key, value) in entries.into_iter().filter(|(k, _)| k != "command") {
        let arg = sub_cmd
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| CliError::Usage(format!("unknown config key `{key}`")))?;
        if arg.get_action().takes_values() {
            injected.push(format!("--{key}").into());
            injected.push(value.into());
        } else {
            match value.as_str() {
                "true" => injected.push(format!("--{key}").into()),
                "false" => {}
                other => return Err(CliError::Usage(format!("config key `{key}` takes true or false, got `{other}`"))),
            }
        }
    }
    let mut out = vec![prog, sub.into()];
    out.extend(injected);
    out.extend(before);
    out.extend(after);
    Ok(out)
}

fn complex_arg(name: &str, s: &str) -> Result<Complex64, CliError> {
    parse_complex(s).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

fn build_job(cmd: CommandArgs) -> Result<Job, CliError> {
    Ok(match cmd {
        CommandArgs::State(a) => Job::State(state_job(a)?),
        CommandArgs::Impulse(a) => {
            let mut job = lattice_job(&a.lattice, a.samples, 0)?;
            job.analytic = a.analytic;
            job.tol = a.tol;
            Job::Impulse(job)
        }
        CommandArgs::Propagate(a) => Job::Propagate(lattice_job(&a.lattice, a.samples, a.input_waveguide)?),
        CommandArgs::BchCheck(a) => Job::BchCheck(bch_job(a)?),
        CommandArgs::Verify(a) => {
            if a.dim < 2 {
                return Err(CliError::Usage(format!("--dim must be at least 2, got {}", a.dim)));
            }
            Job::Verify { suite: a.suite, dim: a.dim }
        }
    })
}

fn state_job(a: StateArgs) -> Result<StateJob, CliError> {
    let family = match a.family {
        FamilyArg::Phase => StateFamily::Phase,
        FamilyArg::Bg => StateFamily::BarutGirardello,
        FamilyArg::London => StateFamily::London,
        FamilyArg::Su11 => StateFamily::Su11Perelomov,
    };
    let param = match family {
        StateFamily::Phase => {
            if a.alpha.is_some() {
                return Err(CliError::Usage("the phase family takes --phi, not --alpha".into()));
            }
            Complex64::new(a.phi.ok_or_else(|| CliError::Usage("--phi is required for the phase family".into()))?, 0.0)
        }
        _ => {
            if a.phi.is_some() {
                return Err(CliError::Usage(format!("the {} family takes --alpha, not --phi", family.name())));
            }
            let s = a
                .alpha
                .as_deref()
                .ok_or_else(|| CliError::Usage(format!("--alpha is required for the {} family", family.name())))?;
            complex_arg("alpha", s)?
        }
    };
    if family == StateFamily::London && param.im != 0.0 {
        return Err(CliError::Usage(format!("London α must be real, got {s}", s = a.alpha.unwrap_or_default())));
    }
    if a.dim < 2 {
        return Err(CliError::Usage(format!("--dim must be at least 2, got {}", a.dim)));
    }
    let spec = StateSpec::new(family, param, a.dim).with_bargmann(a.k);
    spec.validate()?;
    Ok(StateJob { spec, form: a.form, guard: a.guard, normalize: a.normalize, eigen: a.eigen })
}

fn lattice_job(a: &LatticeArgs, samples: usize, input_waveguide: usize) -> Result<LatticeJob, CliError> {
    if !a.zmax.is_finite() {
        return Err(CliError::Usage(format!("--zmax must be finite, got {}", a.zmax)));
    }
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let kind = match a.lattice {
        LatticeArg::Su11 => LatticeKind::Su11,
        LatticeArg::Uniform => LatticeKind::Uniform,
    };
    let sign = match a.sign {
        SignArg::MinusI => Sign::MinusI,
        SignArg::PlusI => Sign::PlusI,
    };
    let dim = a.dim.unwrap_or_else(|| default_dim(kind, a.zmax));
    if dim < 2 {
        return Err(CliError::Usage(format!("--dim must be at least 2, got {dim}")));
    }
    if input_waveguide >= dim {
        return Err(CliError::Usage(format!("--input-waveguide {input_waveguide} outside {dim} guides")));
    }
    let spec = LatticeSpec::new(kind, dim).with_sign(sign).with_bargmann(a.k);
    spec.validate()?;
    let steps_per_sample = match a.steps {
        Some(0) => return Err(CliError::Usage("--steps must be positive".into())),
        Some(s) => s,
        None => default_steps_per_sample(&spec, a.zmax, samples)?,
    };
    let oracle_edge = a.oracle_edge.unwrap_or_else(|| default_oracle_edge(dim));
    if oracle_edge >= dim {
        return Err(CliError::Usage(format!("--oracle-edge {oracle_edge} leaves no guides of {dim}")));
    }
    Ok(LatticeJob {
        spec,
        zmax: a.zmax,
        samples,
        steps_per_sample,
        input_waveguide,
        oracle_edge,
        analytic: false,
        tol: 1e-8,
    })
}

fn bch_job(a: BchArgs) -> Result<BchJob, CliError> {
    let ordering = match a.ordering {
        OrderingArg::Normal => Ordering::NormalFirst,
        OrderingArg::Antinormal => Ordering::AntinormalFirst,
    };
    if a.dim < 2 {
        return Err(CliError::Usage(format!("--dim must be at least 2, got {}", a.dim)));
    }
    let mut check = BchCheck::new(a.dim);
    if let Some(e) = a.edge {
        check = check.with_edge(e);
    }
    if let Some(g) = a.guard {
        check = check.with_guard(g);
    }
    if check.block() == 0 {
        return Err(CliError::Usage(format!("--edge {} leaves no block of N = {}", check.edge, a.dim)));
    }
    let (sets, random) = match a.random {
        Some(count) => {
            if !(a.radius >= 0.0 && a.radius.is_finite()) {
                return Err(CliError::Usage(format!("--radius must be non-negative, got {}", a.radius)));
            }
            (random_params(count, a.radius, a.seed, ordering)?, Some((count, a.radius, a.seed)))
        }
        None => {
            let p = BchParams::new(
                ordering,
                complex_arg("plus", &a.plus)?,
                complex_arg("zero", &a.zero)?,
                complex_arg("minus", &a.minus)?,
            )?;
            (vec![p], None)
        }
    };
    Ok(BchJob { sets, check, tol: a.tol, random })
}

/// `count` parameter sets with `X±` uniform in the disc of `radius` and `X₀` on the unit circle.
pub fn random_params(count: usize, radius: f64, seed: u64, ordering: Ordering) -> Result<Vec<BchParams>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let disc = |rng: &mut ChaCha8Rng| {
        let r = radius * rng.random::<f64>().sqrt();
        Complex64::from_polar(r, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
    };
    (0..count)
        .map(|_| {
            let plus = disc(&mut rng);
            let minus = disc(&mut rng);
            let zero = Complex64::from_polar(1.0, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
            BchParams::new(ordering, plus, zero, minus).map_err(CliError::from)
        })
        .collect()
}

/// Executes a parsed configuration.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut outcome = match &config.job {
        Job::State(j) => run_state(j)?,
        Job::Impulse(j) => run_lattice(j, true)?,
        Job::Propagate(j) => run_lattice(j, false)?,
        Job::BchCheck(j) => run_bch(j)?,
        Job::Verify { suite, dim } => {
            let checks = verify::run_suite(*suite, *dim)?;
            let mut meta = Map::new();
            meta.insert("suite".into(), suite.name().into());
            meta.insert("dim".into(), (*dim).into());
            check_outcome(meta, &checks)
        }
    };
    outcome.report.meta.insert("command".into(), config.job.name().into());
    outcome.report.meta.insert(
        "format".into(),
        match config.format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
        .into(),
    );
    Ok(outcome)
}

fn complex_json(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

fn run_state(j: &StateJob) -> Result<Outcome, CliError> {
    let s = &j.spec;
    let v = match j.form {
        StateForm::Series => s.build()?,
        StateForm::Ordered => match s.family {
            StateFamily::Phase => phase_state_perelomov(s.param.re, s.dim, j.guard.unwrap_or(3 * s.dim))?,
            StateFamily::BarutGirardello => {
                bg_state_ordered(s.param, s.dim, j.guard.unwrap_or_else(|| bg_default_guard(s.param)))?
            }
            StateFamily::London => london_state_ordered(s.param.re, s.dim, j.guard.unwrap_or(2 * s.dim))?,
            StateFamily::Su11Perelomov => {
                su11_perelomov_state_ordered(s.param, s.bargmann_k, s.dim, j.guard.unwrap_or(2 * s.dim))?
            }
        },
    };
    let mut report = Report::new(&["index", "re", "im", "abs2"]);
    report.diag("norm2", num(v.norm_sqr()));
    if j.eigen {
        let (residual, lambda) = state_eigen_residual(s, &v)?;
        report.diag("eigen_residual", num(residual));
        report.diag("eigenvalue", complex_json(lambda));
    }
    let shown = if j.normalize { v.normalized()? } else { v };
    for (i, c) in shown.amps().iter().enumerate() {
        report.push(vec![i.into(), num(c.re), num(c.im), num(c.norm_sqr())]);
    }
    let m = &mut report.meta;
    m.insert("family".into(), s.family.name().into());
    m.insert("dim".into(), s.dim.into());
    match s.family {
        StateFamily::Phase => {
            m.insert("phi".into(), num(s.param.re));
        }
        _ => {
            m.insert("alpha".into(), complex_json(s.param));
        }
    }
    if s.family == StateFamily::Su11Perelomov {
        m.insert("k".into(), num(s.bargmann_k));
    }
    m.insert(
        "form".into(),
        match j.form {
            StateForm::Series => "series",
            StateForm::Ordered => "ordered",
        }
        .into(),
    );
    if let (StateForm::Ordered, Some(g)) = (j.form, j.guard) {
        m.insert("guard".into(), g.into());
    }
    m.insert("normalize".into(), j.normalize.into());
    Ok(Outcome { report, ok: true })
}

/// Residual of the state against the lowering operator it diagonalizes,
/// excluding the top level.
fn state_eigen_residual(s: &StateSpec, v: &FockVector) -> Result<(f64, Complex64), CliError> {
    let (op, lambda) = match s.family {
        StateFamily::Phase => (phase_operators(s.dim)?.v, Complex64::from_polar(1.0, s.param.re)),
        StateFamily::BarutGirardello => (su11_generators(s.dim)?.kminus, s.param),
        StateFamily::London => (deformed_annihilation(s.param.re, s.dim)?, s.param),
        StateFamily::Su11Perelomov => {
            return Err(CliError::Usage("--eigen is not available for the su11 family".into()));
        }
    };
    Ok((eigen_residual(&op, v, lambda, 1)?, lambda))
}

fn run_lattice(j: &LatticeJob, impulse: bool) -> Result<Outcome, CliError> {
    let spec = &j.spec;
    let mut report = Report::new(&["z", "guide", "re", "im", "abs2"]);
    let mut ok = true;
    if impulse && j.analytic {
        for s in 0..=j.samples {
            let z = j.zmax * s as f64 / j.samples as f64;
            for (m, c) in impulse_profile(spec, 0, z, spec.dim)?.iter().enumerate() {
                report.push(vec![num(z), m.into(), num(c.re), num(c.im), num(c.norm_sqr())]);
            }
        }
    } else {
        let input = FockVector::basis(spec.dim, j.input_waveguide)?;
        let result = propagate(spec, &input, j.zmax, j.samples, j.steps_per_sample)?;
        for (z, field) in result.z_grid.iter().zip(&result.fields) {
            for (m, c) in field.amps().iter().enumerate() {
                report.push(vec![num(*z), m.into(), num(c.re), num(c.im), num(c.norm_sqr())]);
            }
        }
        report.diag("norm_drift", num(result.norm_drift));
        report.diag("edge_leakage", num(result.edge_leakage));
        if j.input_waveguide == 0 {
            let err = compare_to_oracle_with(&result, spec, j.oracle_edge)?;
            report.diag("oracle_max_error", num(err));
            report.diag("oracle_max_error_all_guides", num(compare_to_oracle_with(&result, spec, 1)?));
            if impulse {
                report.diag("tolerance", num(j.tol));
                ok = err <= j.tol;
                report.diag("pass", ok);
            }
        }
    }
    let m = &mut report.meta;
    m.insert("lattice".into(), spec.kind.name().into());
    m.insert("dim".into(), spec.dim.into());
    m.insert("zmax".into(), num(j.zmax));
    m.insert("samples".into(), j.samples.into());
    m.insert("steps_per_sample".into(), j.steps_per_sample.into());
    m.insert("sign".into(), spec.sign.name().into());
    if spec.kind == LatticeKind::Su11 {
        m.insert("k".into(), num(spec.bargmann_k));
    }
    m.insert("input_waveguide".into(), j.input_waveguide.into());
    m.insert("oracle_edge".into(), j.oracle_edge.into());
    if impulse {
        m.insert("analytic".into(), j.analytic.into());
    }
    Ok(Outcome { report, ok })
}

fn run_bch(j: &BchJob) -> Result<Outcome, CliError> {
    let mut checks = Vec::new();
    for (i, p) in j.sets.iter().enumerate() {
        let r = verify_bch_with(p, &j.check)?;
        let back = reorder(&r.converted)?;
        let trip = (back.plus - p.plus).norm().max((back.zero - p.zero).norm()).max((back.minus - p.minus).norm());
        let prefix = if j.sets.len() == 1 { String::new() } else { format!("set{i}.") };
        checks.push(Check::new(format!("{prefix}product_residual"), r.residual, j.tol));
        checks.push(Check::new(format!("{prefix}round_trip"), trip, 1e-13));
    }
    let mut meta = Map::new();
    meta.insert("dim".into(), j.check.dim.into());
    meta.insert("edge".into(), j.check.edge.into());
    meta.insert("guard".into(), j.check.guard.into());
    match j.random {
        Some((count, radius, seed)) => {
            meta.insert("random".into(), count.into());
            meta.insert("radius".into(), num(radius));
            meta.insert("seed".into(), seed.into());
        }
        None => {
            let p = &j.sets[0];
            meta.insert("plus".into(), complex_json(p.plus));
            meta.insert("zero".into(), complex_json(p.zero));
            meta.insert("minus".into(), complex_json(p.minus));
        }
    }
    if let Some(p) = j.sets.first() {
        meta.insert(
            "ordering".into(),
            match p.ordering {
                Ordering::NormalFirst => "normal",
                Ordering::AntinormalFirst => "antinormal",
            }
            .into(),
        );
    }
    let mut out = check_outcome(meta, &checks);
    if j.random.is_none() {
        let c = reorder(&j.sets[0])?;
        out.report.diag("converted_plus", complex_json(c.plus));
        out.report.diag("converted_zero", complex_json(c.zero));
        out.report.diag("converted_minus", complex_json(c.minus));
    }
    Ok(out)
}

fn check_outcome(meta: Map<String, Value>, checks: &[Check]) -> Outcome {
    let mut report = Report::new(&["check", "value", "tolerance", "pass"]);
    report.meta = meta;
    for c in checks {
        report.push(vec![c.name.clone().into(), num(c.value), num(c.tolerance), c.passed().into()]);
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    report.diag("checks", checks.len());
    report.diag("failed", failed);
    Outcome { report, ok: failed == 0 }
}

/// Full CLI: parse, run, write. Returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv).and_then(|cfg| {
        let outcome = run(&cfg)?;
        write_output(&cfg, &outcome.render(cfg.format))?;
        Ok(outcome.ok)
    }) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("fockphase: {e}");
            e.exit_code()
        }
    }
}

fn write_output(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    use std::io::Write;
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
