//! Command-line front end.
//!
//! Four subcommands drive the library: `bell` runs the conditional
//! protocol and reports Bell fidelities, `evolve` dumps the state after a
//! fixed pulse time, `sweep` tabulates the protocol outcome against one
//! parameter, and `validate-rwa` checks the resonant sideband picture
//! against the full Hamiltonian.
//!
//! All runs are described by a flat `key = value` config file; missing
//! keys fall back to defaults that produce a phi_plus Bell pair on the
//! lower sideband. Exit code 2 flags configuration mistakes, exit code 1
//! flags physics failures (post-selection on an impossible outcome,
//! truncation leakage, a sideband picture that is not trusted).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};
use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{Subsystem, negativity, partial_trace, von_neumann_entropy};
use crate::hilbert::{FockCutoffs, Qubit, StateJson, inner_product};
use crate::operators::{SystemParams, full_hamiltonian};
use crate::propagation::{
    HermitianEigen, LEAKAGE_THRESHOLD, PropagationError, to_interaction_picture,
};
use crate::protocol::{
    BellTarget, ProtocolConfig, ProtocolError, Sideband, bell_target, evolve_protocol,
    measure_qubit, run_bell_protocol,
};

/// Errors surfaced to the shell, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// The request itself is wrong: bad config file, bad key, bad value,
    /// or a protocol description that cannot be built. Exit code 2.
    #[error("{0}")]
    Config(String),
    /// The request is well formed but the physics refuses: impossible
    /// post-selection, truncation leakage, untrusted sideband picture.
    /// Exit code 1.
    #[error("{0}")]
    Physics(String),
    /// Could not read or write a file. Exit code 1.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Physics(_) | CliError::Io(_) => 1,
        }
    }
}

/// Sort protocol failures into configuration mistakes (exit 2) and
/// physics outcomes (exit 1).
fn classify(err: ProtocolError) -> CliError {
    match &err {
        ProtocolError::PostSelectionFailed { .. }
        | ProtocolError::Propagation(PropagationError::TruncationLeak { .. }) => {
            CliError::Physics(err.to_string())
        }
        _ => CliError::Config(err.to_string()),
    }
}

/// Parse a float that may be written as a multiple of pi: `pi`, `-pi/2`,
/// `3pi/4`, `0.25pi`, or any plain float literal.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let value = if let Some(idx) = t.find("pi") {
        let coef = match t[..idx].trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| format!("bad coefficient '{other}' in '{t}'"))?,
        };
        let rest = t[idx + 2..].trim();
        let den = if rest.is_empty() {
            1.0
        } else if let Some(d) = rest.strip_prefix('/') {
            let den: f64 = d
                .trim()
                .parse()
                .map_err(|_| format!("bad divisor '{}' in '{t}'", d.trim()))?;
            if den == 0.0 {
                return Err(format!("division by zero in '{t}'"));
            }
            den
        } else {
            return Err(format!("unexpected text '{rest}' after pi in '{t}'"));
        };
        coef * PI / den
    } else {
        t.parse::<f64>()
            .map_err(|_| format!("not a number: '{t}'"))?
    };
    if !value.is_finite() {
        return Err(format!("'{t}' is not finite"));
    }
    Ok(value)
}

fn parse_count(s: &str) -> Result<usize, String> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| format!("not a nonnegative integer: '{}'", s.trim()))
}

/// Parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// Preparation angle θ.
    Theta,
    /// Preparation phase φ.
    Phi,
    /// Pulse time, overriding the scheduled transfer window.
    Time,
    /// Lamb-Dicke parameter η.
    Eta,
    /// Trap frequency in units of the sideband Rabi frequency, ν/(ηg).
    /// The cavity is retuned to resonance at every point.
    NuOverEtaG,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Theta => "theta",
            SweepParam::Phi => "phi",
            SweepParam::Time => "t",
            SweepParam::Eta => "eta",
            SweepParam::NuOverEtaG => "nu_over_etag",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "theta" => Ok(SweepParam::Theta),
            "phi" => Ok(SweepParam::Phi),
            "t" => Ok(SweepParam::Time),
            "eta" => Ok(SweepParam::Eta),
            "nu_over_etag" => Ok(SweepParam::NuOverEtaG),
            other => Err(format!(
                "unknown sweep parameter '{other}', expected theta, phi, t, eta, \
                 or nu_over_etag"
            )),
        }
    }
}

/// Range description for `sweep`: `steps` evenly spaced points from
/// `start` to `stop` inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

/// One run described as plain data, as read from a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sideband: Sideband,
    pub n: usize,
    pub m: usize,
    pub theta: f64,
    pub phi: f64,
    pub k: usize,
    pub field_dim: usize,
    pub vib_dim: usize,
    pub eta: f64,
    pub g: f64,
    pub nu: f64,
    pub omega0: f64,
    /// Cavity frequency; when unset it is derived from the sideband
    /// resonance condition.
    pub omega: Option<f64>,
    /// Pulse time for `evolve`; other subcommands use the scheduled
    /// transfer window.
    pub t: Option<f64>,
    /// ν/(ηg) ratios checked by `validate-rwa`.
    pub ratios: Vec<f64>,
    pub sweep: SweepSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sideband: Sideband::Red,
            n: 0,
            m: 0,
            theta: FRAC_PI_4,
            phi: -FRAC_PI_2,
            k: 0,
            field_dim: 8,
            vib_dim: 8,
            eta: 0.01,
            g: 100.0,
            nu: 500.0,
            omega0: 1e4,
            omega: None,
            t: None,
            ratios: vec![50.0, 200.0, 500.0],
            sweep: SweepSpec {
                param: SweepParam::Theta,
                start: 0.0,
                stop: FRAC_PI_2,
                steps: 9,
            },
        }
    }
}

impl RunConfig {
    /// Parse a flat `key = value` config on top of the defaults. `#`
    /// starts a comment; unknown keys are rejected.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
            cfg.apply(key.trim(), value.trim())
                .map_err(|e| format!("config line {}: {e}", i + 1))?;
        }
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "sideband" => self.sideband = value.parse()?,
            "n" => self.n = parse_count(value)?,
            "m" => self.m = parse_count(value)?,
            "theta" => self.theta = parse_number(value)?,
            "phi" => self.phi = parse_number(value)?,
            "k" => self.k = parse_count(value)?,
            "field_dim" => self.field_dim = parse_count(value)?,
            "vib_dim" => self.vib_dim = parse_count(value)?,
            "eta" => self.eta = parse_number(value)?,
            "g" => self.g = parse_number(value)?,
            "nu" => self.nu = parse_number(value)?,
            "omega0" => self.omega0 = parse_number(value)?,
            "omega" => self.omega = Some(parse_number(value)?),
            "t" => self.t = Some(parse_number(value)?),
            "ratios" => {
                let ratios: Vec<f64> = value
                    .split(',')
                    .map(parse_number)
                    .collect::<Result<_, _>>()?;
                if ratios.is_empty() {
                    return Err("ratios must list at least one value".into());
                }
                self.ratios = ratios;
            }
            "sweep.param" => self.sweep.param = value.parse()?,
            "sweep.start" => self.sweep.start = parse_number(value)?,
            "sweep.stop" => self.sweep.stop = parse_number(value)?,
            "sweep.steps" => self.sweep.steps = parse_count(value)?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    fn system_params(&self) -> Result<SystemParams, CliError> {
        match (self.omega, self.sideband) {
            (Some(omega), _) => SystemParams::new(self.nu, omega, self.omega0, self.g, self.eta),
            (None, Sideband::Red) => {
                SystemParams::red_resonant(self.nu, self.omega0, self.g, self.eta)
            }
            (None, Sideband::Blue) => {
                SystemParams::blue_resonant(self.nu, self.omega0, self.g, self.eta)
            }
        }
        .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Build the validated protocol description.
    pub fn protocol(&self) -> Result<ProtocolConfig, CliError> {
        let cutoffs = FockCutoffs::new(self.field_dim, self.vib_dim)
            .map_err(|e| CliError::Config(e.to_string()))?;
        ProtocolConfig::new(
            self.sideband,
            self.n,
            self.m,
            self.theta,
            self.phi,
            self.k,
            self.system_params()?,
            cutoffs,
        )
        .map_err(classify)
    }
}

/// Post-selected diagnostics of one protocol run.
struct Scored {
    g_probability: f64,
    best_target: BellTarget,
    best_fidelity: f64,
    entropy_nats: f64,
    negativity: f64,
}

/// Evolve for `t`, measure the ground state, and score the pair.
fn score_at(protocol: &ProtocolConfig, t: f64) -> Result<Scored, CliError> {
    let evolved = protocol.evolve_for(t).map_err(classify)?;
    let record = measure_qubit(&evolved, Qubit::G).map_err(classify)?;
    let mut fidelities = [(BellTarget::PhiPlus, 0.0); 4];
    for (slot, target) in fidelities.iter_mut().zip(BellTarget::ALL) {
        let reference = bell_target(protocol.cutoffs(), target).map_err(classify)?;
        let fidelity = reference
            .overlap(&record.post_state)
            .map_err(|e| CliError::Physics(e.to_string()))?
            .norm_sqr();
        *slot = (target, fidelity);
    }
    let (best_target, best_fidelity) = fidelities
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("four candidates");
    Ok(Scored {
        g_probability: record.probability,
        best_target,
        best_fidelity,
        entropy_nats: von_neumann_entropy(&partial_trace(&record.post_state, Subsystem::Field)),
        negativity: negativity(&record.post_state),
    })
}

#[derive(Serialize)]
struct FidelitiesJson {
    phi_plus: f64,
    phi_minus: f64,
    psi_plus: f64,
    psi_minus: f64,
}

impl From<[(BellTarget, f64); 4]> for FidelitiesJson {
    fn from(f: [(BellTarget, f64); 4]) -> Self {
        Self {
            phi_plus: f[0].1,
            phi_minus: f[1].1,
            psi_plus: f[2].1,
            psi_minus: f[3].1,
        }
    }
}

#[derive(Serialize)]
struct BellJson {
    sideband: String,
    n: usize,
    m: usize,
    theta: f64,
    phi: f64,
    k: usize,
    time: f64,
    g_probability: f64,
    best_target: String,
    best_fidelity: f64,
    fidelities: FidelitiesJson,
    entropy_nats: f64,
    entropy_bits: f64,
    negativity: f64,
}

/// Run the Bell protocol described by `cfg` and gather the full report.
fn build_bell_json(cfg: &RunConfig) -> Result<BellJson, CliError> {
    let protocol = cfg.protocol()?;
    let report = run_bell_protocol(&protocol).map_err(classify)?;
    let entropy_nats =
        von_neumann_entropy(&partial_trace(&report.record.post_state, Subsystem::Field));
    Ok(BellJson {
        sideband: cfg.sideband.to_string(),
        n: cfg.n,
        m: cfg.m,
        theta: cfg.theta,
        phi: cfg.phi,
        k: cfg.k,
        time: report.time,
        g_probability: report.record.probability,
        best_target: report.best_target.to_string(),
        best_fidelity: report.best_fidelity,
        fidelities: report.fidelities.into(),
        entropy_nats,
        entropy_bits: entropy_nats / LN_2,
        negativity: negativity(&report.record.post_state),
    })
}

#[derive(Serialize)]
struct SweepRowJson {
    value: f64,
    g_probability: f64,
    best_target: String,
    best_fidelity: f64,
    entropy_nats: f64,
    negativity: f64,
}

#[derive(Serialize)]
struct SweepJson {
    param: String,
    rows: Vec<SweepRowJson>,
}

/// Evenly spaced sweep grid, `start` and `stop` inclusive.
fn sweep_values(spec: &SweepSpec) -> Result<Vec<f64>, CliError> {
    if spec.steps == 0 {
        return Err(CliError::Config("sweep.steps must be at least 1".into()));
    }
    if spec.steps == 1 {
        return Ok(vec![spec.start]);
    }
    let span = spec.stop - spec.start;
    Ok((0..spec.steps)
        .map(|i| spec.start + span * i as f64 / (spec.steps - 1) as f64)
        .collect())
}

/// The config with one swept parameter replaced.
fn config_at(cfg: &RunConfig, param: SweepParam, value: f64) -> RunConfig {
    let mut c = cfg.clone();
    match param {
        SweepParam::Theta => c.theta = value,
        SweepParam::Phi => c.phi = value,
        SweepParam::Time => c.t = Some(value),
        SweepParam::Eta => c.eta = value,
        SweepParam::NuOverEtaG => {
            c.nu = value * c.eta * c.g;
            // retune the cavity so the sideband stays resonant
            c.omega = None;
        }
    }
    c
}

fn sweep_rows(cfg: &RunConfig) -> Result<Vec<SweepRowJson>, CliError> {
    let values = sweep_values(&cfg.sweep)?;
    values
        .par_iter()
        .map(|&value| {
            let point = config_at(cfg, cfg.sweep.param, value);
            let protocol = point.protocol()?;
            let t = match cfg.sweep.param {
                SweepParam::Time => value,
                _ => protocol.interaction_time(),
            };
            let scored = score_at(&protocol, t)?;
            Ok(SweepRowJson {
                value,
                g_probability: scored.g_probability,
                best_target: scored.best_target.to_string(),
                best_fidelity: scored.best_fidelity,
                entropy_nats: scored.entropy_nats,
                negativity: scored.negativity,
            })
        })
        .collect()
}

fn sweep_csv(param: SweepParam, rows: &[SweepRowJson]) -> String {
    let mut out = format!("{param},g_probability,best_fidelity,entropy_nats,negativity\n");
    for row in rows {
        out.push_str(&format!(
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}\n",
            row.value, row.g_probability, row.best_fidelity, row.entropy_nats, row.negativity,
        ));
    }
    out
}

#[derive(Serialize)]
struct RwaRowJson {
    ratio: f64,
    fidelity: f64,
    leakage: f64,
    trusted: bool,
}

#[derive(Serialize)]
struct RwaJson {
    rows: Vec<RwaRowJson>,
    non_decreasing: bool,
}

/// Compare the analytic sideband evolution against the full Hamiltonian
/// at one trap-frequency ratio ν/(ηg).
fn rwa_row(cfg: &RunConfig, ratio: f64) -> Result<RwaRowJson, CliError> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(CliError::Config(format!(
            "ratios must be positive and finite, got {ratio}"
        )));
    }
    let mut point = cfg.clone();
    point.nu = ratio * cfg.eta * cfg.g;
    // the comparison retunes the cavity at every ratio
    point.omega = None;
    let protocol = point.protocol()?;
    let h = full_hamiltonian(protocol.params(), protocol.cutoffs());
    let eigen = HermitianEigen::new(&h).map_err(|e| CliError::Physics(e.to_string()))?;
    let t0 = protocol.interaction_time();
    let initial = protocol.prepare_initial();

    // leakage is monitored along the pulse, not just at its end
    let samples = 8;
    let mut leakage = 0.0f64;
    let mut lab_frame = None;
    for i in 1..=samples {
        let t = t0 * i as f64 / samples as f64;
        let step = eigen
            .propagate(&initial, t)
            .map_err(|e| CliError::Physics(e.to_string()))?;
        leakage = leakage.max(step.leakage.max());
        if i == samples {
            lab_frame = Some(step.state);
        }
    }
    let lab_frame = lab_frame.expect("at least one sample");
    let rotating = to_interaction_picture(protocol.params(), &lab_frame, t0)
        .map_err(|e| CliError::Physics(e.to_string()))?;
    let analytic = evolve_protocol(&protocol).map_err(classify)?;
    let fidelity = inner_product(&analytic, &rotating)
        .map_err(|e| CliError::Physics(e.to_string()))?
        .norm_sqr();
    Ok(RwaRowJson {
        ratio,
        fidelity,
        leakage,
        trusted: leakage < LEAKAGE_THRESHOLD,
    })
}

fn build_rwa_json(cfg: &RunConfig) -> Result<RwaJson, CliError> {
    if cfg.ratios.is_empty() {
        return Err(CliError::Config(
            "ratios must list at least one value".into(),
        ));
    }
    let rows: Vec<RwaRowJson> = cfg
        .ratios
        .par_iter()
        .map(|&ratio| rwa_row(cfg, ratio))
        .collect::<Result<_, _>>()?;
    let non_decreasing = rows.windows(2).all(|w| w[1].fidelity >= w[0].fidelity);
    Ok(RwaJson {
        rows,
        non_decreasing,
    })
}

/// Simulate Bell-state generation for a trapped ion coupled to a cavity
/// field through a vibrational sideband.
#[derive(Parser)]
#[command(name = "ionbell", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the conditional protocol and report Bell fidelities.
    Bell(CommonArgs),
    /// Evolve the prepared state for the configured time t and dump the
    /// amplitudes.
    Evolve(CommonArgs),
    /// Tabulate the protocol outcome against one swept parameter.
    Sweep(CommonArgs),
    /// Compare the analytic sideband evolution against the full
    /// Hamiltonian over the configured ν/(ηg) ratios.
    ValidateRwa(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a key = value config file; defaults apply without one.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the data here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Data format; sweep defaults to csv, everything else to json.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

/// Parse the process arguments, run, and report failures on stderr.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bell(args) => cmd_bell(&args),
        Command::Evolve(args) => cmd_evolve(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::ValidateRwa(args) => cmd_validate_rwa(&args),
    }
}

fn load_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    match &args.config {
        None => Ok(RunConfig::default()),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            RunConfig::parse(&text).map_err(CliError::Config)
        }
    }
}

fn require_json(args: &CommonArgs, subcommand: &str) -> Result<(), CliError> {
    if args.format == Some(OutputFormat::Csv) {
        return Err(CliError::Config(format!(
            "csv output is only available for sweep, not {subcommand}"
        )));
    }
    Ok(())
}

fn write_data(args: &CommonArgs, data: &str) -> Result<(), CliError> {
    match &args.output {
        Some(path) => fs::write(path, data)?,
        None => print!("{data}"),
    }
    Ok(())
}

fn to_json_text<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

fn cmd_bell(args: &CommonArgs) -> Result<(), CliError> {
    require_json(args, "bell")?;
    let cfg = load_config(args)?;
    let report = build_bell_json(&cfg)?;
    write_data(args, &to_json_text(&report))?;
    eprintln!(
        "{} sideband from (n={}, m={}): pulse time {:.6e}, P(g) = {:.6}, \
         best target {} at fidelity {:.12}",
        report.sideband,
        report.n,
        report.m,
        report.time,
        report.g_probability,
        report.best_target,
        report.best_fidelity,
    );
    Ok(())
}

fn cmd_evolve(args: &CommonArgs) -> Result<(), CliError> {
    require_json(args, "evolve")?;
    let cfg = load_config(args)?;
    let t = cfg
        .t
        .ok_or_else(|| CliError::Config("evolve needs t = <time> in the config".into()))?;
    let protocol = cfg.protocol()?;
    let state = protocol.evolve_for(t).map_err(classify)?;
    write_data(args, &to_json_text(&StateJson::from_state(&state)))?;
    eprintln!(
        "evolved {} sideband from (n={}, m={}) for t = {:.6e}: P(g) = {:.6}, P(e) = {:.6}",
        cfg.sideband,
        cfg.n,
        cfg.m,
        t,
        state.qubit_population(Qubit::G),
        state.qubit_population(Qubit::E),
    );
    Ok(())
}

fn cmd_sweep(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = load_config(args)?;
    let rows = sweep_rows(&cfg)?;
    let data = match args.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => sweep_csv(cfg.sweep.param, &rows),
        OutputFormat::Json => to_json_text(&SweepJson {
            param: cfg.sweep.param.to_string(),
            rows,
        }),
    };
    write_data(args, &data)?;
    eprintln!(
        "swept {} over [{}, {}] in {} steps",
        cfg.sweep.param, cfg.sweep.start, cfg.sweep.stop, cfg.sweep.steps,
    );
    Ok(())
}

fn cmd_validate_rwa(args: &CommonArgs) -> Result<(), CliError> {
    require_json(args, "validate-rwa")?;
    let cfg = load_config(args)?;
    let report = build_rwa_json(&cfg)?;
    write_data(args, &to_json_text(&report))?;
    for row in &report.rows {
        eprintln!(
            "nu/(eta g) = {:>8.1}: fidelity {:.12}, leakage {:.3e} ({})",
            row.ratio,
            row.fidelity,
            row.leakage,
            if row.trusted {
                "trusted"
            } else {
                "not trusted"
            },
        );
    }
    if let Some(row) = report.rows.iter().find(|row| !row.trusted) {
        return Err(CliError::Physics(format!(
            "truncation leakage {:.3e} at nu/(eta g) = {} exceeds {LEAKAGE_THRESHOLD:.0e}; \
             raise field_dim/vib_dim",
            row.leakage, row.ratio,
        )));
    }
    if !report.non_decreasing {
        return Err(CliError::Physics(
            "sideband fidelity does not improve monotonically with nu/(eta g)".into(),
        ));
    }
    Ok(())
}
