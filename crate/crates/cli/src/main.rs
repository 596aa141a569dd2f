//! `qref`: build reference devices from projective designs, translate
//! between density matrices and reference probabilities, and certify
//! probability vectors against quantum state-space.
//!
//! Exit codes: 0 when the requested certificate holds, 1 when it fails,
//! 2 on usage, I/O, or schema errors. Stdout carries machine-readable JSON
//! only; diagnostics go to stderr. Every command is deterministic in its
//! inputs; no environment variables are consulted.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qref_core::designs::{is_t_design, mub_qubit, sic_qubit, stabilizer_states};
use qref_core::refdevice::{PhiSelection, ProbabilityVector};
use qref_core::schema::{DeviceFile, EnsembleFile, OperatorFile, ProbsFile, TensorFile};
use qref_core::statespace::{
    agreement_bounds, agreement_probability, renyi_entropy, triple_tensor, validity_check,
    TensorProvenance,
};
use qref_core::{Device, Ensemble, Probs};

#[derive(Parser)]
#[command(
    name = "qref",
    version,
    about = "Reference-device representation and certification of quantum states",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a catalogued design ensemble to a JSON file.
    Design(DesignArgs),
    /// Verify the t-design property of an ensemble file.
    Verify(VerifyArgs),
    /// Build a reference device from an ensemble file.
    Device(DeviceArgs),
    /// Certify a probability vector against quantum state-space.
    Check(CheckArgs),
    /// Encode a unit-trace operator as reference probabilities.
    Encode(EncodeArgs),
    /// Decode reference probabilities back into an operator.
    Decode(DecodeArgs),
    /// Export the Jordan structure tensor R_ijk = Re tr(E_i σ_j σ_k).
    Jordan(JordanArgs),
    /// Agreement probability of two or more distributions.
    Agreement(AgreementArgs),
    /// Rényi entropy of a distribution.
    Entropy(EntropyArgs),
    /// Design bounds on agreement probabilities.
    Bounds(BoundsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignKind {
    MubQubit,
    SicQubit,
    Stabilizer,
}

#[derive(Args)]
struct DesignArgs {
    /// Which catalogued ensemble to emit.
    #[arg(long, value_enum)]
    kind: DesignKind,
    /// Qubit count for the stabilizer catalogue (1 or 2).
    #[arg(long)]
    qubits: Option<usize>,
    /// Output path for the ensemble JSON.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Ensemble JSON path.
    ensemble: PathBuf,
    /// Design order to test.
    #[arg(short = 't', long = "order")]
    t: usize,
    /// Max-norm tolerance on the moment residual.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum PhiFlag {
    Auto,
    Pseudoinverse,
    ClosedForm,
}

#[derive(Args)]
struct DeviceArgs {
    /// Ensemble JSON path.
    ensemble: PathBuf,
    /// Born-matrix policy.
    #[arg(long, value_enum, default_value_t = PhiFlag::Auto)]
    phi: PhiFlag,
    /// Output path for the device JSON.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    /// Device JSON path.
    device: PathBuf,
    /// Probability-vector JSON path.
    probs: PathBuf,
    /// Demand the pure-state certificate instead of plain validity.
    #[arg(long)]
    pure: bool,
    /// Certification tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct EncodeArgs {
    /// Device JSON path.
    device: PathBuf,
    /// Operator JSON path (unit trace).
    operator: PathBuf,
    /// Output path for the probability-vector JSON.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    /// Device JSON path.
    device: PathBuf,
    /// Probability-vector JSON path.
    probs: PathBuf,
    /// Output path for the operator JSON.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum TensorMethod {
    Direct,
    FromP,
}

#[derive(Args)]
struct JordanArgs {
    /// Device JSON path.
    device: PathBuf,
    /// Evaluation route for the tensor.
    #[arg(long, value_enum, default_value_t = TensorMethod::Direct)]
    method: TensorMethod,
    /// Output path for the tensor JSON.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct AgreementArgs {
    /// Device JSON path.
    device: PathBuf,
    /// Two or more probability-vector JSON paths.
    #[arg(num_args = 2.., required = true)]
    probs: Vec<PathBuf>,
}

#[derive(Args)]
struct EntropyArgs {
    /// Device JSON path.
    device: PathBuf,
    /// Probability-vector JSON path.
    probs: PathBuf,
    /// Entropy order (real, positive, ≠ 1).
    #[arg(short = 't', long = "order")]
    t: f64,
}

#[derive(Args)]
struct BoundsArgs {
    /// Device JSON path.
    device: PathBuf,
    /// Agreement order (2 or 3).
    #[arg(short = 't', long = "order")]
    t: usize,
    /// Optional distributions to test for bound saturation: either one
    /// path (used t times) or exactly t paths.
    #[arg(num_args = 0..)]
    probs: Vec<PathBuf>,
}

/// Commands that decide a certificate report failure as exit code 1.
enum Outcome {
    Success,
    CertificateFailed,
}

/// Any error on this path is a usage/I/O/schema problem: exit code 2.
type CliResult = Result<Outcome, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::CertificateFailed) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Design(args) => cmd_design(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Device(args) => cmd_device(args),
        Command::Check(args) => cmd_check(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Jordan(args) => cmd_jordan(args),
        Command::Agreement(args) => cmd_agreement(args),
        Command::Entropy(args) => cmd_entropy(args),
        Command::Bounds(args) => cmd_bounds(args),
    }
}

fn cmd_design(args: DesignArgs) -> CliResult {
    let ensemble = match args.kind {
        DesignKind::MubQubit => mub_qubit::<f64>(),
        DesignKind::SicQubit => sic_qubit::<f64>(),
        DesignKind::Stabilizer => {
            let qubits = args
                .qubits
                .ok_or_else(|| "--qubits is required for the stabilizer catalogue".to_string())?;
            stabilizer_states::<f64>(qubits).map_err(|e| e.to_string())?
        }
    };
    write_json(&args.out, &EnsembleFile::from_ensemble(&ensemble))?;
    Ok(Outcome::Success)
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    if args.t < 1 {
        return Err("design order must be at least 1".into());
    }
    if args.tol <= 0.0 {
        return Err("tolerance must be positive".into());
    }
    let ensemble = read_ensemble(&args.ensemble)?;
    let certificate = is_t_design(&ensemble, args.t, args.tol);
    emit(&certificate)?;
    if certificate.passed {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::CertificateFailed)
    }
}

fn cmd_device(args: DeviceArgs) -> CliResult {
    let ensemble = read_ensemble(&args.ensemble)?;
    let selection = match args.phi {
        PhiFlag::Auto => PhiSelection::Auto,
        PhiFlag::Pseudoinverse => PhiSelection::Pseudoinverse,
        PhiFlag::ClosedForm => PhiSelection::ClosedForm,
    };
    match Device::from_design(&ensemble, selection) {
        Ok(device) => {
            write_json(&args.out, &DeviceFile::from_device(&device))?;
            Ok(Outcome::Success)
        }
        Err(err) => {
            // invariant failures are a negative certificate, not a usage
            // error: report them as diagnostic JSON with exit code 1
            #[derive(Serialize)]
            struct Diagnostic {
                error: String,
            }
            emit(&Diagnostic {
                error: err.to_string(),
            })?;
            eprintln!("device construction failed: {err}");
            Ok(Outcome::CertificateFailed)
        }
    }
}

fn cmd_check(args: CheckArgs) -> CliResult {
    if args.tol <= 0.0 {
        return Err("tolerance must be positive".into());
    }
    let device = read_device(&args.device)?;
    let probs = read_probs(&args.probs, &device)?;
    let report = validity_check(&device, &probs, args.tol).map_err(|e| e.to_string())?;
    emit(&report)?;
    let holds = if args.pure { report.pure } else { report.valid };
    if holds {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::CertificateFailed)
    }
}

fn cmd_encode(args: EncodeArgs) -> CliResult {
    let device = read_device(&args.device)?;
    let operator_file: OperatorFile = read_json(&args.operator)?;
    let operator = operator_file.to_operator().map_err(|e| e.to_string())?;
    let probs = device
        .probs_of_state(&operator)
        .map_err(|e| e.to_string())?;
    write_json(&args.out, &ProbsFile::from_values(probs.values()))?;
    Ok(Outcome::Success)
}

fn cmd_decode(args: DecodeArgs) -> CliResult {
    let device = read_device(&args.device)?;
    let probs = read_probs(&args.probs, &device)?;
    let operator = device
        .operator_of_probs(&probs)
        .map_err(|e| e.to_string())?;
    write_json(&args.out, &OperatorFile::from_operator(&operator))?;
    Ok(Outcome::Success)
}

fn cmd_jordan(args: JordanArgs) -> CliResult {
    let device = read_device(&args.device)?;
    let method = match args.method {
        TensorMethod::Direct => TensorProvenance::Direct,
        TensorMethod::FromP => TensorProvenance::FromP,
    };
    let tensor = triple_tensor(&device, method).map_err(|e| e.to_string())?;
    write_json(&args.out, &TensorFile::from_tensor(&tensor))?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct AgreementOutput {
    t: usize,
    agreement: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper: Option<f64>,
    saturates: Option<String>,
}

fn saturation(agreement: f64, lower: f64, upper: f64, tol: f64) -> Option<String> {
    if (agreement - lower).abs() <= tol {
        Some("lower".to_string())
    } else if (agreement - upper).abs() <= tol {
        Some("upper".to_string())
    } else {
        None
    }
}

fn cmd_agreement(args: AgreementArgs) -> CliResult {
    let device = read_device(&args.device)?;
    let vectors = args
        .probs
        .iter()
        .map(|path| read_probs(path, &device))
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&Probs> = vectors.iter().collect();
    let agreement = agreement_probability(&device, &refs).map_err(|e| e.to_string())?;
    let t = refs.len();
    let bounds = agreement_bounds::<f64>(device.dim(), device.outcomes(), t).ok();
    let output = AgreementOutput {
        t,
        agreement,
        lower: bounds.map(|b| b.0),
        upper: bounds.map(|b| b.1),
        saturates: bounds.and_then(|(lo, hi)| saturation(agreement, lo, hi, 1e-9)),
    };
    emit(&output)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct EntropyOutput {
    order: f64,
    entropy: f64,
    /// Minimum over all states, attained by pure-state distributions;
    /// reported for orders 2 and 3 on devices certifying that design order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pure_state_minimum: Option<f64>,
}

fn cmd_entropy(args: EntropyArgs) -> CliResult {
    let device = read_device(&args.device)?;
    let probs = read_probs(&args.probs, &device)?;
    let entropy = renyi_entropy(&probs, args.t).map_err(|e| e.to_string())?;
    let pure_state_minimum = [2usize, 3]
        .into_iter()
        .find(|&t| args.t == t as f64 && device.certifies_design(t))
        .and_then(|t| agreement_bounds::<f64>(device.dim(), device.outcomes(), t).ok())
        .map(|(_, upper)| upper.ln() / (1.0 - args.t));
    emit(&EntropyOutput {
        order: args.t,
        entropy,
        pure_state_minimum,
    })?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct BoundsOutput {
    t: usize,
    lower: f64,
    upper: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    saturates: Option<String>,
}

fn cmd_bounds(args: BoundsArgs) -> CliResult {
    let device = read_device(&args.device)?;
    let (lower, upper) = agreement_bounds::<f64>(device.dim(), device.outcomes(), args.t)
        .map_err(|e| e.to_string())?;
    let mut output = BoundsOutput {
        t: args.t,
        lower,
        upper,
        agreement: None,
        saturates: None,
    };
    if !args.probs.is_empty() {
        let vectors: Vec<Probs> = if args.probs.len() == 1 {
            let p = read_probs(&args.probs[0], &device)?;
            vec![p; args.t]
        } else if args.probs.len() == args.t {
            args.probs
                .iter()
                .map(|path| read_probs(path, &device))
                .collect::<Result<_, _>>()?
        } else {
            return Err(format!(
                "expected 1 or {} probability files for order {}, got {}",
                args.t,
                args.t,
                args.probs.len()
            ));
        };
        let refs: Vec<&Probs> = vectors.iter().collect();
        let agreement = agreement_probability(&device, &refs).map_err(|e| e.to_string())?;
        output.agreement = Some(agreement);
        output.saturates = saturation(agreement, lower, upper, 1e-9);
    }
    emit(&output)?;
    Ok(Outcome::Success)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| format!("cannot serialize output: {e}"))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Prints machine-readable JSON to stdout.
fn emit<T: Serialize>(value: &T) -> Result<(), String> {
    let text = serde_json::to_string(value).map_err(|e| format!("cannot serialize output: {e}"))?;
    println!("{text}");
    Ok(())
}

fn read_ensemble(path: &Path) -> Result<Ensemble, String> {
    let file: EnsembleFile = read_json(path)?;
    file.to_ensemble().map_err(|e| e.to_string())
}

fn read_device(path: &Path) -> Result<Device, String> {
    let file: DeviceFile = read_json(path)?;
    file.to_device().map_err(|e| e.to_string())
}

fn read_probs(path: &Path, device: &Device) -> Result<Probs, String> {
    let file: ProbsFile = read_json(path)?;
    let values = file.to_values().map_err(|e| e.to_string())?;
    if values.len() != device.outcomes() {
        return Err(format!(
            "probability vector has {} entries but the device has {} outcomes",
            values.len(),
            device.outcomes()
        ));
    }
    Ok(ProbabilityVector::new(values))
}
