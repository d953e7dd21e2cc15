//! `qlogic`: evaluate observational propositions, joint probability
//! distributions, and measuring processes against a JSON model file.
//!
//! Exit codes: 1 proposition syntax error, 2 model/lookup error,
//! 3 numerical failure.

mod model;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qlogic_core::spectral::Observable;
use qlogic_core::{jointdist, measurement, proplang, truth, Error, TolerancePolicy};
use serde::Serialize;

use model::MatrixJson;

#[derive(Parser)]
#[command(name = "qlogic", about = "Quantum-logic engine over JSON model files")]
struct Cli {
    /// Path to the model file.
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Named state to evaluate probabilities in.
    #[arg(long, global = true)]
    state: Option<String>,
    /// Operator-equality tolerance override.
    #[arg(long, global = true, env = "QLOGIC_TOLERANCE")]
    tolerance: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a proposition: truth projection, and probability in --state.
    Eval { prop: String },
    /// Joint probability distribution of named observables in --state.
    Jpd { names: Vec<String> },
    /// Inspect a measuring process.
    Measure {
        process: String,
        #[command(subcommand)]
        action: MeasureAction,
    },
}

#[derive(Subcommand)]
enum MeasureAction {
    /// Extract the POVM of the process.
    Povm,
    /// Run the measurement-equivalence checks for --observable in --state.
    Check {
        #[arg(long)]
        observable: String,
    },
}

/// Error with the exit code it maps to.
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn syntax(message: String) -> Self {
        CliError { code: 1, message }
    }

    fn model(message: String) -> Self {
        CliError { code: 2, message }
    }

    fn from_core(e: Error) -> Self {
        let code = match e {
            Error::UnknownObservable(_) | Error::UnknownState(_) => 2,
            _ => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct EvalOut {
    truth_projection: MatrixJson,
    rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    well_formed: Option<bool>,
}

#[derive(Serialize)]
struct AxisOut {
    name: String,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct MassOut {
    point: Vec<f64>,
    p: f64,
}

#[derive(Serialize)]
struct JpdOut {
    exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    com_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axes: Option<Vec<AxisOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    masses: Option<Vec<MassOut>>,
}

#[derive(Serialize)]
struct PovmOut {
    cuts: Vec<f64>,
    operators: Vec<MatrixJson>,
}

#[derive(Serialize)]
struct CheckOut {
    measures: bool,
    weak: bool,
    bsf: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(json) => {
            println!("{json}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn emit<T: Serialize>(value: &T, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string(value),
        OutputFormat::Pretty => serde_json::to_string_pretty(value),
    }
    .expect("serializable output")
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let tol = match cli.tolerance {
        Some(eps) => {
            let t = TolerancePolicy::with_op_eq(eps);
            t.validate()
                .map_err(|_| CliError::model(format!("invalid tolerance {eps}")))?;
            t
        }
        None => TolerancePolicy::default(),
    };
    let path = cli
        .model
        .as_deref()
        .ok_or_else(|| CliError::model("missing --model PATH".into()))?;
    let loaded = model::load(path, tol)?;

    match &cli.command {
        Command::Eval { prop } => cmd_eval(cli, &loaded, prop),
        Command::Jpd { names } => cmd_jpd(cli, &loaded, names),
        Command::Measure { process, action } => cmd_measure(cli, &loaded, process, action),
    }
}

fn state_name(cli: &Cli) -> Result<&str, CliError> {
    cli.state
        .as_deref()
        .ok_or_else(|| CliError::model("missing --state NAME".into()))
}

fn observable<'a>(loaded: &'a model::LoadedModel, name: &str) -> Result<&'a Observable, CliError> {
    loaded.model.observable(name).map_err(CliError::from_core)
}

fn cmd_eval(cli: &Cli, loaded: &model::LoadedModel, prop: &str) -> Result<String, CliError> {
    let ast = proplang::parse(prop).map_err(|e| CliError::syntax(e.to_string()))?;
    let truth = truth::truth_value(&ast, &loaded.model).map_err(CliError::from_core)?;
    let mut out = EvalOut {
        truth_projection: MatrixJson::from_matrix(truth.matrix()),
        rank: truth.rank(),
        probability: None,
        holds: None,
        well_formed: None,
    };
    if let Some(state) = cli.state.as_deref() {
        out.probability =
            Some(truth::probability(&ast, &loaded.model, state).map_err(CliError::from_core)?);
        out.holds = Some(truth::holds(&ast, &loaded.model, state).map_err(CliError::from_core)?);
        out.well_formed =
            Some(truth::well_formed(&ast, &loaded.model, state).map_err(CliError::from_core)?);
    }
    Ok(emit(&out, cli.output))
}

fn cmd_jpd(cli: &Cli, loaded: &model::LoadedModel, names: &[String]) -> Result<String, CliError> {
    if names.is_empty() {
        return Err(CliError::model(
            "jpd needs at least one observable name".into(),
        ));
    }
    let state = state_name(cli)?;
    let rho = loaded.model.state(state).map_err(CliError::from_core)?;
    let named: Vec<(&str, &Observable)> = names
        .iter()
        .map(|n| Ok((n.as_str(), observable(loaded, n)?)))
        .collect::<Result<_, CliError>>()?;
    let tol = loaded.model.tolerance();

    let xs: Vec<&Observable> = named.iter().map(|(_, x)| *x).collect();
    if !jointdist::jpd_exists(&xs, rho, tol).map_err(CliError::from_core)? {
        let com = truth::joint_projection(&xs, tol).map_err(CliError::from_core)?;
        let p = com.matrix().mul(rho).trace().re.clamp(0.0, 1.0);
        let out = JpdOut {
            exists: false,
            com_probability: Some(p),
            axes: None,
            masses: None,
        };
        return Ok(emit(&out, cli.output));
    }

    let dist = jointdist::jpd(&named, rho, tol).map_err(CliError::from_core)?;
    let out = JpdOut {
        exists: true,
        com_probability: None,
        axes: Some(
            dist.axes()
                .iter()
                .map(|(name, values)| AxisOut {
                    name: name.clone(),
                    values: values.clone(),
                })
                .collect(),
        ),
        masses: Some(
            dist.masses()
                .iter()
                .map(|(point, p)| MassOut {
                    point: point.clone(),
                    p: *p,
                })
                .collect(),
        ),
    };
    Ok(emit(&out, cli.output))
}

fn cmd_measure(
    cli: &Cli,
    loaded: &model::LoadedModel,
    process: &str,
    action: &MeasureAction,
) -> Result<String, CliError> {
    let mp = loaded
        .processes
        .get(process)
        .ok_or_else(|| CliError::model(format!("unknown process '{process}'")))?;
    let tol = loaded.model.tolerance();
    match action {
        MeasureAction::Povm => {
            let pi = measurement::povm(mp, tol).map_err(CliError::from_core)?;
            let out = PovmOut {
                cuts: pi.cut_points().to_vec(),
                operators: pi.operators().iter().map(MatrixJson::from_matrix).collect(),
            };
            Ok(emit(&out, cli.output))
        }
        MeasureAction::Check { observable: name } => {
            let a = observable(loaded, name)?;
            let state = state_name(cli)?;
            let rho = loaded.model.state(state).map_err(CliError::from_core)?;
            let report =
                measurement::equivalence_suite(mp, a, rho, tol).map_err(CliError::from_core)?;
            let out = CheckOut {
                measures: report.measures,
                weak: report.weak,
                bsf: report.bsf,
            };
            Ok(emit(&out, cli.output))
        }
    }
}
