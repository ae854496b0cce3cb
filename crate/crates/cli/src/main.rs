//! `riskcomp`: offline evaluation commands, the HTTP service, and a client
//! for a running service.

use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use riskcomp_client::{ClientError, RiskClient};
use riskcomp_core::composer::{
    evaluate_scenario, monte_carlo_failure, rank_compositions, MonteCarloSummary, NoiseModel,
    RiskWeights,
};
use riskcomp_core::grasp::pregrasp_sweep;
use riskcomp_core::scenario::{
    load_fixture, load_scenario, parse_grid, write_report, LoadError, ReportDocument, ReportFormat,
    Scenario, SCHEMA_VERSION,
};
use riskcomp_core::{grasp::sweep_to_csv, RiskError};
use riskcomp_service::http::{serve, AppState};
use riskcomp_service::{Overrides, Session};
use serde::Serialize;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "riskcomp",
    version,
    about = "Risk assessment for composed robot actions"
)]
struct Cli {
    /// Worker threads for evaluation; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every composition of a scenario.
    Evaluate {
        scenario: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate and list compositions from lowest to highest total risk.
    Rank {
        scenario: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo failure rates for every composition.
    Montecarlo {
        scenario: PathBuf,
        #[arg(long)]
        trials: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grasp quality over a grid of pre-grasp offsets, as CSV.
    Sweep {
        fixture: PathBuf,
        /// e.g. `x=-0.015:0.015:7,y=-0.015:0.015:7`
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the HTTP service. Without `--scenario` every endpoint answers
    /// `uninitialized` until restarted with one.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Talk to a running service.
    Client {
        #[arg(long, default_value = "http://127.0.0.1:8080")]
        url: String,
        #[command(subcommand)]
        op: ClientOp,
    },
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Structured)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Structured,
    Table,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Structured => ReportFormat::Structured,
            Format::Table => ReportFormat::Table,
        }
    }
}

#[derive(Debug, Subcommand)]
enum ClientOp {
    /// Full session snapshot.
    State,
    Report {
        id: String,
    },
    /// Re-evaluate with overridden weights and/or noise.
    WhatIf {
        #[arg(long, num_args = 3, value_names = ["COLLISION", "FALL", "GRASP"])]
        weights: Option<Vec<f64>>,
        #[arg(long, num_args = 4, value_names = ["POSE_SIGMA", "COM_SIGMA", "TRIALS", "SEED"])]
        noise: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Structured)]
        format: Format,
    },
    /// Sample one outcome of a composition and append it to the history.
    Commit {
        id: String,
        #[arg(long)]
        seed: u64,
    },
    History,
    /// Distance, margin and CoM-track series of a composition.
    Series {
        id: String,
    },
}

/// Failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn runtime(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        let at = if e.field_path().is_empty() {
            String::new()
        } else {
            format!(" at `{}`", e.field_path())
        };
        Failure::validation(format!("{} error{at}: {}", e.category(), e.message()))
    }
}

impl From<RiskError> for Failure {
    fn from(e: RiskError) -> Self {
        match e {
            RiskError::Validation { .. } | RiskError::UnknownComposition(_) => {
                Failure::validation(e.to_string())
            }
            _ => Failure::runtime(e.to_string()),
        }
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        if e.is_request_error() {
            Failure::validation(e.to_string())
        } else {
            Failure::runtime(e.to_string())
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.into())
            .build_global()
        {
            eprintln!("error: worker pool: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Evaluate { scenario, output } => {
            let scenario = read_scenario(&scenario)?;
            let reports = evaluate_scenario(&scenario, &scenario.params)?;
            emit(
                output.out.as_deref(),
                &write_report(
                    &ReportDocument::new(&scenario.name, reports),
                    output.format.into(),
                ),
            )
        }
        Command::Rank { scenario, output } => {
            let scenario = read_scenario(&scenario)?;
            let ranked = rank_compositions(&evaluate_scenario(&scenario, &scenario.params)?);
            emit(
                output.out.as_deref(),
                &write_report(
                    &ReportDocument::new(&scenario.name, ranked),
                    output.format.into(),
                ),
            )
        }
        Command::Montecarlo {
            scenario,
            trials,
            seed,
            out,
        } => {
            let scenario = read_scenario(&scenario)?;
            emit(out.as_deref(), &montecarlo(&scenario, trials, seed)?)
        }
        Command::Sweep { fixture, grid, out } => {
            let fixture = load_fixture(&read(&fixture)?)?;
            let offsets = parse_grid(&grid)?;
            emit(
                out.as_deref(),
                &sweep_to_csv(&pregrasp_sweep(&fixture, &offsets)),
            )
        }
        Command::Serve {
            port,
            host,
            scenario,
        } => {
            let state = match scenario {
                Some(path) => AppState::new(Session::new(read_scenario(&path)?)?),
                None => AppState::empty(),
            };
            runtime()?.block_on(async move {
                tracing_subscriber::fmt()
                    .with_writer(std::io::stderr)
                    .init();
                let listener = tokio::net::TcpListener::bind(SocketAddr::new(host, port))
                    .await
                    .map_err(|e| Failure::runtime(format!("bind {host}:{port}: {e}")))?;
                let addr = listener
                    .local_addr()
                    .map_err(|e| Failure::runtime(e.to_string()))?;
                tracing::info!(%addr, "listening");
                serve(listener, state)
                    .await
                    .map_err(|e| Failure::runtime(e.to_string()))
            })
        }
        Command::Client { url, op } => runtime()?.block_on(client(RiskClient::new(url), op)),
    }
}

#[derive(Serialize)]
struct MonteCarloDocument<'a> {
    schema_version: u32,
    scenario: &'a str,
    trials: u32,
    seed: u64,
    compositions: Vec<MonteCarloRow<'a>>,
}

#[derive(Serialize)]
struct MonteCarloRow<'a> {
    id: &'a str,
    #[serde(flatten)]
    summary: MonteCarloSummary,
}

fn montecarlo(scenario: &Scenario, trials: u32, seed: u64) -> CliResult<String> {
    let noise = NoiseModel {
        trials,
        seed,
        ..scenario.params.noise
    };
    noise.validate()?;
    let compositions = scenario
        .compositions
        .iter()
        .map(|c| {
            Ok(MonteCarloRow {
                id: &c.id,
                summary: monte_carlo_failure(c, &scenario.obstacles, &noise)?,
            })
        })
        .collect::<Result<Vec<_>, RiskError>>()?;
    let doc = MonteCarloDocument {
        schema_version: SCHEMA_VERSION,
        scenario: &scenario.name,
        trials,
        seed,
        compositions,
    };
    Ok(to_json(&doc))
}

async fn client(client: RiskClient, op: ClientOp) -> CliResult {
    let text = match op {
        ClientOp::State => to_json(&client.state().await?),
        ClientOp::Report { id } => to_json(&client.report(&id).await?),
        ClientOp::WhatIf {
            weights,
            noise,
            format,
        } => {
            let overrides = Overrides {
                weights: weights.map(|w| RiskWeights {
                    w_collision: w[0],
                    w_fall: w[1],
                    w_grasp: w[2],
                }),
                noise: noise.map(|n| parse_noise(&n)).transpose()?,
            };
            write_report(&client.what_if(&overrides).await?, format.into())
        }
        ClientOp::Commit { id, seed } => to_json(&client.commit(&id, seed).await?),
        ClientOp::History => to_json(&client.history().await?),
        ClientOp::Series { id } => to_json(&client.series(&id).await?),
    };
    emit(None, &text)
}

fn parse_noise(values: &[String]) -> CliResult<NoiseModel> {
    let bad =
        |name: &str, v: &str| Failure::validation(format!("noise.{name}: cannot parse `{v}`"));
    Ok(NoiseModel {
        obstacle_pose_sigma: values[0]
            .parse()
            .map_err(|_| bad("obstacle_pose_sigma", &values[0]))?,
        com_sigma: values[1]
            .parse()
            .map_err(|_| bad("com_sigma", &values[1]))?,
        trials: values[2].parse().map_err(|_| bad("trials", &values[2]))?,
        seed: values[3].parse().map_err(|_| bad("seed", &values[3]))?,
    })
}

fn runtime() -> CliResult<tokio::runtime::Runtime> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::runtime(format!("async runtime: {e}")))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

fn read_scenario(path: &Path) -> CliResult<Scenario> {
    Ok(load_scenario(&read(path)?)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("wire types serialize");
    s.push('\n');
    s
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::runtime(format!("stdout: {e}")))
        }
    }
}
