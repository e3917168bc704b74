//! `chandisc`: parameters, distances, classification, sweeps, verification
//! and simulation for pairs of qubit channels.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a verification did not pass.

mod output;
mod probe;
mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chandisc::discrim::success_probability;
use chandisc::verify::{self, Suite};
use chandisc::{
    brute_max_entangled, classify_channels, compute_params, helstrom, max_distance_entangled,
    max_distance_single, parse_channel, simulate, Classification, DiscrimParams, DistanceResult,
    Exec, OracleResult, Probe, QubitChannel, SearchConfig, SearchMode,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use output::{sink, to_json, RNG, SCHEMA_VERSION};

#[derive(Parser)]
#[command(
    name = "chandisc",
    version,
    about = "Qubit channel discrimination with and without side entanglement"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Pair {
    /// First channel literal, e.g. `extremal(1.2,0.3)` or `ad(0.5)`.
    channel1: String,
    /// Second channel literal.
    channel2: String,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print α, β, γ₁, γ₂, γ_m, γ_M and P.
    Params(Pair),
    /// Closed-form distances and the usefulness verdict.
    Classify(Pair),
    /// CSV over a 1- or 2-axis grid: `name=start:stop:steps` or `name=value`.
    Sweep {
        #[arg(required = true)]
        spec: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check closed forms against the brute-force oracle.
    Verify {
        /// lemma1, lemma2, tree or montecarlo.
        #[arg(long)]
        mode: Suite,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Grid points per axis of the oracle searches.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo discrimination with the Helstrom measurement.
    Simulate {
        channel1: String,
        channel2: String,
        /// Probe literal: `0`, `1`, `bloch(theta,phi)`, `schmidt(t,eta)` or
        /// `state(re,im,...)` with 2 or 4 amplitudes.
        probe: Option<String>,
        /// Use the oracle's best entangled probe.
        #[arg(long, conflicts_with = "probe")]
        optimal: bool,
        /// Oracle search for `--optimal`: restricted or full.
        #[arg(long, default_value = "restricted")]
        mode: SearchMode,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Header {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
}

impl Header {
    fn new(command: &'static str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: "chandisc",
            version: env!("CARGO_PKG_VERSION"),
            command,
        }
    }
}

#[derive(Serialize)]
struct Inputs {
    channel1: String,
    channel2: String,
}

#[derive(Serialize)]
struct ParamsRecord {
    #[serde(flatten)]
    header: Header,
    inputs: Inputs,
    params: DiscrimParams,
}

#[derive(Serialize)]
struct Success {
    single: f64,
    entangled: f64,
}

#[derive(Serialize)]
struct ClassifyRecord {
    #[serde(flatten)]
    header: Header,
    inputs: Inputs,
    params: DiscrimParams,
    single: DistanceResult,
    entangled: DistanceResult,
    classification: Classification,
    success: Success,
}

#[derive(Serialize)]
struct VerifyRecord {
    #[serde(flatten)]
    header: Header,
    rng: &'static str,
    search: SearchConfig,
    report: verify::Report,
}

#[derive(Serialize)]
struct SimulateRecord {
    #[serde(flatten)]
    header: Header,
    rng: &'static str,
    seed: u64,
    trials: u64,
    inputs: Inputs,
    probe: Probe,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleResult>,
    empirical: f64,
    theoretical: f64,
    /// `None` when the prediction has zero variance and is missed.
    z_score: Option<f64>,
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<chandisc::Error> for Fail {
    fn from(e: chandisc::Error) -> Self {
        Fail(1, e.to_string())
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail(1, format!("I/O error: {e}"))
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail(1, format!("JSON error: {e}"))
    }
}

fn pair(p: &Pair) -> Result<(QubitChannel, QubitChannel, Inputs), Fail> {
    let c1 = parse_channel(&p.channel1)?;
    let c2 = parse_channel(&p.channel2)?;
    let inputs = Inputs {
        channel1: c1.literal(),
        channel2: c2.literal(),
    };
    Ok((c1, c2, inputs))
}

fn emit<T: Serialize>(value: &T, out: Option<&std::path::Path>) -> Result<(), Fail> {
    let mut w = sink(out)?;
    w.write_all(to_json(value)?.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn search_config(grid: usize, seed: u64) -> Result<SearchConfig, Fail> {
    let cfg = SearchConfig {
        grid_points: grid,
        rng_seed: seed,
        ..SearchConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.cmd {
        Cmd::Params(p) => {
            let (c1, c2, inputs) = pair(&p)?;
            let rec = ParamsRecord {
                header: Header::new("params"),
                inputs,
                params: compute_params(&c1, &c2),
            };
            emit(&rec, p.out.as_deref())
        }
        Cmd::Classify(p) => {
            let (c1, c2, inputs) = pair(&p)?;
            let params = compute_params(&c1, &c2);
            let single = max_distance_single(&params);
            let entangled = max_distance_entangled(&params);
            let success = Success {
                single: success_probability(single.value.min(2.0))?,
                entangled: success_probability(entangled.value.min(2.0))?,
            };
            let rec = ClassifyRecord {
                header: Header::new("classify"),
                inputs,
                params,
                single,
                entangled,
                classification: classify_channels(&c1, &c2),
                success,
            };
            emit(&rec, p.out.as_deref())
        }
        Cmd::Sweep { spec, out } => {
            let spec = sweep::SweepSpec::parse(&spec)?;
            let rows = sweep::rows(&spec, Exec::Parallel)?;
            let w = sink(out.as_deref())?;
            sweep::write_csv(&spec, &rows, w)?;
            Ok(())
        }
        Cmd::Verify {
            mode,
            samples,
            seed,
            grid,
            out,
        } => {
            if samples == 0 {
                return Err(Fail(1, "--samples must be at least 1".into()));
            }
            let cfg = search_config(grid, seed)?;
            let report = verify::run(mode, samples, seed, &cfg)?;
            let passed = report.passed;
            let rec = VerifyRecord {
                header: Header::new("verify"),
                rng: RNG,
                search: cfg,
                report,
            };
            emit(&rec, out.as_deref())?;
            if passed {
                Ok(())
            } else {
                Err(Fail(2, "verification failed".into()))
            }
        }
        Cmd::Simulate {
            channel1,
            channel2,
            probe,
            optimal,
            mode,
            trials,
            seed,
            grid,
            out,
        } => {
            let p = Pair {
                channel1,
                channel2,
                out,
            };
            let (c1, c2, inputs) = pair(&p)?;
            if trials == 0 {
                return Err(Fail(1, "--trials must be at least 1".into()));
            }
            let (probe, oracle) = match (probe, optimal) {
                (_, true) => {
                    let best = brute_max_entangled(&c1, &c2, &search_config(grid, seed)?, mode)?;
                    (best.probe, Some(best))
                }
                (Some(lit), false) => (probe::parse_probe(&lit)?, None),
                (None, false) => {
                    return Err(Fail(1, "give a probe literal or --optimal".into()));
                }
            };
            let delta = match &probe {
                Probe::Single(s) => chandisc::delta_single(&c1, &c2, s),
                Probe::Entangled(s) => chandisc::delta_entangled(&c1, &c2, s),
            };
            let theoretical = success_probability(delta.trace_norm().min(2.0))?;
            let m = helstrom(&delta);
            let empirical = simulate(&c1, &c2, &probe, &m, trials, seed)?;
            let sigma = (theoretical * (1.0 - theoretical) / trials as f64).sqrt();
            let miss = empirical - theoretical;
            let z_score = if sigma > 0.0 {
                Some(miss / sigma)
            } else if miss.abs() <= 1e-12 {
                Some(0.0)
            } else {
                None
            };
            let rec = SimulateRecord {
                header: Header::new("simulate"),
                rng: RNG,
                seed,
                trials,
                inputs,
                probe,
                oracle,
                empirical,
                theoretical,
                z_score,
            };
            emit(&rec, p.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("chandisc: {msg}");
            ExitCode::from(code)
        }
    }
}
