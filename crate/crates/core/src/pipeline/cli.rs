use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use nalgebra::Vector3;
use serde_json::{json, Value};

use super::{analyze, noise_threshold_with, table1, temperature_thresholds, AnalysisOptions, Criterion, ScanOptions,
    StateSpec, SCHEMA_VERSION, TABLE1_CASES};
use crate::error::SpinSqError;
use crate::measurement::{estimate_moment_set, simulate_population_measurement};
use crate::polytope;
use crate::spin::{Axis, HalfInt};
use crate::states::{self, default_guard, EnsembleShape, QuantumState};

const STATE_HELP: &str = "State description NAME:KEY=VAL,... with NAME one of coherent (j, N, dir), \
dicke (j, N, lambda), singlet (j, N, variant), mixed (j, N), thermal (j, N, H=bes|h5, T), \
ground (j, N, H), psi_alpha (N, alpha), extremal (j, N, J, vertex). Any state takes noise=p. \
Values with commas continue after the key, e.g. dir=0,0,1.";

#[derive(Debug, Parser)]
#[command(name = "spinsq", version, about = "Entanglement conditions on collective spin moments")]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON result to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Largest allowed Hilbert-space dimension (default: $SPINSQ_GUARD_DIM or 65536).
    #[arg(long = "guard-dim", global = true, value_name = "D")]
    guard_dim: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct StateArgs {
    #[arg(long, help = STATE_HELP, conflicts_with = "state_file", required_unless_present = "state_file")]
    state: Option<String>,
    /// State saved as JSON.
    #[arg(long = "state-file", value_name = "PATH")]
    state_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moments, all conditions, squeezing parameters and PPT checks.
    Analyze {
        #[command(flatten)]
        state: StateArgs,
        /// Random Hermitian operators tried on the two-body state.
        #[arg(long, default_value_t = 200)]
        witness_samples: usize,
    },
    /// White-noise weight up to which a condition keeps flagging the state.
    ScanNoise {
        #[command(flatten)]
        state: StateArgs,
        /// Record name, family (betosp), "any" or "npt".
        #[arg(long, default_value = "any")]
        criterion: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Temperatures below which the thermal state is detected and NPT.
    ScanTemperature {
        /// bes (J²) or h5.
        #[arg(long = "H", default_value = "bes")]
        h: String,
        #[arg(long = "j", default_value = "1")]
        j: String,
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t_min: f64,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
    },
    /// Vertices and a sampled facet mesh as CSV.
    Polytope {
        #[arg(long = "j")]
        j: String,
        #[arg(long = "N")]
        n: usize,
        /// Mean spin J_x,J_y,J_z.
        #[arg(long = "J", default_value = "0,0,0", allow_hyphen_values = true)]
        jvec: String,
        #[arg(long, default_value_t = 10)]
        resolution: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Simulated population readout, one CSV row per shot.
    Measure {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "z")]
        axis: String,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Reference moments of the singlet, completely mixed and Dicke states.
    Table1 {
        /// Cases as j,N; may repeat. Defaults to (1/2,4), (1,2), (1,3).
        #[arg(long = "case", value_name = "j,N")]
        cases: Vec<String>,
    },
}

/// Runs the command line with the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Exit codes: 0 success, 2 usage error, 3 dimension guard exceeded,
/// 1 anything else.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        // reader went away, e.g. `| head`
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            match e.downcast_ref::<SpinSqError>() {
                Some(s) if s.is_capacity() => 3,
                Some(SpinSqError::Parse(_)) => 2,
                _ => 1,
            }
        }
    }
}

fn load_state(args: &StateArgs, guard: usize) -> anyhow::Result<QuantumState> {
    if let Some(path) = &args.state_file {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let st = QuantumState::from_json(&text)?;
        // re-check the guard for the loaded shape
        EnsembleShape::with_guard(st.shape().n(), st.shape().j(), guard)?;
        return Ok(st);
    }
    let spec = args.state.as_deref().expect("clap enforces one of --state/--state-file");
    Ok(StateSpec::parse(spec)?.build(guard)?)
}

fn parse_shape(j: &str, n: usize, guard: usize) -> anyhow::Result<EnsembleShape> {
    let j: HalfInt = j.parse()?;
    Ok(EnsembleShape::with_guard(n, j, guard)?)
}

fn parse_vector(text: &str) -> anyhow::Result<Vector3<f64>> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| SpinSqError::Parse(format!("'{text}' is not a list of numbers")))?;
    match parts[..] {
        [x, y, z] => Ok(Vector3::new(x, y, z)),
        _ => Err(SpinSqError::Parse(format!("expected three components, got '{text}'")).into()),
    }
}

fn emit_json(cli: &Cli, out: &mut dyn Write, body: Value, print: bool) -> anyhow::Result<()> {
    let mut doc = json!({ "schema": SCHEMA_VERSION });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    let text = serde_json::to_string_pretty(&doc)?;
    if let Some(path) = &cli.json {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    if print {
        writeln!(out, "{text}")?;
    }
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    let guard = cli.guard_dim.unwrap_or_else(default_guard);
    match &cli.command {
        Command::Analyze { state, witness_samples } => {
            let st = load_state(state, guard)?;
            let opts = AnalysisOptions {
                witness_samples: *witness_samples,
                seed: cli.seed,
                ..AnalysisOptions::default()
            };
            let rep = analyze(&st, &opts)?;
            let mut body = serde_json::to_value(&rep)?;
            body["command"] = json!("analyze");
            body["state"] = json!(state.state.clone().unwrap_or_default());
            emit_json(cli, out, body, true)
        }
        Command::ScanNoise { state, criterion, tol } => {
            let st = load_state(state, guard)?;
            let crit: Criterion = criterion.parse()?;
            let opts = ScanOptions {
                tol: *tol,
                ..ScanOptions::noise()
            };
            let res = noise_threshold_with(&st, &crit, &opts)?;
            emit_json(cli, out, json!({ "command": "scan-noise", "result": res }), true)
        }
        Command::ScanTemperature { h, j, n, t_min, t_max } => {
            let shape = parse_shape(j, *n, guard)?;
            let ham = match h.as_str() {
                "bes" => states::total_spin_squared(&shape)?,
                "h5" => states::h5_hamiltonian(&shape)?,
                other => return Err(SpinSqError::Parse(format!("unknown Hamiltonian '{other}'")).into()),
            };
            let res = temperature_thresholds(&ham, shape, (*t_min, *t_max))?;
            emit_json(
                cli,
                out,
                json!({
                    "command": "scan-temperature",
                    "H": h,
                    "j": shape.j().to_string(),
                    "N": shape.n(),
                    "T_s": res.t_s.threshold,
                    "T_ppt": res.t_ppt.threshold,
                    "scans": res,
                }),
                true,
            )
        }
        Command::Polytope { j, n, jvec, resolution, csv } => {
            let shape = parse_shape(j, *n, usize::MAX)?;
            let v = polytope::vertices(shape, parse_vector(jvec)?)?;
            match csv {
                Some(path) => {
                    let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    polytope::write_csv(&v, *resolution, f)?;
                }
                None => polytope::write_csv(&v, *resolution, &mut *out)?,
            }
            emit_json(cli, out, json!({ "command": "polytope", "vertices": v }), csv.is_some())
        }
        Command::Measure { state, axis, shots, csv } => {
            let st = load_state(state, guard)?;
            let axis: Axis = axis.parse()?;
            let rec = simulate_population_measurement(&st, axis, *shots, cli.seed)?;
            match csv {
                Some(path) => {
                    let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    rec.write_csv(f)?;
                }
                None => rec.write_csv(&mut *out)?,
            }
            let estimates = if *shots >= 2 { Some(estimate_moment_set(&st, *shots, cli.seed)?) } else { None };
            emit_json(
                cli,
                out,
                json!({ "command": "measure", "axis": axis, "shots": shots, "seed": cli.seed, "estimates": estimates }),
                csv.is_some(),
            )
        }
        Command::Table1 { cases } => {
            let parsed: Vec<(i32, usize)> = if cases.is_empty() {
                TABLE1_CASES.to_vec()
            } else {
                cases
                    .iter()
                    .map(|c| {
                        let (j, n) = c
                            .split_once(',')
                            .ok_or_else(|| SpinSqError::Parse(format!("case '{c}' is not j,N")))?;
                        let j: HalfInt = j.parse()?;
                        let n: usize =
                            n.trim().parse().map_err(|_| SpinSqError::Parse(format!("case '{c}' is not j,N")))?;
                        Ok((j.twice(), n))
                    })
                    .collect::<Result<_, SpinSqError>>()?
            };
            let rows = table1(&parsed, guard)?;
            emit_json(cli, out, json!({ "command": "table1", "rows": rows }), true)
        }
    }
}
