use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use iceberg_core::code::{compile_with, CodeParams, CompileOptions, EncodedCircuit};
use iceberg_core::experiment::{
    breakeven_sweep, build_benchmark, compile_options, p2_grid, render_report, run_experiment, BenchmarkId, Built,
    Configuration, ExperimentReport, Preset, RunSpec, DEFAULT_RUNS, DEFAULT_SHOTS,
};
use iceberg_core::noise::{verify_fault_tolerance, NoiseModel};
use iceberg_core::passes::{align_transversal_h, physical_cost};
use iceberg_core::{run_distribution, Circuit};

/// Iceberg code compiler, noisy simulator and fault-tolerance verifier.
#[derive(Parser)]
#[command(name = "iceberg", version)]
struct Cli {
    /// Worker threads (default: one per core). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the physical circuit of a benchmark. Encoded circuits also get
    /// a `<out>.manifest.json` decoder sidecar.
    Build {
        benchmark: BenchmarkId,
        #[arg(long)]
        config: Configuration,
        #[arg(long, default_value = "paper-faithful")]
        preset: Preset,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Noisy runs of one configuration; writes a JSON array of reports.
    Run {
        benchmark: BenchmarkId,
        #[arg(long)]
        config: Configuration,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive single-fault check of a benchmark or a logical circuit
    /// file. Exits with 3 if any fault leads to an accepted wrong outcome.
    VerifyFt {
        /// Benchmark name or path to a logical circuit.
        target: String,
        #[arg(long, default_value = "full-ft")]
        preset: Preset,
        #[arg(long, default_value = "ft")]
        config: Configuration,
        /// Block size for circuit files (default: smallest that fits).
        #[arg(long)]
        m: Option<usize>,
        /// Per-location verdicts as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All three configurations over a grid of two-qubit error rates.
    Sweep {
        benchmark: BenchmarkId,
        #[arg(long, value_delimiter = ',', required = true)]
        p2: Vec<f64>,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value_t = 1)]
        run: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render report files as a table.
    Report {
        #[arg(long = "in", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        /// Show the published hardware numbers beside the simulated ones.
        #[arg(long)]
        reference: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge H columns of a logical circuit into transversal H.
    Align {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Physical gate and ancilla counts of a benchmark or logical circuit.
    Cost {
        target: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, default_value = "paper-faithful")]
    preset: Preset,
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    shots: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// `default`, `calibrated`, or `p1=..,p2=..,pmeas=..,pprep=..[,p3=..]`.
    #[arg(long, default_value = "default", value_parser = parse_noise)]
    noise: NoiseModel,
    /// Exact up to single faults instead of sampling.
    #[arg(long)]
    exact: bool,
}

impl SimArgs {
    fn spec(&self, run: usize) -> RunSpec {
        if self.exact {
            RunSpec::exact()
        } else {
            RunSpec::sampled(self.shots, self.seed.wrapping_add(run as u64 - 1))
        }
    }
}

fn parse_noise(s: &str) -> Result<NoiseModel, String> {
    match s {
        "default" => Ok(NoiseModel::default()),
        "calibrated" => Ok(NoiseModel::calibrated()),
        _ => s.parse(),
    }
}

enum Failure {
    /// Bad input: exit 2.
    Invalid(String),
    /// Verification found an offending fault: exit 3.
    NotFaultTolerant(String),
    Io(String),
}

impl Failure {
    fn invalid(e: impl ToString) -> Failure {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn write_out(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data");
    s.push('\n');
    s
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Circuit::parse(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// A benchmark name, or else a path to a logical circuit.
fn logical_target(target: &str) -> Result<(Option<BenchmarkId>, Circuit), Failure> {
    match target.parse::<BenchmarkId>() {
        Ok(id) => Ok((Some(id), id.logical())),
        Err(_) => Ok((None, read_circuit(Path::new(target))?)),
    }
}

fn build(id: BenchmarkId, config: Configuration, preset: Preset, out: Option<&Path>) -> Outcome {
    let built = build_benchmark(id, config, preset).map_err(Failure::invalid)?;
    write_out(out, &built.circuit().to_text())?;
    if let (Built::Encoded(ec), Some(path)) = (&built, out) {
        let mut sidecar = path.as_os_str().to_owned();
        sidecar.push(".manifest.json");
        write_out(Some(Path::new(&sidecar)), &json_text(&ec.manifest()))?;
    }
    Ok(())
}

fn run(id: BenchmarkId, config: Configuration, sim: &SimArgs, runs: usize, out: Option<&Path>) -> Outcome {
    if runs == 0 {
        return Err(Failure::invalid("--runs must be at least 1"));
    }
    // exact numbers do not depend on the seed, so one run says it all
    let runs = if sim.exact { 1 } else { runs };
    let reports = (1..=runs)
        .map(|r| run_experiment(id, config, sim.preset, &sim.noise, sim.spec(r), r))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::invalid)?;
    eprint!("{}", render_report(&reports, false));
    write_out(out, &json_text(&reports))
}

fn verify(target: &str, preset: Preset, config: Configuration, m: Option<usize>, out: Option<&Path>) -> Outcome {
    let mode = config.mode().ok_or_else(|| Failure::invalid("verify-ft needs an encoded configuration"))?;
    let (id, logical) = logical_target(target)?;
    let ec: EncodedCircuit = match id {
        Some(id) => {
            let mut options = compile_options(id, mode, preset);
            if let Some(m) = m {
                options = options.with_m(m);
            }
            compile_with(&logical, &options)
        }
        None => {
            let mut options = CompileOptions::new(mode);
            if let Some(m) = m {
                options = options.with_m(m);
            }
            compile_with(&logical, &options)
        }
    }
    .map_err(Failure::invalid)?;
    let ideal = run_distribution(&logical).map_err(Failure::invalid)?;
    let report = verify_fault_tolerance(&ec, &ideal).map_err(Failure::invalid)?;
    if let Some(path) = out {
        write_out(Some(path), &json_text(&report.to_json()))?;
    }
    println!(
        "{target}: {} fault locations, max p_accept_wrong = {:.3e}, {} offending",
        report.locations,
        report.max_p_accept_wrong,
        report.offending.len()
    );
    for &i in &report.offending {
        let v = &report.verdicts[i];
        println!("  {}: p_accept_wrong = {:.3e}", v.location, v.p_accept_wrong);
    }
    if report.is_fault_tolerant() {
        Ok(())
    } else {
        Err(Failure::NotFaultTolerant(format!("{target} is not fault tolerant")))
    }
}

fn sweep(id: BenchmarkId, p2: &[f64], sim: &SimArgs, run: usize, out: Option<&Path>) -> Outcome {
    let grid = p2_grid(&sim.noise, p2);
    let rows = breakeven_sweep(id, &grid, sim.preset, sim.spec(run.max(1)), run.max(1)).map_err(Failure::invalid)?;
    let reports: Vec<ExperimentReport> = rows.into_iter().flatten().collect();
    eprint!("{}", render_report(&reports, false));
    write_out(out, &json_text(&reports))
}

fn report(inputs: &[PathBuf], reference: bool, out: Option<&Path>) -> Outcome {
    let mut reports: Vec<ExperimentReport> = Vec::new();
    for path in inputs {
        let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        let batch: Vec<ExperimentReport> =
            serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
        reports.extend(batch);
    }
    if reports.is_empty() {
        return Err(Failure::invalid("no reports in the input files"));
    }
    write_out(out, &render_report(&reports, reference))
}

fn align(input: &Path, out: Option<&Path>) -> Outcome {
    let aligned = align_transversal_h(&read_circuit(input)?).map_err(Failure::invalid)?;
    write_out(out, &aligned.to_text())
}

fn cost(target: &str, m: Option<usize>, json: bool) -> Outcome {
    let (id, logical) = logical_target(target)?;
    let m = m.or(id.map(BenchmarkId::m));
    let params = match m {
        Some(m) => CodeParams::new(m),
        None => Ok(CodeParams::for_logical(logical.num_qubits())),
    }
    .map_err(Failure::invalid)?;
    let report = physical_cost(&logical, params).map_err(Failure::invalid)?;
    let text = if json { json_text(&report.to_json()) } else { format!("m = {}\n{report}", report.m) };
    write_out(None, &text)
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Build { benchmark, config, preset, out } => build(benchmark, config, preset, out.as_deref()),
        Command::Run { benchmark, config, sim, runs, out } => run(benchmark, config, &sim, runs, out.as_deref()),
        Command::VerifyFt { target, preset, config, m, out } => verify(&target, preset, config, m, out.as_deref()),
        Command::Sweep { benchmark, p2, sim, run, out } => sweep(benchmark, &p2, &sim, run, out.as_deref()),
        Command::Report { inputs, reference, out } => report(&inputs, reference, out.as_deref()),
        Command::Align { input, out } => align(&input, out.as_deref()),
        Command::Cost { target, m, json } => cost(&target, m, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("pool is configured once");
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::NotFaultTolerant(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
