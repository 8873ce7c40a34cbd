//! Command-line front end: JSON config in, JSON report and CSV side files out.
//!
//! Exit statuses: 0 success, 2 counterexample found, 3 critical point,
//! 4 configuration error, 1 anything else.

mod config;
mod report;

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub use config::{
    AnalysisSpec, CertifyParams, DomainSpec, ExperimentConfig, ExtremalParams, FibredEstimateParams, FibredParams,
    MapSpec, OrbitParams, Overrides, SpectrumParams, SplittingSpec,
};
pub use report::{
    AnalysisResult, CertifyResult, ExtremalResult, FibredResult, Nature, OrbitResult, PeriodicSummary, Provenance,
    Quantity, Report, SpectrumResult,
};

use crate::certify::{certify_fibred_expansion, certify_uniform_expansion, fibred_extremal_estimate, Certification};
use crate::dynamics::{MapSystem, Point};
use crate::ergodic_opt::{
    build_graph, check_minimum_principle, enumerate_periodic_orbits, estimate_from_graph, PeriodicOrbit,
    RefinementRow, SpherePartition, TransitionGraph,
};
use crate::error::Error;
use crate::measures::{empirical_from_lifted_orbit, project_measure, weak_star_distance, EmpiricalMeasure};
use crate::sphere_bundle::{growth_rate_direct, lifted_orbit, lyapunov_spectrum_estimate, LiftedOrbitRecord, SpherePoint};

use report::ResultsView;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;
pub const EXIT_CRITICAL_POINT: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

const DEFAULT_OUTPUT_DIR: &str = "lyapmin-out";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Run(#[from] Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Run(Error::CriticalPointEncountered { .. }) => EXIT_CRITICAL_POINT,
            CliError::Run(
                Error::InvalidParameter(_)
                | Error::DimensionMismatch { .. }
                | Error::DimensionUnsupported { .. }
                | Error::UnsupportedSystem(_)
                | Error::DegenerateBasis { .. },
            ) => EXIT_CONFIG,
            CliError::Run(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }

    /// Structured form written to the error stream.
    pub fn to_json(&self) -> serde_json::Value {
        let (kind, details) = match self {
            CliError::Config(_) => ("config_error", json!({})),
            CliError::Io(_) => ("io_error", json!({})),
            CliError::Run(e) => match e {
                Error::CriticalPointEncountered { step, base, norm, cell } => (
                    "critical_point_encountered",
                    json!({ "step": step, "base": base, "norm": norm, "cell": cell }),
                ),
                Error::DimensionMismatch { expected, got } => {
                    ("dimension_mismatch", json!({ "expected": expected, "got": got }))
                }
                Error::DimensionUnsupported { dim } => ("dimension_unsupported", json!({ "dim": dim })),
                Error::AcyclicGraph => ("acyclic_graph", json!({})),
                Error::UnsupportedSystem(_) => ("unsupported_system", json!({})),
                Error::SplittingInvalid { defect, separation } => {
                    ("splitting_invalid", json!({ "defect": defect, "separation": separation }))
                }
                Error::DegenerateBasis { deviation } => ("degenerate_basis", json!({ "deviation": deviation })),
                Error::SpaceMismatch => ("space_mismatch", json!({})),
                Error::LeftDomain { point } => ("left_domain", json!({ "point": point })),
                Error::NotConverged(_) => ("not_converged", json!({})),
                Error::InvalidParameter(_) => ("invalid_parameter", json!({})),
            },
        };
        json!({ "error": {
            "kind": kind,
            "exit_code": self.exit_code(),
            "message": self.to_string(),
            "details": details,
        }})
    }
}

/// Bulk tabular data produced alongside a report.
#[derive(Default)]
pub struct SideData {
    pub orbit: Option<LiftedOrbitRecord<f64>>,
    pub measure: Option<EmpiricalMeasure<f64>>,
    pub base_measure: Option<EmpiricalMeasure<f64>>,
    pub spectrum: Option<Vec<f64>>,
    pub refinement: Option<Vec<RefinementRow<f64>>>,
    pub graph: Option<TransitionGraph<f64>>,
    pub periodic_orbits: Option<Vec<PeriodicOrbit<f64>>>,
}

pub struct RunOutput {
    pub report: Report,
    pub side: SideData,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        match self.report.results.certification() {
            Some(Certification::Counterexample(_)) => EXIT_COUNTEREXAMPLE,
            _ => EXIT_OK,
        }
    }
}

fn base_point(sys: &MapSystem<f64>, x: &[f64]) -> Result<Point<f64>, CliError> {
    Ok(sys.point(x.to_vec())?)
}

fn run_orbit(sys: &MapSystem<f64>, p: &OrbitParams, side: &mut SideData) -> Result<AnalysisResult, CliError> {
    let x = base_point(sys, &p.x)?;
    let v = p.v.clone().unwrap_or_else(|| {
        let mut e = vec![0.0; sys.dim()];
        e[0] = 1.0;
        e
    });
    let start = SpherePoint::new(x, v)?;
    let rec = lifted_orbit(sys, &start, p.n)?;
    let direct = growth_rate_direct(sys, &start, p.n)?;
    let average = rec.birkhoff_average();
    let mu = empirical_from_lifted_orbit(&rec)?;
    let base = project_measure(&mu)?;
    let half = (p.n >= 2)
        .then(|| {
            let head = LiftedOrbitRecord {
                points: rec.points[..p.n / 2].to_vec(),
                phi_values: rec.phi_values[..p.n / 2].to_vec(),
            };
            weak_star_distance(&empirical_from_lifted_orbit(&head)?, &mu, p.degree)
        })
        .transpose()?;
    let final_point = crate::sphere_bundle::lift_step(sys, rec.points.last().expect("n ≥ 1"))?;
    let result = OrbitResult {
        n: p.n,
        birkhoff_average: Quantity::estimate(average),
        growth_rate_direct: Quantity::estimate(direct),
        telescoping_defect: Quantity::exact((average - direct).abs()),
        integral_phi: Quantity::estimate(mu.integrate_phi(sys)?),
        final_point,
        bundle_atoms: mu.len(),
        base_atoms: base.len(),
        weak_star_half_vs_full: half.map(Quantity::estimate),
    };
    side.orbit = Some(rec);
    side.measure = Some(mu);
    side.base_measure = Some(base);
    Ok(AnalysisResult::Orbit(result))
}

fn run_spectrum(sys: &MapSystem<f64>, p: &SpectrumParams, side: &mut SideData) -> Result<AnalysisResult, CliError> {
    let x = base_point(sys, &p.x)?;
    let ex = lyapunov_spectrum_estimate(sys, &x, p.n)?;
    let result = SpectrumResult { n: p.n, exponents: ex.iter().copied().map(Quantity::estimate).collect() };
    side.spectrum = Some(ex);
    Ok(AnalysisResult::Spectrum(result))
}

fn run_extremal(
    sys: &MapSystem<f64>,
    p: &ExtremalParams,
    seed: u64,
    side: &mut SideData,
) -> Result<AnalysisResult, CliError> {
    let mut ladder = Vec::with_capacity(p.refinement_levels);
    let mut finest_graph = None;
    for level in 0..p.refinement_levels {
        let r = p.base_resolution >> (p.refinement_levels - 1 - level);
        let part = SpherePartition::new(sys, r, p.direction_resolution)?;
        let g = build_graph(sys, &part, p.samples_per_cell, seed)?;
        ladder.push(estimate_from_graph(&g, &part, p.samples_per_cell, seed)?);
        finest_graph = Some(g);
    }
    let refinement: Vec<RefinementRow<f64>> = ladder
        .iter()
        .map(|e| RefinementRow {
            resolution: e.resolution.base_resolution,
            min_estimate: e.min_estimate,
            max_estimate: e.max_estimate,
        })
        .collect();
    let periodic = match p.max_period {
        Some(m) => {
            let orbits = enumerate_periodic_orbits(sys, m)?;
            let check = check_minimum_principle(ladder.last().expect("at least one rung"), &orbits)?;
            let summary = PeriodicSummary { max_period: m, orbit_count: orbits.len(), nature: Nature::Exact, check };
            side.periodic_orbits = Some(orbits);
            Some(summary)
        }
        None => None,
    };
    if p.dump_graph {
        side.graph = finest_graph;
    }
    side.refinement = Some(refinement.clone());
    Ok(AnalysisResult::Extremal(ExtremalResult { refinement, ladder, periodic }))
}

fn run_certify(sys: &MapSystem<f64>, p: &CertifyParams, seed: u64) -> Result<AnalysisResult, CliError> {
    let grid = crate::certify::GridSpec { seed, ..p.grid.clone() };
    let certification = certify_uniform_expansion(sys, p.lambda, p.big_n, p.n_max, &grid)?;
    Ok(AnalysisResult::Certify(CertifyResult { nature: Nature::Evidence, certification }))
}

fn run_fibred(sys: &MapSystem<f64>, p: &FibredParams, seed: u64) -> Result<AnalysisResult, CliError> {
    let sp = p.splitting.build(sys)?;
    let grid = crate::certify::GridSpec { seed, ..p.grid.clone() };
    let out = certify_fibred_expansion(sys, &sp, p.lambda, p.big_n, p.n_max, &grid, p.check)?;
    let restricted_estimate = p
        .estimate
        .as_ref()
        .map(|e| fibred_extremal_estimate(sys, &sp, e.base_resolution, e.direction_resolution, e.samples_per_cell, seed))
        .transpose()?;
    Ok(AnalysisResult::Fibred(FibredResult {
        nature: Nature::Evidence,
        splitting: out.splitting,
        certification: out.result,
        restricted_estimate,
    }))
}

/// Validates `config` and runs its analysis.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let started = Instant::now();
    let sys = config.validate().map_err(CliError::Config)?;
    let mut side = SideData::default();
    let results = match &config.analysis {
        AnalysisSpec::Orbit(p) => run_orbit(&sys, p, &mut side)?,
        AnalysisSpec::Spectrum(p) => run_spectrum(&sys, p, &mut side)?,
        AnalysisSpec::Extremal(p) => run_extremal(&sys, p, config.seed, &mut side)?,
        AnalysisSpec::Certify(p) => run_certify(&sys, p, config.seed)?,
        AnalysisSpec::Fibred(p) => run_fibred(&sys, p, config.seed)?,
    };
    let resolution_ladder = match &results {
        AnalysisResult::Extremal(e) => e.ladder.iter().map(|l| l.resolution.clone()).collect(),
        AnalysisResult::Fibred(f) => f.restricted_estimate.iter().map(|l| l.resolution.clone()).collect(),
        _ => Vec::new(),
    };
    let provenance = Provenance {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.seed,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
        resolution_ladder,
    };
    Ok(RunOutput { report: Report { config: config.clone(), results, provenance }, side })
}

fn write_json<S: serde::Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn csv_file(dir: &Path, name: &str) -> Result<BufWriter<fs::File>, CliError> {
    Ok(BufWriter::new(fs::File::create(dir.join(name))?))
}

/// Writes `results.json` (deterministic), `report.json` (with provenance)
/// and the CSV side files into `dir`. Returns the paths written.
pub fn emit(out: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut record = |name: &str| {
        let p = dir.join(name);
        written.push(p.clone());
        p
    };
    let report = &out.report;
    write_json(&record("results.json"), &ResultsView { config: &report.config, results: &report.results })?;
    write_json(&record("report.json"), report)?;
    match report.results.certification() {
        Some(Certification::Certificate(c)) => write_json(&record("certificate.json"), c)?,
        Some(Certification::Counterexample(c)) => write_json(&record("counterexample.json"), c)?,
        None => {}
    }
    let side = &out.side;
    if let Some(rec) = &side.orbit {
        rec.write_csv(csv_file(dir, "orbit.csv")?)?;
        record("orbit.csv");
    }
    if let Some(mu) = &side.measure {
        mu.write_csv(csv_file(dir, "measure.csv")?)?;
        record("measure.csv");
    }
    if let Some(mu) = &side.base_measure {
        mu.write_csv(csv_file(dir, "base_measure.csv")?)?;
        record("base_measure.csv");
    }
    if let Some(ex) = &side.spectrum {
        let mut w = csv::Writer::from_writer(csv_file(dir, "spectrum.csv")?);
        w.write_record(["index", "exponent"])?;
        for (i, e) in ex.iter().enumerate() {
            w.write_record([i.to_string(), e.to_string()])?;
        }
        w.flush()?;
        record("spectrum.csv");
    }
    if let Some(rows) = &side.refinement {
        let mut w = csv::Writer::from_writer(csv_file(dir, "refinement.csv")?);
        w.write_record(["resolution", "min_estimate", "max_estimate"])?;
        for r in rows {
            w.write_record([r.resolution.to_string(), r.min_estimate.to_string(), r.max_estimate.to_string()])?;
        }
        w.flush()?;
        record("refinement.csv");
    }
    if let Some(g) = &side.graph {
        g.write_csv(csv_file(dir, "graph_edges.csv")?)?;
        record("graph_edges.csv");
    }
    if let Some(orbits) = &side.periodic_orbits {
        let mut w = csv::Writer::from_writer(csv_file(dir, "periodic_orbits.csv")?);
        w.write_record(["period", "points", "exponents"])?;
        for o in orbits {
            let pts: Vec<String> = o
                .points
                .iter()
                .map(|p| p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            let ex: Vec<String> = o.exponents.iter().map(|e| e.to_string()).collect();
            w.write_record([o.period().to_string(), pts.join(";"), ex.join(";")])?;
        }
        w.flush()?;
        record("periodic_orbits.csv");
    }
    Ok(written)
}

#[derive(Parser, Debug)]
#[command(name = "lyapmin", version, about = "Extremal Lyapunov exponents and uniform expansion certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lifted orbit, Birkhoff averages and empirical measures.
    Orbit(Flags),
    /// Lyapunov spectrum along an orbit.
    Spectrum(Flags),
    /// Grid estimates of the extremal exponents.
    Extremal(Flags),
    /// Uniform expansion certificate or counterexample.
    Certify(Flags),
    /// Expansion restricted to a subbundle of a splitting.
    Fibred(Flags),
}

#[derive(Args, Debug)]
struct Flags {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "big-n")]
    big_n: Option<usize>,
    #[arg(long = "max-period")]
    max_period: Option<usize>,
}

impl Command {
    fn split(self) -> (&'static str, Flags) {
        match self {
            Command::Orbit(f) => ("orbit", f),
            Command::Spectrum(f) => ("spectrum", f),
            Command::Extremal(f) => ("extremal", f),
            Command::Certify(f) => ("certify", f),
            Command::Fibred(f) => ("fibred", f),
        }
    }
}

fn execute(name: &str, flags: Flags) -> Result<i32, CliError> {
    let text = fs::read_to_string(&flags.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", flags.config.display())))?;
    let mut config = ExperimentConfig::from_json(&text).map_err(CliError::Config)?;
    if config.analysis.name() != name {
        return Err(CliError::Config(format!(
            "subcommand {name} does not match the configured {} analysis",
            config.analysis.name()
        )));
    }
    let overrides = Overrides {
        seed: flags.seed,
        out: flags.out,
        resolution: flags.resolution,
        lambda: flags.lambda,
        big_n: flags.big_n,
        max_period: flags.max_period,
    };
    config.apply(&overrides).map_err(CliError::Config)?;
    let out = run(&config)?;
    let dir = config.output_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    emit(&out, &dir)?;
    Ok(out.exit_code())
}

/// Parses `args` (including the program name), runs, and returns the exit
/// status. Errors are written to stderr as JSON.
pub fn main_with_args<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return EXIT_OK;
        }
        Err(e) => return CliError::Config(e.to_string().trim_end().to_string()).report_and_code(),
    };
    let (name, flags) = cli.command.split();
    match execute(name, flags) {
        Ok(code) => code,
        Err(e) => e.report_and_code(),
    }
}

impl CliError {
    fn report_and_code(self) -> i32 {
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "{}", self.to_json());
        self.exit_code()
    }
}
