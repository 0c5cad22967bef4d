//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 pipeline not applicable,
//! 3 internal invariant violated.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use faultlattice::bridge::IdentifiedSubgraph;
use faultlattice::lattice::{sample_grid, LatticeConfig, OccupancyGrid};
use faultlattice::pipeline::run_pipeline;
use faultlattice::quantum::{contract_to_hexagonal, graph_state_from_grid, verify_subgraph};
use faultlattice::stats::output::{
    write_components_csv, write_crossing_csv, write_overhead_csv, write_runtime_csv, write_threshold_csv,
};
use faultlattice::stats::{
    crossing_probability, estimate_threshold, largest_component_scaling, overhead_curve, runtime_scaling, SweepConfig,
};
use faultlattice::width::subcritical_width_bound_check;
use faultlattice::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_APPLICABLE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

const OUT_DIR_ENV: &str = "FAULTLATTICE_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "faultlattice", version, about = "Concentrate hexagonal cluster states from faulty square lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an L x L occupancy grid.
    Generate {
        #[arg(long = "L")]
        size: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full concentration and dump every stage as JSON.
    Concentrate {
        grid: PathBuf,
        /// Seed for the simulated measurement outcomes.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check the concentration against a stabilizer simulation.
    Verify {
        grid: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Identified subgraph JSON to check instead of running the pipeline.
        #[arg(long)]
        subgraph: Option<PathBuf>,
    },
    /// Monte Carlo sweeps written as CSV.
    Sweep {
        kind: SweepKind,
        #[command(flatten)]
        flags: SweepFlags,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SweepKind {
    Crossing,
    Overhead,
    Threshold,
    Components,
    Runtime,
    Ewd,
}

#[derive(Args, Debug)]
struct SweepFlags {
    /// Sizes as a list `32,64` or a range `start:step:end`.
    #[arg(long = "L")]
    sizes: Option<String>,
    /// Probabilities as a list or a range `start:step:end`.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for trials; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct RunManifest {
    command: String,
    config: serde_json::Value,
    master_seed: u64,
    version: &'static str,
    outputs: Vec<String>,
    passed: bool,
    summary: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotApplicable(_) | Error::NoCrossing => EXIT_NOT_APPLICABLE,
            e if e.is_internal() => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type CliResult = std::result::Result<(), Failure>;

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate { size, p, seed, out } => generate(size, p, seed, out.as_deref()),
        Command::Concentrate { grid, seed, out_dir } => concentrate(&grid, seed, &out_dir_or_default(out_dir)),
        Command::Verify { grid, seed, subgraph } => verify(&grid, seed, subgraph.as_deref()),
        Command::Sweep { kind, flags } => sweep(kind, flags),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn out_dir_or_default(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."))
}

fn read_grid(path: &Path) -> std::result::Result<OccupancyGrid, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    text.parse::<OccupancyGrid>().map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize, outputs: &mut Vec<String>) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    fs::write(dir.join(name), text + "\n")?;
    outputs.push(name.to_string());
    Ok(())
}

fn generate(size: usize, p: f64, seed: u64, out: Option<&Path>) -> CliResult {
    let grid = sample_grid(LatticeConfig::new(size, p, seed)?);
    match out {
        Some(path) => {
            fs::write(path, grid.to_text())?;
            println!("occupied fraction {:.6}", grid.occupied_fraction());
        }
        None => {
            print!("{}", grid.to_text());
            eprintln!("occupied fraction {:.6}", grid.occupied_fraction());
        }
    }
    Ok(())
}

fn concentrate(path: &Path, seed: u64, dir: &Path) -> CliResult {
    let grid = read_grid(path)?;
    fs::create_dir_all(dir)?;
    let mut outputs = Vec::new();
    write_json(dir, "a_lattice.json", &grid, &mut outputs)?;
    let out = run_pipeline(&grid)?;
    write_json(
        dir,
        "b_paths.json",
        &json!({ "h_paths": out.h_paths, "v_paths": out.v_paths, "errors": out.errors }),
        &mut outputs,
    )?;
    write_json(
        dir,
        "c_bridges.json",
        &json!({ "decomposition": out.bridges, "abutments": out.abutments, "total_order": out.total_order }),
        &mut outputs,
    )?;
    write_json(dir, "d_corrected.json", &out.correction, &mut outputs)?;
    write_json(dir, "e_subgraph.json", &out.subgraph, &mut outputs)?;
    let (state, record) = contract_to_hexagonal(graph_state_from_grid(&grid), &out.subgraph, seed)?;
    let frames: Vec<_> = state.frames().iter().map(|(q, c)| json!({ "qubit": q, "frame": c })).collect();
    let edges: Vec<_> = state.graph().edges().collect();
    write_json(
        dir,
        "f_hexagonal.json",
        &json!({ "rows": out.rows(), "cols": out.cols(), "qubits": state.live_qubits(), "edges": edges, "frames": frames }),
        &mut outputs,
    )?;
    write_json(dir, "measurements.json", &record, &mut outputs)?;
    let summary = format!(
        "{} x {} hexagonal lattice from {} H-paths and {} V-paths; {} measurements",
        out.rows(),
        out.cols(),
        out.h_paths.len(),
        out.v_paths.len(),
        record.len()
    );
    let manifest = RunManifest {
        command: "concentrate".into(),
        config: json!({ "grid": path.display().to_string(), "seed": seed }),
        master_seed: seed,
        version: env!("CARGO_PKG_VERSION"),
        outputs: outputs.clone(),
        passed: true,
        summary: summary.clone(),
    };
    write_json(dir, "manifest.json", &manifest, &mut outputs)?;
    println!("{summary}");
    Ok(())
}

fn verify(path: &Path, seed: u64, subgraph: Option<&Path>) -> CliResult {
    let grid = read_grid(path)?;
    let sub: IdentifiedSubgraph = match subgraph {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        None => {
            let n = grid.occupied_count();
            if n > faultlattice::quantum::TABLEAU_QUBIT_LIMIT {
                return Err(Error::SizeLimit { size: n, limit: faultlattice::quantum::TABLEAU_QUBIT_LIMIT }.into());
            }
            run_pipeline(&grid)?.subgraph
        }
    };
    let report = verify_subgraph(&grid, &sub, seed)?;
    if report.passed {
        println!("PASS");
        return Ok(());
    }
    println!("FAIL: {}", report.reason.as_deref().unwrap_or("unknown"));
    if !report.expected.is_empty() || !report.actual.is_empty() {
        for line in report.expected.lines().filter(|l| !report.actual.lines().any(|a| a == *l)) {
            println!("- {line}");
        }
        for line in report.actual.lines().filter(|l| !report.expected.lines().any(|e| e == *l)) {
            println!("+ {line}");
        }
    }
    Err(Failure { code: EXIT_INTERNAL, message: "verification failed".into() })
}

/// Parses `a,b,c` or an inclusive range `start:step:end`.
fn parse_list(text: &str) -> std::result::Result<Vec<f64>, Failure> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| usage(format!("bad number {s:?} in {text:?}")));
    let parts: Vec<&str> = text.split(':').collect();
    match parts[..] {
        [single] => single.split(',').map(num).collect(),
        [start, step, end] => {
            let (start, step, end) = (num(start)?, num(step)?, num(end)?);
            if step.is_nan() || step <= 0.0 || end < start {
                return Err(usage(format!("bad range {text:?}")));
            }
            let count = ((end - start) / step + 1e-9).floor() as usize;
            // round to the step's precision so 0.55 + 9 * 0.05 prints as 1
            let scale = 1e9;
            Ok((0..=count).map(|i| ((start + i as f64 * step) * scale).round() / scale).collect())
        }
        _ => Err(usage(format!("bad list {text:?}; use a,b,c or start:step:end"))),
    }
}

fn parse_sizes(text: &str) -> std::result::Result<Vec<usize>, Failure> {
    parse_list(text)?
        .into_iter()
        .map(|x| {
            if x >= 1.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(usage(format!("size {x} is not a positive integer")))
            }
        })
        .collect()
}

struct Defaults {
    sizes: &'static str,
    ps: &'static str,
    trials: usize,
}

fn defaults(kind: SweepKind) -> Defaults {
    match kind {
        SweepKind::Crossing => Defaults { sizes: "30", ps: "0.3,0.9", trials: 10000 },
        SweepKind::Overhead => Defaults { sizes: "64", ps: "0.55:0.05:1.0", trials: 200 },
        SweepKind::Threshold => Defaults { sizes: "32,64,128", ps: "", trials: 10000 },
        SweepKind::Components => Defaults { sizes: "64,128,256,512", ps: "0.45", trials: 200 },
        SweepKind::Runtime => Defaults { sizes: "64,128,256,512", ps: "0.85", trials: 4 },
        SweepKind::Ewd => Defaults { sizes: "64,128,256", ps: "0.3", trials: 100 },
    }
}

fn sweep(kind: SweepKind, flags: SweepFlags) -> CliResult {
    let d = defaults(kind);
    let sizes = parse_sizes(flags.sizes.as_deref().unwrap_or(d.sizes))?;
    let ps = match (&flags.p, kind) {
        (_, SweepKind::Threshold) => Vec::new(),
        (Some(p), _) => parse_list(p)?,
        (None, _) => parse_list(d.ps)?,
    };
    let trials = flags.trials.unwrap_or(d.trials);
    let config = SweepConfig { sizes, ps, trials, master_seed: flags.seed };
    if kind != SweepKind::Threshold {
        config.validate()?;
    } else if trials == 0 {
        return Err(usage("trials must be at least 1"));
    }
    if flags.jobs == Some(0) {
        return Err(usage("--jobs must be at least 1"));
    }
    let dir = out_dir_or_default(flags.out_dir);
    fs::create_dir_all(&dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(flags.jobs.unwrap_or(0))
        .build()
        .map_err(|e| usage(e.to_string()))?;
    let (outputs, passed, summary) = pool.install(|| run_sweep(kind, &config, &dir))?;
    let manifest = RunManifest {
        command: format!("sweep {}", kind.to_possible_value().expect("named").get_name()),
        config: json!({ "L": config.sizes, "p": config.ps, "trials": config.trials, "seed": config.master_seed }),
        master_seed: config.master_seed,
        version: env!("CARGO_PKG_VERSION"),
        outputs,
        passed,
        summary: summary.clone(),
    };
    let mut files = Vec::new();
    write_json(&dir, "manifest.json", &manifest, &mut files)?;
    println!("{summary}");
    Ok(())
}

fn create(dir: &Path, name: &str) -> std::result::Result<fs::File, Failure> {
    Ok(fs::File::create(dir.join(name))?)
}

fn run_sweep(kind: SweepKind, c: &SweepConfig, dir: &Path) -> std::result::Result<(Vec<String>, bool, String), Failure> {
    let seed = c.master_seed;
    match kind {
        SweepKind::Crossing => {
            let mut pts = Vec::new();
            for &size in &c.sizes {
                for &p in &c.ps {
                    pts.push(crossing_probability(size, p, c.trials, seed)?);
                }
            }
            write_crossing_csv(create(dir, "crossing.csv")?, seed, &pts)?;
            let summary = pts
                .iter()
                .map(|x| format!("L={} p={} crossing={:.4}±{:.4}", x.size, x.p, x.estimate, x.stderr))
                .collect::<Vec<_>>()
                .join("\n");
            Ok((vec!["crossing.csv".into()], true, summary))
        }
        SweepKind::Overhead => {
            let pts = overhead_curve(c)?;
            write_overhead_csv(create(dir, "overhead.csv")?, seed, &pts)?;
            let at_one: Vec<_> = pts.iter().filter(|x| x.p == 1.0).map(|x| x.mean_ml_over_l).collect();
            let passed = at_one.iter().all(|&m| m == 1.0);
            Ok((vec!["overhead.csv".into()], passed, format!("{} points; m_L/L at p=1: {at_one:?}", pts.len())))
        }
        SweepKind::Threshold => {
            let t = estimate_threshold(&c.sizes, c.trials, seed)?;
            write_threshold_csv(create(dir, "threshold.csv")?, seed, &t)?;
            let summary = match (t.estimate, t.stderr) {
                (Some(e), Some(s)) => format!("threshold estimate {e:.5} ± {s:.5}"),
                _ => format!(
                    "single size; pseudo-threshold {:.5} only, no extrapolation",
                    t.per_size[0].p_half
                ),
            };
            Ok((vec!["threshold.csv".into()], t.estimate.is_some(), summary))
        }
        SweepKind::Components => {
            let s = largest_component_scaling(&c.ps, &c.sizes, c.trials, seed)?;
            write_components_csv(create(dir, "components.csv")?, seed, &s)?;
            let summary = s
                .fits
                .iter()
                .map(|f| format!("p={} mean largest = {:.3} + {:.3} ln N (R^2 {:.4})", f.p, f.intercept, f.slope, f.r_squared))
                .collect::<Vec<_>>()
                .join("\n");
            Ok((vec!["components.csv".into()], true, summary))
        }
        SweepKind::Runtime => {
            let s = runtime_scaling(&c.ps, &c.sizes, c.trials, seed)?;
            write_runtime_csv(create(dir, "runtime.csv")?, seed, &s)?;
            let violations: usize = s.rows.iter().map(|r| r.visit_violations).sum();
            let passed = violations == 0 && s.spread.iter().all(|&(_, x)| x <= 1.5);
            let summary = s
                .spread
                .iter()
                .map(|(p, x)| format!("p={p} work-per-site spread {x:.3}"))
                .chain([format!("visit budget violations {violations}")])
                .collect::<Vec<_>>()
                .join("\n");
            Ok((vec!["runtime.csv".into()], passed, summary))
        }
        SweepKind::Ewd => {
            let mut outputs = Vec::new();
            let mut rows = Vec::new();
            let mut passed = true;
            for &p in &c.ps {
                let r = subcritical_width_bound_check(p, &c.sizes, c.trials, seed)?;
                passed &= r.samples.iter().all(|s| s.bound_violations == 0);
                rows.push(r);
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["L", "p", "trials", "mean_s_max", "max_exact_width", "bound_violations", "log_slope", "r_squared"])
                .map_err(Error::from)?;
            for r in &rows {
                for &(size, mean) in &r.mean_s_max {
                    let of_size = r.samples.iter().filter(|s| s.size == size);
                    let max_w = of_size.clone().map(|s| s.max_exact_width).max().unwrap_or(0);
                    let viol: usize = of_size.map(|s| s.bound_violations).sum();
                    w.write_record([
                        size.to_string(),
                        r.p.to_string(),
                        c.trials.to_string(),
                        mean.to_string(),
                        max_w.to_string(),
                        viol.to_string(),
                        r.log_slope.map_or(String::new(), |x| x.to_string()),
                        r.r_squared.map_or(String::new(), |x| x.to_string()),
                    ])
                    .map_err(Error::from)?;
                }
            }
            let body = String::from_utf8(w.into_inner().map_err(|e| usage(e.to_string()))?).expect("utf8");
            fs::write(dir.join("ewd.csv"), format!("# master_seed={seed}\n{body}"))?;
            outputs.push("ewd.csv".into());
            write_json(dir, "ewd.json", &rows, &mut outputs)?;
            let summary = rows
                .iter()
                .map(|r| format!("p={} s_max vs ln N slope {:?} R^2 {:?}", r.p, r.log_slope, r.r_squared))
                .collect::<Vec<_>>()
                .join("\n");
            Ok((outputs, passed, summary))
        }
    }
}
