use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use simplex_etest::harness::{
    emit_power_plot, k_grid, run_power_scenario, run_type1_experiment, write_results, ExperimentRow, Family,
    OutputFormat, Scenario, ScenarioConfig,
};
use simplex_etest::io::read_dataset_csv;
use simplex_etest::{
    euclidean_permutation_test, permutation_test, rpbt_test_with, Alpha, Combination, Error, Method, PointSet, Result,
    TestResult,
};

#[derive(Parser)]
#[command(
    name = "simplex-etest",
    version,
    about = "Energy and projection tests for compositional data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether two CSV samples share a distribution.
    Test(TestArgs),
    /// Monte Carlo size and power experiments.
    #[command(subcommand)]
    Simulate(Simulate),
}

#[derive(Args)]
struct TestArgs {
    #[arg(long)]
    file1: PathBuf,
    #[arg(long)]
    file2: PathBuf,
    #[arg(long, default_value = "alpha-ebt")]
    method: Method,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    alpha: Vec<f64>,
    #[arg(long, default_value_t = 999)]
    permutations: usize,
    #[arg(long, default_value_t = 100)]
    projections: usize,
    #[arg(long)]
    standardize: bool,
    /// Combine projection p-values with Bonferroni instead of Benjamini–Heller.
    #[arg(long)]
    bonferroni: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: OutputFormat,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,1")]
    alpha: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    reps: usize,
    #[arg(long, default_value_t = 299)]
    permutations: usize,
    #[arg(long, default_value_t = 100)]
    projections: usize,
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    standardize: bool,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Simulate {
    /// Rejection rates under the null.
    Type1 {
        #[arg(long)]
        family: Family,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Rejection rates along a grid of effect sizes k.
    Power {
        #[arg(long)]
        scenario: u8,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// start:end:step
        #[arg(long, default_value = "1:2:0.1")]
        k_grid: String,
        /// Write an SVG power plot per dimension to this path.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Serialize)]
struct TestDocument {
    #[serde(flatten)]
    result: TestResult,
    runtime_seconds: f64,
}

fn parse_alphas(values: &[f64]) -> Result<Vec<Alpha>> {
    values.iter().map(|&a| Alpha::new(a)).collect()
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidArgument(format!("k grid must be start:end:step, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    k_grid(nums[0], nums[1], nums[2])
}

fn render_test(doc: &TestDocument, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(doc)? + "\n"),
        OutputFormat::Csv => {
            let r = &doc.result;
            let mut out = String::from(
                "method,alpha,statistic,p_value,replications,seed,sample_sizes,D,standardized,runtime_seconds\n",
            );
            for i in 0..r.statistics.len() {
                let alpha = r.alphas.get(i).map(|a| format!("{a:.16e}")).unwrap_or_default();
                let sizes: Vec<String> = r.sample_sizes.iter().map(usize::to_string).collect();
                out.push_str(&format!(
                    "{},{},{:.16e},{:.16e},{},{},{},{},{},{:.6}\n",
                    r.method,
                    alpha,
                    r.statistics[i],
                    r.p_values[i],
                    r.replications,
                    r.seed,
                    sizes.join(";"),
                    r.dim,
                    r.standardized,
                    doc.runtime_seconds
                ));
            }
            Ok(out)
        }
    }
}

fn run_test(args: &TestArgs) -> Result<()> {
    let start = Instant::now();
    let x = read_dataset_csv(&args.file1)?;
    let y = read_dataset_csv(&args.file2)?;
    let result = match args.method {
        Method::AlphaEbt => permutation_test(
            &[&x, &y],
            &parse_alphas(&args.alpha)?,
            args.permutations,
            args.seed,
            args.standardize,
        )?,
        Method::Rpbt => {
            let combination = if args.bonferroni {
                Combination::Bonferroni
            } else {
                Combination::BenjaminiHeller
            };
            rpbt_test_with(&x, &y, args.projections, args.seed, combination)?
        }
        Method::EuclideanEbt => {
            let px = PointSet::new(x.as_flat().to_vec(), x.dim())?;
            let py = PointSet::new(y.as_flat().to_vec(), y.dim())?;
            euclidean_permutation_test(&[&px, &py], args.permutations, args.seed)?
        }
    };
    let doc = TestDocument {
        result,
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    let text = render_test(&doc, args.format)?;
    print!("{text}");
    if let Some(path) = &args.out {
        fs::write(path, &text)?;
    }
    Ok(())
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match workers {
        None => job(),
        Some(0) => Err(Error::InvalidArgument("--workers must be at least 1".into())),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(job),
    }
}

fn base_config(common: &Common) -> Result<ScenarioConfig> {
    Ok(ScenarioConfig {
        alphas: parse_alphas(&common.alpha)?,
        mc_reps: common.reps,
        permutations: common.permutations,
        projections: common.projections,
        level: common.level,
        seed: common.seed,
        standardize: common.standardize,
        ..ScenarioConfig::default()
    })
}

fn plot_path(base: &Path, dim: usize, many: bool) -> PathBuf {
    if !many {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("power");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("svg");
    base.with_file_name(format!("{stem}_D{dim}.{ext}"))
}

fn run_simulate(cmd: &Simulate) -> Result<()> {
    match cmd {
        Simulate::Type1 { family, dims, common } => {
            let base = base_config(common)?;
            let rows = with_workers(common.workers, || {
                let mut rows: Vec<ExperimentRow> = Vec::new();
                for &dim in dims {
                    for &n in &common.sizes {
                        let config = ScenarioConfig { dim, n, ..base.clone() };
                        rows.extend(run_type1_experiment(&config, *family)?);
                    }
                }
                Ok(rows)
            })?;
            write_results(&rows, common.format, &common.out)
        }
        Simulate::Power {
            scenario,
            dims,
            k_grid,
            plot,
            common,
        } => {
            let base = ScenarioConfig {
                scenario: Scenario::new(*scenario)?,
                k_grid: parse_grid(k_grid)?,
                ..base_config(common)?
            };
            let per_dim = with_workers(common.workers, || {
                dims.iter()
                    .map(|&dim| {
                        let mut rows = Vec::new();
                        for &n in &common.sizes {
                            let config = ScenarioConfig { dim, n, ..base.clone() };
                            rows.extend(run_power_scenario(&config)?);
                        }
                        Ok((dim, rows))
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            if let Some(path) = plot {
                for (dim, rows) in &per_dim {
                    emit_power_plot(rows, &plot_path(path, *dim, dims.len() > 1))?;
                }
            }
            let rows: Vec<ExperimentRow> = per_dim.into_iter().flat_map(|(_, r)| r).collect();
            write_results(&rows, common.format, &common.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Test(args) => run_test(args),
        Command::Simulate(cmd) => run_simulate(cmd),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numeric() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
