//! Monte Carlo size and power experiments comparing the α-EBT with the
//! random-projections test.

mod output;
mod plot;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{
    generate_covariance, kl_dirichlet, kl_mvn, sample_dirichlet, sample_simplicial_normal, CovarianceFactors,
    DirichletParams, RngStream, SimplicialNormalParams,
};
use crate::energy::{permutation_test, Method};
use crate::error::{Error, Result};
use crate::rpbt::rpbt_test;
use crate::simplex::CompositionalDataset;
use crate::transforms::Alpha;

pub use output::{read_results_csv, read_results_json, write_results, write_results_to, OutputFormat, CSV_HEADER};
pub use plot::{emit_power_plot, render_power_plot};

/// Mean of the exponential eigenvalue distribution for random covariances.
pub const EIGEN_MEAN: f64 = 0.4;
/// Concentration of the null Dirichlet, `3_D`.
pub const DIRICHLET_BASE: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Dirichlet,
    Normal,
}

impl Family {
    /// The power scenario whose k = 1 case is this family's null.
    pub fn null_scenario(self) -> Scenario {
        match self {
            Family::Dirichlet => Scenario::new(1).expect("valid"),
            Family::Normal => Scenario::new(2).expect("valid"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(Family::Dirichlet),
            "normal" | "simplicial_normal" | "simplicial-normal" => Ok(Family::Normal),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

/// One of the five power scenarios.
///
/// 1. Dir(k·3_D) vs Dir(3_D)
/// 2. MN(k·μ, Σ) vs MN(μ, Σ)
/// 3. MN(μ, Σ*) vs MN(μ, Σ)
/// 4. MN(k·μ, Σ*) vs MN(μ, Σ)
/// 5. MN(μ, Σ*) vs MN(k·μ, Σ)
///
/// with Σ* = B·diag(k·λ)·Bᵀ and the normals mapped by inverse ALR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Scenario(u8);

impl Scenario {
    pub fn new(id: u8) -> Result<Self> {
        if (1..=5).contains(&id) {
            Ok(Scenario(id))
        } else {
            Err(Error::InvalidArgument(format!("scenario must be 1..5, got {id}")))
        }
    }

    pub fn id(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Scenario {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        Scenario::new(v)
    }
}

impl From<Scenario> for u8 {
    fn from(s: Scenario) -> u8 {
        s.0
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub dim: usize,
    /// Size of each of the two samples.
    pub n: usize,
    pub k_grid: Vec<f64>,
    pub alphas: Vec<Alpha>,
    pub mc_reps: usize,
    pub permutations: usize,
    pub projections: usize,
    pub level: f64,
    pub seed: u64,
    pub standardize: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            scenario: Scenario(1),
            dim: 30,
            n: 100,
            k_grid: default_k_grid(),
            alphas: vec![Alpha::new(0.1).expect("valid"), Alpha::ONE],
            mc_reps: 500,
            permutations: 299,
            projections: 100,
            level: 0.05,
            seed: 1,
            standardize: false,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_grid.is_empty() || self.alphas.is_empty() {
            return Err(Error::InvalidArgument("k grid and alpha grid must be non-empty".into()));
        }
        if let Some(k) = self.k_grid.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
            return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
        }
        if self.mc_reps < 1 || self.permutations < 1 || self.projections < 1 {
            return Err(Error::InvalidArgument(
                "Monte Carlo reps, permutations and projections must be at least 1".into(),
            ));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "level must lie in (0, 1), got {}",
                self.level
            )));
        }
        if self.dim < 2 {
            return Err(Error::TooFewComponents(self.dim));
        }
        if self.n < 2 {
            return Err(Error::TooSmall {
                what: "sample size",
                min: 2,
                got: self.n,
            });
        }
        Ok(())
    }
}

/// k = 1.0, 1.1, …, 2.0.
pub fn default_k_grid() -> Vec<f64> {
    k_grid(1.0, 2.0, 0.1).expect("valid grid")
}

/// `start, start + step, …` up to `end` inclusive, rounded to 10 decimals.
pub fn k_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(end >= start) || !start.is_finite() || !end.is_finite() {
        return Err(Error::InvalidArgument(format!("bad grid {start}:{end}:{step}")));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e10).round() / 1e10)
        .collect())
}

/// A row of an experiment table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub scenario_id: u8,
    #[serde(rename = "D")]
    pub dim: usize,
    pub n: usize,
    pub k: f64,
    pub kl: f64,
    pub method: Method,
    pub alpha: Option<f64>,
    pub rejection_rate: f64,
    pub mc_reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub enum Generator {
    Dirichlet(DirichletParams),
    Normal(SimplicialNormalParams),
}

impl Generator {
    pub fn sample(&self, n: usize, stream: &RngStream) -> Result<CompositionalDataset> {
        match self {
            Generator::Dirichlet(p) => sample_dirichlet(p, n, stream),
            Generator::Normal(p) => sample_simplicial_normal(p, n, stream),
        }
    }

    fn same_as(&self, other: &Generator) -> bool {
        match (self, other) {
            (Generator::Dirichlet(a), Generator::Dirichlet(b)) => a == b,
            (Generator::Normal(a), Generator::Normal(b)) => a.mu() == b.mu() && a.sigma() == b.sigma(),
            _ => false,
        }
    }
}

/// The two generators of a scenario at one k, with KL(first ‖ second).
#[derive(Debug, Clone)]
pub struct GeneratorPair {
    pub first: Generator,
    pub second: Generator,
    pub kl: f64,
}

/// μ ~ N(0, I) and a random Σ for dimension `dim`, fixed by `seed` and shared
/// by every normal scenario and every k.
pub fn normal_base(dim: usize, seed: u64) -> Result<(Vec<f64>, CovarianceFactors)> {
    let stream = RngStream::new(seed).labeled("normal-base").substream(dim as u64);
    let d = dim - 1;
    let mut rng = stream.substream(0).rng();
    let mu = (0..d).map(|_| rng.sample(rand_distr::StandardNormal)).collect();
    let factors = generate_covariance(d, EIGEN_MEAN, &stream.substream(1))?;
    Ok((mu, factors))
}

pub fn scenario_pair(scenario: Scenario, dim: usize, k: f64, seed: u64) -> Result<GeneratorPair> {
    if dim < 2 {
        return Err(Error::TooFewComponents(dim));
    }
    let (first, second) = if scenario.id() == 1 {
        let base = DirichletParams::symmetric(DIRICHLET_BASE, dim)?;
        (Generator::Dirichlet(base.scaled(k)?), Generator::Dirichlet(base))
    } else {
        let (mu, factors) = normal_base(dim, seed)?;
        let k_mu: Vec<f64> = mu.iter().map(|m| k * m).collect();
        let sigma = factors.matrix();
        let sigma_star = factors.matrix_scaled(k);
        let (m1, s1, m2, s2) = match scenario.id() {
            2 => (k_mu, sigma.clone(), mu, sigma),
            3 => (mu.clone(), sigma_star, mu, sigma),
            4 => (k_mu, sigma_star, mu, sigma),
            5 => (mu, sigma_star, k_mu, sigma),
            _ => unreachable!("scenario ids are validated"),
        };
        (
            Generator::Normal(SimplicialNormalParams::new(m1, s1)?),
            Generator::Normal(SimplicialNormalParams::new(m2, s2)?),
        )
    };
    let kl = if first.same_as(&second) {
        0.0
    } else {
        match (&first, &second) {
            (Generator::Dirichlet(a), Generator::Dirichlet(b)) => kl_dirichlet(a, b)?,
            (Generator::Normal(a), Generator::Normal(b)) => {
                kl_mvn(a.mu().as_slice(), a.sigma(), b.mu().as_slice(), b.sigma())?
            }
            _ => unreachable!("both generators come from one family"),
        }
    };
    Ok(GeneratorPair { first, second, kl })
}

/// Rejection counts at one point of the k grid: RPBT first, then one per α.
fn rejection_counts(config: &ScenarioConfig, pair: &GeneratorPair, k: f64) -> Result<Vec<usize>> {
    let experiment = RngStream::new(config.seed)
        .labeled("experiment")
        .substream(config.scenario.id() as u64)
        .substream(config.dim as u64)
        .substream(config.n as u64)
        .substream(k.to_bits());
    let per_rep = (0..config.mc_reps as u64)
        .into_par_iter()
        .map(|rep| {
            let stream = experiment.substream(rep);
            let x = pair.first.sample(config.n, &stream.substream(0))?;
            let y = pair.second.sample(config.n, &stream.substream(1))?;
            let mut seeds = stream.substream(2).rng();
            let rp = rpbt_test(&x, &y, config.projections, seeds.random())?;
            let eb = permutation_test(
                &[&x, &y],
                &config.alphas,
                config.permutations,
                seeds.random(),
                config.standardize,
            )?;
            let mut out = Vec::with_capacity(1 + config.alphas.len());
            out.push(rp.p_values[0] <= config.level);
            out.extend(eb.p_values.iter().map(|p| *p <= config.level));
            Ok(out)
        })
        .collect::<Result<Vec<Vec<bool>>>>()?;
    Ok((0..1 + config.alphas.len())
        .map(|m| per_rep.iter().filter(|r| r[m]).count())
        .collect())
}

fn rows_for(config: &ScenarioConfig, k: f64, kl: f64, counts: &[usize]) -> Vec<ExperimentRow> {
    let row = |method, alpha, count: usize| ExperimentRow {
        scenario_id: config.scenario.id(),
        dim: config.dim,
        n: config.n,
        k,
        kl,
        method,
        alpha,
        rejection_rate: count as f64 / config.mc_reps as f64,
        mc_reps: config.mc_reps,
        seed: config.seed,
    };
    let mut rows = vec![row(Method::Rpbt, None, counts[0])];
    for (a, &c) in config.alphas.iter().zip(&counts[1..]) {
        rows.push(row(Method::AlphaEbt, Some(a.value()), c));
    }
    rows
}

/// Rejection rates of RPBT and the α-EBT along the k grid of a scenario.
pub fn run_power_scenario(config: &ScenarioConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &k in &config.k_grid {
        let pair = scenario_pair(config.scenario, config.dim, k, config.seed)?;
        let counts = rejection_counts(config, &pair, k)?;
        rows.extend(rows_for(config, k, pair.kl, &counts));
    }
    Ok(rows)
}

/// Empirical size: both samples from the same null distribution, a = 3_D
/// for the Dirichlet family and the shared (μ, Σ) for the normal family.
/// Rows carry the family's null scenario id with k = 1 and KL = 0.
pub fn run_type1_experiment(config: &ScenarioConfig, family: Family) -> Result<Vec<ExperimentRow>> {
    let config = ScenarioConfig {
        scenario: family.null_scenario(),
        k_grid: vec![1.0],
        ..config.clone()
    };
    run_power_scenario(&config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = default_k_grid();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[3], 1.3);
        assert_eq!(g[10], 2.0);
        assert_eq!(k_grid(1.0, 1.0, 0.5).unwrap(), vec![1.0]);
        assert!(k_grid(2.0, 1.0, 0.1).is_err());
        assert!(k_grid(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn scenario_ids() {
        assert!(Scenario::new(0).is_err());
        assert!(Scenario::new(6).is_err());
        assert_eq!(Scenario::new(5).unwrap().id(), 5);
    }

    #[test]
    fn k_one_is_null_everywhere() {
        for id in 1..=5 {
            let p = scenario_pair(Scenario::new(id).unwrap(), 6, 1.0, 3).unwrap();
            assert_eq!(p.kl, 0.0, "scenario {id}");
            assert!(p.first.same_as(&p.second));
        }
    }

    #[test]
    fn kl_increases_along_grid() {
        for id in 1..=5 {
            let mut last = -1.0;
            for k in default_k_grid() {
                let p = scenario_pair(Scenario::new(id).unwrap(), 10, k, 7).unwrap();
                assert!(p.kl > last, "scenario {id} k {k}: {} <= {last}", p.kl);
                last = p.kl;
            }
        }
    }

    #[test]
    fn scenario_one_kl_matches_closed_form() {
        let p = scenario_pair(Scenario::new(1).unwrap(), 5, 1.5, 0).unwrap();
        let a = DirichletParams::symmetric(4.5, 5).unwrap();
        let b = DirichletParams::symmetric(3.0, 5).unwrap();
        assert_eq!(p.kl, kl_dirichlet(&a, &b).unwrap());
    }

    #[test]
    fn single_rep_rates_are_binary() {
        let config = ScenarioConfig {
            dim: 3,
            n: 10,
            mc_reps: 1,
            permutations: 19,
            projections: 10,
            ..Default::default()
        };
        for row in run_type1_experiment(&config, Family::Dirichlet).unwrap() {
            assert!(row.rejection_rate == 0.0 || row.rejection_rate == 1.0);
            assert_eq!(row.k, 1.0);
            assert_eq!(row.kl, 0.0);
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        let bad = ScenarioConfig {
            level: 1.0,
            ..Default::default()
        };
        assert!(run_power_scenario(&bad).is_err());
        let bad = ScenarioConfig {
            k_grid: vec![],
            ..Default::default()
        };
        assert!(run_power_scenario(&bad).is_err());
        let bad = ScenarioConfig {
            mc_reps: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
