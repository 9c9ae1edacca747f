//! Random-projections two-sample test for compositional data.
//!
//! Compositions are mapped to the unit sphere by taking square roots, both
//! samples are projected on `B` random directions, each projection is
//! compared with a two-sample Kolmogorov–Smirnov test and the `B` p-values
//! are combined with the Benjamini–Heller rule `min_i (B/i)·p_(i)`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::RngStream;
use crate::energy::{Method, TestResult};
use crate::error::{Error, Result};
use crate::points::norm;
use crate::simplex::{Composition, CompositionalDataset};

/// Elementwise square root; lands on the unit sphere since Σ x_i = 1.
pub fn sqrt_map(x: &Composition) -> Vec<f64> {
    x.values().iter().map(|v| v.sqrt()).collect()
}

/// A direction uniform on the unit sphere in ℝ^dim.
pub fn random_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Vec<f64>> {
    if dim < 2 {
        return Err(Error::TooSmall {
            what: "direction dimension",
            min: 2,
            got: dim,
        });
    }
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 0.0 {
            return Ok(v.into_iter().map(|x| x / n).collect());
        }
    }
}

/// Unit directions drawn from per-projection substreams of `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionBatch {
    pub directions: Vec<Vec<f64>>,
    pub seed: u64,
}

impl ProjectionBatch {
    pub fn draw(dim: usize, count: usize, seed: u64) -> Result<Self> {
        if count < 1 {
            return Err(Error::TooSmall {
                what: "projections",
                min: 1,
                got: count,
            });
        }
        let root = RngStream::new(seed).labeled("projection");
        let directions = (0..count as u64)
            .map(|b| random_direction(dim, &mut root.substream(b).rng()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProjectionBatch { directions, seed })
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

/// P(K > t) for the Kolmogorov distribution.
pub fn kolmogorov_survival(t: f64) -> f64 {
    if !(t > 0.0) {
        return 1.0;
    }
    let p = if t < 1.0 {
        // Jacobi-transformed series converges fast for small t
        let mut cdf = 0.0;
        let c = std::f64::consts::PI.powi(2) / (8.0 * t * t);
        for j in 1.. {
            let k = (2 * j - 1) as f64;
            let term = (-k * k * c).exp();
            cdf += term;
            if term < 1e-17 {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / t * cdf
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for j in 1.. {
            let j = j as f64;
            let term = (-2.0 * j * j * t * t).exp();
            sum += sign * term;
            sign = -sign;
            if term < 1e-12 {
                break;
            }
        }
        2.0 * sum
    };
    p.clamp(f64::MIN_POSITIVE, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

fn sorted(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::TooSmall {
            what: "sample size",
            min: 1,
            got: 0,
        });
    }
    if sample.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("sample contains NaN".into()));
    }
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(s1: &[f64], s2: &[f64]) -> Result<KsOutcome> {
    let a = sorted(s1)?;
    let b = sorted(s2)?;
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n1 - j as f64 / n2).abs());
    }
    // once either sample is exhausted the gap can only shrink
    let t = (n1 * n2 / (n1 + n2)).sqrt() * d;
    Ok(KsOutcome {
        statistic: d,
        p_value: kolmogorov_survival(t),
    })
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<KsOutcome> {
    let s = sorted(sample)?;
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(KsOutcome {
        statistic: d,
        p_value: kolmogorov_survival(n.sqrt() * d),
    })
}

fn check_pvalues(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidArgument("no p-values to combine".into()));
    }
    if let Some(bad) = p.iter().find(|v| !(**v > 0.0 && **v <= 1.0)) {
        return Err(Error::InvalidArgument(format!("p-value {bad} outside (0, 1]")));
    }
    Ok(())
}

/// Benjamini–Heller combination `min_i (B/i)·p_(i)`, capped at 1.
pub fn combine_pvalues_bh(p: &[f64]) -> Result<f64> {
    check_pvalues(p)?;
    let mut s = p.to_vec();
    s.sort_by(f64::total_cmp);
    let b = s.len() as f64;
    let m = s
        .iter()
        .enumerate()
        .map(|(i, &pi)| b / (i + 1) as f64 * pi)
        .fold(f64::INFINITY, f64::min);
    Ok(m.min(1.0))
}

/// Bonferroni combination `B·min p`, capped at 1.
pub fn combine_pvalues_bonferroni(p: &[f64]) -> Result<f64> {
    check_pvalues(p)?;
    let min = p.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((p.len() as f64 * min).min(1.0))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combination {
    #[default]
    BenjaminiHeller,
    Bonferroni,
}

impl Combination {
    pub fn combine(self, p: &[f64]) -> Result<f64> {
        match self {
            Combination::BenjaminiHeller => combine_pvalues_bh(p),
            Combination::Bonferroni => combine_pvalues_bonferroni(p),
        }
    }
}

fn sqrt_rows(data: &CompositionalDataset) -> Vec<f64> {
    data.as_flat().iter().map(|v| v.sqrt()).collect()
}

fn project(rows: &[f64], dim: usize, direction: &[f64]) -> Vec<f64> {
    rows.chunks_exact(dim)
        .map(|r| r.iter().zip(direction).map(|(a, b)| a * b).sum())
        .collect()
}

/// Per-projection KS results of a random-projections test.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionTests {
    pub outcomes: Vec<KsOutcome>,
}

/// Runs the KS test on each of `projections` random projections.
pub fn projection_tests(
    x: &CompositionalDataset,
    y: &CompositionalDataset,
    projections: usize,
    seed: u64,
) -> Result<ProjectionTests> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    let dim = x.dim();
    let batch = ProjectionBatch::draw(dim, projections, seed)?;
    let (sx, sy) = (sqrt_rows(x), sqrt_rows(y));
    let outcomes = batch
        .directions
        .par_iter()
        .map(|dir| ks_two_sample(&project(&sx, dim, dir), &project(&sy, dim, dir)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectionTests { outcomes })
}

/// Random-projections test with the Benjamini–Heller combination.
pub fn rpbt_test(
    x: &CompositionalDataset,
    y: &CompositionalDataset,
    projections: usize,
    seed: u64,
) -> Result<TestResult> {
    rpbt_test_with(x, y, projections, seed, Combination::BenjaminiHeller)
}

/// Random-projections test with a chosen p-value combination. The reported
/// statistic is the largest KS distance over the projections.
pub fn rpbt_test_with(
    x: &CompositionalDataset,
    y: &CompositionalDataset,
    projections: usize,
    seed: u64,
    combination: Combination,
) -> Result<TestResult> {
    let tests = projection_tests(x, y, projections, seed)?;
    let p: Vec<f64> = tests.outcomes.iter().map(|o| o.p_value).collect();
    let statistic = tests.outcomes.iter().map(|o| o.statistic).fold(0.0, f64::max);
    Ok(TestResult {
        method: Method::Rpbt,
        statistics: vec![statistic],
        p_values: vec![combination.combine(&p)?],
        alphas: Vec::new(),
        replications: projections,
        seed,
        sample_sizes: vec![x.len(), y.len()],
        dim: x.dim(),
        standardized: false,
    })
}
