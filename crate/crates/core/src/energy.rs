//! Energy statistics and the permutation test for equality of
//! distributions, on Euclidean data or on compositions under the α-metric.
//!
//! Block sums of distances are accumulated in 64-bit fixed point with a
//! power-of-two scale chosen from the largest entry. Integer addition is
//! associative, so a statistic depends only on the multisets of distances in
//! each block: reordering rows, or evaluating a permutation that reproduces
//! the observed partition, gives bit-identical values and ties are exact.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::points::{euclidean_distances, DistanceMatrix, PointSet};
use crate::simplex::CompositionalDataset;
use crate::transforms::{
    alpha_transform_dataset, pairwise_distance_matrix, self_distance_matrix, standardize_columns, Alpha,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    AlphaEbt,
    EuclideanEbt,
    Rpbt,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::AlphaEbt => "alpha_ebt",
            Method::EuclideanEbt => "euclidean_ebt",
            Method::Rpbt => "rpbt",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha_ebt" | "alpha-ebt" => Ok(Method::AlphaEbt),
            "euclidean_ebt" | "euclidean-ebt" => Ok(Method::EuclideanEbt),
            "rpbt" => Ok(Method::Rpbt),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// Outcome of a test: one statistic and p-value per α for the energy
/// tests, a single entry for the others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: Method,
    pub statistics: Vec<f64>,
    pub p_values: Vec<f64>,
    /// Empty unless `method` is `AlphaEbt`.
    pub alphas: Vec<f64>,
    /// Permutations for the energy tests, projections for RPBT.
    pub replications: usize,
    pub seed: u64,
    pub sample_sizes: Vec<usize>,
    pub dim: usize,
    pub standardized: bool,
}

/// Fixed-point scale for summing `count` values no larger than `max`.
fn fixed_scale(max: f64, count: usize) -> f64 {
    if !(max > 0.0) {
        return 1.0;
    }
    let max_exp = max.log2().ceil() as i32;
    let count_exp = (count.max(1) as f64).log2().ceil() as i32;
    let shift = (61 - max_exp - count_exp).clamp(-1000, 1000);
    2f64.powi(shift)
}

fn quantize(v: f64, scale: f64) -> i64 {
    (v * scale).round() as i64
}

fn fixed_sum(values: &[f64], scale: f64) -> i64 {
    values.iter().map(|&v| quantize(v, scale)).sum()
}

fn max_entry(m: &[f64]) -> f64 {
    m.iter().fold(0.0, |a, &b| if b > a { b } else { a })
}

/// Two-sample energy combination from block sums (Σ over ordered pairs).
fn combine(n1: usize, n2: usize, between: f64, within_a: f64, within_b: f64) -> f64 {
    let (n1, n2) = (n1 as f64, n2 as f64);
    n1 * n2 / (n1 + n2) * (2.0 * between / (n1 * n2) - within_a / (n1 * n1) - within_b / (n2 * n2))
}

/// The e-distance between two samples given their three distance blocks.
pub fn e_distance(between: &DistanceMatrix, within_a: &DistanceMatrix, within_b: &DistanceMatrix) -> Result<f64> {
    let (n1, n2) = (between.rows(), between.cols());
    if n1 < 1 || n2 < 1 {
        return Err(Error::TooSmall {
            what: "sample size",
            min: 1,
            got: n1.min(n2),
        });
    }
    if within_a.rows() != n1 || within_a.cols() != n1 {
        return Err(Error::DimensionMismatch {
            expected: n1,
            found: within_a.rows(),
        });
    }
    if within_b.rows() != n2 || within_b.cols() != n2 {
        return Err(Error::DimensionMismatch {
            expected: n2,
            found: within_b.rows(),
        });
    }
    let max = max_entry(between.as_flat())
        .max(max_entry(within_a.as_flat()))
        .max(max_entry(within_b.as_flat()));
    let scale = fixed_scale(max, (n1 + n2) * (n1 + n2));
    let s_ab = fixed_sum(between.as_flat(), scale) as f64 / scale;
    let s_aa = fixed_sum(within_a.as_flat(), scale) as f64 / scale;
    let s_bb = fixed_sum(within_b.as_flat(), scale) as f64 / scale;
    Ok(combine(n1, n2, s_ab, s_aa, s_bb))
}

/// Two-sample energy statistic on Euclidean data.
pub fn energy_statistic_euclidean(x: &PointSet, y: &PointSet) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    e_distance(
        &euclidean_distances(x, y)?,
        &euclidean_distances(x, x)?,
        &euclidean_distances(y, y)?,
    )
}

fn check_same_dim(datasets: &[&CompositionalDataset]) -> Result<usize> {
    let dim = datasets.first().map(|d| d.dim()).unwrap_or(0);
    for d in datasets {
        if d.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d.dim(),
            });
        }
        if d.is_empty() {
            return Err(Error::TooSmall {
                what: "sample size",
                min: 1,
                got: 0,
            });
        }
    }
    Ok(dim)
}

/// Standardized α-transformed pooled rows.
fn standardized_pool(datasets: &[&CompositionalDataset], alpha: Alpha) -> Result<PointSet> {
    let pooled = CompositionalDataset::concat(datasets)?;
    standardize_columns(&alpha_transform_dataset(&pooled, alpha)?)
}

/// Sub-matrix of a square pooled matrix.
fn block(m: &DistanceMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> DistanceMatrix {
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for i in rows.clone() {
        data.extend_from_slice(&m.as_flat()[i * m.cols() + cols.start..i * m.cols() + cols.end]);
    }
    DistanceMatrix::new(data, rows.len(), cols.len()).expect("block shape")
}

/// The α-EBT statistic between two compositional samples.
///
/// With `standardize`, the α-transformed pooled rows are standardized
/// column-wise before Euclidean distances are taken.
pub fn alpha_energy_statistic(
    x: &CompositionalDataset,
    y: &CompositionalDataset,
    alpha: Alpha,
    standardize: bool,
) -> Result<f64> {
    check_same_dim(&[x, y])?;
    alpha.check(x.has_zeros() || y.has_zeros())?;
    if standardize {
        let pooled = standardized_pool(&[x, y], alpha)?;
        let full = euclidean_distances(&pooled, &pooled)?;
        let (n1, n) = (x.len(), pooled.len());
        return e_distance(
            &block(&full, 0..n1, n1..n),
            &block(&full, 0..n1, 0..n1),
            &block(&full, n1..n, n1..n),
        );
    }
    e_distance(
        &pairwise_distance_matrix(x, y, alpha)?,
        &self_distance_matrix(x, alpha)?,
        &self_distance_matrix(y, alpha)?,
    )
}

/// Sum of the two-sample statistics over all unordered pairs of samples.
pub fn k_sample_statistic(datasets: &[&CompositionalDataset], alpha: Alpha, standardize: bool) -> Result<f64> {
    if datasets.len() < 2 {
        return Err(Error::TooSmall {
            what: "number of samples",
            min: 2,
            got: datasets.len(),
        });
    }
    check_same_dim(datasets)?;
    let mut total = 0.0;
    if standardize {
        // standardization uses all k samples pooled, as in the permutation test
        let pooled = standardized_pool(datasets, alpha)?;
        let d = pooled.dim();
        let mut parts = Vec::with_capacity(datasets.len());
        let mut start = 0;
        for ds in datasets {
            let end = start + ds.len() * d;
            parts.push(PointSet::new(pooled.as_flat()[start..end].to_vec(), d)?);
            start = end;
        }
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                total += energy_statistic_euclidean(&parts[i], &parts[j])?;
            }
        }
        return Ok(total);
    }
    for i in 0..datasets.len() {
        for j in i + 1..datasets.len() {
            total += alpha_energy_statistic(datasets[i], datasets[j], alpha, false)?;
        }
    }
    Ok(total)
}

/// Pooled distance matrix in fixed point, ready for relabelling.
struct PooledDistances {
    n: usize,
    data: Vec<i64>,
    scale: f64,
    total: i64,
}

impl PooledDistances {
    fn new(m: &DistanceMatrix) -> Self {
        let n = m.rows();
        let scale = fixed_scale(max_entry(m.as_flat()), n * n);
        let data: Vec<i64> = m.as_flat().iter().map(|&v| quantize(v, scale)).collect();
        let total = data.iter().sum();
        PooledDistances { n, data, scale, total }
    }

    /// Σ over ordered pairs within `idx`.
    fn within(&self, idx: &[usize]) -> i64 {
        let mut s = 0i64;
        for (a, &i) in idx.iter().enumerate() {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            for &j in &idx[a + 1..] {
                s += row[j];
            }
        }
        2 * s
    }

    fn between(&self, a: &[usize], b: &[usize]) -> i64 {
        let mut s = 0i64;
        for &i in a {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            for &j in b {
                s += row[j];
            }
        }
        s
    }

    /// Sum of pairwise e-distances for the grouping `order[offsets[g]..offsets[g+1]]`.
    fn statistic(&self, order: &[usize], offsets: &[usize]) -> f64 {
        let k = offsets.len() - 1;
        let groups: Vec<&[usize]> = (0..k).map(|g| &order[offsets[g]..offsets[g + 1]]).collect();
        let within: Vec<i64> = groups.iter().map(|g| self.within(g)).collect();
        let mut stat = 0.0;
        for g in 0..k {
            for h in g + 1..k {
                let between = if k == 2 {
                    (self.total - within[0] - within[1]) / 2
                } else {
                    self.between(groups[g], groups[h])
                };
                stat += combine(
                    groups[g].len(),
                    groups[h].len(),
                    between as f64 / self.scale,
                    within[g] as f64 / self.scale,
                    within[h] as f64 / self.scale,
                );
            }
        }
        stat
    }
}

/// Shared permutation machinery: one pooled matrix per statistic variant,
/// one shuffle per permutation reused across all variants.
fn permute(sizes: &[usize], matrices: &[PooledDistances], permutations: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let n: usize = sizes.iter().sum();
    let mut offsets = vec![0];
    for s in sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let identity: Vec<usize> = (0..n).collect();
    let observed: Vec<f64> = matrices.iter().map(|m| m.statistic(&identity, &offsets)).collect();

    let root = RngStream::new(seed).labeled("permutation");
    let exceed: Vec<Vec<bool>> = (0..permutations as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = root.substream(r).rng();
            let mut order = identity.clone();
            order.shuffle(&mut rng);
            matrices
                .iter()
                .zip(&observed)
                .map(|(m, &obs)| m.statistic(&order, &offsets) >= obs)
                .collect()
        })
        .collect();

    let p_values = (0..matrices.len())
        .map(|a| {
            let count = exceed.iter().filter(|e| e[a]).count();
            (1 + count) as f64 / (permutations + 1) as f64
        })
        .collect();
    (observed, p_values)
}

fn validate_samples(sizes: &[usize], permutations: usize) -> Result<()> {
    if sizes.len() < 2 {
        return Err(Error::TooSmall {
            what: "number of samples",
            min: 2,
            got: sizes.len(),
        });
    }
    if permutations < 1 {
        return Err(Error::TooSmall {
            what: "permutations",
            min: 1,
            got: permutations,
        });
    }
    Ok(())
}

/// Permutation α-EBT for two or more compositional samples.
///
/// Returns one statistic and p-value per α, with
/// `p = (1 + #{T_perm ≥ T_obs}) / (R + 1)`. No multiplicity correction is
/// applied across α values.
pub fn permutation_test(
    datasets: &[&CompositionalDataset],
    alphas: &[Alpha],
    permutations: usize,
    seed: u64,
    standardize: bool,
) -> Result<TestResult> {
    let sizes: Vec<usize> = datasets.iter().map(|d| d.len()).collect();
    validate_samples(&sizes, permutations)?;
    let dim = check_same_dim(datasets)?;
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("at least one alpha value is required".into()));
    }
    let pooled = CompositionalDataset::concat(datasets)?;
    let zeros = pooled.has_zeros();
    for a in alphas {
        a.check(zeros)?;
    }
    let matrices = alphas
        .iter()
        .map(|&a| {
            let m = if standardize {
                let z = standardized_pool(datasets, a)?;
                euclidean_distances(&z, &z)?
            } else {
                self_distance_matrix(&pooled, a)?
            };
            Ok(PooledDistances::new(&m))
        })
        .collect::<Result<Vec<_>>>()?;
    let (statistics, p_values) = permute(&sizes, &matrices, permutations, seed);
    Ok(TestResult {
        method: Method::AlphaEbt,
        statistics,
        p_values,
        alphas: alphas.iter().map(|a| a.value()).collect(),
        replications: permutations,
        seed,
        sample_sizes: sizes,
        dim,
        standardized: standardize,
    })
}

/// Permutation energy test on untransformed points with Euclidean distance.
pub fn euclidean_permutation_test(samples: &[&PointSet], permutations: usize, seed: u64) -> Result<TestResult> {
    let sizes: Vec<usize> = samples.iter().map(|d| d.len()).collect();
    validate_samples(&sizes, permutations)?;
    if sizes.contains(&0) {
        return Err(Error::TooSmall {
            what: "sample size",
            min: 1,
            got: 0,
        });
    }
    let pooled = PointSet::concat(samples)?;
    let m = PooledDistances::new(&euclidean_distances(&pooled, &pooled)?);
    let (statistics, p_values) = permute(&sizes, &[m], permutations, seed);
    Ok(TestResult {
        method: Method::EuclideanEbt,
        statistics,
        p_values,
        alphas: Vec::new(),
        replications: permutations,
        seed,
        sample_sizes: sizes,
        dim: pooled.dim(),
        standardized: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{sample_dirichlet, DirichletParams};
    use approx::assert_abs_diff_eq;

    fn pts(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows).unwrap()
    }

    /// The e-distance written out with explicit loops.
    fn naive_e(a: &PointSet, b: &PointSet) -> f64 {
        let (n1, n2) = (a.len() as f64, b.len() as f64);
        let d = |p: &[f64], q: &[f64]| crate::points::euclidean(p, q);
        let mut ab = 0.0;
        for p in a.rows() {
            for q in b.rows() {
                ab += d(p, q);
            }
        }
        let mut aa = 0.0;
        for p in a.rows() {
            for q in a.rows() {
                aa += d(p, q);
            }
        }
        let mut bb = 0.0;
        for p in b.rows() {
            for q in b.rows() {
                bb += d(p, q);
            }
        }
        n1 * n2 / (n1 + n2) * (2.0 / (n1 * n2) * ab - aa / (n1 * n1) - bb / (n2 * n2))
    }

    #[test]
    fn singleton_e_distance_is_the_distance() {
        let a = pts(&[&[0.0, 0.0]]);
        let b = pts(&[&[3.0, 4.0]]);
        assert_abs_diff_eq!(energy_statistic_euclidean(&a, &b).unwrap(), 5.0, epsilon = 1e-12);
        let a = pts(&[&[0.0]]);
        let b = pts(&[&[1.0]]);
        assert_eq!(energy_statistic_euclidean(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn identical_samples_give_zero() {
        let a = pts(&[&[0.1, 0.4], &[1.0, -2.0], &[0.3, 0.3]]);
        assert_eq!(energy_statistic_euclidean(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn e_distance_matches_naive_loops() {
        let a = pts(&[&[0.1, 0.4, 2.0], &[1.0, -2.0, 0.5], &[0.3, 0.3, 0.3]]);
        let b = pts(&[&[1.1, 0.0, 0.0], &[0.2, 0.9, -1.0], &[2.0, 2.0, 2.0]]);
        let e = energy_statistic_euclidean(&a, &b).unwrap();
        assert_abs_diff_eq!(e, naive_e(&a, &b), epsilon = 1e-12);
    }

    #[test]
    fn e_distance_rejects_bad_shapes() {
        let empty = DistanceMatrix::new(vec![], 0, 2).unwrap();
        let w = DistanceMatrix::new(vec![0.0; 4], 2, 2).unwrap();
        let z = DistanceMatrix::new(vec![], 0, 0).unwrap();
        assert!(e_distance(&empty, &z, &w).is_err());
        let between = DistanceMatrix::new(vec![1.0; 6], 2, 3).unwrap();
        assert!(e_distance(&between, &w, &w).is_err());
        assert!(energy_statistic_euclidean(&pts(&[&[1.0]]), &pts(&[&[1.0, 2.0]])).is_err());
    }

    #[test]
    fn statistic_grows_with_shift() {
        let stream = RngStream::new(5);
        let x = sample_dirichlet(&DirichletParams::new(vec![2.0; 4]).unwrap(), 20, &stream).unwrap();
        let base = PointSet::new(x.as_flat().to_vec(), 4).unwrap();
        let mut last = 0.0;
        for c in [0.1, 0.5, 2.0] {
            let shifted: Vec<f64> = base.as_flat().iter().map(|v| v + c).collect();
            let y = PointSet::new(shifted, 4).unwrap();
            let e = energy_statistic_euclidean(&base, &y).unwrap();
            assert!(e > last, "{e} <= {last}");
            last = e;
        }
    }

    fn dirichlet(n: usize, d: usize, seed: u64) -> CompositionalDataset {
        sample_dirichlet(&DirichletParams::new(vec![3.0; d]).unwrap(), n, &RngStream::new(seed)).unwrap()
    }

    #[test]
    fn alpha_statistic_matches_transformed_euclidean() {
        let x = dirichlet(7, 4, 1);
        let y = dirichlet(5, 4, 2);
        for al in [0.0, 0.1, 0.5, 1.0, -0.5] {
            let a = Alpha::new(al).unwrap();
            let s = alpha_energy_statistic(&x, &y, a, false).unwrap();
            let e = energy_statistic_euclidean(
                &alpha_transform_dataset(&x, a).unwrap(),
                &alpha_transform_dataset(&y, a).unwrap(),
            )
            .unwrap();
            assert!((s - e).abs() <= 1e-10 * s.abs().max(1e-300), "{al}: {s} vs {e}");
        }
    }

    #[test]
    fn alpha_statistic_identical_and_symmetric() {
        let x = dirichlet(6, 3, 3);
        let y = dirichlet(9, 3, 4);
        let a = Alpha::new(0.5).unwrap();
        assert_eq!(alpha_energy_statistic(&x, &x, a, false).unwrap(), 0.0);
        assert_eq!(
            alpha_energy_statistic(&x, &y, a, false).unwrap(),
            alpha_energy_statistic(&y, &x, a, false).unwrap()
        );
        assert!(alpha_energy_statistic(&x, &y, a, false).unwrap() >= -1e-10);
        assert!(alpha_energy_statistic(&x, &y, a, true).unwrap() >= -1e-10);
    }

    #[test]
    fn row_order_does_not_change_statistic() {
        let x = dirichlet(8, 4, 10);
        let y = dirichlet(6, 4, 11);
        let mut rows: Vec<Vec<f64>> = x.rows().map(|r| r.to_vec()).collect();
        rows.reverse();
        rows.swap(0, 3);
        let xr = CompositionalDataset::from_rows(&rows).unwrap();
        for al in [0.0, 0.25, 1.0] {
            let a = Alpha::new(al).unwrap();
            assert_eq!(
                alpha_energy_statistic(&x, &y, a, false).unwrap().to_bits(),
                alpha_energy_statistic(&xr, &y, a, false).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn k_sample_is_pairwise_sum() {
        let x = dirichlet(5, 3, 20);
        let y = dirichlet(6, 3, 21);
        let z = dirichlet(4, 3, 22);
        let a = Alpha::new(0.3).unwrap();
        assert_eq!(
            k_sample_statistic(&[&x, &y], a, false).unwrap(),
            alpha_energy_statistic(&x, &y, a, false).unwrap()
        );
        assert_eq!(k_sample_statistic(&[&x, &x, &x], a, false).unwrap(), 0.0);
        let expect = alpha_energy_statistic(&x, &y, a, false).unwrap()
            + alpha_energy_statistic(&x, &z, a, false).unwrap()
            + alpha_energy_statistic(&y, &z, a, false).unwrap();
        assert_abs_diff_eq!(
            k_sample_statistic(&[&x, &y, &z], a, false).unwrap(),
            expect,
            epsilon = 1e-12
        );
        assert!(k_sample_statistic(&[&x], a, false).is_err());
    }

    #[test]
    fn permutation_observed_matches_standalone() {
        let x = dirichlet(10, 3, 30);
        let y = dirichlet(12, 3, 31);
        let z = dirichlet(8, 3, 32);
        let alphas = [Alpha::new(0.1).unwrap(), Alpha::ONE];
        let r = permutation_test(&[&x, &y], &alphas, 9, 1, false).unwrap();
        for (s, a) in r.statistics.iter().zip(alphas) {
            assert_eq!(*s, alpha_energy_statistic(&x, &y, a, false).unwrap());
        }
        let r = permutation_test(&[&x, &y, &z], &alphas, 9, 1, true).unwrap();
        for (s, a) in r.statistics.iter().zip(alphas) {
            let direct = k_sample_statistic(&[&x, &y, &z], a, true).unwrap();
            assert_abs_diff_eq!(*s, direct, epsilon = 1e-10);
        }
    }

    #[test]
    fn identical_points_give_unit_p_value() {
        let rows = vec![vec![0.2, 0.3, 0.5]; 6];
        let x = CompositionalDataset::from_rows(&rows).unwrap();
        let r = permutation_test(&[&x, &x], &[Alpha::ONE], 99, 3, false).unwrap();
        assert_eq!(r.statistics, vec![0.0]);
        assert_eq!(r.p_values, vec![1.0]);
    }

    #[test]
    fn identical_datasets_give_unit_p_value() {
        let x = dirichlet(15, 4, 40);
        let r = permutation_test(&[&x, &x], &[Alpha::new(0.5).unwrap(), Alpha::ONE], 199, 3, false).unwrap();
        assert_eq!(r.statistics, vec![0.0, 0.0]);
        assert_eq!(r.p_values, vec![1.0, 1.0]);
    }

    #[test]
    fn p_values_on_the_permutation_grid() {
        let x = dirichlet(10, 3, 50);
        let y = dirichlet(10, 3, 51);
        let r = permutation_test(&[&x, &y], &[Alpha::ONE], 999, 8, false).unwrap();
        let k = r.p_values[0] * 1000.0;
        assert!((k - k.round()).abs() < 1e-9 && (1.0..=1000.0).contains(&k.round()));
        assert_eq!(r.replications, 999);
        assert_eq!(r.method, Method::AlphaEbt);
    }

    #[test]
    fn permutation_test_is_deterministic() {
        let x = dirichlet(10, 3, 60);
        let y = dirichlet(11, 3, 61);
        let a = permutation_test(&[&x, &y], &[Alpha::new(0.3).unwrap()], 99, 4, false).unwrap();
        let b = permutation_test(&[&x, &y], &[Alpha::new(0.3).unwrap()], 99, 4, false).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool
            .install(|| permutation_test(&[&x, &y], &[Alpha::new(0.3).unwrap()], 99, 4, false))
            .unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn zero_data_rejects_nonpositive_alpha_up_front() {
        let x = CompositionalDataset::from_rows(&[vec![0.5, 0.5, 0.0], vec![0.2, 0.3, 0.5]]).unwrap();
        let y = dirichlet(3, 3, 70);
        let err = permutation_test(&[&x, &y], &[Alpha::ONE, Alpha::ZERO], 9, 1, false).unwrap_err();
        assert!(matches!(err, Error::AlphaWithZeros(_)));
        assert!(permutation_test(&[&x, &y], &[Alpha::new(0.1).unwrap()], 9, 1, false).is_ok());
    }

    #[test]
    fn bad_arguments() {
        let x = dirichlet(3, 3, 80);
        assert!(permutation_test(&[&x], &[Alpha::ONE], 9, 1, false).is_err());
        assert!(permutation_test(&[&x, &x], &[Alpha::ONE], 0, 1, false).is_err());
        assert!(permutation_test(&[&x, &x], &[], 9, 1, false).is_err());
    }

    #[test]
    fn euclidean_test_detects_separated_samples() {
        let a = pts(&[&[0.0], &[0.1], &[0.2], &[0.3], &[0.4], &[0.5]]);
        let b = pts(&[&[10.0], &[10.1], &[10.2], &[10.3], &[10.4], &[10.5]]);
        let r = euclidean_permutation_test(&[&a, &b], 999, 2).unwrap();
        // only the observed split and its mirror reach T_obs: 2/924 of labellings
        assert!(r.p_values[0] < 0.02, "{}", r.p_values[0]);
        assert_eq!(r.method, Method::EuclideanEbt);
    }
}
