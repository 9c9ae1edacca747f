//! Two-sample and k-sample tests for compositional data: the α-transformed
//! energy test and the random-projections KS test, plus the simulation
//! harness used to measure their size and power.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
pub mod energy;
pub mod error;
pub mod harness;
pub mod io;
pub mod points;
pub mod rpbt;
pub mod simplex;
pub mod transforms;

pub use energy::{
    alpha_energy_statistic, e_distance, energy_statistic_euclidean, euclidean_permutation_test, k_sample_statistic,
    permutation_test, Method, TestResult,
};
pub use error::{Error, Result};
pub use points::{euclidean_distances, DistanceMatrix, PointSet};
pub use rpbt::{combine_pvalues_bh, combine_pvalues_bonferroni, rpbt_test, rpbt_test_with, Combination};
pub use simplex::{close, validate_rows, Composition, CompositionalDataset, ValidationReport};
pub use transforms::{aitchison_distance, alpha_metric, alpha_transform, alpha_transform_dataset, Alpha};
