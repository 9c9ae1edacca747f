//! Power, log-ratio and α-transformations of compositions, and the
//! α-metric family of distances built on them.
//!
//! For α ≠ 0 the α-transformation of a composition `x` with `D` parts is
//!
//! ```text
//! u_α(x) = x^α / Σ x_j^α
//! w_α(x) = (D·u_α(x) − 1) / α
//! z_α(x) = H·w_α(x)
//! ```
//!
//! where `H` is the Helmert sub-matrix. At α = 0 the centred log-ratio and
//! the isometric log-ratio take the place of `w_α` and `z_α`; that case is
//! evaluated in closed form rather than as a small-α limit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::{euclidean, DistanceMatrix, PointSet};
use crate::simplex::{Composition, CompositionalDataset};

/// Transformation parameter α ∈ [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Alpha(f64);

impl Alpha {
    pub const ONE: Alpha = Alpha(1.0);
    pub const ZERO: Alpha = Alpha(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(-1.0..=1.0).contains(&value) {
            return Err(Error::AlphaOutOfRange(value));
        }
        Ok(Alpha(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    /// Rejects α ≤ 0 on data that contains exact zeros.
    pub fn check(self, has_zeros: bool) -> Result<()> {
        if has_zeros && self.0 <= 0.0 {
            return Err(Error::AlphaWithZeros(self.0));
        }
        Ok(())
    }

    pub fn check_dataset(self, data: &CompositionalDataset) -> Result<()> {
        self.check(data.has_zeros())
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

/// `x^α` with `0^α = 0` for α > 0.
fn pow_alpha(x: f64, alpha: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (alpha * x.ln()).exp()
    }
}

fn check_row(x: &[f64], alpha: Alpha) -> Result<()> {
    alpha.check(x.contains(&0.0))
}

/// u_α(x) written into `out`.
fn power_into(x: &[f64], alpha: f64, out: &mut [f64]) {
    let mut sum = 0.0;
    for (o, &v) in out.iter_mut().zip(x) {
        *o = pow_alpha(v, alpha);
        sum += *o;
    }
    for o in out.iter_mut() {
        *o /= sum;
    }
}

/// Centred log-ratio written into `out`.
fn clr_into(x: &[f64], out: &mut [f64]) {
    let mut mean_log = 0.0;
    for (o, &v) in out.iter_mut().zip(x) {
        *o = v.ln();
        mean_log += *o;
    }
    mean_log /= x.len() as f64;
    for o in out.iter_mut() {
        *o -= mean_log;
    }
}

/// Power transformation u_α(x).
pub fn power_transform(x: &Composition, alpha: Alpha) -> Result<Composition> {
    check_row(x.values(), alpha)?;
    let mut out = vec![0.0; x.dim()];
    power_into(x.values(), alpha.value(), &mut out);
    Ok(Composition::from_closed(out))
}

/// Centred log-ratio; requires strictly positive `x`.
pub fn clr(x: &Composition) -> Result<TransformedVector> {
    w_alpha(x, Alpha::ZERO)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// D-vectors summing to zero.
    ZeroSum,
    /// Unconstrained (D−1)-vectors.
    Euclidean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformedVector {
    pub values: Vec<f64>,
    pub space: Space,
}

fn w_alpha_into(x: &[f64], alpha: f64, out: &mut [f64]) {
    if alpha == 0.0 {
        clr_into(x, out);
    } else {
        power_into(x, alpha, out);
        let d = x.len() as f64;
        for o in out.iter_mut() {
            *o = (d * *o - 1.0) / alpha;
        }
    }
}

/// w_α(x) = (D·u_α(x) − 1)/α, or the centred log-ratio at α = 0.
pub fn w_alpha(x: &Composition, alpha: Alpha) -> Result<TransformedVector> {
    check_row(x.values(), alpha)?;
    let mut values = vec![0.0; x.dim()];
    w_alpha_into(x.values(), alpha.value(), &mut values);
    Ok(TransformedVector {
        values,
        space: Space::ZeroSum,
    })
}

/// The (D−1)×D Helmert matrix with its first row removed.
#[derive(Debug, Clone, PartialEq)]
pub struct HelmertSubMatrix {
    entries: Vec<f64>,
    dim: usize,
}

impl HelmertSubMatrix {
    /// Number of columns, `D`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    /// H·v for a D-vector `v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim - 1];
        self.apply_into(v, &mut out);
        out
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).iter().zip(v).map(|(h, x)| h * x).sum();
        }
    }
}

/// Row `i` (1-based) is `1/√(i(i+1))` in the first `i` columns and
/// `−i/√(i(i+1))` in column `i+1`.
pub fn helmert_submatrix(dim: usize) -> Result<HelmertSubMatrix> {
    if dim < 2 {
        return Err(Error::TooFewComponents(dim));
    }
    let mut entries = vec![0.0; (dim - 1) * dim];
    for r in 0..dim - 1 {
        let i = (r + 1) as f64;
        let scale = (i * (i + 1.0)).sqrt();
        let row = &mut entries[r * dim..(r + 1) * dim];
        for e in row.iter_mut().take(r + 1) {
            *e = 1.0 / scale;
        }
        row[r + 1] = -i / scale;
    }
    Ok(HelmertSubMatrix { entries, dim })
}

/// z_α(x) = H·w_α(x); the isometric log-ratio at α = 0.
pub fn alpha_transform(x: &Composition, alpha: Alpha) -> Result<TransformedVector> {
    let h = helmert_submatrix(x.dim())?;
    let w = w_alpha(x, alpha)?;
    Ok(TransformedVector {
        values: h.apply(&w.values),
        space: Space::Euclidean,
    })
}

/// z_α for every row of a dataset.
pub fn alpha_transform_dataset(data: &CompositionalDataset, alpha: Alpha) -> Result<PointSet> {
    alpha.check_dataset(data)?;
    let dim = data.dim();
    let h = helmert_submatrix(dim)?;
    let mut w = vec![0.0; dim];
    let mut out = vec![0.0; data.len() * (dim - 1)];
    for (row, z) in data.rows().zip(out.chunks_exact_mut(dim - 1)) {
        w_alpha_into(row, alpha.value(), &mut w);
        h.apply_into(&w, z);
    }
    PointSet::new(out, dim - 1)
}

/// Rows mapped into the space where Δ_α is a scaled Euclidean distance:
/// u_α(x) with factor D/|α|, or the centred log-ratio with factor 1.
struct MetricEmbedding {
    rows: Vec<f64>,
    dim: usize,
    factor: f64,
}

impl MetricEmbedding {
    fn new<'a>(rows: impl Iterator<Item = &'a [f64]>, dim: usize, alpha: Alpha) -> Self {
        let a = alpha.value();
        let mut data = Vec::new();
        let mut buf = vec![0.0; dim];
        for row in rows {
            if a == 0.0 {
                clr_into(row, &mut buf);
            } else {
                power_into(row, a, &mut buf);
            }
            data.extend_from_slice(&buf);
        }
        let factor = if a == 0.0 { 1.0 } else { dim as f64 / a.abs() };
        MetricEmbedding {
            rows: data,
            dim,
            factor,
        }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.dim..(i + 1) * self.dim]
    }

    fn len(&self) -> usize {
        self.rows.len() / self.dim
    }

    fn distance(&self, i: usize, other: &MetricEmbedding, j: usize) -> f64 {
        self.factor * euclidean(self.row(i), other.row(j))
    }
}

/// The α-metric Δ_α(x, y) = ‖w_α(x) − w_α(y)‖, evaluated as
/// (D/|α|)·‖u_α(x) − u_α(y)‖; Aitchison's distance at α = 0.
pub fn alpha_metric(x: &Composition, y: &Composition, alpha: Alpha) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    check_row(x.values(), alpha)?;
    check_row(y.values(), alpha)?;
    let ex = MetricEmbedding::new(std::iter::once(x.values()), x.dim(), alpha);
    let ey = MetricEmbedding::new(std::iter::once(y.values()), y.dim(), alpha);
    Ok(ex.distance(0, &ey, 0))
}

/// Aitchison distance, the α → 0 member of the family.
pub fn aitchison_distance(x: &Composition, y: &Composition) -> Result<f64> {
    alpha_metric(x, y, Alpha::ZERO)
}

/// Δ_α between every row of `x` and every row of `y`.
pub fn pairwise_distance_matrix(
    x: &CompositionalDataset,
    y: &CompositionalDataset,
    alpha: Alpha,
) -> Result<DistanceMatrix> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    alpha.check_dataset(x)?;
    alpha.check_dataset(y)?;
    let ex = MetricEmbedding::new(x.rows(), x.dim(), alpha);
    let ey = MetricEmbedding::new(y.rows(), y.dim(), alpha);
    Ok(embedding_distances(&ex, &ey))
}

fn embedding_distances(ex: &MetricEmbedding, ey: &MetricEmbedding) -> DistanceMatrix {
    let mut data = Vec::with_capacity(ex.len() * ey.len());
    for i in 0..ex.len() {
        for j in 0..ey.len() {
            data.push(ex.distance(i, ey, j));
        }
    }
    DistanceMatrix::new(data, ex.len(), ey.len()).expect("shape is consistent")
}

/// Δ_α among all rows of one dataset; symmetric with a zero diagonal.
pub fn self_distance_matrix(x: &CompositionalDataset, alpha: Alpha) -> Result<DistanceMatrix> {
    alpha.check_dataset(x)?;
    let e = MetricEmbedding::new(x.rows(), x.dim(), alpha);
    let n = e.len();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = e.distance(i, &e, j);
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    DistanceMatrix::new(data, n, n)
}

/// Centres each column on its mean and scales it to unit sample standard
/// deviation, using the statistics of all rows together.
pub fn standardize_columns(pooled: &PointSet) -> Result<PointSet> {
    let n = pooled.len();
    if n < 2 {
        return Err(Error::TooSmall {
            what: "rows to standardize",
            min: 2,
            got: n,
        });
    }
    let d = pooled.dim();
    let mut out = pooled.clone();
    for c in 0..d {
        let mean = pooled.rows().map(|r| r[c]).sum::<f64>() / n as f64;
        let var = pooled.rows().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let sd = var.sqrt();
        if sd == 0.0 || !sd.is_finite() || sd <= 1e-300 {
            return Err(Error::ZeroVarianceColumn(c));
        }
        for r in out.as_flat_mut().chunks_exact_mut(d) {
            r[c] = (r[c] - mean) / sd;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::close;
    use approx::assert_abs_diff_eq;

    fn comp(v: &[f64]) -> Composition {
        close(v).unwrap()
    }

    fn a(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn alpha_range() {
        assert!(Alpha::new(1.5).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
        assert!(Alpha::new(-1.0).is_ok());
        assert!(a(0.0).check(true).is_err());
        assert!(a(-0.5).check(true).is_err());
        assert!(a(0.1).check(true).is_ok());
    }

    #[test]
    fn power_transform_cases() {
        let x = comp(&[0.2, 0.3, 0.5]);
        let p = power_transform(&x, Alpha::ONE).unwrap();
        for (u, v) in p.values().iter().zip(x.values()) {
            assert_abs_diff_eq!(u, v, epsilon = 1e-15);
        }

        let u = comp(&[1.0, 1.0, 1.0]);
        for al in [-1.0, -0.3, 0.0, 0.4, 1.0] {
            let p = power_transform(&u, a(al)).unwrap();
            for v in p.values() {
                assert_abs_diff_eq!(*v, 1.0 / 3.0, epsilon = 1e-15);
            }
        }

        let p = power_transform(&comp(&[0.25, 0.25, 0.5]), a(0.5)).unwrap();
        let s = 0.5 + 0.5 + 0.5f64.sqrt();
        let expect = [0.5 / s, 0.5 / s, 0.5f64.sqrt() / s];
        for (u, v) in p.values().iter().zip(expect) {
            assert_abs_diff_eq!(*u, v, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(p.values()[0], 0.292893, epsilon = 1e-6);
        assert_abs_diff_eq!(p.values()[2], 0.414214, epsilon = 1e-6);
    }

    #[test]
    fn power_transform_zero_gate() {
        let x = comp(&[0.5, 0.5, 0.0]);
        let err = power_transform(&x, a(0.0)).unwrap_err();
        assert!(err.to_string().contains("alpha must be positive with zeros"));
        let p = power_transform(&x, a(0.5)).unwrap();
        assert_eq!(p.values()[2], 0.0);
    }

    #[test]
    fn w_alpha_cases() {
        let u = comp(&[1.0; 4]);
        for al in [0.0, 0.5, 1.0, -0.7] {
            for v in w_alpha(&u, a(al)).unwrap().values {
                assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
            }
        }
        let w = w_alpha(&comp(&[0.2, 0.3, 0.5]), Alpha::ONE).unwrap();
        for (v, e) in w.values.iter().zip([-0.4, -0.1, 0.5]) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-14);
        }
    }

    #[test]
    fn clr_matches_log_geometric_mean() {
        let x = comp(&[0.1, 0.2, 0.7]);
        let g = (0.1f64 * 0.2 * 0.7).powf(1.0 / 3.0);
        let c = clr(&x).unwrap();
        for (v, xi) in c.values.iter().zip(x.values()) {
            assert_abs_diff_eq!(*v, (xi / g).ln(), epsilon = 1e-14);
        }
    }

    #[test]
    fn helmert_small_cases() {
        assert!(helmert_submatrix(1).is_err());
        let h2 = helmert_submatrix(2).unwrap();
        let r = 0.5f64.sqrt();
        assert_abs_diff_eq!(h2.get(0, 0), r, epsilon = 1e-15);
        assert_abs_diff_eq!(h2.get(0, 1), -r, epsilon = 1e-15);

        let h3 = helmert_submatrix(3).unwrap();
        let s6 = 6f64.sqrt();
        let expect = [[r, -r, 0.0], [1.0 / s6, 1.0 / s6, -2.0 / s6]];
        for (i, row) in expect.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert_abs_diff_eq!(h3.get(i, j), *e, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn helmert_orthonormal_and_annihilates_ones() {
        for d in 2..=30 {
            let h = helmert_submatrix(d).unwrap();
            for i in 0..d - 1 {
                assert_abs_diff_eq!(h.row(i).iter().sum::<f64>(), 0.0, epsilon = 1e-12);
                for j in 0..d - 1 {
                    let dot: f64 = h.row(i).iter().zip(h.row(j)).map(|(p, q)| p * q).sum();
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(dot, e, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn alpha_transform_cases() {
        let z = alpha_transform(&comp(&[1.0; 5]), a(0.3)).unwrap();
        assert_eq!(z.values.len(), 4);
        assert!(z.values.iter().all(|v| v.abs() < 1e-14));

        let z = alpha_transform(&comp(&[0.2, 0.3, 0.5]), Alpha::ONE).unwrap();
        assert_abs_diff_eq!(z.values[0], -0.3 / 2f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(z.values[1], -1.5 / 6f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(z.values[0], -0.212132, epsilon = 1e-6);
        assert_abs_diff_eq!(z.values[1], -0.612372, epsilon = 1e-6);
    }

    #[test]
    fn alpha_metric_cases() {
        let x = comp(&[0.2, 0.3, 0.5]);
        let y = comp(&[0.3, 0.3, 0.4]);
        assert_eq!(alpha_metric(&x, &x, a(0.5)).unwrap(), 0.0);
        assert_eq!(alpha_metric(&x, &x, a(0.0)).unwrap(), 0.0);
        let d = alpha_metric(&x, &y, Alpha::ONE).unwrap();
        assert_abs_diff_eq!(d, 3.0 * 0.02f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(d, 0.424264, epsilon = 1e-6);

        let z = comp(&[0.5, 0.5]);
        assert!(matches!(
            alpha_metric(&x, &z, Alpha::ONE),
            Err(Error::DimensionMismatch { .. })
        ));
        let zero = comp(&[0.5, 0.5, 0.0]);
        assert!(alpha_metric(&x, &zero, a(0.0)).is_err());
        assert!(alpha_metric(&x, &zero, a(0.2)).is_ok());
    }

    #[test]
    fn aitchison_direct_formula() {
        let x = comp(&[0.1, 0.2, 0.7]);
        let y = comp(&[0.3, 0.3, 0.4]);
        let gx = (0.1f64 * 0.2 * 0.7).powf(1.0 / 3.0);
        let gy = (0.3f64 * 0.3 * 0.4).powf(1.0 / 3.0);
        let direct: f64 = x
            .values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| ((a / gx).ln() - (b / gy).ln()).powi(2))
            .sum::<f64>()
            .sqrt();
        assert_abs_diff_eq!(aitchison_distance(&x, &y).unwrap(), direct, epsilon = 1e-13);
    }

    #[test]
    fn pairwise_matrix_shapes_and_entries() {
        let x = CompositionalDataset::from_raw_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 2.0, 1.0]]).unwrap();
        let y = CompositionalDataset::from_raw_rows(&[vec![1.0, 1.0, 1.0], vec![5.0, 1.0, 1.0], vec![1.0, 3.0, 9.0]])
            .unwrap();
        let m = pairwise_distance_matrix(&x, &y, a(0.5)).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        for i in 0..2 {
            for j in 0..3 {
                let xi = Composition::new(x.row(i).to_vec()).unwrap();
                let yj = Composition::new(y.row(j).to_vec()).unwrap();
                assert_eq!(m.get(i, j), alpha_metric(&xi, &yj, a(0.5)).unwrap());
            }
        }

        let single = CompositionalDataset::from_raw_rows(&[vec![1.0, 2.0]]).unwrap();
        let m = pairwise_distance_matrix(&single, &single, a(0.5)).unwrap();
        assert_eq!(m.as_flat(), &[0.0]);

        let s = self_distance_matrix(&y, Alpha::ZERO).unwrap();
        let p = pairwise_distance_matrix(&y, &y, Alpha::ZERO).unwrap();
        for i in 0..3 {
            assert_eq!(s.get(i, i), 0.0);
            for j in 0..3 {
                assert_eq!(s.get(i, j), s.get(j, i));
                assert_eq!(s.get(i, j), p.get(i, j));
            }
        }
    }

    #[test]
    fn standardize_cases() {
        let p = PointSet::from_rows(&[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let s = standardize_columns(&p).unwrap();
        for (v, e) in s.as_flat().iter().zip([-1.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-15);
        }
        let again = standardize_columns(&s).unwrap();
        for (u, v) in s.as_flat().iter().zip(again.as_flat()) {
            assert_abs_diff_eq!(*u, *v, epsilon = 1e-12);
        }
        let c = PointSet::from_rows(&[vec![5.0, 1.0], vec![5.0, 2.0], vec![5.0, 4.0]]).unwrap();
        assert!(matches!(standardize_columns(&c), Err(Error::ZeroVarianceColumn(0))));
        let one = PointSet::from_rows(&[vec![5.0]]).unwrap();
        assert!(standardize_columns(&one).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn positive_comp(d: std::ops::Range<usize>) -> impl Strategy<Value = Composition> {
            prop::collection::vec(0.01f64..1.0, d).prop_map(|v| close(&v).unwrap())
        }

        fn pair() -> impl Strategy<Value = (Composition, Composition)> {
            (2usize..10).prop_flat_map(|d| (positive_comp(d..d + 1), positive_comp(d..d + 1)))
        }

        fn triple() -> impl Strategy<Value = (Composition, Composition, Composition)> {
            (2usize..10).prop_flat_map(|d| {
                (
                    positive_comp(d..d + 1),
                    positive_comp(d..d + 1),
                    positive_comp(d..d + 1),
                )
            })
        }

        fn any_alpha() -> impl Strategy<Value = Alpha> {
            prop_oneof![Just(0.0), -1.0f64..=1.0].prop_map(|v| Alpha::new(v).unwrap())
        }

        proptest! {
            #[test]
            fn w_alpha_sums_to_zero_and_respects_bounds(x in positive_comp(2..20), al in any_alpha()) {
                let w = w_alpha(&x, al).unwrap();
                prop_assert!(w.values.iter().sum::<f64>().abs() <= 1e-10);
                if al.value() > 0.0 {
                    let d = x.dim() as f64;
                    for v in &w.values {
                        prop_assert!(*v >= -1.0 / al.value() - 1e-12);
                        prop_assert!(*v <= (d - 1.0) / al.value() + 1e-12);
                    }
                }
            }

            #[test]
            fn w_alpha_bounds_hold_with_zeros(raw in prop::collection::vec(0.0f64..1.0, 3..10), al in 0.05f64..=1.0) {
                prop_assume!(raw.iter().sum::<f64>() > 0.0);
                let x = close(&raw).unwrap();
                let w = w_alpha(&x, Alpha::new(al).unwrap()).unwrap();
                let d = x.dim() as f64;
                for v in &w.values {
                    prop_assert!(*v >= -1.0 / al - 1e-12 && *v <= (d - 1.0) / al + 1e-12);
                }
            }

            #[test]
            fn clr_is_small_alpha_limit(x in positive_comp(2..15)) {
                let w0 = w_alpha(&x, Alpha::ZERO).unwrap();
                let ws = w_alpha(&x, Alpha::new(1e-4).unwrap()).unwrap();
                for (p, q) in w0.values.iter().zip(&ws.values) {
                    prop_assert!((p - q).abs() <= 1e-3);
                }
            }

            #[test]
            fn alpha_transform_is_isometric(x in positive_comp(2..15), al in any_alpha()) {
                let w = w_alpha(&x, al).unwrap();
                let z = alpha_transform(&x, al).unwrap();
                let nw = crate::points::norm(&w.values);
                let nz = crate::points::norm(&z.values);
                prop_assert!((nw - nz).abs() <= 1e-10 * (1.0 + nw));
            }

            #[test]
            fn metric_equals_transformed_distance((x, y) in pair(), al in any_alpha()) {
                let d = alpha_metric(&x, &y, al).unwrap();
                let zx = alpha_transform(&x, al).unwrap();
                let zy = alpha_transform(&y, al).unwrap();
                let wx = w_alpha(&x, al).unwrap();
                let wy = w_alpha(&y, al).unwrap();
                let dz = euclidean(&zx.values, &zy.values);
                let dw = euclidean(&wx.values, &wy.values);
                prop_assert!((d - dz).abs() <= 1e-12 * (1.0 + d));
                prop_assert!((d - dw).abs() <= 1e-12 * (1.0 + d));
            }

            #[test]
            fn metric_axioms((x, y, z) in triple(), al in any_alpha()) {
                let dxy = alpha_metric(&x, &y, al).unwrap();
                let dyx = alpha_metric(&y, &x, al).unwrap();
                prop_assert_eq!(dxy, dyx);
                let dxz = alpha_metric(&x, &z, al).unwrap();
                let dzy = alpha_metric(&z, &y, al).unwrap();
                prop_assert!(dxy <= dxz + dzy + 1e-12);
                prop_assert_eq!(alpha_metric(&x, &x, al).unwrap(), 0.0);
                if x != y {
                    prop_assert!(dxy > 0.0);
                }
            }
        }
    }
}
