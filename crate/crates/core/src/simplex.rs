//! Compositions, datasets of compositions, and closure.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance on the unit-sum constraint.
pub const SUM_TOLERANCE: f64 = 1e-10;

/// A point on the simplex: non-negative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition(Vec<f64>);

impl Composition {
    /// Accepts a vector that already sums to one within [`SUM_TOLERANCE`]
    /// and re-closes it.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let sum = check_entries(&values)?;
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotClosed(sum));
        }
        close(&values)
    }

    pub(crate) fn from_closed(values: Vec<f64>) -> Self {
        Composition(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn has_zeros(&self) -> bool {
        self.0.contains(&0.0)
    }
}

impl AsRef<[f64]> for Composition {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

fn check_entries(raw: &[f64]) -> Result<f64> {
    if raw.len() < 2 {
        return Err(Error::TooFewComponents(raw.len()));
    }
    let mut sum = 0.0;
    for (index, &value) in raw.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if value < 0.0 {
            return Err(Error::NegativeComponent { index, value });
        }
        sum += value;
    }
    Ok(sum)
}

/// Normalizes non-negative raw measurements onto the simplex.
pub fn close(raw: &[f64]) -> Result<Composition> {
    let sum = check_entries(raw)?;
    if sum <= 0.0 {
        return Err(Error::DegenerateComposition);
    }
    Ok(Composition(raw.iter().map(|v| v / sum).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    TooFewComponents { found: usize },
    DimensionMismatch { expected: usize, found: usize },
    NonFinite,
    Negative { value: f64 },
    SumNotOne { sum: f64 },
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub row: usize,
    /// `None` when the violation concerns the whole row.
    pub column: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {}", self.row)?;
        if let Some(c) = self.column {
            write!(f, ", column {c}")?;
        }
        match self.kind {
            ViolationKind::TooFewComponents { found } => {
                write!(f, ": need at least 2 components, found {found}")
            }
            ViolationKind::DimensionMismatch { expected, found } => {
                write!(f, ": expected {expected} components, found {found}")
            }
            ViolationKind::NonFinite => write!(f, ": non-finite value"),
            ViolationKind::Negative { value } => write!(f, ": negative component {value}"),
            ViolationKind::SumNotOne { sum } => write!(f, ": sum \u{2260} 1 ({sum})"),
            ViolationKind::Zero => write!(f, ": zero component"),
        }
    }
}

/// Outcome of [`validate_rows`]; empty means the rows are valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every row against the composition invariants without throwing.
pub fn validate_rows<R: AsRef<[f64]>>(rows: &[R], require_strictly_positive: bool) -> ValidationReport {
    let mut violations = Vec::new();
    let expected = rows.first().map(|r| r.as_ref().len());
    for (row, values) in rows.iter().enumerate() {
        let values = values.as_ref();
        if values.len() < 2 {
            violations.push(Violation {
                row,
                column: None,
                kind: ViolationKind::TooFewComponents { found: values.len() },
            });
            continue;
        }
        if let Some(expected) = expected {
            if values.len() != expected {
                violations.push(Violation {
                    row,
                    column: None,
                    kind: ViolationKind::DimensionMismatch {
                        expected,
                        found: values.len(),
                    },
                });
                continue;
            }
        }
        let mut sum = 0.0;
        let mut finite = true;
        for (column, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                finite = false;
                violations.push(Violation {
                    row,
                    column: Some(column),
                    kind: ViolationKind::NonFinite,
                });
                continue;
            }
            if v < 0.0 {
                violations.push(Violation {
                    row,
                    column: Some(column),
                    kind: ViolationKind::Negative { value: v },
                });
            } else if v == 0.0 && require_strictly_positive {
                violations.push(Violation {
                    row,
                    column: Some(column),
                    kind: ViolationKind::Zero,
                });
            }
            sum += v;
        }
        if finite && (sum - 1.0).abs() > SUM_TOLERANCE {
            violations.push(Violation {
                row,
                column: None,
                kind: ViolationKind::SumNotOne { sum },
            });
        }
    }
    ValidationReport { violations }
}

/// `n` compositions sharing one dimension `D`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionalDataset {
    data: Vec<f64>,
    n: usize,
    dim: usize,
    names: Option<Vec<String>>,
}

impl CompositionalDataset {
    /// Builds a dataset from rows that already satisfy the simplex
    /// constraint (within [`SUM_TOLERANCE`]); rows are re-closed.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let report = validate_rows(rows, false);
        if !report.is_ok() {
            return Err(Error::InvalidDataset(report));
        }
        Self::from_raw_rows(rows)
    }

    /// Builds a dataset by closing each raw non-negative row.
    pub fn from_raw_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::TooSmall {
            what: "number of rows",
            min: 1,
            got: 0,
        })?;
        let dim = first.as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(close(row)?.into_vec());
        }
        Ok(CompositionalDataset {
            data,
            n: rows.len(),
            dim,
            names: None,
        })
    }

    pub(crate) fn from_closed_flat(data: Vec<f64>, dim: usize) -> Self {
        debug_assert!(dim >= 2 && data.len().is_multiple_of(dim));
        CompositionalDataset {
            n: data.len() / dim,
            data,
            dim,
            names: None,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Exact zero detection; subnormal positives count as positive.
    pub fn has_zeros(&self) -> bool {
        self.data.contains(&0.0)
    }

    pub fn validate(&self, require_strictly_positive: bool) -> ValidationReport {
        let rows: Vec<&[f64]> = self.rows().collect();
        validate_rows(&rows, require_strictly_positive)
    }

    /// Stacks several datasets into one, in order.
    pub fn concat(parts: &[&CompositionalDataset]) -> Result<Self> {
        let first = parts.first().ok_or(Error::TooSmall {
            what: "number of datasets",
            min: 1,
            got: 0,
        })?;
        let dim = first.dim;
        let mut data = Vec::new();
        for p in parts {
            if p.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim,
                });
            }
            data.extend_from_slice(&p.data);
        }
        Ok(Self::from_closed_flat(data, dim))
    }
}

pub fn has_zeros(data: &CompositionalDataset) -> bool {
    data.has_zeros()
}
