//! Dissimilarity weight matrices built from point sets or supplied directly.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when accepting externally supplied matrices.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// A list of equal-dimension real vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).unwrap_or(0);
        if dim == 0 {
            return Err(Error::input("point set must contain points of dimension >= 1"));
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(Error::input(format!(
                "point {i} has dimension {} but point 0 has dimension {dim}",
                p.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(Error::input(format!("point {i} has a non-finite coordinate")));
        }
        Ok(Self { dim, points })
    }

    /// Points are the columns of `m`.
    pub fn from_columns(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.column_iter().map(|c| c.iter().copied().collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    /// Points as the columns of a `dim x n` matrix.
    pub fn to_columns(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.len(), |r, c| self.points[c][r])
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|x| x * c).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    Euclidean,
    SquaredEuclidean,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        match self {
            Metric::Euclidean => sq.sqrt(),
            Metric::SquaredEuclidean => sq,
        }
    }
}

/// Symmetric, zero-diagonal, nonnegative `n x n` dissimilarity matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    entries: DMatrix<f64>,
}

impl WeightMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Sum of `w_ij` over pairs `i < j`.
    pub fn total_weight(&self) -> f64 {
        let n = self.size();
        let mut total = 0.0;
        for j in 0..n {
            for i in 0..j {
                total += self.entries[(i, j)];
            }
        }
        total
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&w| w == 0.0)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    /// Wraps a matrix already known to satisfy every invariant.
    pub(crate) fn from_trusted(entries: DMatrix<f64>) -> Self {
        debug_assert!(entries.is_square());
        Self { entries }
    }
}

/// Pairwise Euclidean distances between points.
pub fn build_weight_matrix(points: &PointSet) -> Result<WeightMatrix> {
    build_weight_matrix_with(points, Metric::Euclidean)
}

pub fn build_weight_matrix_with(points: &PointSet, metric: Metric) -> Result<WeightMatrix> {
    let n = points.len();
    if n < 2 {
        return Err(Error::input(format!("need at least 2 points, got {n}")));
    }
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = metric.distance(points.get(i), points.get(j));
            w[(i, j)] = d;
            w[(j, i)] = d;
        }
    }
    Ok(WeightMatrix { entries: w })
}

/// Validates a raw square array and symmetrizes it as `(W + W^T) / 2`.
///
/// Off-diagonal pairs may differ by at most [`SYMMETRY_TOL`] relative to the
/// larger magnitude of the pair. The diagonal must be exactly zero.
pub fn validate_weights(raw: &[Vec<f64>]) -> Result<WeightMatrix> {
    let n = raw.len();
    if n == 0 {
        return Err(Error::input("weight matrix is empty"));
    }
    if let Some((i, row)) = raw.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::input(format!(
            "weight matrix is not square: row {i} has {} entries, expected {n}",
            row.len()
        )));
    }
    let invalid = |row, col, reason: &str| Error::Validation {
        row,
        col,
        reason: reason.to_string(),
    };
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        if raw[i][i] != 0.0 {
            return Err(invalid(i, i, &format!("nonzero diagonal entry {}", raw[i][i])));
        }
        for j in 0..n {
            let a = raw[i][j];
            if !a.is_finite() {
                return Err(invalid(i, j, "non-finite entry"));
            }
            if a < 0.0 {
                return Err(invalid(i, j, &format!("negative entry {a}")));
            }
        }
        for j in (i + 1)..n {
            let (a, b) = (raw[i][j], raw[j][i]);
            let scale = a.abs().max(b.abs());
            if (a - b).abs() > SYMMETRY_TOL * scale {
                return Err(invalid(i, j, &format!("asymmetric pair {a} vs {b}")));
            }
            let s = (a + b) / 2.0;
            w[(i, j)] = s;
            w[(j, i)] = s;
        }
    }
    Ok(WeightMatrix { entries: w })
}
