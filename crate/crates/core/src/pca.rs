//! Principal component analysis via the sample covariance eigendecomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::weights::PointSet;

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub coords: PointSet,
    /// Variance along each kept direction, non-increasing.
    pub explained_variance: Vec<f64>,
    /// Principal directions as columns (`input_dim x d`).
    pub components: DMatrix<f64>,
    pub mean: DVector<f64>,
}

/// Centers `points` and projects them onto the top `d` principal directions.
///
/// Each direction is signed so that its largest-magnitude loading is positive.
pub fn pca_project(points: &PointSet, d: usize) -> Result<Projection> {
    let n = points.len();
    let dim = points.dim();
    if d == 0 || d > dim {
        return Err(Error::input(format!(
            "cannot keep {d} principal components of {dim}-dimensional data"
        )));
    }
    if n < 2 {
        return Err(Error::input("PCA needs at least 2 points"));
    }
    let data = points.to_columns();
    let mean = data.column_mean();
    let mut centered = data;
    for mut c in centered.column_iter_mut() {
        c -= &mean;
    }
    let cov = (&centered * centered.transpose()) / (n as f64 - 1.0);
    let eig = SymmetricEigen::new(cov);

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut components = DMatrix::zeros(dim, d);
    let mut explained_variance = Vec::with_capacity(d);
    for (k, &idx) in order.iter().take(d).enumerate() {
        let mut dir = eig.eigenvectors.column(idx).into_owned();
        let lead = dir
            .iter()
            .copied()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if lead < 0.0 {
            dir.neg_mut();
        }
        components.set_column(k, &dir);
        explained_variance.push(eig.eigenvalues[idx].max(0.0));
    }
    let projected = components.tr_mul(&centered);
    Ok(Projection {
        coords: PointSet::from_columns(&projected)?,
        explained_variance,
        components,
        mean,
    })
}

impl Projection {
    /// Maps projected coordinates back into the input space.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut back = &self.components * self.coords.to_columns();
        for mut c in back.column_iter_mut() {
            c += &self.mean;
        }
        back
    }
}
