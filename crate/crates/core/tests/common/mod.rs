#![allow(dead_code)]

use std::path::PathBuf;

use gwcut::{validate_weights, EmbeddingMatrix, PointSet, WeightMatrix};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn random_weights(n: usize, seed: u64) -> WeightMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let x: f64 = rng.random_range(0.0..1.0);
            raw[i][j] = x;
            raw[j][i] = x;
        }
    }
    validate_weights(&raw).unwrap()
}

pub fn random_points(n: usize, d: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointSet::new(
        (0..n)
            .map(|_| (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
            .collect(),
    )
    .unwrap()
}

pub fn random_embedding(dim: usize, count: usize, seed: u64) -> EmbeddingMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(dim, count, |_, _| rng.sample::<f64, _>(StandardNormal));
    EmbeddingMatrix::normalized(m).unwrap()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// descending. Independent of the library's eigensolver.
pub fn jacobi_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig
}

/// Sample covariance (denominator n - 1) by explicit loops.
pub fn sample_covariance(points: &PointSet) -> Vec<Vec<f64>> {
    let n = points.len();
    let d = points.dim();
    let mean: Vec<f64> = (0..d)
        .map(|k| points.points().iter().map(|p| p[k]).sum::<f64>() / n as f64)
        .collect();
    let mut cov = vec![vec![0.0; d]; d];
    for p in points.points() {
        for a in 0..d {
            for b in 0..d {
                cov[a][b] += (p[a] - mean[a]) * (p[b] - mean[b]);
            }
        }
    }
    for row in &mut cov {
        for x in row.iter_mut() {
            *x /= (n - 1) as f64;
        }
    }
    cov
}

pub fn planted_signs(labels: &[u8]) -> Vec<i8> {
    labels.iter().map(|&l| if l == 0 { 1 } else { -1 }).collect()
}
