//! One GWA pass (weights, relaxation, rounding, projection) and its recursive
//! application to the projected embedding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pca::{pca_project, Projection};
use crate::relaxation::{
    cholesky_embed, gram_matrix, pad_weights, solve_relaxation, EmbeddingMatrix, SolverConfig,
};
use crate::rounding::{round_best_threaded, CutPartition, RoundingReport, DEFAULT_TRIALS};
use crate::weights::{build_weight_matrix_with, Metric, PointSet, WeightMatrix};

pub const MAX_ITERATIONS: usize = 5;
const QUALITY_EPS: f64 = 1e-12;
const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecurseOn {
    /// Feed the PCA coordinates of the embedding to the next iteration.
    #[default]
    Pca,
    /// Feed the embedding columns themselves.
    RawEmbedding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub iterations: usize,
    pub pca_dim: usize,
    pub pad_to: Option<usize>,
    pub trials: usize,
    /// Iteration `t` uses `seed + t` for both the solver and the rounding.
    pub seed: u64,
    pub threads: usize,
    pub metric: Metric,
    pub recurse_on: RecurseOn,
    pub solver: SolverConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            iterations: 4,
            pca_dim: 2,
            pad_to: None,
            trials: DEFAULT_TRIALS,
            seed: 0,
            threads: 1,
            metric: Metric::Euclidean,
            recurse_on: RecurseOn::Pca,
            solver: SolverConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_ITERATIONS).contains(&self.iterations) {
            return Err(Error::input(format!(
                "iterations must be in [1, {MAX_ITERATIONS}], got {}",
                self.iterations
            )));
        }
        if !(2..=3).contains(&self.pca_dim) {
            return Err(Error::input(format!("pca_dim must be 2 or 3, got {}", self.pca_dim)));
        }
        if self.trials == 0 {
            return Err(Error::input("trials must be >= 1"));
        }
        if self.threads == 0 {
            return Err(Error::input("threads must be >= 1"));
        }
        self.solver.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterQuality {
    pub within_cluster_variance: f64,
    pub between_centroid_distance: f64,
    pub separation_ratio: f64,
}

/// Pooled mean squared distance to the own-cluster centroid, the distance
/// between the two centroids, and their ratio `between / (sqrt(within) + 1e-12)`.
/// An empty side gives a centroid distance of 0.
pub fn cluster_quality(points: &PointSet, signs: &[i8]) -> Result<ClusterQuality> {
    if points.len() != signs.len() {
        return Err(Error::input("point and partition lengths differ"));
    }
    let dim = points.dim();
    let mut sums = [vec![0.0; dim], vec![0.0; dim]];
    let mut counts = [0usize; 2];
    let side = |s: i8| usize::from(s < 0);
    for (p, &s) in points.points().iter().zip(signs) {
        counts[side(s)] += 1;
        for (acc, x) in sums[side(s)].iter_mut().zip(p) {
            *acc += x;
        }
    }
    let centroids: Vec<Vec<f64>> = (0..2)
        .map(|k| sums[k].iter().map(|s| s / counts[k].max(1) as f64).collect())
        .collect();
    let mut within = 0.0;
    for (p, &s) in points.points().iter().zip(signs) {
        within += p
            .iter()
            .zip(&centroids[side(s)])
            .map(|(x, c)| (x - c) * (x - c))
            .sum::<f64>();
    }
    within /= points.len().max(1) as f64;
    let between = if counts[0] > 0 && counts[1] > 0 {
        centroids[0]
            .iter()
            .zip(&centroids[1])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    } else {
        0.0
    };
    Ok(ClusterQuality {
        within_cluster_variance: within,
        between_centroid_distance: between,
        separation_ratio: between / (within.sqrt() + QUALITY_EPS),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Warning {
    /// The relaxation hit `max_sweeps` before meeting its tolerances.
    NotConverged { iteration: usize, sweeps: usize },
    /// Every weight is zero, so every partition has cut value 0.
    DegenerateInput { iteration: usize },
    /// The next iteration's input collapsed to a single point.
    DegenerateIteration { iteration: usize },
}

#[derive(Debug, Clone)]
pub struct IterationResult {
    pub index: usize,
    /// Input points; `None` when the run started from a weight matrix.
    pub points: Option<PointSet>,
    /// Weights among the original points (without padding).
    pub weights: WeightMatrix,
    /// Embedding columns of the original points; ambient dimension is the
    /// padded size when padding is active.
    pub embedding: EmbeddingMatrix,
    pub relaxed_objective: f64,
    pub converged: bool,
    pub sweeps: usize,
    pub report: RoundingReport,
    pub partition: CutPartition,
    pub projection: Projection,
    pub quality: ClusterQuality,
    pub warnings: Vec<Warning>,
}

impl IterationResult {
    pub fn pca_coords(&self) -> &PointSet {
        &self.projection.coords
    }
}

fn run_iteration(points: &PointSet, cfg: &PipelineConfig, index: usize) -> Result<IterationResult> {
    let weights = build_weight_matrix_with(points, cfg.metric)?;
    let mut result = run_weights(weights, cfg, index)?;
    result.points = Some(points.clone());
    Ok(result)
}

fn run_weights(weights: WeightMatrix, cfg: &PipelineConfig, index: usize) -> Result<IterationResult> {
    cfg.validate()?;
    let n = weights.size();
    let seed = cfg.seed.wrapping_add(index as u64);
    let padded = match cfg.pad_to {
        Some(m) => pad_weights(&weights, m)?,
        None => weights.clone(),
    };

    let solver = SolverConfig {
        seed,
        ..cfg.solver.clone()
    };
    let relaxation = solve_relaxation(&padded, &solver)?;
    let mut warnings = Vec::new();
    if weights.is_zero() {
        warnings.push(Warning::DegenerateInput { iteration: index });
    }
    if !relaxation.converged {
        warnings.push(Warning::NotConverged {
            iteration: index,
            sweeps: relaxation.sweeps,
        });
    }

    let embedding = cholesky_embed(&gram_matrix(&relaxation.embedding))?;
    let mut report = round_best_threaded(&embedding, &padded, cfg.trials, seed, cfg.threads)?;
    let partition = report.best.restricted(&weights)?;
    report.best = partition.clone();

    let embedding = embedding.leading(n)?;
    let columns = PointSet::from_columns(embedding.vectors())?;
    let projection = pca_project(&columns, cfg.pca_dim)?;
    let quality = cluster_quality(&projection.coords, &partition.signs)?;

    Ok(IterationResult {
        index,
        points: None,
        weights,
        relaxed_objective: report.relaxed_objective,
        converged: relaxation.converged,
        sweeps: relaxation.sweeps,
        embedding,
        report,
        partition,
        projection,
        quality,
        warnings,
    })
}

/// A single pass starting from an explicit weight matrix.
pub fn run_gwa_weights(weights: &WeightMatrix, cfg: &PipelineConfig) -> Result<IterationResult> {
    if weights.size() < 2 {
        return Err(Error::input("clustering needs at least 2 points"));
    }
    run_weights(weights.clone(), cfg, 0)
}

/// A single pass on `points` (iteration 0).
pub fn run_gwa_once(points: &PointSet, cfg: &PipelineConfig) -> Result<IterationResult> {
    if points.len() < 2 {
        return Err(Error::input("clustering needs at least 2 points"));
    }
    run_iteration(points, cfg, 0)
}

#[derive(Debug, Clone)]
pub struct Recursion {
    pub iterations: Vec<IterationResult>,
    pub terminated_early: bool,
}

impl Recursion {
    pub fn warnings(&self) -> impl Iterator<Item = &Warning> {
        self.iterations.iter().flat_map(|r| r.warnings.iter())
    }
}

fn is_degenerate(points: &PointSet) -> bool {
    let first = points.get(0);
    points
        .points()
        .iter()
        .all(|p| p.iter().zip(first).all(|(a, b)| (a - b).abs() <= DEGENERATE_TOL))
}

/// Runs `cfg.iterations` passes, each on the output of the previous one.
pub fn run_recursive(points: &PointSet, cfg: &PipelineConfig) -> Result<Recursion> {
    cfg.validate()?;
    let mut iterations: Vec<IterationResult> = Vec::with_capacity(cfg.iterations);
    let mut input = points.clone();
    let mut terminated_early = false;
    for t in 0..cfg.iterations {
        let result = if t == 0 {
            run_gwa_once(&input, cfg)?
        } else {
            run_iteration(&input, cfg, t)?
        };
        let next = match cfg.recurse_on {
            RecurseOn::Pca => result.projection.coords.clone(),
            RecurseOn::RawEmbedding => PointSet::from_columns(result.embedding.vectors())?,
        };
        iterations.push(result);
        if t + 1 < cfg.iterations && is_degenerate(&next) {
            if let Some(last) = iterations.last_mut() {
                last.warnings.push(Warning::DegenerateIteration { iteration: t });
            }
            terminated_early = true;
            break;
        }
        input = next;
    }
    Ok(Recursion {
        iterations,
        terminated_early,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_maxcut;

    fn two_pairs() -> PointSet {
        PointSet::new(vec![
            vec![0.0, 0.0],
            vec![0.1, 0.0],
            vec![10.0, 0.0],
            vec![10.0, 0.1],
        ])
        .unwrap()
    }

    #[test]
    fn separates_two_tight_pairs() {
        let pts = two_pairs();
        let r = run_gwa_once(&pts, &PipelineConfig::default()).unwrap();
        let exact = brute_force_maxcut(&r.weights).unwrap();
        assert_eq!(r.partition.agreement(&[1, 1, -1, -1]), 1.0);
        assert_eq!(r.partition.cut_value, exact.value);
        let cross: f64 = [(0, 2), (0, 3), (1, 2), (1, 3)]
            .iter()
            .map(|&(i, j)| r.weights.get(i, j))
            .sum();
        assert_eq!(r.partition.cut_value, cross);
    }

    #[test]
    fn pad_to_n_is_identity() {
        let pts = two_pairs();
        let a = run_gwa_once(&pts, &PipelineConfig::default()).unwrap();
        let b = run_gwa_once(&pts, &PipelineConfig { pad_to: Some(4), ..Default::default() }).unwrap();
        assert_eq!(a.partition, b.partition);
        assert_eq!(a.embedding, b.embedding);
        assert_eq!(a.projection, b.projection);
    }

    #[test]
    fn padded_results_are_stripped() {
        let pts = two_pairs();
        let r = run_gwa_once(&pts, &PipelineConfig { pad_to: Some(9), ..Default::default() }).unwrap();
        assert_eq!(r.partition.len(), 4);
        assert_eq!(r.report.best.len(), 4);
        assert_eq!(r.embedding.count(), 4);
        assert_eq!(r.embedding.ambient_dim(), 9);
        assert_eq!(r.pca_coords().len(), 4);
        assert!(matches!(
            run_gwa_once(&pts, &PipelineConfig { pad_to: Some(3), ..Default::default() }),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn quality_of_known_configuration() {
        let pts = PointSet::new(vec![vec![0.0], vec![2.0], vec![10.0], vec![12.0]]).unwrap();
        let q = cluster_quality(&pts, &[1, 1, -1, -1]).unwrap();
        assert_eq!(q.within_cluster_variance, 1.0);
        assert_eq!(q.between_centroid_distance, 10.0);
        assert!((q.separation_ratio - 10.0).abs() < 1e-9);
        let lopsided = cluster_quality(&pts, &[1, 1, 1, 1]).unwrap();
        assert_eq!(lopsided.between_centroid_distance, 0.0);
    }

    #[test]
    fn recursion_returns_requested_iterations() {
        let pts = two_pairs();
        let cfg = PipelineConfig { iterations: 3, ..Default::default() };
        let rec = run_recursive(&pts, &cfg).unwrap();
        assert!(rec.iterations.len() <= 3);
        for (t, it) in rec.iterations.iter().enumerate() {
            assert_eq!(it.index, t);
            assert_eq!(it.partition.len(), 4);
            assert_eq!(it.pca_coords().len(), 4);
            assert!(it.projection.explained_variance.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn single_iteration_matches_once() {
        let pts = two_pairs();
        let cfg = PipelineConfig { iterations: 1, ..Default::default() };
        let rec = run_recursive(&pts, &cfg).unwrap();
        let once = run_gwa_once(&pts, &cfg).unwrap();
        assert_eq!(rec.iterations.len(), 1);
        assert_eq!(rec.iterations[0].partition, once.partition);
        assert_eq!(rec.iterations[0].projection, once.projection);
    }

    #[test]
    fn degenerate_input_is_flagged() {
        let pts = PointSet::new(vec![vec![0.0, 0.0]; 5]).unwrap();
        let r = run_gwa_once(&pts, &PipelineConfig::default()).unwrap();
        assert!(r.warnings.contains(&Warning::DegenerateInput { iteration: 0 }));
        assert_eq!(r.partition.cut_value, 0.0);
    }

    #[test]
    fn config_validation() {
        let pts = two_pairs();
        for cfg in [
            PipelineConfig { iterations: 0, ..Default::default() },
            PipelineConfig { iterations: 6, ..Default::default() },
            PipelineConfig { pca_dim: 4, ..Default::default() },
            PipelineConfig { trials: 0, ..Default::default() },
        ] {
            assert!(matches!(run_recursive(&pts, &cfg), Err(Error::Input(_))));
        }
    }
}
