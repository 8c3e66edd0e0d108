//! Goemans-Williamson MaxCut clustering.
//!
//! Points become a pairwise-distance weight matrix, the vector relaxation of
//! MaxCut embeds every point on the unit sphere, and random hyperplanes round
//! the embedding into two clusters. The crate adds a recursive mode that feeds
//! the PCA projection of each embedding back in as the next dataset, zero
//! padding of the weight matrix to relax into more dimensions, exact
//! enumeration for small instances, synthetic datasets, and an anchored
//! co-occurrence vectorizer for text corpora.

pub mod cli;
pub mod datasets;
pub mod error;
pub mod io;
pub mod oracle;
pub mod pca;
pub mod pipeline;
pub mod relaxation;
pub mod rounding;
pub mod svg;
pub mod vectorizer;
pub mod weights;

pub use error::{Error, Result};
pub use oracle::{brute_force_maxcut, ExactCutResult};
pub use pca::{pca_project, Projection};
pub use pipeline::{
    cluster_quality, run_gwa_once, run_gwa_weights, run_recursive, ClusterQuality, IterationResult,
    PipelineConfig, RecurseOn, Recursion,
};
pub use relaxation::{
    cholesky_embed, gram_matrix, pad_weights, relaxed_objective, solve_relaxation,
    EmbeddingMatrix, Relaxation, SolverConfig,
};
pub use rounding::{
    alpha_constant, expected_cut, round_best, round_once, sample_hyperplane_normal, CutPartition,
    RoundingReport,
};
pub use weights::{build_weight_matrix, validate_weights, Metric, PointSet, WeightMatrix};
