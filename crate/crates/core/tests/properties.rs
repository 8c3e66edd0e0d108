//! Cross-module invariants: relaxation bounds, rounding statistics, padding
//! and determinism.

mod common;

use common::*;
use gwcut::rounding::{round_best_threaded, trial_rng};
use gwcut::*;
use proptest::prelude::*;

#[test]
fn relaxation_bounds_exact_maxcut_on_random_graphs() {
    for seed in 0..8 {
        let w = random_weights(10, 500 + seed);
        let exact = brute_force_maxcut(&w).unwrap();
        let r = solve_relaxation(&w, &SolverConfig { seed, ..Default::default() }).unwrap();
        assert!(r.objective >= exact.value - 1e-6, "{} < {}", r.objective, exact.value);
    }
}

#[test]
fn round_best_is_sandwiched_and_usually_beats_alpha() {
    let alpha = alpha_constant().alpha;
    for seed in 0..5 {
        let w = random_weights(12, 900 + seed);
        let exact = brute_force_maxcut(&w).unwrap();
        let r = solve_relaxation(&w, &SolverConfig { seed, ..Default::default() }).unwrap();
        let report = round_best(&r.embedding, &w, 200, seed).unwrap();
        assert!(report.best.cut_value <= exact.value);
        assert!(exact.value <= report.relaxed_objective + 1e-6);
        // statistical: best of 200 trials vs the expectation-level bound
        assert!(report.best.cut_value >= alpha * report.relaxed_objective);
        assert!(report.best.cut_value >= report.sampled_mean_cut - 1e-9);
        assert!(report.ratio_to_relaxation <= 1.0 + 1e-9);
    }
}

#[test]
fn monte_carlo_mean_tracks_expected_cut() {
    const TRIALS: usize = 20_000;
    let w = random_weights(9, 41);
    let v = random_embedding(5, 9, 41);
    let report = round_best(&v, &w, TRIALS, 3).unwrap();
    let tol = 4.0 / (TRIALS as f64).sqrt() * w.total_weight();
    assert!((report.sampled_mean_cut - report.closed_form_expected_cut).abs() <= tol);
}

#[test]
fn threaded_rounding_matches_sequential() {
    let w = random_weights(15, 8);
    let v = random_embedding(15, 15, 8);
    let a = round_best(&v, &w, 300, 77).unwrap();
    for threads in [2, 3, 8] {
        assert_eq!(a, round_best_threaded(&v, &w, 300, 77, threads).unwrap());
    }
    // the first trial's normal comes from stream 0
    let r = sample_hyperplane_normal(15, &mut trial_rng(77, 0));
    let first = round_once(&v, &w, &r).unwrap();
    assert!(a.best.cut_value >= first.cut_value);
}

#[test]
fn padding_neutral_for_random_points() {
    let pts = random_points(20, 3, 12);
    let w = build_weight_matrix(&pts).unwrap();
    let base = solve_relaxation(&w, &SolverConfig::default()).unwrap().objective;
    for m in [20, 24, 29] {
        let p = solve_relaxation(&pad_weights(&w, m).unwrap(), &SolverConfig::default())
            .unwrap()
            .objective;
        assert!((p - base).abs() <= 1e-5 * base);
    }
}

#[test]
fn pipeline_is_deterministic() {
    let pts = random_points(30, 4, 5);
    let cfg = PipelineConfig { iterations: 3, seed: 11, ..Default::default() };
    let a = run_recursive(&pts, &cfg).unwrap();
    let b = run_recursive(&pts, &cfg).unwrap();
    assert_eq!(a.iterations.len(), b.iterations.len());
    for (x, y) in a.iterations.iter().zip(&b.iterations) {
        assert_eq!(x.embedding, y.embedding);
        assert_eq!(x.partition, y.partition);
        assert_eq!(x.projection, y.projection);
        assert_eq!(x.quality, y.quality);
    }
}

#[test]
fn recursion_keeps_original_count_with_padding() {
    let pts = random_points(12, 3, 6);
    let cfg = PipelineConfig { iterations: 4, pad_to: Some(17), pca_dim: 3, ..Default::default() };
    let rec = run_recursive(&pts, &cfg).unwrap();
    for it in &rec.iterations {
        assert_eq!(it.partition.len(), 12);
        assert_eq!(it.pca_coords().len(), 12);
        assert_eq!(it.pca_coords().dim(), 3);
        assert_eq!(it.embedding.count(), 12);
        let ev = &it.projection.explained_variance;
        assert!(ev.iter().all(|&x| x >= 0.0));
        assert!(ev.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn raw_embedding_recursion() {
    let pts = random_points(10, 2, 2);
    let cfg = PipelineConfig {
        iterations: 2,
        recurse_on: RecurseOn::RawEmbedding,
        ..Default::default()
    };
    let rec = run_recursive(&pts, &cfg).unwrap();
    assert_eq!(rec.iterations.len(), 2);
    assert_eq!(rec.iterations[1].points.as_ref().unwrap().dim(), 10);
}

fn small_graphs() -> impl Strategy<Value = (usize, u64)> {
    (4usize..=12, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn upper_bound_holds((n, seed) in small_graphs()) {
        let w = random_weights(n, seed);
        let exact = brute_force_maxcut(&w).unwrap();
        let r = solve_relaxation(&w, &SolverConfig { seed, ..Default::default() }).unwrap();
        prop_assert!(r.objective >= exact.value - 1e-6);
        for pair in r.history.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-12 * pair[0].abs().max(1.0));
        }
    }

    #[test]
    fn upper_bound_holds_for_distance_graphs((n, seed) in small_graphs(), d in 1usize..4) {
        let w = build_weight_matrix(&random_points(n, d, seed)).unwrap();
        let exact = brute_force_maxcut(&w).unwrap();
        let r = solve_relaxation(&w, &SolverConfig { seed, ..Default::default() }).unwrap();
        prop_assert!(r.objective >= exact.value - 1e-6, "{} < {}", r.objective, exact.value);
    }

    #[test]
    fn expected_cut_dominates_alpha_times_objective(
        (n, seed) in small_graphs(), dim in 1usize..6
    ) {
        let w = random_weights(n, seed);
        let v = random_embedding(dim, n, seed ^ 0x5eed);
        let alpha = alpha_constant().alpha;
        let e = expected_cut(&v, &w).unwrap();
        let obj = relaxed_objective(&w, &v).unwrap();
        prop_assert!(e >= alpha * obj - 1e-12 * obj.max(1.0));
    }

    #[test]
    fn cholesky_round_trip(seed in any::<u64>(), dim in 1usize..9) {
        let v = random_embedding(dim, 8, seed);
        let x = gram_matrix(&v);
        let back = gram_matrix(&cholesky_embed(&x).unwrap());
        prop_assert!((back - &x).amax() <= 1e-6);
    }

    #[test]
    fn pca_matches_jacobi_oracle(seed in any::<u64>(), n in 8usize..30) {
        let pts = random_points(n, 6, seed);
        let proj = pca_project(&pts, 3).unwrap();
        let eig = jacobi_eigenvalues(&sample_covariance(&pts));
        for k in 0..3 {
            prop_assert!((proj.explained_variance[k] - eig[k]).abs() <= 1e-8);
        }
    }
}
