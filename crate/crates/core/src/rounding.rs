//! Random-hyperplane rounding of an embedding into a two-way partition.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relaxation::{relaxed_objective, EmbeddingMatrix};
use crate::weights::WeightMatrix;

pub const DEFAULT_TRIALS: usize = 100;

/// Sign assignment `y` (`+1` is cluster A) together with its cut value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutPartition {
    pub signs: Vec<i8>,
    pub cut_value: f64,
}

impl CutPartition {
    pub fn from_signs(w: &WeightMatrix, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != w.size() {
            return Err(Error::input(format!(
                "{} signs for a weight matrix of size {}",
                signs.len(),
                w.size()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::input("signs must be +1 or -1"));
        }
        let cut_value = cut_value(w, &signs);
        Ok(Self { signs, cut_value })
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Keeps the first `n` indices, recomputing the cut on `w`.
    pub fn restricted(&self, w: &WeightMatrix) -> Result<Self> {
        if w.size() > self.len() {
            return Err(Error::input("restriction larger than partition"));
        }
        Self::from_signs(w, self.signs[..w.size()].to_vec())
    }

    pub fn flipped(&self) -> Self {
        Self {
            signs: self.signs.iter().map(|s| -s).collect(),
            cut_value: self.cut_value,
        }
    }

    /// Fraction of indices on which two partitions agree, maximized over a
    /// global relabeling.
    pub fn agreement(&self, other: &[i8]) -> f64 {
        let n = self.signs.len().min(other.len());
        if n == 0 {
            return 1.0;
        }
        let same = self.signs.iter().zip(other).filter(|(a, b)| a == b).count();
        same.max(n - same) as f64 / n as f64
    }
}

/// Sum of `w_ij` over pairs `i < j` whose signs differ.
pub fn cut_value(w: &WeightMatrix, signs: &[i8]) -> f64 {
    let n = signs.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            if signs[i] != signs[j] {
                total += w.get(i, j);
            }
        }
    }
    total
}

/// RNG for rounding trial `trial` under `seed`; independent of scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Uniform random unit vector: standard normal components, normalized.
pub fn sample_hyperplane_normal<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<f64> {
    assert!(dim >= 1, "hyperplane dimension must be >= 1");
    loop {
        let r = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = r.norm();
        if norm > 0.0 {
            return r / norm;
        }
    }
}

/// Signs of `<v_i, r>` with ties sent to `+1`.
pub fn round_once(v: &EmbeddingMatrix, w: &WeightMatrix, r: &DVector<f64>) -> Result<CutPartition> {
    if r.len() != v.ambient_dim() {
        return Err(Error::input(format!(
            "hyperplane normal has dimension {} but embedding has {}",
            r.len(),
            v.ambient_dim()
        )));
    }
    if v.count() != w.size() {
        return Err(Error::input(format!(
            "embedding has {} columns but weight matrix has size {}",
            v.count(),
            w.size()
        )));
    }
    let signs = (0..v.count())
        .map(|i| if v.column(i).dot(r) >= 0.0 { 1 } else { -1 })
        .collect();
    CutPartition::from_signs(w, signs)
}

/// Exact expectation of the rounded cut: `sum_{i<j} w_ij arccos(<v_i, v_j>) / pi`.
pub fn expected_cut(v: &EmbeddingMatrix, w: &WeightMatrix) -> Result<f64> {
    if v.count() != w.size() {
        return Err(Error::input("embedding and weight matrix sizes differ"));
    }
    let n = w.size();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let wij = w.get(i, j);
            if wij != 0.0 {
                total += wij * v.dot(i, j).clamp(-1.0, 1.0).acos();
            }
        }
    }
    Ok(total / PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Alpha {
    pub alpha: f64,
    pub theta0: f64,
}

/// `2 theta / (pi (1 - cos theta))`.
pub fn alpha_ratio(theta: f64) -> f64 {
    2.0 * theta / (PI * (1.0 - theta.cos()))
}

/// Minimizes [`alpha_ratio`] over `(0, pi]`.
///
/// The ratio is decreasing on `(0, pi/2]` and its derivative has the sign of
/// `1 - cos t - t sin t`, which changes sign exactly once on `(pi/2, pi)`;
/// that root is located by bisection to machine precision.
pub fn alpha_constant() -> Alpha {
    let stationarity = |t: f64| 1.0 - t.cos() - t * t.sin();
    let (mut lo, mut hi) = (PI / 2.0, PI);
    while hi - lo > f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if stationarity(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta0 = 0.5 * (lo + hi);
    Alpha {
        alpha: alpha_ratio(theta0),
        theta0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingReport {
    pub best: CutPartition,
    pub trials: usize,
    pub sampled_mean_cut: f64,
    pub closed_form_expected_cut: f64,
    pub relaxed_objective: f64,
    /// `best.cut_value / relaxed_objective`, or 0 when the objective is 0.
    pub ratio_to_relaxation: f64,
    pub seed: u64,
}

pub fn round_best(
    v: &EmbeddingMatrix,
    w: &WeightMatrix,
    trials: usize,
    seed: u64,
) -> Result<RoundingReport> {
    round_best_threaded(v, w, trials, seed, 1)
}

/// Like [`round_best`], running trials on `threads` workers. Each trial draws
/// from its own `(seed, trial)` stream so the report does not depend on
/// `threads`.
pub fn round_best_threaded(
    v: &EmbeddingMatrix,
    w: &WeightMatrix,
    trials: usize,
    seed: u64,
    threads: usize,
) -> Result<RoundingReport> {
    if trials == 0 {
        return Err(Error::input("rounding needs at least one trial"));
    }
    let dim = v.ambient_dim();
    let one = |t: usize| {
        let r = sample_hyperplane_normal(dim, &mut trial_rng(seed, t));
        round_once(v, w, &r)
    };
    let results: Vec<CutPartition> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::input(format!("cannot start thread pool: {e}")))?;
        pool.install(|| (0..trials).into_par_iter().map(one).collect::<Result<_>>())?
    } else {
        (0..trials).map(one).collect::<Result<_>>()?
    };

    let mut best = 0;
    for (t, p) in results.iter().enumerate() {
        if p.cut_value > results[best].cut_value {
            best = t;
        }
    }
    let sampled_mean_cut = results.iter().map(|p| p.cut_value).sum::<f64>() / trials as f64;
    let relaxed = relaxed_objective(w, v)?;
    let best = results.into_iter().nth(best).expect("trials >= 1");
    let ratio = if relaxed > 0.0 {
        best.cut_value / relaxed
    } else {
        0.0
    };
    Ok(RoundingReport {
        best,
        trials,
        sampled_mean_cut,
        closed_form_expected_cut: expected_cut(v, w)?,
        relaxed_objective: relaxed,
        ratio_to_relaxation: ratio,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::validate_weights;
    use nalgebra::DMatrix;

    fn k3() -> WeightMatrix {
        validate_weights(&[
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    fn pair() -> WeightMatrix {
        validate_weights(&[vec![0.0, 2.5], vec![2.5, 0.0]]).unwrap()
    }

    fn antipodal() -> EmbeddingMatrix {
        EmbeddingMatrix::new(DMatrix::from_row_slice(2, 2, &[0.6, -0.6, 0.8, -0.8])).unwrap()
    }

    fn triangle() -> EmbeddingMatrix {
        let a = 2.0 * PI / 3.0;
        EmbeddingMatrix::new(DMatrix::from_row_slice(
            2,
            3,
            &[1.0, a.cos(), (2.0 * a).cos(), 0.0, a.sin(), (2.0 * a).sin()],
        ))
        .unwrap()
    }

    #[test]
    fn one_dimensional_normal_is_a_sign() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..20 {
            let r = sample_hyperplane_normal(1, &mut rng);
            assert!(r[0] == 1.0 || r[0] == -1.0);
        }
    }

    #[test]
    fn normals_are_unit_and_reproducible() {
        let a = sample_hyperplane_normal(3, &mut trial_rng(42, 3));
        let b = sample_hyperplane_normal(3, &mut trial_rng(42, 3));
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert_ne!(a, sample_hyperplane_normal(3, &mut trial_rng(42, 4)));
    }

    #[test]
    fn planar_normals_have_uniform_angles() {
        const BINS: usize = 20;
        const SAMPLES: usize = 10_000;
        // chi-square critical value, 19 degrees of freedom, significance 0.01
        const CRITICAL: f64 = 36.191;
        let mut rng = trial_rng(2024, 0);
        let mut counts = [0usize; BINS];
        for _ in 0..SAMPLES {
            let r = sample_hyperplane_normal(2, &mut rng);
            let angle = r[1].atan2(r[0]).rem_euclid(2.0 * PI);
            counts[((angle / (2.0 * PI)) * BINS as f64) as usize % BINS] += 1;
        }
        let expected = SAMPLES as f64 / BINS as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < CRITICAL, "chi2 = {chi2}");
    }

    #[test]
    fn antipodal_pair_is_always_cut() {
        let mut rng = trial_rng(5, 0);
        for _ in 0..50 {
            let r = sample_hyperplane_normal(2, &mut rng);
            assert_eq!(round_once(&antipodal(), &pair(), &r).unwrap().cut_value, 2.5);
        }
    }

    #[test]
    fn identical_columns_are_never_cut() {
        let v = EmbeddingMatrix::new(DMatrix::from_row_slice(2, 3, &[0.6, 0.6, 0.6, 0.8, 0.8, 0.8]))
            .unwrap();
        let mut rng = trial_rng(6, 0);
        for _ in 0..50 {
            let r = sample_hyperplane_normal(2, &mut rng);
            assert_eq!(round_once(&v, &k3(), &r).unwrap().cut_value, 0.0);
        }
    }

    #[test]
    fn ties_go_to_plus_one() {
        let v = EmbeddingMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0])).unwrap();
        let r = DVector::from_vec(vec![0.0, 1.0]);
        let p = round_once(&v, &pair(), &r).unwrap();
        assert_eq!(p.signs, vec![1, 1]);
    }

    #[test]
    fn round_once_dimension_mismatch() {
        let r = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        assert!(matches!(round_once(&antipodal(), &pair(), &r), Err(Error::Input(_))));
        let r2 = DVector::from_vec(vec![1.0, 0.0]);
        assert!(matches!(round_once(&antipodal(), &k3(), &r2), Err(Error::Input(_))));
    }

    #[test]
    fn triangle_monte_carlo_mean_is_two() {
        const TRIALS: usize = 100_000;
        let mut rng = trial_rng(77, 0);
        let cuts: Vec<f64> = (0..TRIALS)
            .map(|_| {
                let r = sample_hyperplane_normal(2, &mut rng);
                round_once(&triangle(), &k3(), &r).unwrap().cut_value
            })
            .collect();
        let mean = cuts.iter().sum::<f64>() / TRIALS as f64;
        let var = cuts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (TRIALS - 1) as f64;
        let se = (var / TRIALS as f64).sqrt();
        // separation probability of each pair is (2 pi / 3) / pi
        let analytic = 3.0 * (2.0 / 3.0);
        assert!((mean - analytic).abs() <= 3.0 * se, "{mean} vs {analytic} (se {se})");
        assert!((expected_cut(&triangle(), &k3()).unwrap() - analytic).abs() < 1e-12);
    }

    #[test]
    fn expected_cut_simple_pairs() {
        let same = EmbeddingMatrix::new(DMatrix::from_row_slice(1, 2, &[1.0, 1.0])).unwrap();
        let w = validate_weights(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let anti = EmbeddingMatrix::new(DMatrix::from_row_slice(1, 2, &[1.0, -1.0])).unwrap();
        assert_eq!(expected_cut(&anti, &w).unwrap(), 1.0);
        assert_eq!(expected_cut(&same, &w).unwrap(), 0.0);
    }

    #[test]
    fn alpha_matches_known_values() {
        let a = alpha_constant();
        assert!(a.alpha > 0.878 && a.alpha < 0.879);
        assert!(a.alpha > 0.8785 && a.alpha < 0.8786);
        assert!((a.theta0 - 2.331122).abs() < 1e-4);
        assert!((a.alpha - 2.0 / (PI * a.theta0.sin())).abs() < 1e-6);
        // independent check: dense grid never beats the returned minimum
        let grid_min = (1..=200_000)
            .map(|k| alpha_ratio(PI * k as f64 / 200_000.0))
            .fold(f64::INFINITY, f64::min);
        assert!(a.alpha <= grid_min + 1e-12);
        assert!(grid_min - a.alpha < 1e-9);
    }

    #[test]
    fn round_best_single_trial_equals_round_once() {
        let v = triangle();
        let report = round_best(&v, &k3(), 1, 31).unwrap();
        let r = sample_hyperplane_normal(2, &mut trial_rng(31, 0));
        assert_eq!(report.best, round_once(&v, &k3(), &r).unwrap());
        assert_eq!(report.sampled_mean_cut, report.best.cut_value);
    }

    #[test]
    fn round_best_antipodal_pair() {
        let report = round_best(&antipodal(), &pair(), 17, 0).unwrap();
        assert_eq!(report.best.cut_value, 2.5);
        assert_eq!(report.ratio_to_relaxation, 1.0);
    }

    #[test]
    fn round_best_rejects_zero_trials() {
        assert!(matches!(round_best(&antipodal(), &pair(), 0, 0), Err(Error::Input(_))));
    }

    #[test]
    fn threads_do_not_change_report() {
        let v = triangle();
        let a = round_best(&v, &k3(), 64, 12).unwrap();
        let b = round_best_threaded(&v, &k3(), 64, 12, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn both_cut_forms_agree_exactly() {
        let w = k3();
        for signs in [vec![1, 1, -1], vec![1, -1, 1], vec![-1, -1, -1]] {
            let mut half_form = 0.0;
            for i in 0..3 {
                for j in (i + 1)..3 {
                    half_form += 0.5 * w.get(i, j) * (1.0 - (signs[i] * signs[j]) as f64);
                }
            }
            assert_eq!(cut_value(&w, &signs), half_form);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn pointwise_alpha_inequality(theta in 1e-6f64..=PI) {
                let a = alpha_constant().alpha;
                prop_assert!(theta / PI >= a * (1.0 - theta.cos()) / 2.0 - 1e-12);
            }

            #[test]
            fn sign_flip_keeps_cut(signs in proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 3)) {
                let w = k3();
                let p = CutPartition::from_signs(&w, signs).unwrap();
                prop_assert_eq!(cut_value(&w, &p.flipped().signs), p.cut_value);
                prop_assert!(p.cut_value <= w.total_weight());
            }
        }
    }
}
