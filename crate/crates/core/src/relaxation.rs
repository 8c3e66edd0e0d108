//! The vector relaxation of MaxCut.
//!
//! Each index `i` gets a unit vector `v_i` and the solver maximizes
//! `1/2 * sum_{i<j} w_ij (1 - <v_i, v_j>)`, equivalently minimizes
//! `1/4 * tr(W X)` over Gram matrices `X = V^T V` with unit diagonal.
//!
//! The solver is a low-rank block coordinate ascent: every column update
//! `v_i <- -normalize(sum_j w_ij v_j)` is the exact maximizer of the objective
//! over `v_i` with the other columns held fixed, so the objective never
//! decreases. With `rank >= ceil(sqrt(2m))` second-order stationary points of
//! the low-rank problem are optimal for the full semidefinite program on
//! generic instances; the default rank is `m`.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::WeightMatrix;

pub const UNIT_NORM_TOL: f64 = 1e-8;
pub const PSD_TOL: f64 = 1e-7;
pub const CHOLESKY_JITTER: f64 = 1e-10;

/// Unit vectors `v_1..v_m` stored as the columns of a `k x m` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    vectors: DMatrix<f64>,
}

impl EmbeddingMatrix {
    /// Wraps `vectors`, checking every column has unit norm.
    pub fn new(vectors: DMatrix<f64>) -> Result<Self> {
        if vectors.nrows() == 0 || vectors.ncols() == 0 {
            return Err(Error::input("embedding must have at least one row and column"));
        }
        for (i, c) in vectors.column_iter().enumerate() {
            let norm = c.norm();
            if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::Numeric(format!(
                    "embedding column {i} has norm {norm}, expected 1"
                )));
            }
        }
        Ok(Self { vectors })
    }

    /// Normalizes every column of `vectors`; zero columns are rejected.
    pub fn normalized(mut vectors: DMatrix<f64>) -> Result<Self> {
        for (i, mut c) in vectors.column_iter_mut().enumerate() {
            let norm = c.norm();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::Numeric(format!("embedding column {i} cannot be normalized")));
            }
            c /= norm;
        }
        Self::new(vectors)
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn count(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn column(&self, i: usize) -> nalgebra::DVectorView<'_, f64> {
        self.vectors.column(i)
    }

    pub fn dot(&self, i: usize, j: usize) -> f64 {
        self.vectors.column(i).dot(&self.vectors.column(j))
    }

    /// Keeps the first `n` columns (drops padded phantom indices).
    pub fn leading(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.count() {
            return Err(Error::input(format!(
                "cannot keep {n} of {} embedding columns",
                self.count()
            )));
        }
        Ok(Self {
            vectors: self.vectors.columns(0, n).into_owned(),
        })
    }

    /// Applies `q` (a `k x k` matrix) to every column.
    pub fn transformed(&self, q: &DMatrix<f64>) -> Result<Self> {
        if q.ncols() != self.ambient_dim() {
            return Err(Error::input("transform dimension does not match embedding"));
        }
        Self::new(q * &self.vectors)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Rows of `V`; `None` means the column count `m`.
    pub rank: Option<usize>,
    pub max_sweeps: usize,
    /// Relative objective change per sweep below which the solver may stop.
    pub objective_tol: f64,
    /// Largest allowed `|v_i + g_i/|g_i||` at a reported stationary point,
    /// where `g_i = sum_j w_ij v_j`.
    pub stationarity_tol: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rank: None,
            max_sweeps: 500,
            objective_tol: 1e-7,
            stationarity_tol: 1e-6,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rank == Some(0) {
            return Err(Error::input("solver rank must be >= 1"));
        }
        if !(self.objective_tol > 0.0) || !(self.stationarity_tol > 0.0) {
            return Err(Error::input("solver tolerances must be positive"));
        }
        if self.max_sweeps == 0 {
            return Err(Error::input("max_sweeps must be >= 1"));
        }
        Ok(())
    }
}

/// Solver output. `converged == false` is a warning, not a failure: the
/// embedding is still the best (last) iterate.
#[derive(Debug, Clone)]
pub struct Relaxation {
    pub embedding: EmbeddingMatrix,
    pub objective: f64,
    pub converged: bool,
    pub sweeps: usize,
    /// Objective at initialization followed by the value after each sweep.
    pub history: Vec<f64>,
    pub stationarity: f64,
}

fn check_sizes(w: &WeightMatrix, v: &EmbeddingMatrix) -> Result<()> {
    if v.count() != w.size() {
        return Err(Error::input(format!(
            "embedding has {} columns but weight matrix has size {}",
            v.count(),
            w.size()
        )));
    }
    Ok(())
}

fn objective_unchecked(w: &WeightMatrix, v: &DMatrix<f64>) -> f64 {
    let n = w.size();
    let mut total = 0.0;
    for j in 0..n {
        let vj = v.column(j);
        for i in 0..j {
            let wij = w.get(i, j);
            if wij != 0.0 {
                total += wij * (1.0 - v.column(i).dot(&vj));
            }
        }
    }
    0.5 * total
}

/// `1/2 * sum_{i<j} w_ij (1 - <v_i, v_j>)`.
pub fn relaxed_objective(w: &WeightMatrix, v: &EmbeddingMatrix) -> Result<f64> {
    check_sizes(w, v)?;
    Ok(objective_unchecked(w, v.vectors()))
}

/// Largest distance between `v_i` and `-g_i/|g_i|` over columns with `g_i != 0`.
pub fn stationarity_residual(w: &WeightMatrix, v: &EmbeddingMatrix) -> Result<f64> {
    check_sizes(w, v)?;
    Ok(residual_unchecked(w, v.vectors()))
}

fn residual_unchecked(w: &WeightMatrix, v: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..w.size() {
        let g = v * w.entries().column(i);
        let norm = g.norm();
        if norm > 0.0 {
            let r = (v.column(i) + g / norm).norm();
            worst = worst.max(r);
        }
    }
    worst
}

fn random_unit_columns(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DMatrix::zeros(rows, cols);
    for mut c in v.column_iter_mut() {
        loop {
            for x in c.iter_mut() {
                *x = StandardNormal.sample(&mut rng);
            }
            let norm = c.norm();
            if norm > 0.0 {
                c /= norm;
                break;
            }
        }
    }
    v
}

/// Maximizes the relaxed objective by cyclic column updates.
///
/// Columns whose weight row is identically zero (for example padded phantom
/// indices) keep their random initialization.
pub fn solve_relaxation(w: &WeightMatrix, cfg: &SolverConfig) -> Result<Relaxation> {
    cfg.validate()?;
    let m = w.size();
    let rank = cfg.rank.unwrap_or(m);
    let mut v = random_unit_columns(rank, m, cfg.seed);
    let active: Vec<usize> = (0..m)
        .filter(|&i| w.entries().column(i).iter().any(|&x| x != 0.0))
        .collect();

    let mut objective = objective_unchecked(w, &v);
    let mut history = vec![objective];
    let mut converged = false;
    let mut stationarity = f64::NAN;
    let mut sweeps = 0;
    let mut g = DVector::zeros(rank);

    while sweeps < cfg.max_sweeps {
        for &i in &active {
            v.mul_to(&w.entries().column(i), &mut g);
            let norm = g.norm();
            if norm > 0.0 {
                v.column_mut(i).copy_from(&(&g / -norm));
            }
        }
        sweeps += 1;
        let next = objective_unchecked(w, &v);
        let change = (next - objective).abs() / next.abs().max(f64::MIN_POSITIVE);
        objective = next;
        history.push(objective);
        if change < cfg.objective_tol || objective == 0.0 {
            stationarity = residual_unchecked(w, &v);
            if stationarity <= cfg.stationarity_tol {
                converged = true;
                break;
            }
        }
    }
    if stationarity.is_nan() || !converged {
        stationarity = residual_unchecked(w, &v);
    }

    Ok(Relaxation {
        embedding: EmbeddingMatrix::new(v)?,
        objective,
        converged,
        sweeps,
        history,
        stationarity,
    })
}

/// Embeds `w` as the leading block of an `m x m` zero matrix.
pub fn pad_weights(w: &WeightMatrix, m: usize) -> Result<WeightMatrix> {
    let n = w.size();
    if m < n {
        return Err(Error::input(format!("cannot pad a {n}x{n} matrix down to {m}")));
    }
    let mut padded = DMatrix::zeros(m, m);
    padded.view_mut((0, 0), (n, n)).copy_from(w.entries());
    Ok(WeightMatrix::from_trusted(padded))
}

/// `X = V^T V`.
pub fn gram_matrix(v: &EmbeddingMatrix) -> DMatrix<f64> {
    v.vectors().tr_mul(v.vectors())
}

/// Factors a unit-diagonal PSD matrix as `X = V^T V` with `V` upper
/// triangular (`V = L^T` for the Cholesky factor `L`).
///
/// Singular inputs get a diagonal jitter before factorization and the
/// resulting columns are renormalized.
pub fn cholesky_embed(x: &DMatrix<f64>) -> Result<EmbeddingMatrix> {
    let n = x.nrows();
    if n == 0 || !x.is_square() {
        return Err(Error::input("Gram matrix must be square and nonempty"));
    }
    for i in 0..n {
        if !(x[(i, i)] - 1.0).abs().le(&UNIT_NORM_TOL) {
            return Err(Error::input(format!(
                "Gram matrix diagonal entry {i} is {}, expected 1",
                x[(i, i)]
            )));
        }
        for j in (i + 1)..n {
            if !(x[(i, j)] - x[(j, i)]).abs().le(&1e-9) {
                return Err(Error::input(format!("Gram matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    let sym = (x + x.transpose()) * 0.5;

    if let Some(chol) = Cholesky::new(sym.clone()) {
        return EmbeddingMatrix::normalized(chol.l().transpose());
    }

    let min_eig = SymmetricEigen::new(sym.clone()).eigenvalues.min();
    if min_eig < -PSD_TOL {
        return Err(Error::Numeric(format!(
            "Gram matrix is indefinite (smallest eigenvalue {min_eig:e})"
        )));
    }
    let jitter = CHOLESKY_JITTER + (-min_eig).max(0.0);
    let shifted = sym + DMatrix::identity(n, n) * jitter;
    let chol = Cholesky::new(shifted).ok_or_else(|| {
        Error::Numeric("Cholesky factorization failed after diagonal jitter".into())
    })?;
    EmbeddingMatrix::normalized(chol.l().transpose())
}
