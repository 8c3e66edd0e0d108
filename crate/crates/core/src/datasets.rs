//! Synthetic two-cluster datasets: separated cubes and interlocking moons.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::PointSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CubesParams {
    pub count: usize,
    /// Distance between the cube centers.
    pub separation: f64,
    pub edge: f64,
    pub seed: u64,
}

impl Default for CubesParams {
    fn default() -> Self {
        Self {
            count: 100,
            separation: 4.0,
            edge: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MoonsParams {
    pub count: usize,
    pub noise: f64,
    pub seed: u64,
}

impl Default for MoonsParams {
    fn default() -> Self {
        Self {
            count: 100,
            noise: 0.05,
            seed: 0,
        }
    }
}

/// A generated point set with its planted cluster labels (0 or 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Labeled {
    pub points: PointSet,
    pub labels: Vec<u8>,
}

fn check_even(count: usize) -> Result<()> {
    if count == 0 || count % 2 == 1 {
        return Err(Error::input(format!("count must be even and positive, got {count}")));
    }
    Ok(())
}

/// Two axis-aligned cubes of side `edge`, centers `separation` apart along x,
/// with `count / 2` uniform points in each.
pub fn gen_two_cubes(p: &CubesParams) -> Result<Labeled> {
    check_even(p.count)?;
    if !(p.edge > 0.0) || !(p.separation >= 0.0) {
        return Err(Error::input("cube edge must be positive and separation nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let half = p.count / 2;
    let mut points = Vec::with_capacity(p.count);
    let mut labels = Vec::with_capacity(p.count);
    for (label, cx) in [(0u8, 0.0), (1u8, p.separation)] {
        for _ in 0..half {
            let mut pt: Vec<f64> = (0..3)
                .map(|_| rng.random_range(-0.5..0.5) * p.edge)
                .collect();
            pt[0] += cx;
            points.push(pt);
            labels.push(label);
        }
    }
    Ok(Labeled {
        points: PointSet::new(points)?,
        labels,
    })
}

/// Two interlocking unit half-circles: the upper arc `(cos t, sin t)` and the
/// lower arc `(1 - cos t, 1 - sin t - 0.5)` for `t` evenly spaced on `[0, pi]`,
/// each perturbed by Gaussian noise of scale `noise`.
pub fn gen_moons(p: &MoonsParams) -> Result<Labeled> {
    check_even(p.count)?;
    let noise = Normal::new(0.0, p.noise)
        .map_err(|_| Error::input(format!("invalid moons noise {}", p.noise)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let half = p.count / 2;
    let t = |k: usize| {
        if half == 1 {
            0.0
        } else {
            PI * k as f64 / (half - 1) as f64
        }
    };
    let mut points = Vec::with_capacity(p.count);
    let mut labels = Vec::with_capacity(p.count);
    for k in 0..half {
        points.push(vec![t(k).cos(), t(k).sin()]);
        labels.push(0);
    }
    for k in 0..half {
        points.push(vec![1.0 - t(k).cos(), 1.0 - t(k).sin() - 0.5]);
        labels.push(1);
    }
    if p.noise > 0.0 {
        for pt in &mut points {
            for x in pt.iter_mut() {
                *x += noise.sample(&mut rng);
            }
        }
    }
    Ok(Labeled {
        points: PointSet::new(points)?,
        labels,
    })
}
