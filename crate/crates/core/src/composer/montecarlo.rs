//! Seeded perturbation trials.
//!
//! Trial `i` of seed `s` draws from its own ChaCha stream (`s`, stream `i`), so
//! results do not depend on how trials are scheduled across workers.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::action::Composition;
use super::model::NoiseModel;
use super::report::MonteCarloSummary;
use crate::error::Result;
use crate::geom::{min_distance, ShapeSet, Vec2, Vec3};

/// Independent random stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    CollisionFailure,
    FallFailure,
}

/// Result of one perturbed execution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialDetail {
    pub collided: bool,
    pub fell: bool,
    /// Smallest perturbed body/obstacle clearance (m).
    pub min_distance: f64,
    /// Smallest perturbed CoM margin (m); negative means outside.
    pub min_margin: f64,
}

impl TrialDetail {
    /// Collision takes precedence when both failures occur.
    pub fn outcome(&self) -> Outcome {
        if self.collided {
            Outcome::CollisionFailure
        } else if self.fell {
            Outcome::FallFailure
        } else {
            Outcome::Success
        }
    }
}

fn gaussian3(rng: &mut ChaCha8Rng, sigma: f64) -> Vec3 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    let z: f64 = rng.sample(StandardNormal);
    Vec3::new(x, y, z) * sigma
}

fn gaussian2(rng: &mut ChaCha8Rng, sigma: f64) -> Vec2 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    Vec2::new(x, y) * sigma
}

/// Runs one trial: every named obstacle is shifted rigidly by its own
/// Gaussian displacement, and every CoM sample receives independent 2-D noise.
/// Penetration (zero clearance) is a collision failure; a CoM strictly outside
/// its support polygon is a fall failure.
pub fn run_trial(
    composition: &Composition,
    obstacles: &BTreeMap<String, ShapeSet>,
    noise: &NoiseModel,
    rng: &mut ChaCha8Rng,
) -> Result<TrialDetail> {
    let shifted: Vec<ShapeSet> = obstacles
        .values()
        .map(|set| {
            let d = gaussian3(rng, noise.obstacle_pose_sigma);
            set.translated(&d)
        })
        .collect();
    let scene = ShapeSet::concat(shifted.iter())?;

    let mut min_d = f64::INFINITY;
    let mut min_margin = f64::INFINITY;
    for action in &composition.actions {
        for sample in action.trajectory.samples() {
            if min_d > 0.0 {
                min_d = min_d.min(min_distance(&sample.body, &scene)?);
            }
            let com = sample.com_xy + gaussian2(rng, noise.com_sigma);
            min_margin = min_margin.min(sample.support.signed_margin(&com));
        }
    }
    Ok(TrialDetail {
        collided: min_d <= 0.0,
        fell: min_margin < 0.0,
        min_distance: min_d,
        min_margin,
    })
}

/// Failure rates over `noise.trials` independent trials.
pub fn monte_carlo_failure(
    composition: &Composition,
    obstacles: &BTreeMap<String, ShapeSet>,
    noise: &NoiseModel,
) -> Result<MonteCarloSummary> {
    noise.validate()?;
    let details = (0..noise.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(composition, obstacles, noise, &mut trial_rng(noise.seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let n = f64::from(noise.trials);
    let count = |f: fn(&TrialDetail) -> bool| details.iter().filter(|d| f(d)).count() as f64 / n;
    Ok(MonteCarloSummary {
        collision_failure_rate: count(|d| d.collided),
        fall_failure_rate: count(|d| d.fell),
        failure_rate: count(|d| d.collided || d.fell),
        trials: noise.trials,
        seed: noise.seed,
    })
}
