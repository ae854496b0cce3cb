//! Action compositions: evaluation, total risk, ranking, and failure estimation.

mod action;
mod model;
mod montecarlo;
mod report;

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use action::{Action, ActionKind, Composition, CONTIGUITY_TOL};
pub use model::{total_risk, NoiseModel, RiskWeights};
pub use montecarlo::{monte_carlo_failure, run_trial, trial_rng, Outcome, TrialDetail};
pub use report::{CollisionSummary, FallSummary, MonteCarloSummary, Payoff, RiskReport};

use crate::balance::{fall_risk_from_series, margin_series, MarginSample};
use crate::collision::{collision_risk_from_series, distance_series, DistanceSample};
use crate::error::{Result, RiskError};
use crate::geom::ShapeSet;
use crate::grasp::combined_grasp_risk;
use crate::scenario::{Scenario, ScenarioParams};

/// Sum of action durations and of CoM plus end-effector travel.
///
/// The end-effector proxy is the reference point of the last primitive of
/// each body sample.
pub fn payoff(composition: &Composition) -> Payoff {
    let mut duration = 0.0;
    let mut path_length = 0.0;
    for action in &composition.actions {
        let traj = &action.trajectory;
        duration += traj.duration();
        for w in traj.samples().windows(2) {
            path_length += (w[1].com_xy - w[0].com_xy).norm();
            let ee = |s: &crate::trajectory::TrajectorySample| {
                s.body.shapes()[s.body.len() - 1].reference_point()
            };
            path_length += (ee(&w[1]) - ee(&w[0])).norm();
        }
    }
    Payoff {
        duration,
        path_length,
    }
}

/// Per-sample series of a composition, concatenated over its actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionSeries {
    pub id: String,
    pub uncertainty_radius: f64,
    pub d_series: Vec<DistanceSample>,
    pub margin_series: Vec<MarginSample>,
    pub track: Vec<TrackPoint>,
}

/// Projected CoM and the active support polygon at one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackPoint {
    pub t: f64,
    pub com_xy: [f64; 2],
    pub support: Vec<[f64; 2]>,
}

pub fn composition_series(
    composition: &Composition,
    obstacles: &ShapeSet,
    params: &ScenarioParams,
) -> Result<CompositionSeries> {
    let mut d = Vec::new();
    let mut m = Vec::new();
    let mut track = Vec::new();
    for action in &composition.actions {
        d.extend(distance_series(
            &action.trajectory,
            obstacles,
            &params.collision,
        )?);
        m.extend(margin_series(&action.trajectory, &params.fall));
        track.extend(action.trajectory.samples().iter().map(|s| TrackPoint {
            t: s.t,
            com_xy: [s.com_xy.x, s.com_xy.y],
            support: s.support.vertices().iter().map(|v| [v.x, v.y]).collect(),
        }));
    }
    Ok(CompositionSeries {
        id: composition.id.clone(),
        uncertainty_radius: params.fall.uncertainty_radius,
        d_series: d,
        margin_series: m,
        track,
    })
}

/// Probability that at least one grasp in the composition fails, treating
/// grasps as independent.
pub fn composition_grasp_risk(composition: &Composition, params: &ScenarioParams) -> Result<f64> {
    let mut survive = 1.0;
    for action in &composition.actions {
        if let Some(dev) = &action.grasp {
            survive *= 1.0 - combined_grasp_risk(&dev.position, &dev.angular, &params.grasp)?;
        }
    }
    Ok(1.0 - survive)
}

/// Full report for one composition under `params`.
pub fn evaluate_composition(
    scenario: &Scenario,
    composition: &Composition,
    params: &ScenarioParams,
) -> Result<RiskReport> {
    params.validate()?;
    let obstacles = scenario.obstacle_set()?;
    let series = composition_series(composition, &obstacles, params)?;
    let collision = collision_risk_from_series(series.d_series, &params.collision);
    let fall = fall_risk_from_series(series.margin_series, &params.fall);
    let grasp = composition_grasp_risk(composition, params)?;
    let total = total_risk(collision.combined, fall.combined, grasp, &params.weights)?;
    let monte_carlo = monte_carlo_failure(composition, &scenario.obstacles, &params.noise)?;
    Ok(RiskReport {
        id: composition.id.clone(),
        collision: CollisionSummary {
            peak: collision.peak,
            exposure: collision.exposure,
            combined: collision.combined,
            d_min: collision.d_min,
        },
        fall: FallSummary {
            peak: fall.peak,
            exposure: fall.exposure,
            combined: fall.combined,
            min_margin: fall.min_margin,
        },
        grasp,
        total,
        payoff: payoff(composition),
        monte_carlo,
    })
}

/// Reports for every composition, in scenario order.
pub fn evaluate_scenario(scenario: &Scenario, params: &ScenarioParams) -> Result<Vec<RiskReport>> {
    scenario
        .compositions
        .par_iter()
        .map(|c| evaluate_composition(scenario, c, params))
        .collect()
}

/// Ascending total risk, then shorter duration, then id. The full list is
/// returned: the engine orders, the operator decides.
pub fn rank_compositions(reports: &[RiskReport]) -> Vec<RiskReport> {
    let mut out = reports.to_vec();
    out.sort_by(|a, b| {
        a.total
            .total_cmp(&b.total)
            .then(a.payoff.duration.total_cmp(&b.payoff.duration))
            .then_with(|| a.id.cmp(&b.id))
    });
    out
}

/// Average ranks (1-based), ties sharing the mean of their positions.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]].total_cmp(&values[idx[i]]) == Ordering::Equal
        {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation between `xs` and `ys`.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(RiskError::InsufficientData("series lengths differ".into()));
    }
    if xs.len() < 3 {
        return Err(RiskError::InsufficientData(format!(
            "rank correlation needs at least 3 points, got {}",
            xs.len()
        )));
    }
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(RiskError::InsufficientData(
            "rank correlation is undefined for a constant series".into(),
        ));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Rank correlation between total risk and mean Monte Carlo failure rate.
pub fn correlate_risk_failure(reports: &[RiskReport]) -> Result<f64> {
    let risk: Vec<f64> = reports.iter().map(|r| r.total).collect();
    let fail: Vec<f64> = reports
        .iter()
        .map(|r| r.monte_carlo.mean_failure_rate())
        .collect();
    spearman(&risk, &fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(id: &str, total: f64, duration: f64) -> RiskReport {
        let zero = MonteCarloSummary {
            collision_failure_rate: 0.0,
            fall_failure_rate: 0.0,
            failure_rate: 0.0,
            trials: 1,
            seed: 0,
        };
        RiskReport {
            id: id.into(),
            collision: CollisionSummary {
                peak: 0.0,
                exposure: 0.0,
                combined: 0.0,
                d_min: 1.0,
            },
            fall: FallSummary {
                peak: 0.0,
                exposure: 0.0,
                combined: 0.0,
                min_margin: 1.0,
            },
            grasp: 0.0,
            total,
            payoff: Payoff {
                duration,
                path_length: 0.0,
            },
            monte_carlo: zero,
        }
    }

    fn ids(rs: &[RiskReport]) -> Vec<&str> {
        rs.iter().map(|r| r.id.as_str()).collect()
    }

    #[test]
    fn ranks_ascending_by_total() {
        let rs = [
            report("c", 0.9, 1.0),
            report("a", 0.2, 1.0),
            report("b", 0.5, 1.0),
        ];
        assert_eq!(ids(&rank_compositions(&rs)), ["a", "b", "c"]);
    }

    #[test]
    fn ties_break_on_duration_then_id() {
        let rs = [report("slow", 0.4, 10.0), report("fast", 0.4, 5.0)];
        assert_eq!(ids(&rank_compositions(&rs)), ["fast", "slow"]);
        let rs = [report("b", 0.4, 5.0), report("a", 0.4, 5.0)];
        assert_eq!(ids(&rank_compositions(&rs)), ["a", "b"]);
    }

    #[test]
    fn spearman_extremes() {
        let x = [0.1, 0.5, 0.3, 0.9];
        assert_eq!(spearman(&x, &[1.0, 5.0, 3.0, 9.0]).unwrap(), 1.0);
        assert_eq!(spearman(&x, &[9.0, 1.0, 5.0, 0.0]).unwrap(), -1.0);
        assert!(matches!(
            spearman(&x[..2], &x[..2]),
            Err(RiskError::InsufficientData(_))
        ));
    }

    #[test]
    fn spearman_handles_ties() {
        let r = ranks(&[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(r, vec![1.0, 2.5, 2.5, 4.0]);
        let rho = spearman(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(rho > 0.9 && rho < 1.0);
    }
}
