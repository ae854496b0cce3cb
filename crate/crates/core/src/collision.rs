//! Collision risk from body/obstacle clearance along a trajectory.
//!
//! Below the safety margin the instantaneous risk is `(1 - d / d_safety)^b`.
//! A trajectory is scored by two terms: the peak risk at the closest approach
//! and the exposure, the duration-normalized integral of the instantaneous risk,
//! which accounts for time spent in proximity.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RiskError};
use crate::geom::{min_distance, ShapeSet};
use crate::trajectory::{time_average, TimedTrajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollisionRiskParams {
    pub d_safety: f64,
    pub exponent_b: f64,
    pub w_peak: f64,
    pub w_exposure: f64,
}

impl Default for CollisionRiskParams {
    fn default() -> Self {
        CollisionRiskParams {
            d_safety: 0.15,
            exponent_b: 2.0,
            w_peak: 0.5,
            w_exposure: 0.5,
        }
    }
}

impl CollisionRiskParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.d_safety > 0.0 && self.d_safety.is_finite()) {
            return Err(RiskError::validation("d_safety", "must be positive"));
        }
        if !(self.exponent_b > 0.0 && self.exponent_b.is_finite()) {
            return Err(RiskError::validation("exponent_b", "must be positive"));
        }
        validate_pair(self.w_peak, self.w_exposure)
    }
}

pub(crate) fn validate_pair(w_peak: f64, w_exposure: f64) -> Result<()> {
    if !(w_peak >= 0.0 && w_peak.is_finite()) {
        return Err(RiskError::validation("w_peak", "must be non-negative"));
    }
    if !(w_exposure >= 0.0 && w_exposure.is_finite()) {
        return Err(RiskError::validation("w_exposure", "must be non-negative"));
    }
    if (w_peak + w_exposure - 1.0).abs() > 1e-12 {
        return Err(RiskError::validation(
            "w_peak",
            format!(
                "w_peak + w_exposure must equal 1, got {}",
                w_peak + w_exposure
            ),
        ));
    }
    Ok(())
}

/// Risk for a single clearance `d`: zero at or beyond `d_safety`, one at contact.
pub fn instantaneous_collision_risk(d: f64, params: &CollisionRiskParams) -> Result<f64> {
    if d.is_nan() || d < 0.0 {
        return Err(RiskError::validation(
            "d",
            format!("distance must be non-negative, got {d}"),
        ));
    }
    Ok(risk_unchecked(d, params))
}

fn risk_unchecked(d: f64, params: &CollisionRiskParams) -> f64 {
    if d >= params.d_safety {
        0.0
    } else {
        (1.0 - d / params.d_safety).powf(params.exponent_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceSample {
    pub t: f64,
    pub d: f64,
    pub risk: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryCollisionRisk {
    pub peak: f64,
    pub exposure: f64,
    pub combined: f64,
    pub d_min: f64,
    pub d_series: Vec<DistanceSample>,
}

/// Distances from every body sample to the obstacles.
pub fn distance_series(
    traj: &TimedTrajectory,
    obstacles: &ShapeSet,
    params: &CollisionRiskParams,
) -> Result<Vec<DistanceSample>> {
    traj.samples()
        .iter()
        .map(|s| {
            let d = min_distance(&s.body, obstacles)?;
            Ok(DistanceSample {
                t: s.t,
                d,
                risk: risk_unchecked(d, params),
            })
        })
        .collect()
}

/// Aggregates an already computed distance series.
pub fn collision_risk_from_series(
    d_series: Vec<DistanceSample>,
    params: &CollisionRiskParams,
) -> TrajectoryCollisionRisk {
    let d_min = d_series.iter().map(|s| s.d).fold(f64::INFINITY, f64::min);
    let peak = risk_unchecked(d_min, params);
    let points: Vec<(f64, f64)> = d_series.iter().map(|s| (s.t, s.risk)).collect();
    let exposure = time_average(&points);
    TrajectoryCollisionRisk {
        peak,
        exposure,
        combined: params.w_peak * peak + params.w_exposure * exposure,
        d_min,
        d_series,
    }
}

pub fn trajectory_collision_risk(
    traj: &TimedTrajectory,
    obstacles: &ShapeSet,
    params: &CollisionRiskParams,
) -> Result<TrajectoryCollisionRisk> {
    params.validate()?;
    let series = distance_series(traj, obstacles, params)?;
    Ok(collision_risk_from_series(series, params))
}
