//! Fall risk from the projected center of mass and its estimation uncertainty.
//!
//! The CoM estimate is surrounded by a disk of radius `r`; the instantaneous
//! risk is the fraction of that disk lying outside the support polygon, i.e.
//! the probability that the true CoM is outside under a uniform error model.

use serde::{Deserialize, Serialize};

use crate::collision::validate_pair;
use crate::error::{Result, RiskError};
use crate::geom::{ConvexPolygon2D, Vec2};
use crate::trajectory::{time_average, TimedTrajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FallRiskParams {
    pub uncertainty_radius: f64,
    pub w_peak: f64,
    pub w_exposure: f64,
}

impl Default for FallRiskParams {
    fn default() -> Self {
        FallRiskParams {
            uncertainty_radius: 0.03,
            w_peak: 0.5,
            w_exposure: 0.5,
        }
    }
}

impl FallRiskParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.uncertainty_radius >= 0.0 && self.uncertainty_radius.is_finite()) {
            return Err(RiskError::validation(
                "uncertainty_radius",
                "must be non-negative",
            ));
        }
        validate_pair(self.w_peak, self.w_exposure)
    }
}

fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Signed area of `sector(u -> v)` of a circle of radius `r` centered at the origin.
fn sector(u: &Vec2, v: &Vec2, r: f64) -> f64 {
    0.5 * r * r * cross(u, v).atan2(u.dot(v))
}

/// Signed area of the intersection of the origin-centered disk of radius `r`
/// with the triangle `(0, a, b)`.
fn disk_triangle_area(a: &Vec2, b: &Vec2, r: f64) -> f64 {
    let d = b - a;
    let dd = d.norm_squared();
    if dd == 0.0 {
        return 0.0;
    }
    let ad = a.dot(&d);
    let disc = ad * ad - dd * (a.norm_squared() - r * r);
    if disc <= 0.0 {
        // The edge line misses the circle: the disk part is a pure sector.
        return sector(a, b, r);
    }
    let root = disc.sqrt();
    let t1 = ((-ad - root) / dd).clamp(0.0, 1.0);
    let t2 = ((-ad + root) / dd).clamp(0.0, 1.0);
    let p1 = a + d * t1;
    let p2 = a + d * t2;
    sector(a, &p1, r) + 0.5 * cross(&p1, &p2) + sector(&p2, b, r)
}

/// Area of the disk `(center, r)` that lies inside `polygon`.
pub fn disk_polygon_overlap(center: &Vec2, r: f64, polygon: &ConvexPolygon2D) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let total: f64 = polygon
        .edges()
        .map(|(a, b)| disk_triangle_area(&(a - center), &(b - center), r))
        .sum();
    total.abs().min(std::f64::consts::PI * r * r)
}

/// Fraction of the uncertainty disk outside the support polygon.
///
/// With a zero radius this is the indicator of the CoM lying strictly outside.
pub fn instantaneous_fall_risk(
    com_xy: &Vec2,
    support: &ConvexPolygon2D,
    params: &FallRiskParams,
) -> f64 {
    let r = params.uncertainty_radius;
    let margin = support.signed_margin(com_xy);
    if margin >= r {
        // Covers r == 0 with the CoM inside or on the boundary.
        return 0.0;
    }
    if margin <= -r {
        return 1.0;
    }
    let disk = std::f64::consts::PI * r * r;
    let inside = disk_polygon_overlap(com_xy, r, support);
    (1.0 - inside / disk).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginSample {
    pub t: f64,
    pub margin: f64,
    pub risk: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryFallRisk {
    pub peak: f64,
    pub exposure: f64,
    pub combined: f64,
    pub min_margin: f64,
    pub margin_series: Vec<MarginSample>,
}

pub fn margin_series(traj: &TimedTrajectory, params: &FallRiskParams) -> Vec<MarginSample> {
    traj.samples()
        .iter()
        .map(|s| MarginSample {
            t: s.t,
            margin: s.support.signed_margin(&s.com_xy),
            risk: instantaneous_fall_risk(&s.com_xy, &s.support, params),
        })
        .collect()
}

pub fn fall_risk_from_series(
    margin_series: Vec<MarginSample>,
    params: &FallRiskParams,
) -> TrajectoryFallRisk {
    let peak = margin_series.iter().map(|s| s.risk).fold(0.0, f64::max);
    let min_margin = margin_series
        .iter()
        .map(|s| s.margin)
        .fold(f64::INFINITY, f64::min);
    let points: Vec<(f64, f64)> = margin_series.iter().map(|s| (s.t, s.risk)).collect();
    let exposure = time_average(&points);
    TrajectoryFallRisk {
        peak,
        exposure,
        combined: params.w_peak * peak + params.w_exposure * exposure,
        min_margin,
        margin_series,
    }
}

pub fn trajectory_fall_risk(
    traj: &TimedTrajectory,
    params: &FallRiskParams,
) -> Result<TrajectoryFallRisk> {
    params.validate()?;
    Ok(fall_risk_from_series(margin_series(traj, params), params))
}
