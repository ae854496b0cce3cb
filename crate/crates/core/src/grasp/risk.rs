use serde::{Deserialize, Serialize};

use crate::error::{Result, RiskError};

/// Logistic risk parameters `P(x) = 1 / (1 + exp(-a x / x_max + b))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmoidParams {
    pub a: f64,
    pub b: f64,
    /// Meters for positional axes, radians for angular axes.
    pub x_max: f64,
}

impl SigmoidParams {
    pub fn new(a: f64, b: f64, x_max: f64) -> Result<Self> {
        let p = SigmoidParams { a, b, x_max };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(RiskError::validation("a", "slope must be positive"));
        }
        if !self.b.is_finite() {
            return Err(RiskError::validation("b", "offset must be finite"));
        }
        if !(self.x_max > 0.0 && self.x_max.is_finite()) {
            return Err(RiskError::validation("x_max", "must be positive"));
        }
        Ok(())
    }
}

/// Failure probability for a pose deviation `x` (distance or angle).
pub fn deviation_risk(x: f64, p: &SigmoidParams) -> f64 {
    let z = p.a * x / p.x_max - p.b;
    // Evaluate on the side where exp cannot overflow.
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Per-axis weights over (x, y, z) position and (roll, pitch, yaw) deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraspRiskWeights {
    pub w_pos: [f64; 3],
    pub w_ang: [f64; 3],
}

impl Default for GraspRiskWeights {
    fn default() -> Self {
        GraspRiskWeights {
            w_pos: [1.0 / 6.0; 3],
            w_ang: [1.0 / 6.0; 3],
        }
    }
}

impl GraspRiskWeights {
    pub fn validate(&self) -> Result<()> {
        let all = self.w_pos.iter().chain(self.w_ang.iter());
        if all.clone().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(RiskError::validation("", "weights must be non-negative"));
        }
        let sum: f64 = all.sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(RiskError::validation(
                "",
                format!("grasp weights must sum to 1, got {sum}"),
            ));
        }
        Ok(())
    }
}

/// Sigmoid parameters for each axis plus the combination weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraspRiskConfig {
    pub position: [SigmoidParams; 3],
    pub angular: [SigmoidParams; 3],
    pub weights: GraspRiskWeights,
}

impl Default for GraspRiskConfig {
    fn default() -> Self {
        let pos = SigmoidParams {
            a: 10.0,
            b: 5.0,
            x_max: 0.02,
        };
        let ang = SigmoidParams {
            a: 10.0,
            b: 5.0,
            x_max: 0.2,
        };
        GraspRiskConfig {
            position: [pos; 3],
            angular: [ang; 3],
            weights: GraspRiskWeights::default(),
        }
    }
}

impl GraspRiskConfig {
    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.position.iter().enumerate() {
            p.validate().map_err(|e| e.at(&format!("position[{i}]")))?;
        }
        for (i, p) in self.angular.iter().enumerate() {
            p.validate().map_err(|e| e.at(&format!("angular[{i}]")))?;
        }
        self.weights.validate().map_err(|e| e.at("weights"))
    }
}

/// Absolute pre-grasp pose error of the hand.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraspDeviation {
    pub position: [f64; 3],
    pub angular: [f64; 3],
}

impl GraspDeviation {
    pub fn validate(&self) -> Result<()> {
        for (name, vals) in [("position", &self.position), ("angular", &self.angular)] {
            if let Some(i) = vals.iter().position(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(RiskError::validation(
                    format!("{name}[{i}]"),
                    "deviation must be non-negative",
                ));
            }
        }
        Ok(())
    }
}

/// Weighted sum of the six per-axis deviation risks.
pub fn combined_grasp_risk(
    pos_dev: &[f64; 3],
    ang_dev: &[f64; 3],
    config: &GraspRiskConfig,
) -> Result<f64> {
    config.validate()?;
    GraspDeviation {
        position: *pos_dev,
        angular: *ang_dev,
    }
    .validate()?;
    let w = &config.weights;
    let pos = (0..3).map(|i| w.w_pos[i] * deviation_risk(pos_dev[i], &config.position[i]));
    let ang = (0..3).map(|i| w.w_ang[i] * deviation_risk(ang_dev[i], &config.angular[i]));
    Ok(pos.chain(ang).sum())
}
