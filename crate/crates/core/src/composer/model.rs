use serde::{Deserialize, Serialize};

use crate::error::{Result, RiskError};

/// Severity weights folding the expected loss of each failure mode into a
/// weighted sum of failure probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskWeights {
    pub w_collision: f64,
    pub w_fall: f64,
    pub w_grasp: f64,
}

impl Default for RiskWeights {
    /// Falling dominates: toppling is the costliest failure.
    fn default() -> Self {
        RiskWeights {
            w_collision: 0.3,
            w_fall: 0.5,
            w_grasp: 0.2,
        }
    }
}

impl RiskWeights {
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("w_collision", self.w_collision),
            ("w_fall", self.w_fall),
            ("w_grasp", self.w_grasp),
        ] {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(RiskError::validation(name, "weight must be non-negative"));
            }
        }
        let sum = self.w_collision + self.w_fall + self.w_grasp;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(RiskError::validation(
                "",
                format!("w_collision + w_fall + w_grasp must equal 1, got {sum}"),
            ));
        }
        Ok(())
    }
}

/// Perturbation magnitudes and sampling budget for failure estimation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    /// Isotropic standard deviation of each obstacle's displacement (m).
    pub obstacle_pose_sigma: f64,
    /// Standard deviation of each CoM sample, per axis (m).
    pub com_sigma: f64,
    pub trials: u32,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            obstacle_pose_sigma: 0.01,
            com_sigma: 0.01,
            trials: 1000,
            seed: 1,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.obstacle_pose_sigma >= 0.0 && self.obstacle_pose_sigma.is_finite()) {
            return Err(RiskError::validation(
                "obstacle_pose_sigma",
                "must be non-negative",
            ));
        }
        if !(self.com_sigma >= 0.0 && self.com_sigma.is_finite()) {
            return Err(RiskError::validation("com_sigma", "must be non-negative"));
        }
        if self.trials == 0 {
            return Err(RiskError::validation("trials", "must be at least 1"));
        }
        Ok(())
    }
}

/// Weighted sum of the three failure-mode risks.
pub fn total_risk(collision: f64, fall: f64, grasp: f64, weights: &RiskWeights) -> Result<f64> {
    weights.validate()?;
    for (name, v) in [("collision", collision), ("fall", fall), ("grasp", grasp)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(RiskError::validation(
                name,
                format!("risk {v} is outside [0, 1]"),
            ));
        }
    }
    Ok(weights.w_collision * collision + weights.w_fall * fall + weights.w_grasp * grasp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_risk_reference_values() {
        let w = RiskWeights::default();
        assert_eq!(total_risk(0.0, 0.0, 0.0, &w).unwrap(), 0.0);
        assert_eq!(total_risk(1.0, 1.0, 1.0, &w).unwrap(), 1.0);
        let w = RiskWeights {
            w_collision: 0.3,
            w_fall: 0.5,
            w_grasp: 0.2,
        };
        assert!((total_risk(0.3, 0.5, 0.2, &w).unwrap() - 0.38).abs() < 1e-15);
    }

    #[test]
    fn total_risk_is_linear_per_component() {
        let w = RiskWeights::default();
        let base = total_risk(0.2, 0.4, 0.1, &w).unwrap();
        let bumped = total_risk(0.2, 0.6, 0.1, &w).unwrap();
        assert!((bumped - base - 0.5 * 0.2).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_weights_and_components() {
        let w = RiskWeights {
            w_collision: 0.5,
            w_fall: 0.5,
            w_grasp: 0.2,
        };
        assert!(total_risk(0.0, 0.0, 0.0, &w).is_err());
        assert!(total_risk(1.5, 0.0, 0.0, &RiskWeights::default()).is_err());
        let n = NoiseModel {
            trials: 0,
            ..Default::default()
        };
        assert!(n.validate().is_err());
    }
}
