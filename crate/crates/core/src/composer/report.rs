use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollisionSummary {
    pub peak: f64,
    pub exposure: f64,
    pub combined: f64,
    pub d_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FallSummary {
    pub peak: f64,
    pub exposure: f64,
    pub combined: f64,
    pub min_margin: f64,
}

/// What a successful composition earns: time to completion and path length
/// as an energy proxy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Payoff {
    pub duration: f64,
    pub path_length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSummary {
    pub collision_failure_rate: f64,
    pub fall_failure_rate: f64,
    /// Trials with any failure.
    pub failure_rate: f64,
    pub trials: u32,
    pub seed: u64,
}

impl MonteCarloSummary {
    /// Mean of the collision and fall failure rates.
    pub fn mean_failure_rate(&self) -> f64 {
        0.5 * (self.collision_failure_rate + self.fall_failure_rate)
    }
}

/// Risk, payoff and estimated failure rates of one composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskReport {
    pub id: String,
    pub collision: CollisionSummary,
    pub fall: FallSummary,
    pub grasp: f64,
    pub total: f64,
    pub payoff: Payoff,
    pub monte_carlo: MonteCarloSummary,
}
