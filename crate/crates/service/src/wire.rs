//! Request and response bodies. All payloads are JSON.

use riskcomp_core::composer::{
    ActionKind, NoiseModel, Outcome, RiskReport, RiskWeights, TrialDetail,
};
use riskcomp_core::scenario::ScenarioParams;
use serde::{Deserialize, Serialize};

/// What-if overrides. Absent fields keep their current override, if any.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<RiskWeights>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseModel>,
}

impl Overrides {
    /// `self` updated with every field present in `newer`.
    pub fn merged(&self, newer: &Overrides) -> Overrides {
        Overrides {
            weights: newer.weights.or(self.weights),
            noise: newer.noise.or(self.noise),
        }
    }

    pub fn apply(&self, base: &ScenarioParams) -> ScenarioParams {
        let mut p = *base;
        if let Some(w) = self.weights {
            p.weights = w;
        }
        if let Some(n) = self.noise {
            p.noise = n;
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommitRequest {
    pub composition_id: String,
    pub seed: u64,
}

/// One committed action and the trial drawn for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    /// Position in the history, starting at 0.
    pub seq: u64,
    pub composition_id: String,
    pub seed: u64,
    pub outcome: Outcome,
    pub detail: TrialDetail,
    /// Wall-clock time of the commit (ms since the Unix epoch); never used
    /// for seeding.
    pub timestamp_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionSummary {
    pub id: String,
    pub actions: Vec<ActionKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub name: String,
    pub obstacles: Vec<String>,
    pub compositions: Vec<CompositionSummary>,
}

/// Everything an operator view needs in one read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub schema_version: u32,
    pub scenario: ScenarioSummary,
    /// Effective parameters (scenario defaults with overrides applied).
    pub params: ScenarioParams,
    pub overrides: Overrides,
    /// Reports in scenario order.
    pub reports: Vec<RiskReport>,
    /// Composition ids, safest first.
    pub ranking: Vec<String>,
    pub history: Vec<HistoryEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryResponse {
    pub entries: Vec<HistoryEntry>,
}

/// Machine-readable error payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub category: String,
    pub field_path: String,
    pub message: String,
}
