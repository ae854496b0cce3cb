//! Scenario model, its on-disk document format, and report output.

mod document;
mod grid;
mod output;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use document::{fixture_to_json, load_fixture, load_scenario, scenario_to_json, LoadError};
pub use grid::parse_grid;
pub use output::{
    distance_series_csv, margin_series_csv, parse_report, write_report, write_report_to,
    ReportDocument, ReportFormat, TABLE_COLUMNS,
};

use crate::balance::FallRiskParams;
use crate::collision::CollisionRiskParams;
use crate::composer::{Composition, NoiseModel, RiskWeights};
use crate::error::{Result, RiskError};
use crate::geom::ShapeSet;
use crate::grasp::GraspRiskConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioParams {
    #[serde(default)]
    pub collision: CollisionRiskParams,
    #[serde(default)]
    pub fall: FallRiskParams,
    #[serde(default)]
    pub weights: RiskWeights,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub grasp: GraspRiskConfig,
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        self.collision.validate().map_err(|e| e.at("collision"))?;
        self.fall.validate().map_err(|e| e.at("fall"))?;
        self.weights.validate().map_err(|e| e.at("weights"))?;
        self.noise.validate().map_err(|e| e.at("noise"))?;
        self.grasp.validate().map_err(|e| e.at("grasp"))
    }
}

/// Everything needed to evaluate a task: the scene, the candidate
/// compositions and the risk/noise parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    pub obstacles: BTreeMap<String, ShapeSet>,
    pub manipulated_object: Option<ShapeSet>,
    pub compositions: Vec<Composition>,
    pub params: ScenarioParams,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(RiskError::validation(
                "schema_version",
                format!("unsupported schema version {}", self.schema_version),
            ));
        }
        if self.obstacles.is_empty() {
            return Err(RiskError::validation(
                "obstacles",
                "scenario needs at least one obstacle",
            ));
        }
        self.params.validate().map_err(|e| e.at("params"))?;
        let mut seen = std::collections::BTreeSet::new();
        for (i, c) in self.compositions.iter().enumerate() {
            let path = format!("compositions[{i}]");
            c.validate().map_err(|e| e.at(&path))?;
            if !seen.insert(c.id.as_str()) {
                return Err(RiskError::validation(
                    format!("{path}.id"),
                    format!("duplicate composition id `{}`", c.id),
                ));
            }
            if self.manipulated_object.is_none() {
                if let Some(j) = c.actions.iter().position(|a| a.kind.handles_object()) {
                    return Err(RiskError::validation(
                        format!("{path}.actions[{j}].kind"),
                        "action manipulates an object but the scenario has no manipulated_object",
                    ));
                }
            }
        }
        Ok(())
    }

    /// All obstacles merged into one shape set.
    pub fn obstacle_set(&self) -> Result<ShapeSet> {
        ShapeSet::concat(self.obstacles.values())
    }

    pub fn composition(&self, id: &str) -> Result<&Composition> {
        self.compositions
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| RiskError::UnknownComposition(id.to_string()))
    }
}
