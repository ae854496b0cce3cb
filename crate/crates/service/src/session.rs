use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use riskcomp_core::composer::{
    composition_series, evaluate_scenario, rank_compositions, run_trial, trial_rng,
    CompositionSeries, RiskReport,
};
use riskcomp_core::scenario::{Scenario, ScenarioParams, SCHEMA_VERSION};
use riskcomp_core::{Result, RiskError};

use crate::wire::{CompositionSummary, HistoryEntry, Overrides, ScenarioSummary, Snapshot};

/// Operator session over one scenario.
///
/// Invariants: `reports` always equal a fresh evaluation under
/// `overrides.apply(scenario.params)`, and `history` only grows.
#[derive(Debug, Clone)]
pub struct Session {
    scenario: Arc<Scenario>,
    overrides: Overrides,
    reports: Vec<RiskReport>,
    history: Vec<HistoryEntry>,
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

impl Session {
    pub fn new(scenario: Scenario) -> Result<Self> {
        scenario.validate()?;
        let reports = evaluate_scenario(&scenario, &scenario.params)?;
        Ok(Session {
            scenario: Arc::new(scenario),
            overrides: Overrides::default(),
            reports,
            history: Vec::new(),
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn overrides(&self) -> &Overrides {
        &self.overrides
    }

    /// Scenario parameters with the current overrides applied.
    pub fn params(&self) -> ScenarioParams {
        self.overrides.apply(&self.scenario.params)
    }

    pub fn reports(&self) -> &[RiskReport] {
        &self.reports
    }

    pub fn report(&self, id: &str) -> Result<&RiskReport> {
        self.reports
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| RiskError::UnknownComposition(id.to_string()))
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    pub fn snapshot(&self) -> Snapshot {
        let s = &self.scenario;
        Snapshot {
            schema_version: SCHEMA_VERSION,
            scenario: ScenarioSummary {
                name: s.name.clone(),
                obstacles: s.obstacles.keys().cloned().collect(),
                compositions: s
                    .compositions
                    .iter()
                    .map(|c| CompositionSummary {
                        id: c.id.clone(),
                        actions: c.actions.iter().map(|a| a.kind).collect(),
                    })
                    .collect(),
            },
            params: self.params(),
            overrides: self.overrides,
            reports: self.reports.clone(),
            ranking: rank_compositions(&self.reports)
                .into_iter()
                .map(|r| r.id)
                .collect(),
            history: self.history.clone(),
        }
    }

    /// Stores `overrides` (merged over the current ones) and recomputes every
    /// report. On error the session is left untouched.
    pub fn what_if(&mut self, overrides: &Overrides) -> Result<&[RiskReport]> {
        if let Some(w) = &overrides.weights {
            w.validate().map_err(|e| e.at("weights"))?;
        }
        if let Some(n) = &overrides.noise {
            n.validate().map_err(|e| e.at("noise"))?;
        }
        let merged = self.overrides.merged(overrides);
        let params = merged.apply(&self.scenario.params);
        let reports = evaluate_scenario(&self.scenario, &params)?;
        self.overrides = merged;
        self.reports = reports;
        Ok(&self.reports)
    }

    /// Draws one perturbation trial for `composition_id` from `seed` under
    /// the current noise model and appends it to the history.
    pub fn commit(&mut self, composition_id: &str, seed: u64) -> Result<HistoryEntry> {
        let comp = self.scenario.composition(composition_id)?;
        let noise = self.params().noise;
        let detail = run_trial(
            comp,
            &self.scenario.obstacles,
            &noise,
            &mut trial_rng(seed, 0),
        )?;
        let entry = HistoryEntry {
            seq: self.history.len() as u64,
            composition_id: composition_id.to_string(),
            seed,
            outcome: detail.outcome(),
            detail,
            timestamp_ms: now_ms(),
        };
        self.history.push(entry.clone());
        Ok(entry)
    }

    /// Distance, margin and CoM-track series for plotting.
    pub fn series(&self, composition_id: &str) -> Result<CompositionSeries> {
        let comp = self.scenario.composition(composition_id)?;
        composition_series(comp, &self.scenario.obstacle_set()?, &self.params())
    }
}
