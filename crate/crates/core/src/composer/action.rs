use serde::{Deserialize, Serialize};

use crate::error::{Result, RiskError};
use crate::grasp::GraspDeviation;
use crate::trajectory::TimedTrajectory;

/// Time and CoM tolerance when checking that consecutive actions join up.
pub const CONTIGUITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    PickLeft,
    PickRight,
    PlaceLeft,
    PlaceRight,
    Handover,
    Step,
    Reach,
}

impl ActionKind {
    /// Actions that manipulate the object and need it present in the scenario.
    pub fn handles_object(&self) -> bool {
        !matches!(self, ActionKind::Step | ActionKind::Reach)
    }

    /// Actions that establish a new grasp and so may carry a grasp deviation.
    pub fn grasps(&self) -> bool {
        matches!(
            self,
            ActionKind::PickLeft | ActionKind::PickRight | ActionKind::Handover
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub kind: ActionKind,
    pub trajectory: TimedTrajectory,
    /// Expected pre-grasp error for grasping actions.
    pub grasp: Option<GraspDeviation>,
}

/// Ordered actions that jointly complete the task.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    pub id: String,
    pub actions: Vec<Action>,
}

impl Composition {
    pub fn new(id: impl Into<String>, actions: Vec<Action>) -> Result<Self> {
        let c = Composition {
            id: id.into(),
            actions,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(RiskError::validation(
                "id",
                "composition id must not be empty",
            ));
        }
        if self.actions.is_empty() {
            return Err(RiskError::validation(
                "actions",
                "composition has no actions",
            ));
        }
        for (i, a) in self.actions.iter().enumerate() {
            if let Some(g) = &a.grasp {
                if !a.kind.grasps() {
                    return Err(RiskError::validation(
                        format!("actions[{i}].grasp"),
                        format!("{:?} actions do not grasp", a.kind),
                    ));
                }
                g.validate()
                    .map_err(|e| e.at(&format!("actions[{i}].grasp")))?;
            }
        }
        for (i, pair) in self.actions.windows(2).enumerate() {
            let end = pair[0].trajectory.last();
            let start = pair[1].trajectory.first();
            if (start.t - end.t).abs() > CONTIGUITY_TOL {
                return Err(RiskError::validation(
                    format!("actions[{}].trajectory[0].t", i + 1),
                    format!(
                        "starts at t = {} but the previous action ends at t = {}",
                        start.t, end.t
                    ),
                ));
            }
            if (start.com_xy - end.com_xy).norm() > CONTIGUITY_TOL {
                return Err(RiskError::validation(
                    format!("actions[{}].trajectory[0].com_xy", i + 1),
                    "does not continue from the previous action's final CoM",
                ));
            }
        }
        Ok(())
    }

    pub fn start_time(&self) -> f64 {
        self.actions[0].trajectory.start_time()
    }

    pub fn end_time(&self) -> f64 {
        self.actions[self.actions.len() - 1].trajectory.end_time()
    }
}
