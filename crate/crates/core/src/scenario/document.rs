//! JSON document format for scenarios and grasp fixtures.
//!
//! Loading happens in three stages, each with its own error category:
//! syntax (`parse`), shape of the document (`schema`: unknown version, missing
//! or unknown fields, wrong types) and domain invariants (`validation`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Scenario, ScenarioParams, SCHEMA_VERSION};
use crate::composer::{Action, ActionKind, Composition};
use crate::error::RiskError;
use crate::geom::{ConvexPolygon2D, Mat3, Pose, Shape, ShapeSet, Vec2, Vec3};
use crate::grasp::{ContactModel, Finger, GraspDeviation, GraspFixture, Hand};
use crate::trajectory::{TimedTrajectory, TrajectorySample};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoadError {
    #[error("parse error: {message}")]
    Parse { message: String },
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },
}

impl LoadError {
    pub fn category(&self) -> &'static str {
        match self {
            LoadError::Parse { .. } => "parse",
            LoadError::Schema { .. } => "schema",
            LoadError::Validation { .. } => "validation",
        }
    }

    pub fn field_path(&self) -> &str {
        match self {
            LoadError::Parse { .. } => "",
            LoadError::Schema { path, .. } | LoadError::Validation { path, .. } => path,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            LoadError::Parse { message }
            | LoadError::Schema { message, .. }
            | LoadError::Validation { message, .. } => message,
        }
    }

    /// Wraps an engine error raised while validating the value at `path`.
    pub fn from_risk(err: RiskError, path: &str) -> LoadError {
        match err {
            RiskError::Validation { field, message } => LoadError::Validation {
                path: join(path, &field),
                message,
            },
            other => LoadError::Validation {
                path: path.to_string(),
                message: other.to_string(),
            },
        }
    }
}

fn join(prefix: &str, field: &str) -> String {
    match (prefix.is_empty(), field.is_empty()) {
        (true, _) => field.to_string(),
        (_, true) => prefix.to_string(),
        _ if field.starts_with('[') => format!("{prefix}{field}"),
        _ => format!("{prefix}.{field}"),
    }
}

/// Parses text to a JSON value and checks the schema version, then
/// deserializes into `T` with field paths on failure.
pub(crate) fn parse_versioned<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, LoadError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        message: e.to_string(),
    })?;
    match value.get("schema_version") {
        None => {
            return Err(LoadError::Schema {
                path: "schema_version".into(),
                message: "missing field `schema_version`".into(),
            })
        }
        Some(v) if v.as_u64() != Some(u64::from(SCHEMA_VERSION)) => {
            return Err(LoadError::Schema {
                path: "schema_version".into(),
                message: format!("unsupported schema version {v}, expected {SCHEMA_VERSION}"),
            })
        }
        Some(_) => {}
    }
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        LoadError::Schema {
            path: if path == "." { String::new() } else { path },
            message: e.into_inner().to_string(),
        }
    })
}

fn identity_rows() -> [[f64; 3]; 3] {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

fn is_identity(r: &[[f64; 3]; 3]) -> bool {
    *r == identity_rows()
}

/// Rotation rows are stored row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseDoc {
    translation: [f64; 3],
    #[serde(default = "identity_rows", skip_serializing_if = "is_identity")]
    rotation: [[f64; 3]; 3],
}

impl PoseDoc {
    fn from_pose(p: &Pose) -> Self {
        let r = p.rotation();
        PoseDoc {
            translation: (*p.translation()).into(),
            rotation: [
                [r[(0, 0)], r[(0, 1)], r[(0, 2)]],
                [r[(1, 0)], r[(1, 1)], r[(1, 2)]],
                [r[(2, 0)], r[(2, 1)], r[(2, 2)]],
            ],
        }
    }

    fn to_pose(&self, path: &str) -> Result<Pose, LoadError> {
        let r = &self.rotation;
        let m = Mat3::new(
            r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2],
        );
        Pose::new(m, Vec3::from(self.translation)).map_err(|e| LoadError::from_risk(e, path))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum ShapeDoc {
    Sphere {
        center: [f64; 3],
        radius: f64,
    },
    Capsule {
        a: [f64; 3],
        b: [f64; 3],
        radius: f64,
    },
    Box {
        center: [f64; 3],
        #[serde(default = "identity_rows", skip_serializing_if = "is_identity")]
        rotation: [[f64; 3]; 3],
        half_extents: [f64; 3],
    },
}

impl ShapeDoc {
    fn from_shape(s: &Shape) -> Self {
        match s {
            Shape::Sphere(s) => ShapeDoc::Sphere {
                center: s.center.into(),
                radius: s.radius,
            },
            Shape::Capsule(c) => ShapeDoc::Capsule {
                a: c.a.into(),
                b: c.b.into(),
                radius: c.radius,
            },
            Shape::Cuboid(b) => {
                let pose = PoseDoc::from_pose(&b.pose);
                ShapeDoc::Box {
                    center: pose.translation,
                    rotation: pose.rotation,
                    half_extents: b.half_extents.into(),
                }
            }
        }
    }

    fn to_shape(&self, path: &str) -> Result<Shape, LoadError> {
        Ok(match self {
            ShapeDoc::Sphere { center, radius } => Shape::sphere(Vec3::from(*center), *radius),
            ShapeDoc::Capsule { a, b, radius } => {
                Shape::capsule(Vec3::from(*a), Vec3::from(*b), *radius)
            }
            ShapeDoc::Box {
                center,
                rotation,
                half_extents,
            } => {
                let pose = PoseDoc {
                    translation: *center,
                    rotation: *rotation,
                }
                .to_pose(&format!("{path}.box"))?;
                Shape::cuboid(pose, Vec3::from(*half_extents))
            }
        })
    }
}

fn shapes_to_doc(set: &ShapeSet) -> Vec<ShapeDoc> {
    set.shapes().iter().map(ShapeDoc::from_shape).collect()
}

fn shapes_from_doc(docs: &[ShapeDoc], path: &str) -> Result<ShapeSet, LoadError> {
    let shapes = docs
        .iter()
        .enumerate()
        .map(|(i, d)| d.to_shape(&format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    ShapeSet::new(shapes).map_err(|e| LoadError::from_risk(e, path))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleDoc {
    t: f64,
    body: Vec<ShapeDoc>,
    com_xy: [f64; 2],
    support: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionDoc {
    kind: ActionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grasp: Option<GraspDeviation>,
    trajectory: Vec<SampleDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompositionDoc {
    id: String,
    actions: Vec<ActionDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    schema_version: u32,
    name: String,
    obstacles: BTreeMap<String, Vec<ShapeDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    manipulated_object: Option<Vec<ShapeDoc>>,
    compositions: Vec<CompositionDoc>,
    #[serde(default)]
    params: ScenarioParams,
}

fn sample_from_doc(doc: &SampleDoc, path: &str) -> Result<TrajectorySample, LoadError> {
    let body = shapes_from_doc(&doc.body, &format!("{path}.body"))?;
    let support = ConvexPolygon2D::new(doc.support.iter().map(|v| Vec2::new(v[0], v[1])).collect())
        .map_err(|e| LoadError::from_risk(e, &format!("{path}.support")))?;
    Ok(TrajectorySample {
        t: doc.t,
        body,
        com_xy: Vec2::new(doc.com_xy[0], doc.com_xy[1]),
        support,
    })
}

fn sample_to_doc(s: &TrajectorySample) -> SampleDoc {
    SampleDoc {
        t: s.t,
        body: shapes_to_doc(&s.body),
        com_xy: [s.com_xy.x, s.com_xy.y],
        support: s.support.vertices().iter().map(|v| [v.x, v.y]).collect(),
    }
}

fn scenario_from_doc(doc: ScenarioDoc) -> Result<Scenario, LoadError> {
    let mut obstacles = BTreeMap::new();
    for (name, shapes) in &doc.obstacles {
        if name.is_empty() {
            return Err(LoadError::Validation {
                path: "obstacles".into(),
                message: "obstacle names must not be empty".into(),
            });
        }
        obstacles.insert(
            name.clone(),
            shapes_from_doc(shapes, &format!("obstacles.{name}"))?,
        );
    }
    let manipulated_object = doc
        .manipulated_object
        .as_ref()
        .map(|s| shapes_from_doc(s, "manipulated_object"))
        .transpose()?;

    let mut compositions = Vec::with_capacity(doc.compositions.len());
    for (ci, c) in doc.compositions.iter().enumerate() {
        let cpath = format!("compositions[{ci}]");
        let mut actions = Vec::with_capacity(c.actions.len());
        for (ai, a) in c.actions.iter().enumerate() {
            let tpath = format!("{cpath}.actions[{ai}].trajectory");
            let samples = a
                .trajectory
                .iter()
                .enumerate()
                .map(|(si, s)| sample_from_doc(s, &format!("{tpath}[{si}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let trajectory =
                TimedTrajectory::new(samples).map_err(|e| LoadError::from_risk(e, &tpath))?;
            actions.push(Action {
                kind: a.kind,
                trajectory,
                grasp: a.grasp,
            });
        }
        compositions.push(Composition {
            id: c.id.clone(),
            actions,
        });
    }

    let scenario = Scenario {
        schema_version: doc.schema_version,
        name: doc.name,
        obstacles,
        manipulated_object,
        compositions,
        params: doc.params,
    };
    scenario
        .validate()
        .map_err(|e| LoadError::from_risk(e, ""))?;
    Ok(scenario)
}

fn scenario_to_doc(s: &Scenario) -> ScenarioDoc {
    ScenarioDoc {
        schema_version: s.schema_version,
        name: s.name.clone(),
        obstacles: s
            .obstacles
            .iter()
            .map(|(k, v)| (k.clone(), shapes_to_doc(v)))
            .collect(),
        manipulated_object: s.manipulated_object.as_ref().map(shapes_to_doc),
        compositions: s
            .compositions
            .iter()
            .map(|c| CompositionDoc {
                id: c.id.clone(),
                actions: c
                    .actions
                    .iter()
                    .map(|a| ActionDoc {
                        kind: a.kind,
                        grasp: a.grasp,
                        trajectory: a.trajectory.samples().iter().map(sample_to_doc).collect(),
                    })
                    .collect(),
            })
            .collect(),
        params: s.params,
    }
}

/// Loads and fully validates a scenario document.
pub fn load_scenario(text: &str) -> Result<Scenario, LoadError> {
    scenario_from_doc(parse_versioned(text)?)
}

/// Pretty-printed scenario document; identical scenarios give identical text.
pub fn scenario_to_json(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(&scenario_to_doc(scenario)).expect("scenario serializes")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FingerDoc {
    start: [f64; 3],
    direction: [f64; 3],
    radius: f64,
    max_travel: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HandDoc {
    nominal: PoseDoc,
    #[serde(default)]
    contact_model: ContactModel,
    fingers: Vec<FingerDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureDoc {
    schema_version: u32,
    name: String,
    object: Vec<ShapeDoc>,
    hand: HandDoc,
}

/// Loads a grasp fixture (object plus hand) for pre-grasp sweeps.
pub fn load_fixture(text: &str) -> Result<GraspFixture, LoadError> {
    let doc: FixtureDoc = parse_versioned(text)?;
    let object = shapes_from_doc(&doc.object, "object")?;
    let nominal = doc.hand.nominal.to_pose("hand.nominal")?;
    let fingers = doc
        .hand
        .fingers
        .iter()
        .map(|f| Finger {
            start: Vec3::from(f.start),
            direction: Vec3::from(f.direction),
            radius: f.radius,
            max_travel: f.max_travel,
        })
        .collect();
    let hand = Hand {
        nominal,
        fingers,
        contact_model: doc.hand.contact_model,
    };
    hand.validate()
        .map_err(|e| LoadError::from_risk(e, "hand"))?;
    Ok(GraspFixture {
        name: doc.name,
        object,
        hand,
    })
}

pub fn fixture_to_json(fixture: &GraspFixture) -> String {
    let doc = FixtureDoc {
        schema_version: SCHEMA_VERSION,
        name: fixture.name.clone(),
        object: shapes_to_doc(&fixture.object),
        hand: HandDoc {
            nominal: PoseDoc::from_pose(&fixture.hand.nominal),
            contact_model: fixture.hand.contact_model,
            fingers: fixture
                .hand
                .fingers
                .iter()
                .map(|f| FingerDoc {
                    start: f.start.into(),
                    direction: f.direction.into(),
                    radius: f.radius,
                    max_travel: f.max_travel,
                })
                .collect(),
        },
    };
    serde_json::to_string_pretty(&doc).expect("fixture serializes")
}
