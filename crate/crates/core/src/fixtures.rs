//! Generators for the bundled scenario corpus and grasp fixture.
//!
//! The JSON files under `scenarios/` are produced from these functions and
//! golden-tested against them, so the code here is the single source.
//!
//! World frame: x forward, y left, z up, metres. The robot stands at the
//! origin on a fixed rectangular support; an object stack sits on a table in
//! front of it between the pick spot (left) and the place spot (right).

use std::collections::BTreeMap;

use crate::balance::FallRiskParams;
use crate::collision::CollisionRiskParams;
use crate::composer::{Action, ActionKind, Composition, NoiseModel, RiskWeights};
use crate::geom::{ConvexPolygon2D, Pose, Shape, ShapeSet, Vec2, Vec3};
use crate::grasp::{ContactModel, Finger, GraspDeviation, GraspFixture, GraspRiskConfig, Hand};
use crate::scenario::{Scenario, ScenarioParams, SCHEMA_VERSION};
use crate::trajectory::{TimedTrajectory, TrajectorySample};

const SAMPLE_DT: f64 = 0.05;

const SUPPORT_MIN: [f64; 2] = [-0.10, -0.15];
const SUPPORT_MAX: [f64; 2] = [0.12, 0.15];

const TORSO_RADIUS: f64 = 0.12;
const ARM_RADIUS: f64 = 0.04;
const SHOULDER_Y: f64 = 0.20;
const SHOULDER_Z: f64 = 1.30;

const STACK_TOP: f64 = 1.0;
const PICK: [f64; 3] = [0.45, 0.38, 0.80];
const PLACE: [f64; 3] = [0.45, -0.38, 0.80];
const LEFT_REST: [f64; 3] = [0.10, 0.28, 0.95];
const RIGHT_REST: [f64; 3] = [0.10, -0.28, 0.95];

/// Clearance and CoM margin the single-arm tabletop paths hold while
/// carrying the object over the stack.
pub const SINGLE_ARM_CLEARANCE: f64 = 0.02;
pub const SINGLE_ARM_MARGIN: f64 = 0.02;

/// Gap between the grazing scenario's gripper and each channel wall.
pub const GRAZING_CLEARANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lead {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy)]
struct Key {
    t: f64,
    com: [f64; 2],
    left: [f64; 3],
    right: [f64; 3],
}

fn key(t: f64, com: [f64; 2], left: [f64; 3], right: [f64; 3]) -> Key {
    Key {
        t,
        com,
        left,
        right,
    }
}

fn v3(p: [f64; 3]) -> Vec3 {
    Vec3::from(p)
}

fn support() -> ConvexPolygon2D {
    ConvexPolygon2D::rectangle(Vec2::from(SUPPORT_MIN), Vec2::from(SUPPORT_MAX))
        .expect("support rectangle is valid")
}

/// Torso, then the idle arm, then the lead arm (the end-effector proxy).
fn humanoid_body(com: [f64; 2], left: Vec3, right: Vec3, lead: Lead) -> ShapeSet {
    let torso = Shape::capsule(
        Vec3::new(com[0], com[1], 0.90),
        Vec3::new(com[0], com[1], 1.35),
        TORSO_RADIUS,
    );
    let arm = |side: f64, hand: Vec3| {
        Shape::capsule(
            Vec3::new(com[0], com[1] + side * SHOULDER_Y, SHOULDER_Z),
            hand,
            ARM_RADIUS,
        )
    };
    let (l, r) = (arm(1.0, left), arm(-1.0, right));
    let shapes = match lead {
        Lead::Left => vec![torso, r, l],
        Lead::Right => vec![torso, l, r],
    };
    ShapeSet::new(shapes).expect("body shapes are valid")
}

fn lerp(a: f64, b: f64, s: f64) -> f64 {
    a + (b - a) * s
}

fn lerp3(a: [f64; 3], b: [f64; 3], s: f64) -> Vec3 {
    Vec3::new(
        lerp(a[0], b[0], s),
        lerp(a[1], b[1], s),
        lerp(a[2], b[2], s),
    )
}

/// Piecewise-linear motion through `keys`, sampled at most `SAMPLE_DT` apart.
fn humanoid_action(
    kind: ActionKind,
    lead: Lead,
    keys: &[Key],
    grasp: Option<GraspDeviation>,
) -> Action {
    let support = support();
    let mut samples = Vec::new();
    let sample = |k0: &Key, k1: &Key, s: f64| {
        let com = [lerp(k0.com[0], k1.com[0], s), lerp(k0.com[1], k1.com[1], s)];
        TrajectorySample {
            t: lerp(k0.t, k1.t, s),
            body: humanoid_body(
                com,
                lerp3(k0.left, k1.left, s),
                lerp3(k0.right, k1.right, s),
                lead,
            ),
            com_xy: Vec2::from(com),
            support: support.clone(),
        }
    };
    for pair in keys.windows(2) {
        let n = ((pair[1].t - pair[0].t) / SAMPLE_DT).round().max(1.0) as usize;
        for j in 0..n {
            samples.push(sample(&pair[0], &pair[1], j as f64 / n as f64));
        }
    }
    let last = keys.last().expect("at least two keys");
    samples.push(sample(last, last, 0.0));
    Action {
        kind,
        trajectory: TimedTrajectory::new(samples).expect("keys are increasing in time"),
        grasp,
    }
}

fn deviation(position: [f64; 3], angular: [f64; 3]) -> Option<GraspDeviation> {
    Some(GraspDeviation { position, angular })
}

fn stack(yaw: f64) -> BTreeMap<String, ShapeSet> {
    let lower = Shape::cuboid(
        Pose::from_translation(Vec3::new(0.45, 0.0, 0.775)),
        Vec3::new(0.10, 0.10, 0.075),
    );
    let upper = Shape::cuboid(
        Pose::from_rpy(0.0, 0.0, yaw).with_translation(Vec3::new(0.45, 0.0, 0.925)),
        Vec3::new(0.08, 0.06, 0.075),
    );
    BTreeMap::from([
        (
            "stack_lower".to_string(),
            ShapeSet::single(lower).expect("valid"),
        ),
        (
            "stack_upper".to_string(),
            ShapeSet::single(upper).expect("valid"),
        ),
    ])
}

fn carried_object() -> ShapeSet {
    ShapeSet::single(Shape::cuboid(
        Pose::from_translation(v3(PICK)),
        Vec3::new(0.06, 0.04, 0.015),
    ))
    .expect("valid")
}

fn params(noise: NoiseModel) -> ScenarioParams {
    ScenarioParams {
        collision: CollisionRiskParams::default(),
        fall: FallRiskParams::default(),
        weights: RiskWeights::default(),
        noise,
        grasp: GraspRiskConfig::default(),
    }
}

fn calibrated_noise() -> NoiseModel {
    NoiseModel {
        obstacle_pose_sigma: 0.01,
        com_sigma: 0.01,
        trials: 1000,
        seed: 1,
    }
}

/// Left arm picks, carries the object over the stack and places it on the
/// far side, leaning until the CoM is `margin` from the support edge.
fn left_arm_carry(id: &str, clearance: f64, margin: f64) -> Composition {
    let h = STACK_TOP + ARM_RADIUS + clearance;
    let lean = [0.05, -(SUPPORT_MAX[1] - margin)];
    let home = [0.0, 0.0];
    let above_pick = [PICK[0], PICK[1], 0.95];
    let pick = humanoid_action(
        ActionKind::PickLeft,
        Lead::Left,
        &[
            key(0.0, home, LEFT_REST, RIGHT_REST),
            key(1.2, [0.04, 0.04], above_pick, RIGHT_REST),
            key(2.0, [0.05, 0.05], PICK, RIGHT_REST),
        ],
        deviation([0.004, 0.003, 0.002], [0.05, 0.04, 0.03]),
    );
    let place = humanoid_action(
        ActionKind::PlaceLeft,
        Lead::Left,
        &[
            key(2.0, [0.05, 0.05], PICK, RIGHT_REST),
            key(2.6, [0.05, 0.04], [PICK[0], PICK[1], h], RIGHT_REST),
            key(4.2, lean, [PLACE[0], PLACE[1], h], RIGHT_REST),
            key(5.0, lean, PLACE, RIGHT_REST),
        ],
        None,
    );
    let reach = humanoid_action(
        ActionKind::Reach,
        Lead::Left,
        &[
            key(5.0, lean, PLACE, RIGHT_REST),
            key(5.6, [0.03, -0.08], [0.25, -0.38, 1.0], RIGHT_REST),
            key(6.5, home, LEFT_REST, RIGHT_REST),
        ],
        None,
    );
    Composition::new(id, vec![pick, place, reach]).expect("contiguous")
}

/// Right arm reaches across the body for the pick, leaning toward the pick
/// side, then carries over the stack to its own side.
fn right_arm_carry(id: &str, clearance: f64, margin: f64) -> Composition {
    let h = STACK_TOP + ARM_RADIUS + clearance;
    let lean = [0.05, SUPPORT_MAX[1] - margin];
    let home = [0.0, 0.0];
    let pick = humanoid_action(
        ActionKind::PickRight,
        Lead::Right,
        &[
            key(0.0, home, LEFT_REST, RIGHT_REST),
            key(1.4, lean, LEFT_REST, [PICK[0], PICK[1], h]),
            key(2.4, lean, LEFT_REST, PICK),
        ],
        deviation([0.006, 0.004, 0.003], [0.07, 0.05, 0.04]),
    );
    let place = humanoid_action(
        ActionKind::PlaceRight,
        Lead::Right,
        &[
            key(2.4, lean, LEFT_REST, PICK),
            key(3.0, lean, LEFT_REST, [PICK[0], PICK[1], h]),
            key(4.6, [0.04, -0.04], LEFT_REST, [PLACE[0], PLACE[1], h]),
            key(5.4, [0.03, -0.05], LEFT_REST, PLACE),
        ],
        None,
    );
    let reach = humanoid_action(
        ActionKind::Reach,
        Lead::Right,
        &[
            key(5.4, [0.03, -0.05], LEFT_REST, PLACE),
            key(6.6, home, LEFT_REST, RIGHT_REST),
        ],
        None,
    );
    Composition::new(id, vec![pick, place, reach]).expect("contiguous")
}

/// Left arm picks, hands over high above the body centreline, right arm
/// places. The CoM stays near the middle of the support throughout.
fn dual_arm_handover(id: &str) -> Composition {
    let home = [0.0, 0.0];
    let exchange_l = [0.28, 0.03, 1.22];
    let exchange_r = [0.28, -0.03, 1.22];
    let lifted = [PICK[0], PICK[1], 1.0];
    let pick = humanoid_action(
        ActionKind::PickLeft,
        Lead::Left,
        &[
            key(0.0, home, LEFT_REST, RIGHT_REST),
            key(1.2, [0.03, 0.03], [PICK[0], PICK[1], 0.95], RIGHT_REST),
            key(2.0, [0.04, 0.04], PICK, RIGHT_REST),
        ],
        deviation([0.002, 0.002, 0.001], [0.02, 0.02, 0.01]),
    );
    let handover = humanoid_action(
        ActionKind::Handover,
        Lead::Right,
        &[
            key(2.0, [0.04, 0.04], PICK, RIGHT_REST),
            key(2.6, [0.03, 0.02], lifted, RIGHT_REST),
            key(4.0, [0.02, 0.0], exchange_l, exchange_r),
        ],
        deviation([0.002, 0.002, 0.001], [0.02, 0.01, 0.01]),
    );
    let place = humanoid_action(
        ActionKind::PlaceRight,
        Lead::Right,
        &[
            key(4.0, [0.02, 0.0], exchange_l, exchange_r),
            key(5.4, [0.03, -0.03], LEFT_REST, [PLACE[0], PLACE[1], 1.0]),
            key(6.2, [0.04, -0.04], LEFT_REST, PLACE),
        ],
        None,
    );
    let reach = humanoid_action(
        ActionKind::Reach,
        Lead::Right,
        &[
            key(6.2, [0.04, -0.04], LEFT_REST, PLACE),
            key(7.6, home, LEFT_REST, RIGHT_REST),
        ],
        None,
    );
    Composition::new(id, vec![pick, handover, place, reach]).expect("contiguous")
}

/// Tabletop transfer with three candidate compositions: `left_arm`,
/// `right_arm` and `dual_arm`.
pub fn tabletop_scenario() -> Scenario {
    Scenario {
        schema_version: SCHEMA_VERSION,
        name: "tabletop".into(),
        obstacles: stack(0.3),
        manipulated_object: Some(carried_object()),
        compositions: vec![
            left_arm_carry("left_arm", SINGLE_ARM_CLEARANCE, SINGLE_ARM_MARGIN),
            right_arm_carry(
                "right_arm",
                SINGLE_ARM_CLEARANCE + 0.002,
                SINGLE_ARM_MARGIN + 0.003,
            ),
            dual_arm_handover("dual_arm"),
        ],
        params: params(calibrated_noise()),
    }
}

/// Ten single-composition variants of the tabletop carry, from a tight
/// squeeze past the stack to a comfortable one.
pub fn batch_scenarios() -> Vec<Scenario> {
    (0..10)
        .map(|k| {
            let k = k as f64;
            let clearance = 0.004 + 0.004 * k;
            let margin = 0.003 + 0.004 * k;
            let id = format!("batch_{:02}", k as usize);
            let carry = if (k as usize).is_multiple_of(2) {
                left_arm_carry("carry", clearance, margin)
            } else {
                right_arm_carry("carry", clearance, margin)
            };
            Scenario {
                schema_version: SCHEMA_VERSION,
                name: id,
                obstacles: stack(0.1 * k),
                manipulated_object: Some(carried_object()),
                compositions: vec![carry],
                params: params(calibrated_noise()),
            }
        })
        .collect()
}

/// A spherical gripper sliding down a walled channel that leaves
/// `GRAZING_CLEARANCE` on every side and ends the same distance short of the
/// end wall. Each wall is a separate obstacle large enough that lateral
/// perturbations keep it alongside the path.
pub fn grazing_scenario() -> Scenario {
    let r = 0.05;
    let gap = r + GRAZING_CLEARANCE;
    let (x0, x1) = (0.30, 0.50);
    let z = 1.0;
    let wall = |center: Vec3, half: Vec3| {
        ShapeSet::single(Shape::cuboid(Pose::from_translation(center), half)).expect("valid")
    };
    let side = Vec3::new(0.4, 0.05, 0.4);
    let flat = Vec3::new(0.4, 0.4, 0.05);
    let obstacles = BTreeMap::from([
        (
            "wall_left".to_string(),
            wall(Vec3::new(0.4, gap + 0.05, z), side),
        ),
        (
            "wall_right".to_string(),
            wall(Vec3::new(0.4, -gap - 0.05, z), side),
        ),
        (
            "ceiling".to_string(),
            wall(Vec3::new(0.4, 0.0, z + gap + 0.05), flat),
        ),
        (
            "floor".to_string(),
            wall(Vec3::new(0.4, 0.0, z - gap - 0.05), flat),
        ),
        (
            "end_wall".to_string(),
            wall(
                Vec3::new(x1 + gap + 0.05, 0.0, z),
                Vec3::new(0.05, 0.4, 0.4),
            ),
        ),
    ]);
    let support = support();
    let samples = (0..=20)
        .map(|i| {
            let s = i as f64 / 20.0;
            TrajectorySample {
                t: 0.1 * i as f64,
                body: ShapeSet::single(Shape::sphere(Vec3::new(lerp(x0, x1, s), 0.0, z), r))
                    .expect("valid"),
                com_xy: Vec2::new(0.01, 0.0),
                support: support.clone(),
            }
        })
        .collect();
    let action = Action {
        kind: ActionKind::Reach,
        trajectory: TimedTrajectory::new(samples).expect("valid"),
        grasp: None,
    };
    Scenario {
        schema_version: SCHEMA_VERSION,
        name: "grazing".into(),
        obstacles,
        manipulated_object: None,
        compositions: vec![Composition::new("insert", vec![action]).expect("valid")],
        params: params(NoiseModel {
            obstacle_pose_sigma: 10.0 * GRAZING_CLEARANCE,
            com_sigma: 0.01,
            trials: 1000,
            seed: 1,
        }),
    }
}

/// One obstacle, one composition, two samples.
pub fn minimal_scenario() -> Scenario {
    let sample = |t: f64, x: f64| TrajectorySample {
        t,
        body: ShapeSet::single(Shape::sphere(Vec3::new(x, 0.0, 1.0), 0.05)).expect("valid"),
        com_xy: Vec2::zeros(),
        support: support(),
    };
    let action = Action {
        kind: ActionKind::Reach,
        trajectory: TimedTrajectory::new(vec![sample(0.0, 0.2), sample(1.0, 0.3)]).expect("valid"),
        grasp: None,
    };
    Scenario {
        schema_version: SCHEMA_VERSION,
        name: "minimal".into(),
        obstacles: BTreeMap::from([(
            "box".to_string(),
            ShapeSet::single(Shape::cuboid(
                Pose::from_translation(Vec3::new(0.6, 0.0, 1.0)),
                Vec3::new(0.1, 0.1, 0.1),
            ))
            .expect("valid"),
        )]),
        manipulated_object: None,
        compositions: vec![Composition::new("reach", vec![action]).expect("valid")],
        params: ScenarioParams::default(),
    }
}

/// Sphere of radius 5 cm at the origin with three fingers 120° apart in the
/// equatorial plane, each closing toward the hand centre.
pub fn symmetric_grasp_fixture() -> GraspFixture {
    let fingers = (0..3)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / 3.0;
            let out = Vec3::new(a.cos(), a.sin(), 0.0);
            Finger {
                start: out * 0.15,
                direction: -out,
                radius: 0.01,
                max_travel: 0.15,
            }
        })
        .collect();
    GraspFixture {
        name: "symmetric_sphere".into(),
        object: ShapeSet::single(Shape::sphere(Vec3::zeros(), 0.05)).expect("valid"),
        hand: Hand {
            nominal: Pose::identity(),
            fingers,
            contact_model: ContactModel::HardFinger,
        },
    }
}

/// A sphere approaching a fixed sphere obstacle to `0.2·d_safety`, holding
/// there for 10% of the duration, then retreating. Returns the trajectory
/// and obstacle.
pub fn approach_retreat_trajectory(params: &CollisionRiskParams) -> (TimedTrajectory, ShapeSet) {
    let obstacle = Shape::sphere(Vec3::new(1.0, 0.0, 1.0), 0.1);
    let r = 0.05;
    let contact_x = 1.0 - 0.1 - r;
    let near = contact_x - 0.2 * params.d_safety;
    let far = contact_x - 2.0 * params.d_safety;
    // 0..0.45 approach, 0.45..0.55 hold, 0.55..1 retreat over 10 s.
    let x_at = |t: f64| {
        if t <= 4.5 {
            lerp(far, near, t / 4.5)
        } else if t <= 5.5 {
            near
        } else {
            lerp(near, far, (t - 5.5) / 4.5)
        }
    };
    let samples = (0..=400)
        .map(|i| {
            let t = 0.025 * i as f64;
            TrajectorySample {
                t,
                body: ShapeSet::single(Shape::sphere(Vec3::new(x_at(t), 0.0, 1.0), r))
                    .expect("valid"),
                com_xy: Vec2::zeros(),
                support: support(),
            }
        })
        .collect();
    (
        TimedTrajectory::new(samples).expect("valid"),
        ShapeSet::single(obstacle).expect("valid"),
    )
}

/// CoM path that runs along the support's +y edge (margin 0) for 20% of a
/// 10 s trajectory, entering and leaving from the centre.
pub fn edge_grazing_trajectory() -> TimedTrajectory {
    let edge = SUPPORT_MAX[1];
    let y_at = |t: f64| {
        if t <= 4.0 {
            lerp(0.0, edge, t / 4.0)
        } else if t <= 6.0 {
            edge
        } else {
            lerp(edge, 0.0, (t - 6.0) / 4.0)
        }
    };
    let samples = (0..=400)
        .map(|i| {
            let t = 0.025 * i as f64;
            TrajectorySample {
                t,
                body: ShapeSet::single(Shape::sphere(Vec3::new(0.0, 0.0, 1.0), 0.1))
                    .expect("valid"),
                com_xy: Vec2::new(0.0, y_at(t)),
                support: support(),
            }
        })
        .collect();
    TimedTrajectory::new(samples).expect("valid")
}

/// Every bundled scenario keyed by its file stem.
pub fn scenario_corpus() -> Vec<(String, Scenario)> {
    let mut out = vec![
        ("tabletop".to_string(), tabletop_scenario()),
        ("grazing".to_string(), grazing_scenario()),
        ("minimal".to_string(), minimal_scenario()),
    ];
    out.extend(
        batch_scenarios()
            .into_iter()
            .map(|s| (format!("batch/{}", s.name), s)),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_validates() {
        for (name, s) in scenario_corpus() {
            s.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        symmetric_grasp_fixture().hand.validate().unwrap();
    }

    #[test]
    fn body_lists_lead_arm_last() {
        let b = humanoid_body([0.0, 0.0], v3(LEFT_REST), v3(RIGHT_REST), Lead::Left);
        assert_eq!(b.shapes()[2].reference_point(), v3(LEFT_REST));
    }
}
