//! Quasi-static hand model: fingertip spheres close along straight rays until
//! they touch the object, and the resulting contacts are scored by grasp quality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::{build_grasp_matrix, grasp_quality, Contact, ContactModel};
use crate::error::{Result, RiskError};
use crate::geom::{shape_distance, Pose, Shape, ShapeSet, Sphere, Vec3, EXACT_TOL, ITERATIVE_TOL};

/// Fingertip-object separation still counted as touching.
pub const CONTACT_TOLERANCE: f64 = 1e-3;

const MAX_TRACE_STEPS: usize = 2000;

/// A fingertip sphere that travels from `start` along `direction` (hand frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Finger {
    pub start: Vec3,
    pub direction: Vec3,
    pub radius: f64,
    pub max_travel: f64,
}

impl Finger {
    pub fn validate(&self) -> Result<()> {
        if (self.direction.norm() - 1.0).abs() > EXACT_TOL {
            return Err(RiskError::validation("direction", "must be a unit vector"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(RiskError::validation("radius", "must be positive"));
        }
        if !(self.max_travel >= 0.0 && self.max_travel.is_finite()) {
            return Err(RiskError::validation("max_travel", "must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hand {
    /// Hand frame in the object (world) frame at zero offset.
    pub nominal: Pose,
    pub fingers: Vec<Finger>,
    pub contact_model: ContactModel,
}

impl Hand {
    pub fn validate(&self) -> Result<()> {
        if self.fingers.is_empty() {
            return Err(RiskError::validation(
                "fingers",
                "hand needs at least one finger",
            ));
        }
        for (i, f) in self.fingers.iter().enumerate() {
            f.validate().map_err(|e| e.at(&format!("fingers[{i}]")))?;
        }
        Ok(())
    }
}

/// Object plus hand, the input of a pre-grasp sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GraspFixture {
    pub name: String,
    pub object: ShapeSet,
    pub hand: Hand,
}

/// Perturbation of the pre-grasp hand pose: a world-frame translation and a
/// roll/pitch/yaw rotation about the hand origin.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOffset {
    pub translation: [f64; 3],
    pub rpy: [f64; 3],
}

impl GridOffset {
    pub fn translation(x: f64, y: f64, z: f64) -> Self {
        GridOffset {
            translation: [x, y, z],
            rpy: [0.0; 3],
        }
    }

    /// Hand pose after applying this offset to `nominal`.
    pub fn apply(&self, nominal: &Pose) -> Pose {
        let [r, p, y] = self.rpy;
        let rotated = nominal.compose(&Pose::from_rpy(r, p, y));
        let t = Vec3::from(self.translation);
        rotated.with_translation(rotated.translation() + t)
    }
}

/// Closed fingertips (world frame) of the fingers that reached the object.
#[derive(Debug, Clone, PartialEq)]
pub struct HandState {
    pub fingertips: Vec<Sphere>,
}

fn tip_distance(object: &ShapeSet, tip: &Sphere) -> f64 {
    let s = Shape::Sphere(*tip);
    object
        .shapes()
        .iter()
        .map(|o| shape_distance(&s, o))
        .fold(f64::INFINITY, f64::min)
}

/// Sphere-traces one finger; returns the fingertip at first touch.
fn trace_finger(object: &ShapeSet, start: Vec3, dir: Vec3, finger: &Finger) -> Option<Sphere> {
    let mut s = 0.0;
    let mut d = f64::INFINITY;
    for _ in 0..MAX_TRACE_STEPS {
        let tip = Sphere::new(start + dir * s, finger.radius);
        d = tip_distance(object, &tip);
        if d <= EXACT_TOL {
            return Some(tip);
        }
        s += d;
        if s > finger.max_travel {
            return None;
        }
    }
    // Grazing approaches converge slowly; accept a near touch.
    (d <= ITERATIVE_TOL).then(|| Sphere::new(start + dir * s, finger.radius))
}

/// Closes every finger of `hand`, offset by `offset`, onto `object`.
pub fn close_hand(object: &ShapeSet, hand: &Hand, offset: &GridOffset) -> HandState {
    let pose = offset.apply(&hand.nominal);
    let fingertips = hand
        .fingers
        .iter()
        .filter_map(|f| {
            let start = pose.transform_point(&f.start);
            let dir = pose.transform_vector(&f.direction);
            trace_finger(object, start, dir, f)
        })
        .collect();
    HandState { fingertips }
}

/// Contacts (object frame) for fingertips touching the object displaced by `shift`.
fn contacts_at(
    object: &ShapeSet,
    shift: &Vec3,
    fingertips: &[Sphere],
    model: ContactModel,
) -> Vec<Contact> {
    let mut contacts = Vec::with_capacity(fingertips.len());
    for tip in fingertips {
        // Work in the object frame: move the fingertip by -shift.
        let local = Sphere::new(tip.center - shift, tip.radius);
        let probe = Shape::Sphere(local);
        let nearest = object
            .shapes()
            .iter()
            .map(|o| (shape_distance(&probe, o), o))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        let Some((d, shape)) = nearest else { continue };
        if d > CONTACT_TOLERANCE {
            continue;
        }
        let (point, outward) = shape.closest_surface_point(&local.center);
        if let Ok(c) = Contact::at_point(point, -outward, model) {
            contacts.push(c);
        }
    }
    contacts
}

fn quality_of(contacts: &[Contact]) -> f64 {
    build_grasp_matrix(contacts)
        .map(|g| grasp_quality(&g))
        .unwrap_or(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub offset: GridOffset,
    pub quality: f64,
    pub contact_count: usize,
}

/// Grasp quality for every pre-grasp offset; cells keep the input order.
pub fn pregrasp_sweep(fixture: &GraspFixture, offsets: &[GridOffset]) -> Vec<SweepCell> {
    offsets
        .par_iter()
        .map(|offset| {
            let state = close_hand(&fixture.object, &fixture.hand, offset);
            let contacts = contacts_at(
                &fixture.object,
                &Vec3::zeros(),
                &state.fingertips,
                fixture.hand.contact_model,
            );
            SweepCell {
                offset: *offset,
                quality: quality_of(&contacts),
                contact_count: contacts.len(),
            }
        })
        .collect()
}

/// Sinusoidal object displacement `amplitude · sin(2π k / samples_per_cycle) · axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShakeParams {
    pub amplitude: f64,
    pub cycles: usize,
    pub samples_per_cycle: usize,
    pub axis: Vec3,
}

impl ShakeParams {
    pub fn along_x(amplitude: f64) -> Self {
        ShakeParams {
            amplitude,
            cycles: 2,
            samples_per_cycle: 16,
            axis: Vec3::x(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShakeResult {
    pub q_before: f64,
    pub q_after_min: f64,
    pub lost_contact: bool,
}

/// Displaces the object along a sampled sinusoid with the fingertips held
/// fixed, re-deriving contacts and quality at every sample.
pub fn quasi_static_shake(
    object: &ShapeSet,
    state: &HandState,
    model: ContactModel,
    params: &ShakeParams,
) -> ShakeResult {
    let initial = contacts_at(object, &Vec3::zeros(), &state.fingertips, model);
    let q_before = quality_of(&initial);
    let axis = params.axis.try_normalize(0.0).unwrap_or_else(Vec3::x);
    let steps = params.cycles * params.samples_per_cycle.max(1);
    let mut q_min = q_before;
    for k in 0..=steps {
        let phase = std::f64::consts::TAU * k as f64 / params.samples_per_cycle.max(1) as f64;
        let shift = axis * (params.amplitude * phase.sin());
        let contacts = contacts_at(object, &shift, &state.fingertips, model);
        if contacts.len() < initial.len() {
            return ShakeResult {
                q_before,
                q_after_min: 0.0,
                lost_contact: true,
            };
        }
        q_min = q_min.min(quality_of(&contacts));
    }
    ShakeResult {
        q_before,
        q_after_min: q_min,
        lost_contact: false,
    }
}

/// Comma-separated sweep table with a header row.
pub fn sweep_to_csv(cells: &[SweepCell]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "offset_x",
        "offset_y",
        "offset_z",
        "roll",
        "pitch",
        "yaw",
        "Q",
        "contact_count",
    ])
    .expect("in-memory write");
    for c in cells {
        let t = c.offset.translation;
        let r = c.offset.rpy;
        w.write_record(&[
            t[0].to_string(),
            t[1].to_string(),
            t[2].to_string(),
            r[0].to_string(),
            r[1].to_string(),
            r[2].to_string(),
            c.quality.to_string(),
            c.contact_count.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}
