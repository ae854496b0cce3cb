use nalgebra::{DMatrix, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{Result, RiskError};
use crate::geom::{Mat3, Pose, Twist, Vec3, EXACT_TOL};

/// Which components of the contact wrench a contact can transmit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactModel {
    /// Full wrench, 6 columns.
    #[default]
    FullConstraint,
    /// Force only, 3 columns.
    HardFinger,
    /// Push along the normal, 1 column.
    FrictionlessPoint,
}

impl ContactModel {
    pub fn dimension(&self) -> usize {
        match self {
            ContactModel::FullConstraint => 6,
            ContactModel::HardFinger => 3,
            ContactModel::FrictionlessPoint => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    /// Contact frame relative to the object frame.
    pub frame: Pose,
    /// Unit normal pointing into the object, in the object frame.
    pub normal: Vec3,
    pub model: ContactModel,
}

impl Contact {
    pub fn new(frame: Pose, normal: Vec3, model: ContactModel) -> Result<Self> {
        if (normal.norm() - 1.0).abs() > EXACT_TOL {
            return Err(RiskError::validation(
                "normal",
                format!("normal must be unit length, |n| = {}", normal.norm()),
            ));
        }
        Ok(Contact {
            frame,
            normal,
            model,
        })
    }

    /// Contact at `point` whose frame z axis is the inward normal.
    pub fn at_point(point: Vec3, normal: Vec3, model: ContactModel) -> Result<Self> {
        let z = normal
            .try_normalize(0.0)
            .ok_or_else(|| RiskError::validation("normal", "normal must be non-zero"))?;
        // Seed the x axis with the world axis least aligned with z.
        let seed = [Vec3::x(), Vec3::y(), Vec3::z()]
            .into_iter()
            .min_by(|a, b| a.dot(&z).abs().total_cmp(&b.dot(&z).abs()))
            .unwrap();
        let x = (seed - z * seed.dot(&z)).normalize();
        let y = z.cross(&x);
        let rotation = Mat3::from_columns(&[x, y, z]);
        Contact::new(Pose::new(rotation, point)?, normal, model)
    }
}

/// Maps stacked contact forces to the object wrench (`w = G f`); the transpose
/// maps an object twist to contact velocities.
#[derive(Debug, Clone, PartialEq)]
pub struct GraspMatrix {
    matrix: DMatrix<f64>,
    contact_count: usize,
}

impl GraspMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn contact_count(&self) -> usize {
        self.contact_count
    }

    /// Singular values in descending order, always six of them (zero-padded).
    pub fn singular_values(&self) -> [f64; 6] {
        self.decompose().0
    }

    pub fn rank(&self) -> usize {
        let (sv, _) = self.decompose();
        rank_of(&sv)
    }

    /// Six singular values (descending) and the matching left singular vectors.
    fn decompose(&self) -> ([f64; 6], Vec<Vector6<f64>>) {
        let cols = self.matrix.ncols().max(6);
        let mut padded = DMatrix::<f64>::zeros(6, cols);
        padded
            .view_mut((0, 0), (6, self.matrix.ncols()))
            .copy_from(&self.matrix);
        let svd = padded.svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        let mut pairs: Vec<(f64, Vector6<f64>)> = (0..6)
            .map(|i| {
                let col = u.column(i);
                (
                    svd.singular_values[i],
                    Vector6::from_iterator(col.iter().copied()),
                )
            })
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut sv = [0.0; 6];
        for (slot, (s, _)) in sv.iter_mut().zip(&pairs) {
            *slot = *s;
        }
        (sv, pairs.into_iter().map(|(_, v)| v).collect())
    }
}

fn rank_of(sv: &[f64; 6]) -> usize {
    let tol = EXACT_TOL * sv[0];
    if sv[0] == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol).count()
}

fn skew(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Assembles `G` column block by column block, one block per contact.
///
/// A full-constraint block is the wrench transform from the contact frame
/// `| R  [p]R ; 0  R |`; hard-finger contacts keep its force columns and
/// frictionless contacts a single `(p × n, n)` column.
pub fn build_grasp_matrix(contacts: &[Contact]) -> Result<GraspMatrix> {
    if contacts.is_empty() {
        return Err(RiskError::validation(
            "contacts",
            "grasp matrix needs at least one contact",
        ));
    }
    let cols: usize = contacts.iter().map(|c| c.model.dimension()).sum();
    let mut g = DMatrix::<f64>::zeros(6, cols);
    let mut col = 0;
    for c in contacts {
        let r = c.frame.rotation();
        let p = c.frame.translation();
        match c.model {
            ContactModel::FullConstraint => {
                let pr = skew(p) * r;
                g.view_mut((0, col), (3, 3)).copy_from(r);
                g.view_mut((0, col + 3), (3, 3)).copy_from(&pr);
                g.view_mut((3, col + 3), (3, 3)).copy_from(r);
            }
            ContactModel::HardFinger => {
                let pr = skew(p) * r;
                g.view_mut((0, col), (3, 3)).copy_from(&pr);
                g.view_mut((3, col), (3, 3)).copy_from(r);
            }
            ContactModel::FrictionlessPoint => {
                let m = p.cross(&c.normal);
                g.view_mut((0, col), (3, 1)).copy_from(&m);
                g.view_mut((3, col), (3, 1)).copy_from(&c.normal);
            }
        }
        col += c.model.dimension();
    }
    Ok(GraspMatrix {
        matrix: g,
        contact_count: contacts.len(),
    })
}

/// Inverse condition number `σ_min / σ_max`; zero when `G` is rank deficient.
pub fn grasp_quality(g: &GraspMatrix) -> f64 {
    let sv = g.singular_values();
    if rank_of(&sv) < 6 {
        0.0
    } else {
        sv[5] / sv[0]
    }
}

/// Orthonormal basis of object twists the contacts cannot resist (`Gᵀ t = 0`).
pub fn free_motions(g: &GraspMatrix) -> Vec<Twist> {
    let (sv, u) = g.decompose();
    let rank = rank_of(&sv);
    u[rank..].iter().map(Twist::from_vector).collect()
}
