use super::distance::{point_box_local, point_segment_closest};
use super::{Pose, Vec3};
use crate::error::{Result, RiskError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere {
    pub center: Vec3,
    pub radius: f64,
}

/// Segment `[a, b]` swept by a ball of `radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capsule {
    pub a: Vec3,
    pub b: Vec3,
    pub radius: f64,
}

/// Oriented box centered at `pose.translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cuboid {
    pub pose: Pose,
    pub half_extents: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Sphere(Sphere),
    Capsule(Capsule),
    Cuboid(Cuboid),
}

impl Sphere {
    pub fn new(center: Vec3, radius: f64) -> Self {
        Sphere { center, radius }
    }
}

impl Capsule {
    pub fn new(a: Vec3, b: Vec3, radius: f64) -> Self {
        Capsule { a, b, radius }
    }
}

impl Cuboid {
    pub fn new(pose: Pose, half_extents: Vec3) -> Self {
        Cuboid { pose, half_extents }
    }

    pub fn axis_aligned(center: Vec3, half_extents: Vec3) -> Self {
        Cuboid {
            pose: Pose::from_translation(center),
            half_extents,
        }
    }

    pub fn corners(&self) -> [Vec3; 8] {
        let h = self.half_extents;
        let mut out = [Vec3::zeros(); 8];
        for (i, c) in out.iter_mut().enumerate() {
            let local = Vec3::new(
                if i & 1 == 0 { -h.x } else { h.x },
                if i & 2 == 0 { -h.y } else { h.y },
                if i & 4 == 0 { -h.z } else { h.z },
            );
            *c = self.pose.transform_point(&local);
        }
        out
    }

    /// The 12 edges as corner index pairs into [`Cuboid::corners`].
    pub const EDGES: [(usize, usize); 12] = [
        (0, 1),
        (2, 3),
        (4, 5),
        (6, 7),
        (0, 2),
        (1, 3),
        (4, 6),
        (5, 7),
        (0, 4),
        (1, 5),
        (2, 6),
        (3, 7),
    ];
}

impl Shape {
    pub fn sphere(center: Vec3, radius: f64) -> Self {
        Shape::Sphere(Sphere::new(center, radius))
    }

    pub fn capsule(a: Vec3, b: Vec3, radius: f64) -> Self {
        Shape::Capsule(Capsule::new(a, b, radius))
    }

    pub fn cuboid(pose: Pose, half_extents: Vec3) -> Self {
        Shape::Cuboid(Cuboid::new(pose, half_extents))
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: &Vec3| v.iter().all(|x| x.is_finite());
        match self {
            Shape::Sphere(s) => {
                if !finite(&s.center) {
                    return Err(RiskError::validation("sphere.center", "must be finite"));
                }
                if !(s.radius > 0.0 && s.radius.is_finite()) {
                    return Err(RiskError::validation("sphere.radius", "must be positive"));
                }
            }
            Shape::Capsule(c) => {
                if !finite(&c.a) || !finite(&c.b) {
                    return Err(RiskError::validation("capsule", "endpoints must be finite"));
                }
                if !(c.radius > 0.0 && c.radius.is_finite()) {
                    return Err(RiskError::validation("capsule.radius", "must be positive"));
                }
            }
            Shape::Cuboid(b) => {
                if !b.half_extents.iter().all(|h| *h > 0.0 && h.is_finite()) {
                    return Err(RiskError::validation(
                        "box.half_extents",
                        "must all be positive",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn translated(&self, offset: &Vec3) -> Shape {
        match *self {
            Shape::Sphere(s) => Shape::Sphere(Sphere::new(s.center + offset, s.radius)),
            Shape::Capsule(c) => Shape::Capsule(Capsule::new(c.a + offset, c.b + offset, c.radius)),
            Shape::Cuboid(b) => {
                let pose = b.pose.with_translation(b.pose.translation() + offset);
                Shape::Cuboid(Cuboid::new(pose, b.half_extents))
            }
        }
    }

    /// Representative point: sphere center, capsule tip `b`, box center.
    pub fn reference_point(&self) -> Vec3 {
        match self {
            Shape::Sphere(s) => s.center,
            Shape::Capsule(c) => c.b,
            Shape::Cuboid(b) => *b.pose.translation(),
        }
    }

    /// Whether `p` lies inside or on the shape.
    pub fn contains(&self, p: &Vec3) -> bool {
        match self {
            Shape::Sphere(s) => (p - s.center).norm() <= s.radius,
            Shape::Capsule(c) => {
                let (_, q) = point_segment_closest(p, &c.a, &c.b);
                (p - q).norm() <= c.radius
            }
            Shape::Cuboid(b) => {
                let local = b.pose.inverse().transform_point(p);
                local
                    .iter()
                    .zip(b.half_extents.iter())
                    .all(|(x, h)| x.abs() <= *h)
            }
        }
    }

    /// Closest point on the surface of the shape, and the outward unit normal there.
    pub fn closest_surface_point(&self, p: &Vec3) -> (Vec3, Vec3) {
        fn ball(center: &Vec3, radius: f64, p: &Vec3) -> (Vec3, Vec3) {
            let d = p - center;
            let n = d.try_normalize(0.0).unwrap_or_else(Vec3::z);
            (center + n * radius, n)
        }
        match self {
            Shape::Sphere(s) => ball(&s.center, s.radius, p),
            Shape::Capsule(c) => {
                let (_, q) = point_segment_closest(p, &c.a, &c.b);
                ball(&q, c.radius, p)
            }
            Shape::Cuboid(b) => {
                let inv = b.pose.inverse();
                let local = inv.transform_point(p);
                let h = b.half_extents;
                let (clamped, _) = point_box_local(&local, &h);
                let (surface, normal) = if clamped != local {
                    let n = (local - clamped).normalize();
                    (clamped, n)
                } else {
                    // Inside: project onto the nearest face.
                    let mut best = 0;
                    let mut gap = f64::INFINITY;
                    for i in 0..3 {
                        let g = h[i] - local[i].abs();
                        if g < gap {
                            gap = g;
                            best = i;
                        }
                    }
                    let mut s = local;
                    let sign = if local[best] >= 0.0 { 1.0 } else { -1.0 };
                    s[best] = sign * h[best];
                    let mut n = Vec3::zeros();
                    n[best] = sign;
                    (s, n)
                };
                (
                    b.pose.transform_point(&surface),
                    b.pose.transform_vector(&normal),
                )
            }
        }
    }
}

/// Non-empty set of primitives used as a body or obstacle proxy.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSet {
    shapes: Vec<Shape>,
}

impl ShapeSet {
    pub fn new(shapes: Vec<Shape>) -> Result<Self> {
        if shapes.is_empty() {
            return Err(RiskError::EmptyShapeSet);
        }
        for (i, s) in shapes.iter().enumerate() {
            s.validate().map_err(|e| e.at(&format!("[{i}]")))?;
        }
        Ok(ShapeSet { shapes })
    }

    pub fn single(shape: Shape) -> Result<Self> {
        Self::new(vec![shape])
    }

    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn translated(&self, offset: &Vec3) -> ShapeSet {
        ShapeSet {
            shapes: self.shapes.iter().map(|s| s.translated(offset)).collect(),
        }
    }

    pub fn concat<'a>(sets: impl IntoIterator<Item = &'a ShapeSet>) -> Result<ShapeSet> {
        ShapeSet::new(
            sets.into_iter()
                .flat_map(|s| s.shapes.iter().copied())
                .collect(),
        )
    }
}
