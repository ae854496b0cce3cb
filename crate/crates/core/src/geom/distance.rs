//! Closed-form primitive-pair distances.
//!
//! Box pairs are exact as well: a separating-axis test detects overlap, and
//! otherwise the closest features of two disjoint convex polytopes are always
//! found among vertex-versus-solid and edge-versus-edge pairs.

use std::cmp::Ordering;

use super::shapes::{Capsule, Cuboid, Shape, ShapeSet, Sphere};
use super::Vec3;
use crate::error::{Result, RiskError};

/// Closest point on segment `[a, b]` to `p`, with its parameter in `[0, 1]`.
pub fn point_segment_closest(p: &Vec3, a: &Vec3, b: &Vec3) -> (f64, Vec3) {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 <= f64::MIN_POSITIVE {
        return (0.0, *a);
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (t, a + ab * t)
}

/// Closest points between segments `[p1, q1]` and `[p2, q2]`.
/// Returns `(s, t, c1, c2)` with `c1 = p1 + s (q1 - p1)` and `c2 = p2 + t (q2 - p2)`.
pub fn segment_segment_closest(
    p1: &Vec3,
    q1: &Vec3,
    p2: &Vec3,
    q2: &Vec3,
) -> (f64, f64, Vec3, Vec3) {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let eps = f64::MIN_POSITIVE;

    let (s, t) = if a <= eps && e <= eps {
        (0.0, 0.0)
    } else if a <= eps {
        (0.0, (f / e).clamp(0.0, 1.0))
    } else {
        let c = d1.dot(&r);
        if e <= eps {
            ((-c / a).clamp(0.0, 1.0), 0.0)
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            // Parallel segments: any s works, pick the start and fix up below.
            let mut s = if denom > 1e-14 * a * e {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
            (s, t)
        }
    };
    (s, t, p1 + d1 * s, p2 + d2 * t)
}

/// Clamps a box-local point into the box `[-h, h]`; returns the clamped point and distance.
pub(crate) fn point_box_local(local: &Vec3, h: &Vec3) -> (Vec3, f64) {
    let clamped = Vec3::new(
        local.x.clamp(-h.x, h.x),
        local.y.clamp(-h.y, h.y),
        local.z.clamp(-h.z, h.z),
    );
    (clamped, (local - clamped).norm())
}

fn point_box_distance(p: &Vec3, b: &Cuboid) -> f64 {
    let local = b.pose.inverse().transform_point(p);
    point_box_local(&local, &b.half_extents).1
}

/// Slab test for a local-frame segment against the box `[-h, h]`. Touching counts.
fn segment_hits_box_local(a: &Vec3, b: &Vec3, h: &Vec3) -> bool {
    let d = b - a;
    let mut tmin: f64 = 0.0;
    let mut tmax: f64 = 1.0;
    for i in 0..3 {
        if d[i].abs() <= f64::MIN_POSITIVE {
            if a[i].abs() > h[i] {
                return false;
            }
        } else {
            let t1 = (-h[i] - a[i]) / d[i];
            let t2 = (h[i] - a[i]) / d[i];
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            tmin = tmin.max(lo);
            tmax = tmax.min(hi);
            if tmin > tmax {
                return false;
            }
        }
    }
    true
}

fn segment_box_distance(a: &Vec3, b: &Vec3, cuboid: &Cuboid) -> f64 {
    let inv = cuboid.pose.inverse();
    let la = inv.transform_point(a);
    let lb = inv.transform_point(b);
    let h = cuboid.half_extents;
    if segment_hits_box_local(&la, &lb, &h) {
        return 0.0;
    }
    let mut best = point_box_local(&la, &h).1.min(point_box_local(&lb, &h).1);
    let corners = Cuboid::axis_aligned(Vec3::zeros(), h).corners();
    for (i, j) in Cuboid::EDGES {
        let (_, _, c1, c2) = segment_segment_closest(&la, &lb, &corners[i], &corners[j]);
        best = best.min((c1 - c2).norm());
    }
    best
}

fn boxes_overlap(a: &Cuboid, b: &Cuboid) -> bool {
    let ra = a.pose.rotation();
    let rb = b.pose.rotation();
    let delta = b.pose.translation() - a.pose.translation();
    let axes_a = [
        ra.column(0).into_owned(),
        ra.column(1).into_owned(),
        ra.column(2).into_owned(),
    ];
    let axes_b = [
        rb.column(0).into_owned(),
        rb.column(1).into_owned(),
        rb.column(2).into_owned(),
    ];
    let separates = |axis: &Vec3| {
        let ra_proj: f64 = (0..3)
            .map(|i| a.half_extents[i] * axes_a[i].dot(axis).abs())
            .sum();
        let rb_proj: f64 = (0..3)
            .map(|i| b.half_extents[i] * axes_b[i].dot(axis).abs())
            .sum();
        delta.dot(axis).abs() > ra_proj + rb_proj
    };
    if axes_a.iter().chain(axes_b.iter()).any(separates) {
        return false;
    }
    for u in &axes_a {
        for v in &axes_b {
            let axis = u.cross(v);
            if axis.norm_squared() > 1e-24 && separates(&axis) {
                return false;
            }
        }
    }
    true
}

fn box_box_distance(a: &Cuboid, b: &Cuboid) -> f64 {
    if boxes_overlap(a, b) {
        return 0.0;
    }
    let ca = a.corners();
    let cb = b.corners();
    let mut best = f64::INFINITY;
    for p in &ca {
        best = best.min(point_box_distance(p, b));
    }
    for p in &cb {
        best = best.min(point_box_distance(p, a));
    }
    for (i, j) in Cuboid::EDGES {
        for (k, l) in Cuboid::EDGES {
            let (_, _, c1, c2) = segment_segment_closest(&ca[i], &ca[j], &cb[k], &cb[l]);
            best = best.min((c1 - c2).norm());
        }
    }
    best
}

fn sphere_sphere(a: &Sphere, b: &Sphere) -> f64 {
    (a.center - b.center).norm() - a.radius - b.radius
}

fn sphere_capsule(s: &Sphere, c: &Capsule) -> f64 {
    let (_, q) = point_segment_closest(&s.center, &c.a, &c.b);
    (s.center - q).norm() - s.radius - c.radius
}

fn sphere_box(s: &Sphere, b: &Cuboid) -> f64 {
    point_box_distance(&s.center, b) - s.radius
}

fn capsule_capsule(a: &Capsule, b: &Capsule) -> f64 {
    let (_, _, c1, c2) = segment_segment_closest(&a.a, &a.b, &b.a, &b.b);
    (c1 - c2).norm() - a.radius - b.radius
}

fn capsule_box(c: &Capsule, b: &Cuboid) -> f64 {
    segment_box_distance(&c.a, &c.b, b) - c.radius
}

fn params(shape: &Shape) -> Vec<f64> {
    match shape {
        Shape::Sphere(s) => vec![s.center.x, s.center.y, s.center.z, s.radius],
        Shape::Capsule(c) => {
            c.a.iter()
                .chain(c.b.iter())
                .copied()
                .chain([c.radius])
                .collect()
        }
        Shape::Cuboid(b) => b
            .pose
            .rotation()
            .iter()
            .chain(b.pose.translation().iter())
            .chain(b.half_extents.iter())
            .copied()
            .collect(),
    }
}

/// Orders two same-kind shapes so the pair formula sees identical arguments
/// regardless of call order; keeps `d(a, b) == d(b, a)` bit-exact.
fn canonical<'a>(a: &'a Shape, b: &'a Shape) -> (&'a Shape, &'a Shape) {
    let ord = params(a)
        .iter()
        .zip(params(b).iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal);
    if ord == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    }
}

/// Separation between two primitives; touching or penetrating pairs give 0.
pub fn shape_distance(a: &Shape, b: &Shape) -> f64 {
    use Shape::*;
    let d = match (a, b) {
        (Sphere(_), Sphere(_)) => match canonical(a, b) {
            (Sphere(x), Sphere(y)) => sphere_sphere(x, y),
            _ => unreachable!(),
        },
        (Sphere(s), Capsule(c)) | (Capsule(c), Sphere(s)) => sphere_capsule(s, c),
        (Sphere(s), Cuboid(b)) | (Cuboid(b), Sphere(s)) => sphere_box(s, b),
        (Capsule(c), Cuboid(b)) | (Cuboid(b), Capsule(c)) => capsule_box(c, b),
        (Capsule(_), Capsule(_)) => match canonical(a, b) {
            (Capsule(x), Capsule(y)) => capsule_capsule(x, y),
            _ => unreachable!(),
        },
        (Cuboid(_), Cuboid(_)) => match canonical(a, b) {
            (Cuboid(x), Cuboid(y)) => box_box_distance(x, y),
            _ => unreachable!(),
        },
    };
    d.max(0.0)
}

/// Minimum distance over all primitive pairs of two shape sets.
pub fn min_distance(a: &ShapeSet, b: &ShapeSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(RiskError::EmptyShapeSet);
    }
    let mut best = f64::INFINITY;
    for sa in a.shapes() {
        for sb in b.shapes() {
            best = best.min(shape_distance(sa, sb));
            if best == 0.0 {
                return Ok(0.0);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Pose;

    fn set(s: Shape) -> ShapeSet {
        ShapeSet::single(s).unwrap()
    }

    #[test]
    fn unit_spheres_three_apart() {
        let a = set(Shape::sphere(Vec3::zeros(), 1.0));
        let b = set(Shape::sphere(Vec3::new(3.0, 0.0, 0.0), 1.0));
        assert_eq!(min_distance(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn sphere_inside_box_clamps_to_zero() {
        let a = set(Shape::sphere(Vec3::new(0.2, 0.1, 0.0), 0.1));
        let b = set(Shape::cuboid(Pose::identity(), Vec3::new(1.0, 1.0, 1.0)));
        assert_eq!(min_distance(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn sphere_beside_box() {
        let a = set(Shape::sphere(Vec3::new(2.0, 0.0, 0.0), 0.1));
        let b = set(Shape::cuboid(Pose::identity(), Vec3::new(1.0, 1.0, 1.0)));
        assert!((min_distance(&a, &b).unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn crossing_capsules() {
        let a = Shape::capsule(Vec3::new(-1.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), 0.1);
        let b = Shape::capsule(Vec3::new(0.0, -1.0, 1.0), Vec3::new(0.0, 1.0, 1.0), 0.2);
        assert!((shape_distance(&a, &b) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn parallel_capsules() {
        let a = Shape::capsule(Vec3::zeros(), Vec3::new(2.0, 0.0, 0.0), 0.1);
        let b = Shape::capsule(Vec3::new(1.0, 1.0, 0.0), Vec3::new(3.0, 1.0, 0.0), 0.1);
        assert!((shape_distance(&a, &b) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn capsule_through_box_is_zero() {
        let c = Shape::capsule(Vec3::new(-3.0, 0.5, 0.5), Vec3::new(3.0, 0.5, 0.5), 0.01);
        let b = Shape::cuboid(Pose::identity(), Vec3::new(1.0, 1.0, 1.0));
        assert_eq!(shape_distance(&c, &b), 0.0);
    }

    #[test]
    fn capsule_past_box_edge() {
        // Segment parallel to the z edge at x = y = 1, offset diagonally.
        let c = Shape::capsule(Vec3::new(2.0, 2.0, -5.0), Vec3::new(2.0, 2.0, 5.0), 0.1);
        let b = Shape::cuboid(Pose::identity(), Vec3::new(1.0, 1.0, 1.0));
        assert!((shape_distance(&c, &b) - (2f64.sqrt() - 0.1)).abs() < 1e-12);
    }

    #[test]
    fn rotated_boxes_edge_to_edge() {
        let a = Shape::cuboid(Pose::identity(), Vec3::new(1.0, 1.0, 1.0));
        // Rotated 45° about z so its edge points at a's face.
        let rot = Pose::from_rpy(0.0, 0.0, std::f64::consts::FRAC_PI_4)
            .with_translation(Vec3::new(3.0, 0.0, 0.0));
        let b = Shape::cuboid(rot, Vec3::new(1.0, 1.0, 1.0));
        let expected = 3.0 - 1.0 - 2f64.sqrt();
        assert!((shape_distance(&a, &b) - expected).abs() < 1e-12);
        assert_eq!(shape_distance(&a, &b), shape_distance(&b, &a));
    }

    #[test]
    fn overlapping_boxes_are_zero() {
        let a = Shape::cuboid(Pose::identity(), Vec3::new(1.0, 1.0, 1.0));
        let b = Shape::cuboid(
            Pose::from_rpy(0.3, 0.2, 0.1).with_translation(Vec3::new(1.5, 0.2, 0.0)),
            Vec3::new(1.0, 1.0, 1.0),
        );
        assert_eq!(shape_distance(&a, &b), 0.0);
    }

    #[test]
    fn degenerate_segments() {
        let (s, t, c1, c2) = segment_segment_closest(
            &Vec3::zeros(),
            &Vec3::zeros(),
            &Vec3::new(1.0, 0.0, 0.0),
            &Vec3::new(1.0, 0.0, 0.0),
        );
        assert_eq!((s, t), (0.0, 0.0));
        assert_eq!((c1 - c2).norm(), 1.0);
    }
}
