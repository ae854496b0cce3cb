use super::{Vec2, EXACT_TOL};
use crate::error::{Result, RiskError};

/// Strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon2D {
    vertices: Vec<Vec2>,
}

fn cross(o: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Distance from `p` to the closed segment `[a, b]`.
fn point_segment_distance(p: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let t = if len2 > 0.0 {
        ((p - a).dot(&ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (a + ab * t - p).norm()
}

impl ConvexPolygon2D {
    /// Accepts vertices that already form a strictly convex counterclockwise polygon.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(RiskError::DegenerateGeometry(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices
            .iter()
            .any(|v| !v.x.is_finite() || !v.y.is_finite())
        {
            return Err(RiskError::DegenerateGeometry(
                "polygon has non-finite vertices".into(),
            ));
        }
        let n = vertices.len();
        let mut turning = 0.0;
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let c = &vertices[(i + 2) % n];
            let edge = (b - a).norm();
            if edge <= EXACT_TOL {
                return Err(RiskError::DegenerateGeometry(format!(
                    "polygon has a repeated vertex at index {}",
                    (i + 1) % n
                )));
            }
            // Signed distance of c from the line through a, b.
            if cross(a, b, c) / edge <= EXACT_TOL {
                return Err(RiskError::DegenerateGeometry(format!(
                    "polygon is not strictly convex and counterclockwise at vertex {}",
                    (i + 1) % n
                )));
            }
            let u = b - a;
            let v = c - b;
            turning += (u.x * v.y - u.y * v.x).atan2(u.dot(&v));
        }
        // All left turns plus a single winding means the polygon is simple.
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(RiskError::DegenerateGeometry(
                "polygon winds more than once".into(),
            ));
        }
        Ok(ConvexPolygon2D { vertices })
    }

    /// Axis-aligned rectangle `[min.x, max.x] × [min.y, max.y]`.
    pub fn rectangle(min: Vec2, max: Vec2) -> Result<Self> {
        Self::new(vec![
            min,
            Vec2::new(max.x, min.y),
            max,
            Vec2::new(min.x, max.y),
        ])
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Vec2, &Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        0.5 * self
            .edges()
            .map(|(a, b)| a.x * b.y - a.y * b.x)
            .sum::<f64>()
    }

    pub fn centroid(&self) -> Vec2 {
        let mut c = Vec2::zeros();
        let mut a2 = 0.0;
        for (p, q) in self.edges() {
            let w = p.x * q.y - p.y * q.x;
            a2 += w;
            c += (p + q) * w;
        }
        c / (3.0 * a2)
    }

    /// Inside or on the boundary.
    pub fn contains(&self, p: &Vec2) -> bool {
        self.signed_margin(p) >= 0.0
    }

    /// Positive inside (distance to the nearest edge), zero on the boundary,
    /// negative outside (minus the distance to the polygon).
    pub fn signed_margin(&self, p: &Vec2) -> f64 {
        let mut inside = true;
        let mut on_boundary = false;
        let mut dist = f64::INFINITY;
        for (a, b) in self.edges() {
            let d = point_segment_distance(p, a, b);
            dist = dist.min(d);
            let side = cross(a, b, p);
            if side < 0.0 {
                inside = false;
            }
            if d == 0.0 {
                on_boundary = true;
            }
        }
        if on_boundary {
            0.0
        } else if inside {
            dist
        } else {
            -dist
        }
    }

    pub fn translated(&self, offset: &Vec2) -> ConvexPolygon2D {
        ConvexPolygon2D {
            vertices: self.vertices.iter().map(|v| v + offset).collect(),
        }
    }
}

/// Monotone-chain convex hull. Collinear boundary points are dropped.
pub fn convex_hull(points: &[Vec2]) -> Result<ConvexPolygon2D> {
    if points.len() < 3 {
        return Err(RiskError::DegenerateGeometry(format!(
            "convex hull needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
        return Err(RiskError::DegenerateGeometry(
            "hull input has non-finite points".into(),
        ));
    }
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();

    // Pops while the turn o -> a -> b is not a strict left turn (distance-scaled).
    let keeps = |o: &Vec2, a: &Vec2, b: &Vec2| {
        let base = (b - o).norm();
        base > 0.0 && cross(o, a, b) / base > EXACT_TOL
    };

    let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len() * 2);
    for p in &pts {
        while hull.len() >= 2 && !keeps(&hull[hull.len() - 2], &hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && !keeps(&hull[hull.len() - 2], &hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();

    if hull.len() < 3 {
        return Err(RiskError::DegenerateGeometry(
            "all hull input points are collinear".into(),
        ));
    }
    ConvexPolygon2D::new(hull)
}

/// Signed distance from `point` to the boundary of `polygon`, positive inside.
pub fn signed_margin(point: &Vec2, polygon: &ConvexPolygon2D) -> f64 {
    polygon.signed_margin(point)
}
