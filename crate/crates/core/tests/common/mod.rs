//! Independent reference implementations for the oracle tests.
//!
//! Nothing here calls into the crate's geometry or linear algebra; only
//! plain arrays and straightforward formulas.

#![allow(dead_code, clippy::needless_range_loop)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type P3 = [f64; 3];
pub type P2 = [f64; 2];

pub fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: P3, b: P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale(a: P3, s: f64) -> P3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: P3) -> f64 {
    dot(a, a).sqrt()
}

/// Primitive described with plain arrays; `rot` is row-major, columns are
/// the box axes in the world frame.
#[derive(Debug, Clone, Copy)]
pub enum Prim {
    Sphere { c: P3, r: f64 },
    Capsule { a: P3, b: P3, r: f64 },
    Box { c: P3, rot: [[f64; 3]; 3], h: P3 },
}

fn to_local(rot: &[[f64; 3]; 3], c: P3, p: P3) -> P3 {
    let d = sub(p, c);
    // Rᵀ d
    [
        rot[0][0] * d[0] + rot[1][0] * d[1] + rot[2][0] * d[2],
        rot[0][1] * d[0] + rot[1][1] * d[1] + rot[2][1] * d[2],
        rot[0][2] * d[0] + rot[1][2] * d[1] + rot[2][2] * d[2],
    ]
}

fn to_world(rot: &[[f64; 3]; 3], c: P3, l: P3) -> P3 {
    [
        c[0] + rot[0][0] * l[0] + rot[0][1] * l[1] + rot[0][2] * l[2],
        c[1] + rot[1][0] * l[0] + rot[1][1] * l[1] + rot[1][2] * l[2],
        c[2] + rot[2][0] * l[0] + rot[2][1] * l[1] + rot[2][2] * l[2],
    ]
}

fn segment_distance(p: P3, a: P3, b: P3) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    let t = if len2 == 0.0 {
        0.0
    } else {
        (dot(sub(p, a), ab) / len2).clamp(0.0, 1.0)
    };
    norm(sub(p, add(a, scale(ab, t))))
}

impl Prim {
    /// Euclidean distance from a point to the solid (0 inside).
    pub fn point_distance(&self, p: P3) -> f64 {
        match *self {
            Prim::Sphere { c, r } => (norm(sub(p, c)) - r).max(0.0),
            Prim::Capsule { a, b, r } => (segment_distance(p, a, b) - r).max(0.0),
            Prim::Box { c, rot, h } => {
                let l = to_local(&rot, c, p);
                let q: Vec<f64> = (0..3).map(|i| (l[i].abs() - h[i]).max(0.0)).collect();
                (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt()
            }
        }
    }

    pub fn contains(&self, p: P3) -> bool {
        self.point_distance(p) == 0.0
    }

    pub fn bounds(&self) -> (P3, P3) {
        match *self {
            Prim::Sphere { c, r } => (sub(c, [r; 3]), add(c, [r; 3])),
            Prim::Capsule { a, b, r } => {
                let lo = [a[0].min(b[0]) - r, a[1].min(b[1]) - r, a[2].min(b[2]) - r];
                let hi = [a[0].max(b[0]) + r, a[1].max(b[1]) + r, a[2].max(b[2]) + r];
                (lo, hi)
            }
            Prim::Box { c, rot, h } => {
                let ext: Vec<f64> = (0..3)
                    .map(|i| (0..3).map(|j| rot[i][j].abs() * h[j]).sum())
                    .collect();
                (
                    [c[0] - ext[0], c[1] - ext[1], c[2] - ext[2]],
                    [c[0] + ext[0], c[1] + ext[1], c[2] + ext[2]],
                )
            }
        }
    }

    /// Uniform point inside the solid.
    pub fn sample_inside(&self, rng: &mut ChaCha8Rng) -> P3 {
        if let Prim::Box { c, rot, h } = *self {
            let l = [
                rng.random_range(-h[0]..=h[0]),
                rng.random_range(-h[1]..=h[1]),
                rng.random_range(-h[2]..=h[2]),
            ];
            return to_world(&rot, c, l);
        }
        let (lo, hi) = self.bounds();
        loop {
            let p = [
                rng.random_range(lo[0]..=hi[0]),
                rng.random_range(lo[1]..=hi[1]),
                rng.random_range(lo[2]..=hi[2]),
            ];
            if self.contains(p) {
                return p;
            }
        }
    }

    pub fn size(&self) -> f64 {
        let (lo, hi) = self.bounds();
        norm(sub(hi, lo))
    }
}

/// Sampled minimum distance between two convex solids.
///
/// The point-to-solid distance of `b` is convex over the solid `a`, so a
/// uniform volume sample followed by a shrinking random local search over
/// points of `a` converges to the true minimum.
pub fn sampled_min_distance(a: &Prim, b: &Prim, samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let coarse = samples / 5;
    let mut best_p = a.sample_inside(rng);
    let mut best = b.point_distance(best_p);
    for _ in 0..coarse {
        let p = a.sample_inside(rng);
        let d = b.point_distance(p);
        if d < best {
            best = d;
            best_p = p;
        }
    }
    let refine = samples - coarse;
    let mut radius = a.size() * 0.25;
    let shrink = (1e-9f64 / radius).powf(1.0 / refine as f64);
    for _ in 0..refine {
        if best == 0.0 {
            break;
        }
        let step = gaussian3(rng, radius);
        let p = add(best_p, step);
        if a.contains(p) {
            let d = b.point_distance(p);
            if d < best {
                best = d;
                best_p = p;
            }
        }
        radius *= shrink;
    }
    best
}

pub fn gaussian3(rng: &mut ChaCha8Rng, sigma: f64) -> P3 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    let z: f64 = rng.sample(StandardNormal);
    [x * sigma, y * sigma, z * sigma]
}

/// Rotation from roll, pitch, yaw (`Rz·Ry·Rx`) as row-major rows.
pub fn rpy_rows(roll: f64, pitch: f64, yaw: f64) -> [[f64; 3]; 3] {
    let (sr, cr) = roll.sin_cos();
    let (sp, cp) = pitch.sin_cos();
    let (sy, cy) = yaw.sin_cos();
    [
        [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
        [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
        [-sp, cp * sr, cp * cr],
    ]
}

fn cross2(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Hull vertices by brute force: a point is a vertex iff it is the endpoint
/// of some directed pair with every other point strictly to its left.
/// Returns the hull edges as index pairs.
pub fn brute_force_hull_edges(points: &[P2]) -> Vec<(usize, usize)> {
    let n = points.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let all_left = (0..n)
                .filter(|&k| k != i && k != j)
                .all(|k| cross2(points[i], points[j], points[k]) > 0.0);
            if all_left {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Point-in-convex-polygon (CCW vertices), boundary counts as inside.
pub fn inside_convex(poly: &[P2], p: P2) -> bool {
    (0..poly.len()).all(|i| cross2(poly[i], poly[(i + 1) % poly.len()], p) >= 0.0)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-32 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Singular values (descending, six of them) of a 6×m matrix given by columns,
/// via the eigenvalues of `G Gᵀ`.
pub fn singular_values_6(cols: &[[f64; 6]]) -> [f64; 6] {
    let mut ggt = vec![vec![0.0; 6]; 6];
    for c in cols {
        for i in 0..6 {
            for j in 0..6 {
                ggt[i][j] += c[i] * c[j];
            }
        }
    }
    let ev = jacobi_eigenvalues(ggt);
    let mut sv = [0.0; 6];
    for (i, e) in ev.iter().rev().enumerate() {
        sv[i] = e.max(0.0).sqrt();
    }
    sv
}

/// Trapezoid average of `f` over `[t0, t1]` with `n` equal intervals.
pub fn fine_average(f: impl Fn(f64) -> f64, t0: f64, t1: f64, n: usize) -> f64 {
    let h = (t1 - t0) / n as f64;
    let mut sum = 0.5 * (f(t0) + f(t1));
    for i in 1..n {
        sum += f(t0 + h * i as f64);
    }
    sum * h / (t1 - t0)
}
