//! Spatial primitives and distance queries shared by every risk metric.

mod distance;
mod polygon;
mod pose;
mod shapes;

pub use distance::{min_distance, point_segment_closest, segment_segment_closest, shape_distance};
pub use polygon::{convex_hull, signed_margin, ConvexPolygon2D};
pub use pose::{adjoint, Pose, Twist};
pub use shapes::{Capsule, Cuboid, Shape, ShapeSet, Sphere};

pub type Vec2 = nalgebra::Vector2<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;
pub type Mat6 = nalgebra::Matrix6<f64>;

/// Tolerance for exact-algebra checks (orthonormality, collinearity, unit normals).
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance for iterative geometric queries.
pub const ITERATIVE_TOL: f64 = 1e-6;
