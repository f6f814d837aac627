//! Hyperbolic 2- and 3-space: points, metric, Möbius isometries, horoballs.

mod horoball;
mod metric;
mod mobius;
mod point;

pub use horoball::{horoball_image, tangent_circle_point, Horoball};
pub use metric::{
    cayley_boundary, cayley_infinity_image, cayley_point, cross_ratio_distance, geodesic_point,
    geodesic_point_half_space, hyperbolic_distance,
};
pub(crate) use metric::geodesic_offset;
pub use mobius::{IsometryKind, MobiusIsometry, AMBIGUITY_BAND, PARABOLIC_BAND};
pub use point::{BoundaryPoint, Model, ModelPoint, SPHERE_TOL};
pub(crate) use point::{dist_sq, norm_sq};
