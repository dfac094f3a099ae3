//! Norms on `R^d`, closed lattice balls and thick spheres on `Z^d`.

mod lattice;
mod norm;
mod point;

pub use lattice::{
    ball_contains, doubling_ratio, for_each_in_box, lattice_ball_count, lattice_ball_points, norm_eval, point_cap,
    set_distance, set_point_cap, sets_closer_than, shell_contains, shell_points, thick_boundary_points, LatticeBall,
    ThickSphere, DEFAULT_POINT_CAP,
};
pub use norm::{NormKind, NormSpec, NormValue, RadiusTest};
pub use point::Point;
