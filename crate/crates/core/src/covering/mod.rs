//! Carpets, incremental selection, colouring into well-separated classes,
//! frequency bounds, sphere exhaustion and constant certification.

mod carpet;
mod certify;
mod coloring;
mod exhaustion;
mod family;
mod frequency;

pub use carpet::{incremental_select, is_incremental, is_well_separated, multiplicity, spheres_well_separated, Carpet};
pub use certify::*;
pub use coloring::{chi_from_constants, color_disjointify, color_with_budget, measure_disjointify, Capture, Coloring};
pub use exhaustion::{required_height, sphere_exhaustion, verify_exhaustion, Exhaustion};
pub use family::BallFamily;
pub use frequency::{frequency_bound_check, BallCounts, Direction, FrequencyReport};
