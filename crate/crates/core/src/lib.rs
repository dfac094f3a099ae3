//! Exact covering-lemma, mass-concentration and ratio-ergodic-average
//! machinery on finitely supported measures over the integer lattice.
//!
//! Everything is computed in exact rational arithmetic. Lattice balls use the
//! closed convention `u ∈ B_r(x) ⟺ ‖u − x‖ ≤ r`; Euclidean membership is
//! decided on squared values so no floating point enters a set cardinality.
//!
//! Module map:
//! - [`geometry`]: norms, lattice balls, thick spheres, doubling ratios.
//! - [`covering`]: carpets, incremental selection, multiplicity, coloring
//!   disjointification, frequency bounds, sphere exhaustion, certificates.
//! - [`concentration`]: discrete measures, stacks, budget constants, thick
//!   centre mass, boundary-ratio scans, coarse-dimension witnesses.
//! - [`dynamics`]: atomic nonsingular `Z^d` actions, dual operators, ball
//!   sums, ratio averages, shell ratios, transference measures.
//! - [`maximal`]: ratio maximal functions, violation scores, staircase
//!   witnesses for the failure of the maximal inequality.
//! - [`experiment`]: the config-driven runners behind the `besicover` CLI.

pub mod concentration;
pub mod covering;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod geometry;
pub mod maximal;

pub use error::{Error, Result};
pub use exact::Rational;
pub use geometry::{LatticeBall, NormSpec, Point, ThickSphere};
