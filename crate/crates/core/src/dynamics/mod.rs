//! Atomic nonsingular `Z^d` actions and the dual-operator sums built on them.
//!
//! `T̂^u f(ω) = f(T^{−u}ω)·ρ(u, ω)` with `ρ(u, ω) = μ(T^{−u}ω)/μ(ω)`. Ball
//! sums average over the window `ω + B_n` of atoms `T^b ω`, `b ∈ B_n`.

mod action;
mod checks;
mod observable;
mod sums;

pub use action::*;
pub use checks::*;
pub use observable::*;
pub use sums::*;
