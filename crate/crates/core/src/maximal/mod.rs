//! Ratio maximal functions, the violation score `C(f, h)` and witness
//! packages showing the maximal inequality fails for one-sided cubes.

mod ratio;
mod trials;
mod witness;

pub use ratio::*;
pub use trials::*;
pub use witness::*;
