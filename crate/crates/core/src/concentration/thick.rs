use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{DiscreteMeasure, GrowthMode, Stack};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{thick_boundary_points, LatticeBall, NormSpec, Point, ThickSphere};

/// `μ(∂₁B)/μ(B)`.
pub fn thickness_fraction(norm: &NormSpec, mu: &DiscreteMeasure, ball: &LatticeBall) -> Result<Rational> {
    ThickSphere::new(ball.center.clone(), ball.radius.clone(), Rational::one())?;
    let whole = mu.mass_in_ball(norm, &ball.center, &ball.radius);
    if whole.is_zero() {
        return Err(Error::UndefinedFraction { center: ball.center.clone() });
    }
    Ok(mu.mass_in_shell(norm, &ball.center, &ball.radius, &Rational::one()) / whole)
}

#[derive(Clone, Debug, Serialize)]
pub struct ThickCenters {
    pub centers: BTreeSet<Point>,
    #[serde(with = "exact::serde_rat")]
    pub mass: Rational,
    /// `μ(F_thick)/μ(X)`.
    #[serde(with = "exact::serde_rat")]
    pub fraction: Rational,
}

/// Centres whose every stack ball is `ε`-thick. A ball of zero mass counts as
/// thick.
pub fn thick_center_mass(mu: &DiscreteMeasure, stack: &Stack, eps: &Rational) -> Result<ThickCenters> {
    if stack.growth() != GrowthMode::Squared {
        return Err(Error::Precondition("thick centre mass expects a squared-growth stack".into()));
    }
    let norm = stack.family().norm().ok_or_else(|| Error::invalid("thick centre mass needs a norm-ball family"))?;
    if mu.total().is_zero() {
        return Err(Error::ZeroDenominator("total mass is zero".into()));
    }
    let mut centers = BTreeSet::new();
    'outer: for x in stack.centers() {
        for b in stack.balls_at(x) {
            match thickness_fraction(norm, mu, b) {
                Ok(fr) if fr < *eps => continue 'outer,
                Ok(_) | Err(Error::UndefinedFraction { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        centers.insert(x.clone());
    }
    let mass = mu.mass_of(centers.iter());
    let fraction = &mass / mu.total();
    Ok(ThickCenters { centers, mass, fraction })
}

/// Counting mass on the `ℓ∞` unit shells `∂₁B_r(0)` for each `r` in `radii`.
pub fn onion_measure(d: usize, radii: &[u64]) -> Result<DiscreteMeasure> {
    let norm = NormSpec::linf(d);
    let mut pts = BTreeSet::new();
    for &r in radii {
        let s = ThickSphere::new(Point::origin(d), exact::int(r as i64), Rational::one())?;
        pts.extend(thick_boundary_points(&norm, &s)?);
    }
    Ok(DiscreteMeasure::counting(pts))
}
