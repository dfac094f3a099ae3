use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{
    ball_contains, for_each_in_box, lattice_ball_points, sets_closer_than, LatticeBall, NormSpec, Point,
};

/// The rule producing averaging sets `B_n ∋ 0` with `B_n ⊆ B_{n+1}`, and the
/// ball `B_r(x)` it places at a centre.
///
/// Norm balls are symmetric. One-sided cubes `Q_n = {0,…,n}^d` are not: the
/// cube at `x` is `x + Q_{⌊r⌋}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BallFamily {
    Norm { norm: NormSpec },
    OneSidedCube { d: usize },
}

impl From<NormSpec> for BallFamily {
    fn from(norm: NormSpec) -> Self {
        BallFamily::Norm { norm }
    }
}

impl BallFamily {
    pub fn one_sided_cube(d: usize) -> Self {
        BallFamily::OneSidedCube { d }
    }

    pub fn dim(&self) -> usize {
        match self {
            BallFamily::Norm { norm } => norm.dim(),
            BallFamily::OneSidedCube { d } => *d,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, BallFamily::Norm { .. })
    }

    pub fn label(&self) -> String {
        match self {
            BallFamily::Norm { norm } => norm.label().to_string(),
            BallFamily::OneSidedCube { .. } => "one_sided_cube".to_string(),
        }
    }

    pub fn norm(&self) -> Option<&NormSpec> {
        match self {
            BallFamily::Norm { norm } => Some(norm),
            BallFamily::OneSidedCube { .. } => None,
        }
    }

    /// Metric used for set distances: the norm itself, or `ℓ∞` for cubes.
    pub fn metric(&self) -> NormSpec {
        match self {
            BallFamily::Norm { norm } => norm.clone(),
            BallFamily::OneSidedCube { d } => NormSpec::linf(*d),
        }
    }

    pub(crate) fn check_dim(&self, p: &[i64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.len() });
        }
        Ok(())
    }

    pub fn contains(&self, ball: &LatticeBall, p: &[i64]) -> bool {
        match self {
            BallFamily::Norm { norm } => ball_contains(norm, ball, p),
            BallFamily::OneSidedCube { .. } => {
                let side = exact::floor_i64(&ball.radius);
                p.iter().zip(ball.center.iter()).all(|(a, c)| (0..=side).contains(&(a - c)))
            }
        }
    }

    pub fn bounding_box(&self, ball: &LatticeBall) -> (Vec<i64>, Vec<i64>) {
        match self {
            BallFamily::Norm { norm } => {
                let ext = norm.box_extent(&ball.radius);
                (
                    ball.center.iter().zip(&ext).map(|(c, e)| c - e).collect(),
                    ball.center.iter().zip(&ext).map(|(c, e)| c + e).collect(),
                )
            }
            BallFamily::OneSidedCube { .. } => {
                let side = exact::floor_i64(&ball.radius);
                (ball.center.0.clone(), ball.center.iter().map(|c| c + side).collect())
            }
        }
    }

    /// Lattice points of the ball in lexicographic order.
    pub fn points(&self, ball: &LatticeBall) -> Result<Vec<Point>> {
        self.check_dim(&ball.center)?;
        match self {
            BallFamily::Norm { norm } => lattice_ball_points(norm, ball),
            BallFamily::OneSidedCube { .. } => {
                let (lo, hi) = self.bounding_box(ball);
                let mut out = Vec::new();
                for_each_in_box(&lo, &hi, |p| out.push(Point::from(p)));
                Ok(out)
            }
        }
    }

    /// Smallest integer `n` with `offset ∈ B_n`, if any.
    pub fn min_index(&self, offset: &[i64]) -> Option<u64> {
        match self {
            BallFamily::Norm { norm } => Some(norm.min_integer_radius(offset)),
            BallFamily::OneSidedCube { .. } => {
                if offset.iter().all(|&c| c >= 0) {
                    Some(offset.iter().copied().max().unwrap_or(0) as u64)
                } else {
                    None
                }
            }
        }
    }

    /// The averaging set `B_n` itself (ball of radius `n` at the origin).
    pub fn averaging_set(&self, n: u64) -> Result<Vec<Point>> {
        self.points(&LatticeBall::new(Point::origin(self.dim()), exact::int(n as i64)))
    }

    /// Whether the two balls are at set distance at least `threshold`, given
    /// their point sets. Centre-distance bounds settle most pairs before any
    /// point comparison.
    pub(crate) fn balls_separated(
        &self,
        a: &LatticeBall,
        pa: &[Point],
        b: &LatticeBall,
        pb: &[Point],
        threshold: &Rational,
    ) -> bool {
        if self.contains(a, &b.center) || self.contains(b, &a.center) {
            return !num_traits::Signed::is_positive(threshold);
        }
        match self {
            BallFamily::Norm { norm } => {
                let reach = &a.radius + &b.radius + threshold;
                let diff = &a.center - &b.center;
                if !norm.accepts(&norm.open_test(&reach), &diff) {
                    return true;
                }
            }
            BallFamily::OneSidedCube { .. } => {
                let (alo, ahi) = self.bounding_box(a);
                let (blo, bhi) = self.bounding_box(b);
                let gap = (0..alo.len()).map(|i| (blo[i] - ahi[i]).max(alo[i] - bhi[i]).max(0)).max().unwrap_or(0);
                return exact::int(gap) >= *threshold;
            }
        }
        !sets_closer_than(&self.metric(), pa, pb, threshold)
    }
}
