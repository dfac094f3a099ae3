use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Carpet;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{LatticeBall, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Per-ball `|A∩F|/|B∩F| < t` should force `|A|/|B| < C·t`.
    Low,
    /// Per-ball `|A∩F|/|B∩F| > t` should force `|A|/|B| > t/C`.
    High,
}

#[derive(Clone, Debug, Serialize)]
pub struct BallCounts {
    pub ball: LatticeBall,
    pub a_count: usize,
    pub b_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrequencyReport {
    pub direction: Direction,
    pub hypothesis_holds: bool,
    /// First ball on which the hypothesis fails.
    pub hypothesis_witness: Option<BallCounts>,
    pub a_total: usize,
    pub b_total: usize,
    #[serde(with = "exact::serde_rat")]
    pub bound: Rational,
    /// `None` when the hypothesis fails.
    pub conclusion_holds: Option<bool>,
}

impl FrequencyReport {
    pub fn passed(&self) -> bool {
        self.conclusion_holds != Some(false)
    }
}

/// Checks the per-ball frequency hypothesis on every ball of the carpet and,
/// when it holds throughout, the global conclusion.
///
/// For `High`, `|B∩F| = 0 < |A∩F|` counts as an infinite ratio; `0/0` fails
/// the hypothesis in both directions.
pub fn frequency_bound_check(
    carpet: &Carpet,
    a: &BTreeSet<Point>,
    b: &BTreeSet<Point>,
    t: &Rational,
    c: u64,
    direction: Direction,
) -> Result<FrequencyReport> {
    if b.is_empty() {
        return Err(Error::invalid("B must be nonempty"));
    }
    if c == 0 {
        return Err(Error::invalid("C must be at least 1"));
    }
    let centers = carpet.centers();
    if let Some(p) = a.iter().chain(b).find(|p| !centers.contains(*p)) {
        return Err(Error::Precondition(format!("{p} is not a carpet centre")));
    }
    let family = carpet.family();
    let mut witness = None;
    for ball in carpet.balls() {
        let ac = a.iter().filter(|p| family.contains(ball, p)).count();
        let bc = b.iter().filter(|p| family.contains(ball, p)).count();
        let ok = match (direction, bc) {
            (Direction::Low, 0) => false,
            (Direction::High, 0) => ac > 0,
            (Direction::Low, _) => exact::int(ac as i64) < t * exact::int(bc as i64),
            (Direction::High, _) => exact::int(ac as i64) > t * exact::int(bc as i64),
        };
        if !ok {
            witness = Some(BallCounts { ball: ball.clone(), a_count: ac, b_count: bc });
            break;
        }
    }
    let ci = exact::int(c as i64);
    let bound = match direction {
        Direction::Low => &ci * t,
        Direction::High => t / &ci,
    };
    let ratio = Rational::new(a.len().into(), b.len().into());
    let conclusion_holds = witness.is_none().then(|| match direction {
        Direction::Low => ratio < bound,
        Direction::High => ratio > bound,
    });
    Ok(FrequencyReport {
        direction,
        hypothesis_holds: witness.is_none(),
        hypothesis_witness: witness,
        a_total: a.len(),
        b_total: b.len(),
        bound,
        conclusion_holds,
    })
}
