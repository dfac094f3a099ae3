use std::collections::{BTreeSet, HashMap};

use num_traits::Signed;
use serde::Serialize;

use super::BallFamily;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::geometry::{sets_closer_than, shell_points, LatticeBall, NormSpec, Point, ThickSphere};

/// One ball per centre, all drawn from a single family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Carpet {
    family: BallFamily,
    balls: Vec<LatticeBall>,
}

impl Carpet {
    pub fn new(family: BallFamily, balls: Vec<LatticeBall>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for b in &balls {
            family.check_dim(&b.center)?;
            if b.radius.is_negative() {
                return Err(Error::invalid(format!("negative radius {} at {}", b.radius, b.center)));
            }
            if !seen.insert(b.center.clone()) {
                return Err(Error::invalid(format!("centre {} carries two balls", b.center)));
            }
        }
        Ok(Carpet { family, balls })
    }

    /// Parses `[{"center": [..], "radius": "p/q"}, ...]`.
    pub fn from_json(family: BallFamily, text: &str) -> Result<Self> {
        let balls: Vec<LatticeBall> = serde_json::from_str(text)?;
        Carpet::new(family, balls)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.balls)?)
    }

    pub fn family(&self) -> &BallFamily {
        &self.family
    }

    pub fn balls(&self) -> &[LatticeBall] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn centers(&self) -> BTreeSet<Point> {
        self.balls.iter().map(|b| b.center.clone()).collect()
    }

    pub fn ball_at(&self, center: &Point) -> Option<&LatticeBall> {
        self.balls.iter().find(|b| &b.center == center)
    }

    pub fn minrad(&self) -> Option<&Rational> {
        self.balls.iter().map(|b| &b.radius).min()
    }

    pub fn maxrad(&self) -> Option<&Rational> {
        self.balls.iter().map(|b| &b.radius).max()
    }

    pub fn restrict(&self, keep: impl Fn(&LatticeBall) -> bool) -> Carpet {
        Carpet { family: self.family.clone(), balls: self.balls.iter().filter(|b| keep(b)).cloned().collect() }
    }
}

impl Serialize for Carpet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.balls.serialize(s)
    }
}

/// Radii non-increasing and no centre inside an earlier ball.
pub fn is_incremental(family: &BallFamily, seq: &[LatticeBall]) -> Result<bool> {
    if seq.is_empty() {
        return Err(Error::invalid("incremental check needs a nonempty sequence"));
    }
    for (j, b) in seq.iter().enumerate() {
        family.check_dim(&b.center)?;
        if j > 0 && b.radius > seq[j - 1].radius {
            return Ok(false);
        }
        if seq[..j].iter().any(|a| family.contains(a, &b.center)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greedy selection by non-increasing radius (ties keep input order),
/// skipping centres already covered.
pub fn incremental_select(carpet: &Carpet) -> Vec<LatticeBall> {
    let mut order: Vec<usize> = (0..carpet.balls.len()).collect();
    order.sort_by(|&i, &j| carpet.balls[j].radius.cmp(&carpet.balls[i].radius));
    let mut chosen: Vec<LatticeBall> = Vec::new();
    for i in order {
        let b = &carpet.balls[i];
        if !chosen.iter().any(|a| carpet.family.contains(a, &b.center)) {
            chosen.push(b.clone());
        }
    }
    chosen
}

/// `max_z #{B ∈ balls : z ∈ B}`, over `probe` when given, else over the union.
pub fn multiplicity(family: &BallFamily, balls: &[LatticeBall], probe: Option<&[Point]>) -> Result<usize> {
    for b in balls {
        family.check_dim(&b.center)?;
    }
    if let Some(probe) = probe {
        return Ok(probe.iter().map(|z| balls.iter().filter(|b| family.contains(b, z)).count()).max().unwrap_or(0));
    }
    let mut counts: HashMap<Point, usize> = HashMap::new();
    for b in balls {
        for p in family.points(b)? {
            *counts.entry(p).or_default() += 1;
        }
    }
    Ok(counts.into_values().max().unwrap_or(0))
}

/// Pairwise set distance at least `r` (default: the smallest radius present).
pub fn is_well_separated(family: &BallFamily, balls: &[LatticeBall], r: Option<&Rational>) -> Result<bool> {
    if balls.is_empty() {
        return Err(Error::invalid("separation check needs a nonempty family"));
    }
    let r = r.cloned().unwrap_or_else(|| balls.iter().map(|b| &b.radius).min().unwrap().clone());
    let pts: Vec<Vec<Point>> = balls.iter().map(|b| family.points(b)).collect::<Result<_>>()?;
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            if !family.balls_separated(&balls[i], &pts[i], &balls[j], &pts[j], &r) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sphere analogue of [`is_well_separated`]. Thickness may exceed radius.
pub fn spheres_well_separated(norm: &NormSpec, spheres: &[ThickSphere], r: Option<&Rational>) -> Result<bool> {
    if spheres.is_empty() {
        return Err(Error::invalid("separation check needs a nonempty family"));
    }
    let r = r.cloned().unwrap_or_else(|| spheres.iter().map(|s| &s.radius).min().unwrap().clone());
    let pts: Vec<Vec<Point>> =
        spheres.iter().map(|s| shell_points(norm, &s.center, &s.radius, &s.thickness)).collect::<Result<_>>()?;
    for i in 0..spheres.len() {
        for j in i + 1..spheres.len() {
            if !spheres_apart(norm, &spheres[i], &pts[i], &spheres[j], &pts[j], &r) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub(crate) fn spheres_apart(
    norm: &NormSpec,
    a: &ThickSphere,
    pa: &[Point],
    b: &ThickSphere,
    pb: &[Point],
    threshold: &Rational,
) -> bool {
    let reach = &a.radius + &a.thickness + &b.radius + &b.thickness + threshold;
    let diff = &a.center - &b.center;
    if !norm.accepts(&norm.open_test(&reach), &diff) {
        return true;
    }
    !sets_closer_than(norm, pa, pb, threshold)
}
