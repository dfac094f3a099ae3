use num_traits::Zero;
use serde::Serialize;

use super::{incremental_select, BallFamily, Carpet};
use crate::concentration::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::geometry::{LatticeBall, Point};

/// Colour classes from greedy first-fit over the incremental selection.
#[derive(Clone, Debug, Serialize)]
pub struct Coloring {
    pub chi: usize,
    pub classes: Vec<Vec<LatticeBall>>,
}

impl Coloring {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn covers(&self, family: &BallFamily, points: &[Point]) -> bool {
        points.iter().all(|p| self.classes.iter().flatten().any(|b| family.contains(b, p)))
    }
}

/// `χ = C·D² + 1`.
pub fn chi_from_constants(c: u64, d: u64) -> Result<usize> {
    if c == 0 || d == 0 {
        return Err(Error::invalid("Besicovitch and doubling constants must be at least 1"));
    }
    c.checked_mul(d)
        .and_then(|x| x.checked_mul(d))
        .and_then(|x| x.checked_add(1))
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::invalid("C·D²+1 overflows"))
}

pub fn color_disjointify(carpet: &Carpet, c: u64, d: u64) -> Result<Coloring> {
    color_with_budget(carpet, chi_from_constants(c, d)?)
}

/// First-fit colouring in index order. A ball joins a class when it lies at
/// distance at least its own radius from every member (members are never
/// smaller, so this is the class's minimum radius).
pub fn color_with_budget(carpet: &Carpet, chi: usize) -> Result<Coloring> {
    let family = carpet.family();
    let mut classes: Vec<Vec<(LatticeBall, Vec<Point>)>> = Vec::new();
    for ball in incremental_select(carpet) {
        let pts = family.points(&ball)?;
        let slot = classes
            .iter()
            .position(|class| class.iter().all(|(m, mp)| family.balls_separated(m, mp, &ball, &pts, &ball.radius)));
        match slot {
            Some(i) => classes[i].push((ball, pts)),
            None if classes.len() < chi => classes.push(vec![(ball, pts)]),
            None => {
                return Err(Error::CertificateViolation { center: ball.center, radius: Box::new(ball.radius), chi })
            }
        }
    }
    Ok(Coloring { chi, classes: classes.into_iter().map(|c| c.into_iter().map(|(b, _)| b).collect()).collect() })
}

/// The colour class covering the most `μ`-mass of the centre set.
#[derive(Clone, Debug, Serialize)]
pub struct Capture {
    pub family: Vec<LatticeBall>,
    pub class_index: usize,
    pub class_count: usize,
    #[serde(with = "crate::exact::serde_rat")]
    pub captured: Rational,
    #[serde(with = "crate::exact::serde_rat")]
    pub center_mass: Rational,
}

pub fn measure_disjointify(carpet: &Carpet, mu: &DiscreteMeasure, chi: usize) -> Result<Capture> {
    let coloring = color_with_budget(carpet, chi)?;
    let family = carpet.family();
    let centers: Vec<(Point, Rational)> = carpet
        .centers()
        .into_iter()
        .map(|p| {
            let m = mu.mass_at(&p);
            (p, m)
        })
        .filter(|(_, m)| !m.is_zero())
        .collect();
    let center_mass: Rational = centers.iter().map(|(_, m)| m).sum();
    let mut best: Option<(usize, Rational)> = None;
    for (i, class) in coloring.classes.iter().enumerate() {
        let got: Rational =
            centers.iter().filter(|(p, _)| class.iter().any(|b| family.contains(b, p))).map(|(_, m)| m).sum();
        if best.as_ref().is_none_or(|(_, b)| got > *b) {
            best = Some((i, got));
        }
    }
    let (class_index, captured) = best.unwrap_or((0, Rational::zero()));
    Ok(Capture {
        family: coloring.classes.get(class_index).cloned().unwrap_or_default(),
        class_index,
        class_count: coloring.class_count(),
        captured,
        center_mass,
    })
}
