use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{for_each_in_box, NormSpec, Point};

/// Which boundary the scan divides by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// `∂₁B_r(x) = B_{r+1} ∖ B_{r−1}` (one lattice step).
    UnitShell,
    /// `{y : ‖y − x‖ = r}`.
    ExactSphere,
}

/// Measure being scanned, in grid units.
#[derive(Clone, Debug)]
pub enum ScanMeasure {
    Atomic(DiscreteMeasure),
    /// Unit mass on every point of `{0, …, side}^d`.
    UniformGrid {
        side: i64,
        d: usize,
    },
}

impl ScanMeasure {
    /// Uniform measure on the dyadic grid `2^{-m} Z^d ∩ [0,1]^d`.
    pub fn dyadic(m: u32, d: usize) -> Self {
        ScanMeasure::UniformGrid { side: 1i64 << m, d }
    }

    pub fn mass_at(&self, p: &Point) -> Rational {
        match self {
            ScanMeasure::Atomic(mu) => mu.mass_at(p),
            ScanMeasure::UniformGrid { side, d } => {
                if p.dim() == *d && p.iter().all(|c| (0..=*side).contains(c)) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
        }
    }

    /// `(μ(B_outer(x)), μ of points strictly inside radius `inner`)`.
    fn closed_and_open(&self, norm: &NormSpec, x: &[i64], outer: &Rational, inner: &Rational) -> (Rational, Rational) {
        match self {
            ScanMeasure::Atomic(mu) => {
                let closed = mu.mass_in_ball(norm, x, outer);
                let open = if *inner > Rational::zero() { open_mass(norm, mu, x, inner) } else { Rational::zero() };
                (closed, open)
            }
            ScanMeasure::UniformGrid { side, .. } => {
                let ext = norm.box_extent(outer);
                let lo: Vec<i64> = x.iter().zip(&ext).map(|(c, e)| (c - e).max(0)).collect();
                let hi: Vec<i64> = x.iter().zip(&ext).map(|(c, e)| (c + e).min(*side)).collect();
                if lo.iter().zip(&hi).any(|(l, h)| l > h) {
                    return (Rational::zero(), Rational::zero());
                }
                let ct = norm.closed_test(outer);
                let ot = norm.open_test(inner);
                let (mut closed, mut open) = (0u64, 0u64);
                let mut off = vec![0i64; x.len()];
                for_each_in_box(&lo, &hi, |p| {
                    for (o, (a, c)) in off.iter_mut().zip(p.iter().zip(x)) {
                        *o = a - c;
                    }
                    if norm.accepts(&ct, &off) {
                        closed += 1;
                        if norm.accepts(&ot, &off) {
                            open += 1;
                        }
                    }
                });
                (exact::int(closed as i64), exact::int(open as i64))
            }
        }
    }
}

fn open_mass(norm: &NormSpec, mu: &DiscreteMeasure, x: &[i64], r: &Rational) -> Rational {
    let t = norm.open_test(r);
    let mut off = vec![0i64; x.len()];
    mu.atoms()
        .filter(|(p, _)| {
            for (o, (a, c)) in off.iter_mut().zip(p.iter().zip(x)) {
                *o = a - c;
            }
            norm.accepts(&t, &off)
        })
        .map(|(_, m)| m.clone())
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    #[serde(with = "exact::serde_rat")]
    pub r: Rational,
    #[serde(with = "exact::serde_rat")]
    pub boundary_mass: Rational,
    #[serde(with = "exact::serde_rat")]
    pub ball_mass: Rational,
    #[serde(with = "exact::serde_rat")]
    pub ratio: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanSeries {
    pub point: Point,
    pub rows: Vec<ScanRow>,
    /// Every ratio in the series is at least `ε`.
    pub exceeds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub series: Vec<ScanSeries>,
    #[serde(with = "exact::serde_rat")]
    pub exceeding_mass: Rational,
    #[serde(with = "exact::serde_rat")]
    pub sample_mass: Rational,
    /// Mass fraction of sampled points whose whole series stays at or above
    /// `ε`; `None` when the sample carries no mass.
    #[serde(with = "exact::serde_rat_opt")]
    pub fraction: Option<Rational>,
}

/// Boundary-to-ball mass ratios at each sampled point along a strictly
/// decreasing radius schedule.
pub fn boundary_ratio_scan(
    norm: &NormSpec,
    measure: &ScanMeasure,
    points: &[Point],
    radii: &[Rational],
    eps: &Rational,
    boundary: Boundary,
) -> Result<ScanReport> {
    if radii.is_empty() {
        return Err(Error::invalid("empty radius schedule"));
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) || radii.last().is_some_and(|r| *r <= Rational::zero()) {
        return Err(Error::invalid("radius schedule must be positive and strictly decreasing"));
    }
    let distinct: BTreeSet<&Point> = points.iter().collect();
    let mut series: Vec<ScanSeries> = distinct
        .into_par_iter()
        .map(|x| {
            if x.dim() != norm.dim() {
                return Err(Error::DimensionMismatch { expected: norm.dim(), got: x.dim() });
            }
            let mut rows = Vec::with_capacity(radii.len());
            for r in radii {
                let closed = |radius: &Rational| measure.closed_and_open(norm, x, radius, radius).0;
                let (ball_mass, boundary_mass) = match boundary {
                    Boundary::ExactSphere => {
                        let (c, o) = measure.closed_and_open(norm, x, r, r);
                        (c.clone(), c - o)
                    }
                    Boundary::UnitShell => {
                        let inner = r - Rational::one();
                        let below = if inner < Rational::zero() { Rational::zero() } else { closed(&inner) };
                        (closed(r), closed(&(r + Rational::one())) - below)
                    }
                };
                if ball_mass.is_zero() {
                    return Err(Error::UndefinedFraction { center: x.clone() });
                }
                let ratio = &boundary_mass / &ball_mass;
                rows.push(ScanRow { r: r.clone(), boundary_mass, ball_mass, ratio });
            }
            let exceeds = rows.iter().all(|row| row.ratio >= *eps);
            Ok(ScanSeries { point: x.clone(), rows, exceeds })
        })
        .collect::<Result<_>>()?;
    series.sort_by(|a, b| a.point.cmp(&b.point));
    let sample_mass: Rational = series.iter().map(|s| measure.mass_at(&s.point)).sum();
    let exceeding_mass: Rational = series.iter().filter(|s| s.exceeds).map(|s| measure.mass_at(&s.point)).sum();
    let fraction = (!sample_mass.is_zero()).then(|| &exceeding_mass / &sample_mass);
    Ok(ScanReport { series, exceeding_mass, sample_mass, fraction })
}

/// Radii `2^{-j}` for `j = j_from..=j_to`, expressed in units of the grid step `2^{-m}`.
pub fn dyadic_schedule(m: u32, j_from: u32, j_to: u32) -> Result<Vec<Rational>> {
    if j_from > j_to || j_to > m {
        return Err(Error::invalid("need j_from ≤ j_to ≤ m"));
    }
    Ok((j_from..=j_to).map(|j| exact::int(1i64 << (m - j))).collect())
}

/// Counting mass on lattice points within half a step of the Euclidean circle
/// of radius `radius` about `center`.
pub fn circle_measure(center: [i64; 2], radius: i64) -> DiscreteMeasure {
    let mut pts = Vec::new();
    let lo = (2 * radius as i128 - 1).pow(2);
    let hi = (2 * radius as i128 + 1).pow(2);
    for dx in -radius - 1..=radius + 1 {
        for dy in -radius - 1..=radius + 1 {
            let s = 4 * (dx as i128 * dx as i128 + dy as i128 * dy as i128);
            if s > lo && s < hi {
                pts.push(Point::from([center[0] + dx, center[1] + dy]));
            }
        }
    }
    DiscreteMeasure::counting(pts)
}
