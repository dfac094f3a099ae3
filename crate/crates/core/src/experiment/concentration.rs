use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{csv_bytes, default_seed, float_cell, Outcome};
use crate::concentration::{
    boundary_ratio_scan, circle_measure, dyadic_schedule, onion_measure, thick_center_mass, Boundary, DiscreteMeasure,
    GrowthMode, ScanMeasure, StackBuilder,
};
use crate::covering::trial_rng;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{NormSpec, Point};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    /// Uniform mass on `{0, …, 2^m}^d`, in grid units.
    Dyadic {
        m: u32,
        d: usize,
    },
    Atoms {
        atoms: DiscreteMeasure,
    },
    Circle {
        center: [i64; 2],
        radius: i64,
    },
    Onion {
        d: usize,
        radii: Vec<u64>,
    },
}

impl MeasureSpec {
    fn build(&self) -> Result<ScanMeasure> {
        Ok(match self {
            MeasureSpec::Dyadic { m, d } => ScanMeasure::dyadic(*m, *d),
            MeasureSpec::Atoms { atoms } => ScanMeasure::Atomic(atoms.clone()),
            MeasureSpec::Circle { center, radius } => ScanMeasure::Atomic(circle_measure(*center, *radius)),
            MeasureSpec::Onion { d, radii } => ScanMeasure::Atomic(onion_measure(*d, radii)?),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSpec {
    /// Uniform random points of the measure's support (grid or atoms).
    Sample(usize),
    Explicit(Vec<Point>),
    Support,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiiSpec {
    /// `2^{-j}` for `j = from..=to` on the `2^{-m}` grid.
    Dyadic {
        m: u32,
        from: u32,
        to: u32,
    },
    Explicit(#[serde(with = "exact::serde_rat_vec")] Vec<Rational>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub norm: NormSpec,
    pub measure: MeasureSpec,
    pub points: PointSpec,
    pub radii: RadiiSpec,
    #[serde(with = "exact::serde_rat")]
    pub eps: Rational,
    #[serde(default = "default_boundary")]
    pub boundary: Boundary,
}

fn default_boundary() -> Boundary {
    Boundary::UnitShell
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThickConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub norm: NormSpec,
    pub measure: DiscreteMeasure,
    #[serde(with = "exact::serde_rat")]
    pub base_minrad: Rational,
    #[serde(default)]
    pub spread: u64,
    pub max_height: usize,
    #[serde(with = "exact::serde_rat")]
    pub eps: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ConcentrationConfig {
    Scan(ScanConfig),
    Thick(ThickConfig),
}

#[derive(Serialize)]
struct ScanCsvRow {
    point: String,
    r: String,
    boundary_mass: String,
    ball_mass: String,
    ratio: String,
    ratio_f64: String,
    exceeds: bool,
}

#[derive(Serialize)]
struct ThickCsvRow {
    height: usize,
    thick_centers: usize,
    thick_mass: String,
    fraction: String,
    fraction_f64: String,
}

fn sample_points(cfg: &ScanConfig, measure: &ScanMeasure, seed: u64) -> Result<Vec<Point>> {
    let mut rng = trial_rng(seed, 0);
    match (&cfg.points, measure) {
        (PointSpec::Explicit(p), _) => Ok(p.clone()),
        (PointSpec::Support, ScanMeasure::Atomic(mu)) => Ok(mu.support().cloned().collect()),
        (PointSpec::Support, ScanMeasure::UniformGrid { .. }) => {
            Err(Error::invalid("grid measures need sampled or explicit points"))
        }
        (PointSpec::Sample(k), ScanMeasure::Atomic(mu)) => {
            let atoms: Vec<&Point> = mu.support().collect();
            if atoms.is_empty() {
                return Err(Error::invalid("cannot sample an empty measure"));
            }
            Ok((0..*k).map(|_| atoms[rng.gen_range(0..atoms.len())].clone()).collect())
        }
        (PointSpec::Sample(k), ScanMeasure::UniformGrid { side, d }) => {
            let mut seen = BTreeSet::new();
            let cells = ((side + 1) as u128).checked_pow(*d as u32).unwrap_or(u128::MAX);
            if *k as u128 > cells {
                return Err(Error::invalid("more samples than grid points"));
            }
            while seen.len() < *k {
                seen.insert(Point((0..*d).map(|_| rng.gen_range(0..=*side)).collect()));
            }
            Ok(seen.into_iter().collect())
        }
    }
}

/// Boundary-ratio scan or thick-centre curve, one CSV row per point and radius
/// (or per stack height).
pub fn run_concentration(cfg: &ConcentrationConfig, seed: Option<u64>) -> Result<Outcome> {
    match cfg {
        ConcentrationConfig::Scan(c) => {
            let measure = c.measure.build()?;
            let points = sample_points(c, &measure, seed.unwrap_or(c.seed))?;
            let radii = match &c.radii {
                RadiiSpec::Dyadic { m, from, to } => {
                    let mut r = dyadic_schedule(*m, *from, *to)?;
                    r.sort_by(|a, b| b.cmp(a));
                    r
                }
                RadiiSpec::Explicit(r) => r.clone(),
            };
            let report = boundary_ratio_scan(&c.norm, &measure, &points, &radii, &c.eps, c.boundary)?;
            let mut rows = Vec::new();
            for s in &report.series {
                for row in &s.rows {
                    rows.push(ScanCsvRow {
                        point: s.point.to_cell(),
                        r: exact::fmt_rational(&row.r),
                        boundary_mass: exact::fmt_rational(&row.boundary_mass),
                        ball_mass: exact::fmt_rational(&row.ball_mass),
                        ratio: exact::fmt_rational(&row.ratio),
                        ratio_f64: float_cell(&row.ratio),
                        exceeds: s.exceeds,
                    });
                }
            }
            Ok(Outcome { bytes: csv_bytes(&rows)?, findings: vec![] })
        }
        ConcentrationConfig::Thick(c) => {
            let builder = StackBuilder {
                family: c.norm.clone().into(),
                growth: GrowthMode::Squared,
                base_minrad: c.base_minrad.clone(),
                spread: c.spread,
            };
            let centers: BTreeSet<Point> = c.measure.support().cloned().collect();
            let mut rng = trial_rng(seed.unwrap_or(c.seed), 0);
            let stack = builder.build(&mut rng, &centers, c.max_height)?;
            let mut rows = Vec::new();
            for h in 0..=c.max_height {
                let out = thick_center_mass(&c.measure, &stack.truncated(h), &c.eps)?;
                rows.push(ThickCsvRow {
                    height: h,
                    thick_centers: out.centers.len(),
                    thick_mass: exact::fmt_rational(&out.mass),
                    fraction_f64: float_cell(&out.fraction),
                    fraction: exact::fmt_rational(&out.fraction),
                });
            }
            Ok(Outcome { bytes: csv_bytes(&rows)?, findings: vec![] })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom_scan_is_all_zero() {
        let cfg: ConcentrationConfig = serde_json::from_str(
            r#"{"mode":"scan","norm":{"kind":"p","p":"inf","d":2},
                "measure":{"kind":"atoms","atoms":[{"point":[0,0],"mass":"1"}]},
                "points":"support","radii":{"explicit":["8","4","2"]},"eps":"1/10"}"#,
        )
        .unwrap();
        let text = String::from_utf8(run_concentration(&cfg, None).unwrap().bytes).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "point,r,boundary_mass,ball_mass,ratio,ratio_f64,exceeds");
        assert_eq!(lines.len(), 4);
        assert!(lines[1..].iter().all(|l| l.contains(",0/1,1/1,0/1,")));
    }

    #[test]
    fn dyadic_scan_is_reproducible() {
        let cfg: ConcentrationConfig = serde_json::from_str(
            r#"{"mode":"scan","norm":{"kind":"p","p":"inf","d":2},"measure":{"kind":"dyadic","m":5,"d":2},
                "points":{"sample":10},"radii":{"dyadic":{"m":5,"from":1,"to":3}},"eps":"1/10","seed":4}"#,
        )
        .unwrap();
        let a = run_concentration(&cfg, None).unwrap().bytes;
        assert_eq!(a, run_concentration(&cfg, None).unwrap().bytes);
        assert_ne!(a, run_concentration(&cfg, Some(5)).unwrap().bytes);
    }

    #[test]
    fn thick_curve_has_one_row_per_height() {
        let cfg: ConcentrationConfig = serde_json::from_str(
            r#"{"mode":"thick","norm":{"kind":"p","p":"inf","d":2},
                "measure":[{"point":[0,0],"mass":"1"},{"point":[3,0],"mass":"2"}],
                "base_minrad":"2","max_height":2,"eps":"1/10"}"#,
        )
        .unwrap();
        let text = String::from_utf8(run_concentration(&cfg, None).unwrap().bytes).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().nth(1).unwrap().starts_with("0,2,3/1,1/1"));
    }
}
