use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::violation_score;
use crate::covering::BallFamily;
use crate::dynamics::{ActionModel, Observable};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{LatticeBall, Point};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusEntry {
    pub point: Point,
    pub n: u64,
}

/// Point sets `U`, `V`, threshold `t` and a radius for every point of `U ∪ V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPackage {
    pub family: BallFamily,
    #[serde(rename = "U")]
    pub u: Vec<Point>,
    #[serde(rename = "V")]
    pub v: Vec<Point>,
    #[serde(with = "exact::serde_rat")]
    pub t: Rational,
    pub radii: Vec<RadiusEntry>,
}

impl WitnessPackage {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn radius_map(&self) -> Result<BTreeMap<Point, u64>> {
        let mut map = BTreeMap::new();
        for e in &self.radii {
            self.family.check_dim(&e.point)?;
            if map.insert(e.point.clone(), e.n).is_some() {
                return Err(Error::invalid(format!("radius given twice for {}", e.point)));
            }
        }
        for g in self.u.iter().chain(&self.v) {
            self.family.check_dim(g)?;
            if !map.contains_key(g) {
                return Err(Error::invalid(format!("no radius for {g}")));
            }
        }
        Ok(map)
    }
}

/// `(|U ∩ B|, |V ∩ B|)` for the family ball at `g` of radius `n`.
pub fn ball_counts(family: &BallFamily, u: &[Point], v: &[Point], g: &Point, n: u64) -> (u64, u64) {
    let ball = LatticeBall::new(g.clone(), exact::int(n as i64));
    let count = |s: &[Point]| s.iter().filter(|p| family.contains(&ball, p)).count() as u64;
    (count(u), count(v))
}

/// `a/b > t`, with `b = 0` read as `+∞` when `a > 0`.
fn ratio_exceeds(a: u64, b: u64, t: &Rational) -> bool {
    if b == 0 {
        a > 0
    } else {
        exact::rat(a as i64, b as i64) > *t
    }
}

/// The staircase over the one-sided cube family in `Z²`.
pub fn staircase_witness(k: u64, m: &Rational) -> Result<WitnessPackage> {
    let t = exact::rat(1, 2);
    if *m <= Rational::zero() {
        return Err(Error::invalid("M must be positive"));
    }
    if exact::rat(1, k as i64 + 1) >= &t / m {
        return Err(Error::Precondition(format!(
            "K = {k} too small: 1/{} is not below t/M = {}",
            k + 1,
            exact::fmt_rational(&(&t / m))
        )));
    }
    let ki = k as i64;
    let origin = Point::from([0, 0]);
    let v: Vec<Point> = (0..=ki).map(|i| Point::from([-i, -(ki - i)])).collect();
    let mut radii = vec![RadiusEntry { point: origin.clone(), n: 0 }];
    radii.extend(v.iter().map(|p| RadiusEntry { point: p.clone(), n: k }));
    Ok(WitnessPackage { family: BallFamily::one_sided_cube(2), u: vec![origin], v, t, radii })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub label: String,
    /// Exact left side; `"inf"` for a ratio over an empty `V`-count.
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(label: String, lhs: String, relation: &str, rhs: String, holds: bool) -> Self {
        InequalityCheck { label, lhs, relation: relation.into(), rhs, holds }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub valid: bool,
    pub checks: Vec<InequalityCheck>,
    pub first_failure: Option<InequalityCheck>,
    /// `C(1_U, 1_V)` at `ε = t` on counting translation, once both invariants hold.
    #[serde(with = "exact::serde_rat_opt")]
    pub score: Option<Rational>,
}

/// Checks the package invariants in order, then the consequence for
/// `f = 1_U`, `h = 1_V` on counting translation; stops at the first failure.
pub fn witness_validate(w: &WitnessPackage, m: &Rational) -> Result<WitnessReport> {
    let radii = w.radius_map()?;
    let u: Vec<Point> = w.u.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let v: Vec<Point> = w.v.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if u.is_empty() || v.is_empty() {
        return Err(Error::invalid("U and V must be nonempty"));
    }
    let mut checks = Vec::new();
    let finish = |checks: Vec<InequalityCheck>, score| {
        let first_failure = checks.iter().find(|c| !c.holds).cloned();
        Ok(WitnessReport { valid: first_failure.is_none(), checks, first_failure, score })
    };
    let points: BTreeSet<&Point> = u.iter().chain(&v).collect();
    for g in points {
        let n = radii[g];
        let (a, b) = ball_counts(&w.family, &u, &v, g, n);
        let lhs = if b == 0 { "inf".to_string() } else { exact::fmt_rational(&exact::rat(a as i64, b as i64)) };
        let holds = ratio_exceeds(a, b, &w.t);
        checks.push(InequalityCheck::new(
            format!("|U∩B_{n}({g})|/|V∩B_{n}({g})|"),
            lhs,
            ">",
            exact::fmt_rational(&w.t),
            holds,
        ));
        if !holds {
            return finish(checks, None);
        }
    }
    let (nu, nv) = (u.len() as i64, v.len() as i64);
    let size_ratio = exact::rat(nu, nv);
    let bound = &w.t / m;
    let holds = size_ratio < bound;
    checks.push(InequalityCheck::new(
        "|U|/|V|".into(),
        exact::fmt_rational(&size_ratio),
        "<",
        exact::fmt_rational(&bound),
        holds,
    ));
    if !holds {
        return finish(checks, None);
    }
    let action = ActionModel::counting(w.family.dim());
    let f = Observable::indicator(&u);
    let h = Observable::indicator(&v);
    let n_max = radii.values().copied().max().unwrap_or(0);
    let vs = violation_score(&action, &f, &h, &w.family, &w.t, n_max)?;
    let v_mass = exact::int(nv);
    let holds = vs.exceed_mass >= v_mass;
    checks.push(InequalityCheck::new(
        format!("μ_h{{sup_n R_n(1_U,1_V) > {}}}", exact::fmt_rational(&w.t)),
        exact::fmt_rational(&vs.exceed_mass),
        "≥",
        format!("|V| = {nv}"),
        holds,
    ));
    if !holds {
        return finish(checks, Some(vs.score));
    }
    let rhs = m / &w.t * exact::int(nu);
    let holds = v_mass > rhs;
    checks.push(InequalityCheck::new(
        "|V|".into(),
        nv.to_string(),
        ">",
        format!("(M/t)∫1_U = {}", exact::fmt_rational(&rhs)),
        holds,
    ));
    finish(checks, Some(vs.score))
}

/// Whether some radius assignment on `0..=n_cap` makes every per-ball ratio
/// exceed `t`; returns one such assignment (smallest radii).
pub fn find_radii(family: &BallFamily, u: &[Point], v: &[Point], t: &Rational, n_cap: u64) -> Option<Vec<RadiusEntry>> {
    let points: BTreeSet<&Point> = u.iter().chain(v).collect();
    let mut out = Vec::new();
    for g in points {
        let n = (0..=n_cap).find(|&n| {
            let (a, b) = ball_counts(family, u, v, g, n);
            ratio_exceeds(a, b, t)
        })?;
        out.push(RadiusEntry { point: g.clone(), n });
    }
    Some(out)
}

/// Radius beyond which the set's counts in family balls centred on its own
/// points stop changing.
pub fn saturation_radius(family: &BallFamily, pts: &[Point]) -> u64 {
    let metric = family.metric();
    let mut r = 0;
    for a in pts {
        for b in pts {
            let diff: Vec<i64> = b.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
            r = r.max(metric.min_integer_radius(&diff));
        }
    }
    r
}

/// Exhaustive check over all radius assignments up to saturation.
pub fn package_exists(family: &BallFamily, u: &[Point], v: &[Point], t: &Rational, m: &Rational) -> bool {
    if exact::rat(u.len() as i64, v.len() as i64) >= t / m {
        return false;
    }
    let all: Vec<Point> = u.iter().chain(v).cloned().collect();
    find_radii(family, u, v, t, saturation_radius(family, &all)).is_some()
}

/// Bounded search for a package with `U = {0}` and `V` a subset of the window
/// `[−side, side]^d ∖ {0}` of the least admissible size. At most `node_cap`
/// subsets are tried.
pub fn search_witness(
    family: &BallFamily,
    side: i64,
    t: &Rational,
    m: &Rational,
    node_cap: u64,
) -> Result<Option<WitnessPackage>> {
    let d = family.dim();
    let origin = Point::origin(d);
    let lo = vec![-side; d];
    let hi = vec![side; d];
    let mut window = Vec::new();
    crate::geometry::for_each_in_box(&lo, &hi, |p| {
        if p.iter().any(|c| *c != 0) {
            window.push(Point::from(p));
        }
    });
    let need = exact::floor_i64(&(m / t)) as usize + 1;
    if need > window.len() {
        return Ok(None);
    }
    let u = vec![origin];
    let mut idx: Vec<usize> = (0..need).collect();
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        if nodes > node_cap {
            return Err(Error::CapExceeded { count: nodes, cap: node_cap });
        }
        let v: Vec<Point> = idx.iter().map(|&i| window[i].clone()).collect();
        let all: Vec<Point> = u.iter().chain(&v).cloned().collect();
        if exact::rat(1, need as i64) < t / m {
            if let Some(radii) = find_radii(family, &u, &v, t, saturation_radius(family, &all)) {
                return Ok(Some(WitnessPackage { family: family.clone(), u, v, t: t.clone(), radii }));
            }
        }
        let mut i = need;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if idx[i] != i + window.len() - need {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..need {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{multiplicity, staircase_balls};
    use crate::exact::{int, rat};
    use crate::geometry::NormSpec;

    #[test]
    fn staircase_validates() {
        let w = staircase_witness(4, &int(1)).unwrap();
        let r = witness_validate(&w, &int(1)).unwrap();
        assert!(r.valid, "{:?}", r.first_failure);
        assert_eq!(r.score, Some(int(5)));
        let origin = r.checks.iter().find(|c| c.label.ends_with("((0,0))|")).unwrap();
        assert_eq!(origin.lhs, "inf");
        let back = WitnessPackage::from_json(&w.to_json().unwrap()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn staircase_precondition() {
        assert!(matches!(staircase_witness(1, &int(1)), Err(Error::Precondition(_))));
        assert!(staircase_witness(2, &int(1)).is_ok());
        assert!(staircase_witness(4, &int(2)).is_ok());
        assert!(staircase_witness(3, &int(2)).is_err());
    }

    #[test]
    fn staircase_score_at_m2() {
        let w = staircase_witness(4, &int(2)).unwrap();
        let r = witness_validate(&w, &int(2)).unwrap();
        assert!(r.valid);
        assert_eq!(r.score, Some(int(5)));
        let f = BallFamily::one_sided_cube(2);
        assert_eq!(multiplicity(&f, &staircase_balls(4), Some(&[Point::from([0, 0])])).unwrap(), 5);
    }

    #[test]
    fn failing_packages_name_first_inequality() {
        let p = Point::from([0, 0]);
        let w = WitnessPackage {
            family: BallFamily::one_sided_cube(2),
            u: vec![p.clone()],
            v: vec![p.clone()],
            t: int(2),
            radii: vec![RadiusEntry { point: p.clone(), n: 1 }],
        };
        let r = witness_validate(&w, &int(1)).unwrap();
        assert!(!r.valid);
        assert_eq!(r.first_failure.unwrap().lhs, "1/1");
        let q = Point::from([-1, -1]);
        let w = WitnessPackage {
            family: BallFamily::one_sided_cube(2),
            u: vec![p.clone()],
            v: vec![q.clone()],
            t: rat(1, 2),
            radii: vec![RadiusEntry { point: p, n: 0 }, RadiusEntry { point: q, n: 1 }],
        };
        let r = witness_validate(&w, &int(1)).unwrap();
        let fail = r.first_failure.unwrap();
        assert_eq!((fail.label.as_str(), fail.lhs.as_str()), ("|U|/|V|", "1/1"));
    }

    #[test]
    fn symmetric_balls_admit_no_package() {
        let sym = BallFamily::from(NormSpec::linf(2));
        for k in [2u64, 4, 7] {
            let w = staircase_witness(k, &int(1)).unwrap();
            assert!(package_exists(&w.family, &w.u, &w.v, &w.t, &int(1)));
            assert!(!package_exists(&sym, &w.u, &w.v, &w.t, &int(1)));
        }
    }

    #[test]
    fn window_search_finds_cube_witness() {
        let cube = BallFamily::one_sided_cube(2);
        let w = search_witness(&cube, 2, &rat(1, 2), &int(1), 10_000).unwrap().unwrap();
        assert!(witness_validate(&w, &int(1)).unwrap().valid);
        assert!(matches!(search_witness(&cube, 3, &rat(1, 2), &int(4), 5), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn missing_radius_is_input_error() {
        let mut w = staircase_witness(2, &int(1)).unwrap();
        w.radii.pop();
        assert!(matches!(witness_validate(&w, &int(1)), Err(Error::InvalidInput(_))));
    }
}
