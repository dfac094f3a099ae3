use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::covering::BallFamily;
use crate::dynamics::{ratio_profile, ActionModel, Observable};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::Point;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalValue {
    #[serde(with = "exact::serde_rat")]
    pub sup: Rational,
    /// Smallest `n` attaining the supremum.
    pub argmax: u64,
}

/// `sup_{0 ≤ n ≤ n_max} R_n(f, g)(ω)` over the `n` with nonzero denominator.
pub fn maximal_ratio(
    action: &ActionModel,
    f: &Observable,
    g: &Observable,
    family: &BallFamily,
    n_max: u64,
    w: &Point,
) -> Result<MaximalValue> {
    let mut best: Option<MaximalValue> = None;
    for (n, r) in ratio_profile(action, f, g, family, n_max, w)?.into_iter().enumerate() {
        if let Some(r) = r {
            if best.as_ref().is_none_or(|b| r > b.sup) {
                best = Some(MaximalValue { sup: r, argmax: n as u64 });
            }
        }
    }
    best.ok_or_else(|| Error::ZeroDenominator(format!("every S_n g vanishes at {w} for n ≤ {n_max}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationScore {
    /// `μ_h{sup_n R_n(f,h) > ε} / ∫f`.
    #[serde(with = "exact::serde_rat")]
    pub score: Rational,
    #[serde(with = "exact::serde_rat")]
    pub exceed_mass: Rational,
    #[serde(with = "exact::serde_rat")]
    pub f_integral: Rational,
    /// Atoms of `supp h` where the supremum exceeds `ε`.
    pub exceeding: Vec<Point>,
}

/// `C(f, h)` over the horizon `n ≤ n_max`. Only `supp h` carries `μ_h`, so
/// the level set is searched there.
pub fn violation_score(
    action: &ActionModel,
    f: &Observable,
    h: &Observable,
    family: &BallFamily,
    eps: &Rational,
    n_max: u64,
) -> Result<ViolationScore> {
    if !f.is_nonnegative() || !h.is_nonnegative() {
        return Err(Error::invalid("violation score needs f, h ≥ 0"));
    }
    let support: Vec<(Point, Rational)> = h
        .support()
        .ok_or_else(|| Error::invalid("violation score needs a finitely supported h"))?
        .map(|(p, v)| (p.clone(), v.clone()))
        .collect();
    let f_integral = f.integral(action)?;
    if f_integral.is_zero() {
        return Err(Error::ZeroDenominator("∫f = 0".into()));
    }
    let hits: Vec<Option<Rational>> = support
        .par_iter()
        .map(|(w, hw)| {
            let m = maximal_ratio(action, f, h, family, n_max, w)?;
            Ok((m.sup > *eps).then(|| hw * action.mass_unchecked(w)))
        })
        .collect::<Result<_>>()?;
    let mut exceed_mass = Rational::zero();
    let mut exceeding = Vec::new();
    for ((w, _), hit) in support.iter().zip(hits) {
        if let Some(m) = hit {
            exceed_mass += m;
            exceeding.push(w.clone());
        }
    }
    debug_assert!(!exceed_mass.is_negative());
    Ok(ViolationScore { score: &exceed_mass / &f_integral, exceed_mass, f_integral, exceeding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::geometry::NormSpec;

    fn fam() -> BallFamily {
        NormSpec::linf(2).into()
    }

    #[test]
    fn maximal_ratio_examples() {
        let c = ActionModel::counting(2);
        let g = Observable::finite([(Point::from([0, 0]), int(1)), (Point::from([3, 1]), int(2))]);
        let w = Point::from([1, 1]);
        assert_eq!(maximal_ratio(&c, &g, &g, &fam(), 5, &w).unwrap().sup, int(1));
        assert_eq!(maximal_ratio(&c, &g.scaled(&int(2)), &g, &fam(), 5, &w).unwrap().sup, int(2));
        let far = Observable::indicator([&Point::from([50, 50])]);
        assert!(matches!(maximal_ratio(&c, &g, &far, &fam(), 3, &w), Err(Error::ZeroDenominator(_))));
    }

    #[test]
    fn maximal_ratio_monotone_and_scale_free() {
        let c = ActionModel::counting(2);
        let f = Observable::finite([(Point::from([2, 0]), int(3)), (Point::from([-4, 1]), int(1))]);
        let g = Observable::finite([(Point::from([0, 0]), int(1)), (Point::from([1, 5]), int(4))]);
        let w = Point::from([0, 0]);
        let mut prev = None;
        for n in 0..8 {
            let m = maximal_ratio(&c, &f, &g, &fam(), n, &w).unwrap().sup;
            if let Some(p) = prev {
                assert!(m >= p);
            }
            prev = Some(m);
        }
        let k = rat(7, 3);
        assert_eq!(
            maximal_ratio(&c, &f.scaled(&k), &g.scaled(&k), &fam(), 7, &w).unwrap(),
            maximal_ratio(&c, &f, &g, &fam(), 7, &w).unwrap()
        );
    }

    #[test]
    fn violation_score_examples() {
        let c = ActionModel::counting(2);
        let one = Observable::indicator([&Point::from([0, 0])]);
        assert_eq!(violation_score(&c, &one, &one, &fam(), &rat(1, 2), 3).unwrap().score, int(1));
        let far = Observable::indicator([&Point::from([40, 0])]);
        assert_eq!(violation_score(&c, &one, &far, &fam(), &rat(1, 2), 3).unwrap().score, int(0));
        let zero = Observable::finite([]);
        assert!(violation_score(&c, &zero, &one, &fam(), &rat(1, 2), 3).is_err());
    }
}
