use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::violation_score;
use crate::covering::{trial_rng, BallFamily};
use crate::dynamics::{ActionModel, Observable};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::Point;

/// Shape of the random `(f, h)` pairs: supports drawn in `[0, window)^d`,
/// values `p/q` with `1 ≤ p, q ≤ max_value`, threshold drawn from `eps`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeakTypeTrials {
    pub window: i64,
    pub f_atoms: usize,
    pub h_atoms: usize,
    pub max_value: i64,
    pub n_max: u64,
    #[serde(with = "exact::serde_rat_vec")]
    pub eps: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakTypeReport {
    pub trials: usize,
    #[serde(with = "exact::serde_rat")]
    pub m_cert: Rational,
    pub violations: Vec<usize>,
    /// Largest `ε·μ_h{sup_n R_n(f,h) > ε}/∫f` seen; the inequality asks it to stay `≤ M`.
    #[serde(with = "exact::serde_rat")]
    pub worst: Rational,
    pub worst_trial: usize,
}

fn random_observable<R: Rng>(rng: &mut R, d: usize, p: &WeakTypeTrials, atoms: usize) -> Observable {
    let mut seen = BTreeSet::new();
    while seen.len() < atoms {
        seen.insert(Point((0..d).map(|_| rng.gen_range(0..p.window)).collect()));
    }
    Observable::finite(seen.into_iter().map(|x| {
        let num = rng.gen_range(1..=p.max_value);
        let den = rng.gen_range(1..=p.max_value);
        (x, exact::rat(num, den))
    }))
}

/// Random pair for trial `i`, with its threshold.
pub fn weak_type_instance(d: usize, p: &WeakTypeTrials, seed: u64, i: usize) -> (Observable, Observable, Rational) {
    let mut rng = trial_rng(seed, i as u64);
    let f = random_observable(&mut rng, d, p, p.f_atoms);
    let h = random_observable(&mut rng, d, p, p.h_atoms);
    let eps = p.eps[rng.gen_range(0..p.eps.len())].clone();
    (f, h, eps)
}

/// `μ_h{sup_{n ≤ n_max} R_n(f,h) > ε} ≤ (M/ε)∫f` on counting translation
/// over random pairs.
pub fn weak_type_trials(
    family: &BallFamily,
    p: &WeakTypeTrials,
    trials: usize,
    m_cert: &Rational,
    seed: u64,
) -> Result<WeakTypeReport> {
    if p.eps.is_empty() || p.window < 1 || p.max_value < 1 || p.f_atoms == 0 || p.h_atoms == 0 {
        return Err(Error::invalid("weak-type trials need thresholds, a window, values and nonempty supports"));
    }
    let d = family.dim();
    let cells = (p.window as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if p.f_atoms.max(p.h_atoms) as u128 > cells {
        return Err(Error::invalid("more atoms requested than window cells"));
    }
    let action = ActionModel::counting(d);
    let lhs: Vec<Rational> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (f, h, eps) = weak_type_instance(d, p, seed, i);
            let vs = violation_score(&action, &f, &h, family, &eps, p.n_max)?;
            Ok(vs.score * eps)
        })
        .collect::<Result<_>>()?;
    let mut worst = (Rational::from_integer(0.into()), 0);
    let mut violations = Vec::new();
    for (i, v) in lhs.into_iter().enumerate() {
        if v > *m_cert {
            violations.push(i);
        }
        if v > worst.0 {
            worst = (v, i);
        }
    }
    Ok(WeakTypeReport { trials, m_cert: m_cert.clone(), violations, worst: worst.0, worst_trial: worst.1 })
}
