use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{incremental_select, multiplicity, BallFamily, Carpet};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{doubling_ratio, LatticeBall, NormSpec, Point};

/// Deterministic per-trial generator: the master seed picks the key, the
/// trial index the stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug, Serialize)]
pub struct DoublingCertificate {
    pub norm: String,
    pub r_max: u64,
    #[serde(with = "exact::serde_rat")]
    pub max_ratio: Rational,
    pub argmax: u64,
    /// `⌈max_ratio⌉`.
    pub d: u64,
}

/// Largest `|B_{2r}|/|B_r|` over integer `r ∈ [1, r_max]`.
pub fn certify_doubling(norm: &NormSpec, r_max: u64) -> Result<DoublingCertificate> {
    if r_max == 0 {
        return Err(Error::invalid("r_max must be at least 1"));
    }
    let mut best = (Rational::from_integer(0.into()), 1);
    for r in 1..=r_max {
        let q = doubling_ratio(norm, &exact::int(r as i64))?;
        if q > best.0 {
            best = (q, r);
        }
    }
    let d = u64::try_from(exact::ceil_int(&best.0)).map_err(|_| Error::invalid("doubling constant overflows"))?;
    Ok(DoublingCertificate { norm: norm.label().to_string(), r_max, max_ratio: best.0, argmax: best.1, d })
}

/// Random carpet shape: distinct centres in `[0, window)^d`, integer radii.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CarpetSampler {
    pub window: i64,
    pub centers: usize,
    pub min_radius: i64,
    pub max_radius: i64,
}

impl CarpetSampler {
    fn validate(&self, dim: usize) -> Result<()> {
        if self.window < 1 || self.min_radius < 0 || self.max_radius < self.min_radius {
            return Err(Error::invalid("sampler needs window ≥ 1 and 0 ≤ min_radius ≤ max_radius"));
        }
        let cells = (self.window as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
        if (self.centers as u128) > cells {
            return Err(Error::invalid("more centres requested than window cells"));
        }
        Ok(())
    }
}

pub fn random_carpet<R: Rng>(rng: &mut R, family: &BallFamily, sampler: &CarpetSampler) -> Result<Carpet> {
    sampler.validate(family.dim())?;
    let mut seen = BTreeSet::new();
    let mut balls = Vec::with_capacity(sampler.centers);
    while balls.len() < sampler.centers {
        let c: Vec<i64> = (0..family.dim()).map(|_| rng.gen_range(0..sampler.window)).collect();
        if seen.insert(c.clone()) {
            let r = rng.gen_range(sampler.min_radius..=sampler.max_radius);
            balls.push(LatticeBall::new(c, exact::int(r)));
        }
    }
    Carpet::new(family.clone(), balls)
}

/// Incremental sequence whose balls all contain the origin, built by drawing
/// each new centre among points of the current ball around the origin that no
/// earlier ball covers. Its length is its multiplicity at the origin.
pub fn stacked_incremental<R: Rng>(rng: &mut R, family: &BallFamily, max_radius: i64) -> Result<Vec<LatticeBall>> {
    let origin = Point::origin(family.dim());
    let mut seq: Vec<LatticeBall> = Vec::new();
    let mut r = max_radius;
    while r >= 1 {
        let reach: Vec<Point> = match family {
            BallFamily::Norm { norm } => {
                crate::geometry::lattice_ball_points(norm, &LatticeBall::new(origin.clone(), exact::int(r)))?
            }
            BallFamily::OneSidedCube { .. } => {
                family.points(&LatticeBall::new(origin.clone(), exact::int(r)))?.into_iter().map(|p| -&p).collect()
            }
        };
        let open: Vec<&Point> = reach.iter().filter(|x| !seq.iter().any(|b| family.contains(b, x))).collect();
        match open.choose(rng) {
            Some(x) => {
                let ball = LatticeBall::new((*x).clone(), exact::int(r));
                debug_assert!(family.contains(&ball, &origin));
                seq.push(ball);
                r = rng.gen_range((r / 2).max(1)..=r);
            }
            None => r -= 1,
        }
    }
    Ok(seq)
}

#[derive(Clone, Debug, Serialize)]
pub struct BesicovitchCertificate {
    pub family: String,
    pub random_trials: usize,
    pub targeted_trials: usize,
    pub from_random: usize,
    pub from_targeted: usize,
    /// Largest multiplicity observed on any incremental sequence.
    pub c: usize,
}

/// Empirical Besicovitch constant: the largest multiplicity of incremental
/// selections over random carpets, and of origin-stacked incremental
/// sequences.
pub fn certify_besicovitch(
    family: &BallFamily,
    sampler: &CarpetSampler,
    random_trials: usize,
    targeted_trials: usize,
    seed: u64,
) -> Result<BesicovitchCertificate> {
    let from_random = (0..random_trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let carpet = random_carpet(&mut rng, family, sampler)?;
            multiplicity(family, &incremental_select(&carpet), None)
        })
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
    let from_targeted = (0..targeted_trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed ^ 0x5eed, i as u64);
            let seq = stacked_incremental(&mut rng, family, sampler.max_radius)?;
            Ok::<usize, Error>(seq.len())
        })
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
    Ok(BesicovitchCertificate {
        family: family.label(),
        random_trials,
        targeted_trials,
        from_random,
        from_targeted,
        c: from_random.max(from_targeted).max(1),
    })
}

/// One-sided cubes of side `k` at `g_i = (−i, −(k−i))`, `i = 0..=k`. Each
/// contains the origin and none contains another's centre.
pub fn staircase_balls(k: u64) -> Vec<LatticeBall> {
    let k = k as i64;
    (0..=k).map(|i| LatticeBall::new([-i, -(k - i)], exact::int(k))).collect()
}
