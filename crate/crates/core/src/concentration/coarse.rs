use std::collections::BTreeSet;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::covering::trial_rng;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{ball_contains, for_each_in_box, shell_contains, shell_points, LatticeBall, NormSpec, Point};

/// Checks the hypothesis (radii non-increasing and at least `r0`, each centre
/// outside every earlier ball shrunk by 1) and returns the common points of
/// the unit shells `∂₁B_{r(i)}(x_i)`.
pub fn shell_intersection(norm: &NormSpec, balls: &[LatticeBall], r0: &Rational) -> Result<Vec<Point>> {
    if balls.is_empty() {
        return Err(Error::invalid("witness check needs at least one ball"));
    }
    for (i, b) in balls.iter().enumerate() {
        if b.center.dim() != norm.dim() {
            return Err(Error::DimensionMismatch { expected: norm.dim(), got: b.center.dim() });
        }
        if b.radius < *r0 {
            return Err(Error::HypothesisViolation(format!(
                "radius {} of ball {} is below R0 = {r0}",
                b.radius,
                i + 1
            )));
        }
        if i > 0 && b.radius > balls[i - 1].radius {
            return Err(Error::HypothesisViolation(format!("radius increases at ball {}", i + 1)));
        }
        for (j, a) in balls[..i].iter().enumerate() {
            let shrunk = LatticeBall::new(a.center.clone(), &a.radius - Rational::one());
            if ball_contains(norm, &shrunk, &b.center) {
                return Err(Error::HypothesisViolation(format!(
                    "centre of ball {} lies in ball {} shrunk by 1",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let smallest = balls.last().unwrap();
    let one = Rational::one();
    let base = shell_points(norm, &smallest.center, &smallest.radius, &one)?;
    Ok(base.into_iter().filter(|p| balls.iter().all(|b| shell_contains(norm, &b.center, &b.radius, &one, p))).collect())
}

/// Whether the unit shells have empty common intersection.
pub fn coarse_dim_witness_check(norm: &NormSpec, balls: &[LatticeBall], r0: &Rational) -> Result<bool> {
    Ok(shell_intersection(norm, balls, r0)?.is_empty())
}

/// Longest hypothesis-satisfying sequence, all of radius `r`, whose unit
/// shells share the origin: centres are drawn from `∂₁B_r(0)` avoiding every
/// earlier shrunk ball.
fn stacked_shells<R: Rng>(rng: &mut R, norm: &NormSpec, ring: &[Point], r: &Rational) -> Vec<LatticeBall> {
    let shrunk = r - Rational::one();
    let test = norm.closed_test(&shrunk);
    let mut seq: Vec<LatticeBall> = Vec::new();
    let mut open: Vec<&Point> = ring.iter().collect();
    while let Some(&x) = open.choose(rng) {
        seq.push(LatticeBall::new(x.clone(), r.clone()));
        open.retain(|y| !norm.accepts(&test, &(*y - x)));
    }
    seq
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    #[serde(with = "exact::serde_rat")]
    pub r0: Rational,
    pub trials: usize,
    /// Longest sequence found whose shells still meet.
    pub longest_meeting: usize,
    /// `longest_meeting + 1`: the smallest length at which no trial found a
    /// meeting configuration.
    pub k_star: usize,
}

/// Empirical threshold `k*`: beyond the longest stacked-shell sequence found
/// over `trials` random searches, every tested configuration had empty
/// intersection.
pub fn witness_threshold(norm: &NormSpec, r0: &Rational, trials: usize, seed: u64) -> Result<ThresholdReport> {
    if *r0 <= Rational::one() {
        return Err(Error::invalid("R0 must exceed 1"));
    }
    let ring = shell_points(norm, &Point::origin(norm.dim()), r0, &Rational::one())?;
    let longest = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let seq = stacked_shells(&mut rng, norm, &ring, r0);
            debug_assert!(!coarse_dim_witness_check(norm, &seq, r0).unwrap_or(true));
            seq.len()
        })
        .max()
        .unwrap_or(0);
    Ok(ThresholdReport { r0: r0.clone(), trials, longest_meeting: longest, k_star: longest + 1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PackingSource {
    Exhaustive,
    VolumeBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoarseDimReport {
    #[serde(with = "exact::serde_rat")]
    pub r0: Rational,
    pub k_prime: usize,
    pub k_prime_trials: usize,
    pub grid: i64,
    pub greedy_packing: usize,
    pub exhaustive_packing: Option<usize>,
    pub volume_bound: u64,
    pub k_double_prime: u64,
    pub k_double_prime_source: PackingSource,
    /// Set when greedy and exhaustive packings differ at this grid.
    pub discretization_warning: bool,
    pub k: u64,
}

/// Grid points `p/grid` of the closed ball of radius 2, with separation
/// `1 − 1/r0` in grid units.
fn packing_instance(norm: &NormSpec, r0: &Rational, grid: i64) -> Result<(Vec<Point>, Rational)> {
    let radius = exact::int(2 * grid);
    let pts = crate::geometry::lattice_ball_points(norm, &LatticeBall::new(Point::origin(norm.dim()), radius))?;
    let sep = (Rational::one() - Rational::one() / r0) * exact::int(grid);
    Ok((pts, sep))
}

/// Lexicographic greedy packing.
pub fn greedy_packing(norm: &NormSpec, points: &[Point], sep: &Rational) -> Vec<Point> {
    let close = norm.open_test(sep);
    let mut chosen: Vec<Point> = Vec::new();
    for p in points {
        if chosen.iter().all(|q| !norm.accepts(&close, &(p - q))) {
            chosen.push(p.clone());
        }
    }
    chosen
}

/// Maximum `sep`-separated subset by branch and bound with a clique-cover
/// bound; `None` if `node_budget` runs out.
pub fn exhaustive_packing(norm: &NormSpec, points: &[Point], sep: &Rational, node_budget: u64) -> Option<usize> {
    let close = norm.open_test(sep);
    let n = points.len();
    let conflict: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| i != j && norm.accepts(&close, &(&points[i] - &points[j]))).collect()).collect();
    let mut best = greedy_packing(norm, points, sep).len();
    let mut nodes = 0u64;

    fn clique_cover(cands: &[usize], conflict: &[Vec<bool>]) -> usize {
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        for &v in cands {
            match cliques.iter_mut().find(|c| c.iter().all(|&u| conflict[u][v])) {
                Some(c) => c.push(v),
                None => cliques.push(vec![v]),
            }
        }
        cliques.len()
    }

    fn search(
        size: usize,
        cands: Vec<usize>,
        conflict: &[Vec<bool>],
        best: &mut usize,
        nodes: &mut u64,
        budget: u64,
    ) -> bool {
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        if cands.is_empty() {
            *best = (*best).max(size);
            return true;
        }
        if size + clique_cover(&cands, conflict) <= *best {
            return true;
        }
        let v = cands[0];
        let with: Vec<usize> = cands[1..].iter().copied().filter(|&u| !conflict[v][u]).collect();
        if !search(size + 1, with, conflict, best, nodes, budget) {
            return false;
        }
        search(size, cands[1..].to_vec(), conflict, best, nodes, budget)
    }

    search(0, (0..n).collect(), &conflict, &mut best, &mut nodes, node_budget).then_some(best)
}

/// `⌊((4+s)/s)^d⌋` with `s = 1 − 1/r0`: disjoint balls of radius `s/2` around
/// the packed points fit in the ball of radius `2 + s/2`.
pub fn packing_volume_bound(d: usize, r0: &Rational) -> u64 {
    let s = Rational::one() - Rational::one() / r0;
    let ratio = (exact::int(4) + &s) / &s;
    let mut v = Rational::one();
    for _ in 0..d {
        v *= &ratio;
    }
    u64::try_from(exact::floor_int(&v)).unwrap_or(u64::MAX)
}

/// `k = k′·k″` with both factors and where they came from.
pub fn coarse_dim_bound(
    norm: &NormSpec,
    r0: &Rational,
    grid: i64,
    node_budget: u64,
    trials: usize,
    seed: u64,
) -> Result<CoarseDimReport> {
    if *r0 <= exact::int(2) {
        return Err(Error::invalid("R0 must exceed 2"));
    }
    if grid < 1 {
        return Err(Error::invalid("grid must be positive"));
    }
    let threshold = witness_threshold(norm, r0, trials, seed)?;
    let (pts, sep) = packing_instance(norm, r0, grid)?;
    let greedy = greedy_packing(norm, &pts, &sep).len();
    let exhaustive = exhaustive_packing(norm, &pts, &sep, node_budget);
    let volume_bound = packing_volume_bound(norm.dim(), r0);
    let (kpp, source) = match exhaustive {
        Some(e) => (e as u64, PackingSource::Exhaustive),
        None => (volume_bound, PackingSource::VolumeBound),
    };
    Ok(CoarseDimReport {
        r0: r0.clone(),
        k_prime: threshold.k_star,
        k_prime_trials: trials,
        grid,
        greedy_packing: greedy,
        exhaustive_packing: exhaustive,
        volume_bound,
        k_double_prime: kpp,
        k_double_prime_source: source,
        discretization_warning: exhaustive.is_some_and(|e| e != greedy),
        k: threshold.k_star as u64 * kpp,
    })
}

/// Random hypothesis-satisfying sequence of `k` balls with radii in `[r0, r0 + spread]`,
/// centres in a box of half-width `reach`. `None` if rejection sampling gives up.
pub fn random_witness_config<R: Rng>(
    rng: &mut R,
    norm: &NormSpec,
    k: usize,
    r0: i64,
    spread: i64,
    reach: i64,
) -> Option<Vec<LatticeBall>> {
    let mut radii: Vec<i64> = (0..k).map(|_| rng.gen_range(r0..=r0 + spread)).collect();
    radii.sort_unstable_by(|a, b| b.cmp(a));
    let mut seq: Vec<LatticeBall> = Vec::new();
    for r in radii {
        let mut placed = false;
        for _ in 0..200 {
            let c: Vec<i64> = (0..norm.dim()).map(|_| rng.gen_range(-reach..=reach)).collect();
            let ok = seq.iter().all(|a| {
                let shrunk = LatticeBall::new(a.center.clone(), &a.radius - Rational::one());
                !ball_contains(norm, &shrunk, &c)
            });
            if ok {
                seq.push(LatticeBall::new(c, exact::int(r)));
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(seq)
}

/// Points of a fixed box lying in every unit shell, by direct enumeration.
pub fn brute_shell_intersection(norm: &NormSpec, balls: &[LatticeBall], lo: &[i64], hi: &[i64]) -> BTreeSet<Point> {
    let one = Rational::one();
    let mut out = BTreeSet::new();
    for_each_in_box(lo, hi, |p| {
        if balls.iter().all(|b| shell_contains(norm, &b.center, &b.radius, &one, p)) {
            out.insert(Point::from(p));
        }
    });
    out
}
