use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::norm::{NormSpec, NormValue};
use super::point::Point;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};

pub const DEFAULT_POINT_CAP: u64 = 100_000_000;

static POINT_CAP: AtomicU64 = AtomicU64::new(DEFAULT_POINT_CAP);

/// Maximum number of lattice points a single enumeration may produce.
pub fn point_cap() -> u64 {
    POINT_CAP.load(Ordering::Relaxed)
}

pub fn set_point_cap(cap: u64) {
    POINT_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Closed lattice ball `{u ∈ Z^d : ‖u − center‖ ≤ radius}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeBall {
    pub center: Point,
    #[serde(with = "exact::serde_rat")]
    pub radius: Rational,
}

impl LatticeBall {
    pub fn new(center: impl Into<Point>, radius: Rational) -> Self {
        LatticeBall { center: center.into(), radius }
    }
}

/// `∂_t B_r(x) = B_{r+t}(x) ∖ B_{r−t}(x)`, carrying `(r, t)` with it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThickSphere {
    pub center: Point,
    #[serde(with = "exact::serde_rat")]
    pub radius: Rational,
    #[serde(with = "exact::serde_rat")]
    pub thickness: Rational,
}

impl ThickSphere {
    pub fn new(center: impl Into<Point>, radius: Rational, thickness: Rational) -> Result<Self> {
        if !thickness.is_positive() {
            return Err(Error::invalid("thickness must be positive"));
        }
        if thickness > radius {
            return Err(Error::ThicknessExceedsRadius { radius: Box::new(radius), thickness: Box::new(thickness) });
        }
        Ok(ThickSphere { center: center.into(), radius, thickness })
    }
}

pub fn norm_eval(norm: &NormSpec, v: &[i64]) -> Result<NormValue> {
    norm.eval(v)
}

/// Visits every point of the box `lo..=hi` in lexicographic order.
pub fn for_each_in_box(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    let d = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        f(&cur);
        let mut axis = d;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if cur[axis] < hi[axis] {
                cur[axis] += 1;
                break;
            }
            cur[axis] = lo[axis];
        }
    }
}

fn box_volume(lo: &[i64], hi: &[i64]) -> u128 {
    lo.iter().zip(hi).map(|(a, b)| if b < a { 0 } else { (b - a + 1) as u128 }).product()
}

fn check_dim(norm: &NormSpec, p: &[i64]) -> Result<()> {
    if p.len() != norm.dim() {
        return Err(Error::DimensionMismatch { expected: norm.dim(), got: p.len() });
    }
    Ok(())
}

fn guard_box(lo: &[i64], hi: &[i64]) -> Result<()> {
    let cap = point_cap();
    let vol = box_volume(lo, hi);
    // A norm ball fills at least 1/d! of its bounding box, so anything much
    // larger than the cap cannot fit under it.
    let slack = (1..=lo.len() as u128).product::<u128>().max(1);
    if vol > (cap as u128) * slack {
        return Err(Error::CapExceeded { count: vol.min(u64::MAX as u128) as u64, cap });
    }
    Ok(())
}

/// Bounding box of `B_r(center)`.
pub(crate) fn ball_box(norm: &NormSpec, center: &[i64], r: &Rational) -> (Vec<i64>, Vec<i64>) {
    let ext = norm.box_extent(r);
    let lo = center.iter().zip(&ext).map(|(c, e)| c - e).collect();
    let hi = center.iter().zip(&ext).map(|(c, e)| c + e).collect();
    (lo, hi)
}

pub fn ball_contains(norm: &NormSpec, ball: &LatticeBall, p: &[i64]) -> bool {
    let off: Vec<i64> = p.iter().zip(ball.center.iter()).map(|(a, b)| a - b).collect();
    norm.accepts(&norm.closed_test(&ball.radius), &off)
}

/// Membership in `B_{r+t}(x) ∖ B_{r−t}(x)`; `t > r` is allowed here and
/// leaves the inner ball empty.
pub fn shell_contains(norm: &NormSpec, center: &[i64], r: &Rational, t: &Rational, p: &[i64]) -> bool {
    let off: Vec<i64> = p.iter().zip(center).map(|(a, b)| a - b).collect();
    norm.accepts(&norm.closed_test(&(r + t)), &off) && !norm.accepts(&norm.closed_test(&(r - t)), &off)
}

/// Lattice points of the closed ball, lexicographically ordered.
pub fn lattice_ball_points(norm: &NormSpec, ball: &LatticeBall) -> Result<Vec<Point>> {
    check_dim(norm, &ball.center)?;
    if ball.radius.is_negative() {
        return Err(Error::invalid("radius must be nonnegative"));
    }
    shell_points_inner(norm, &ball.center, &ball.radius, None)
}

pub fn lattice_ball_count(norm: &NormSpec, ball: &LatticeBall) -> Result<u64> {
    check_dim(norm, &ball.center)?;
    if ball.radius.is_negative() {
        return Err(Error::invalid("radius must be nonnegative"));
    }
    let (lo, hi) = ball_box(norm, &ball.center, &ball.radius);
    guard_box(&lo, &hi)?;
    let test = norm.closed_test(&ball.radius);
    let cap = point_cap();
    let mut count = 0u64;
    let mut off = vec![0i64; lo.len()];
    for_each_in_box(&lo, &hi, |p| {
        for (o, (a, c)) in off.iter_mut().zip(p.iter().zip(ball.center.iter())) {
            *o = a - c;
        }
        if norm.accepts(&test, &off) {
            count += 1;
        }
    });
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    Ok(count)
}

/// Points of `∂_t B_r(x)`; rejects `t > r` and nonpositive `t`.
pub fn thick_boundary_points(norm: &NormSpec, sphere: &ThickSphere) -> Result<Vec<Point>> {
    check_dim(norm, &sphere.center)?;
    if !sphere.thickness.is_positive() {
        return Err(Error::invalid("thickness must be positive"));
    }
    if sphere.thickness > sphere.radius {
        return Err(Error::ThicknessExceedsRadius {
            radius: Box::new(sphere.radius.clone()),
            thickness: Box::new(sphere.thickness.clone()),
        });
    }
    shell_points(norm, &sphere.center, &sphere.radius, &sphere.thickness)
}

/// Points of `B_{r+t}(x) ∖ B_{r−t}(x)` without the `t ≤ r` restriction.
pub fn shell_points(norm: &NormSpec, center: &[i64], r: &Rational, t: &Rational) -> Result<Vec<Point>> {
    check_dim(norm, center)?;
    let inner = r - t;
    shell_points_inner(norm, center, &(r + t), Some(&inner))
}

fn shell_points_inner(
    norm: &NormSpec,
    center: &[i64],
    outer: &Rational,
    inner: Option<&Rational>,
) -> Result<Vec<Point>> {
    if outer.is_negative() {
        return Ok(Vec::new());
    }
    let (lo, hi) = ball_box(norm, center, outer);
    guard_box(&lo, &hi)?;
    let out_test = norm.closed_test(outer);
    let in_test = inner.map(|r| norm.closed_test(r));
    let cap = point_cap();
    let mut pts = Vec::new();
    let mut off = vec![0i64; lo.len()];
    let mut over = false;
    for_each_in_box(&lo, &hi, |p| {
        if over {
            return;
        }
        for (o, (a, c)) in off.iter_mut().zip(p.iter().zip(center)) {
            *o = a - c;
        }
        if norm.accepts(&out_test, &off) && !in_test.as_ref().is_some_and(|t| norm.accepts(t, &off)) {
            pts.push(Point::from(p));
            if pts.len() as u64 > cap {
                over = true;
            }
        }
    });
    if over {
        return Err(Error::CapExceeded { count: pts.len() as u64, cap });
    }
    Ok(pts)
}

/// `|B_{2r}(0)| / |B_r(0)|` by exact enumeration.
pub fn doubling_ratio(norm: &NormSpec, r: &Rational) -> Result<Rational> {
    if r < &exact::one() {
        return Err(Error::invalid("doubling ratio needs r >= 1"));
    }
    let origin = Point::origin(norm.dim());
    let small = lattice_ball_count(norm, &LatticeBall::new(origin.clone(), r.clone()))?;
    let big = lattice_ball_count(norm, &LatticeBall::new(origin, r * exact::int(2)))?;
    Ok(Rational::new(big.into(), small.into()))
}

fn bbox(points: &[Point]) -> Option<(Vec<i64>, Vec<i64>)> {
    let first = points.first()?;
    let mut lo = first.0.clone();
    let mut hi = first.0.clone();
    for p in &points[1..] {
        for (i, &c) in p.iter().enumerate() {
            lo[i] = lo[i].min(c);
            hi[i] = hi[i].max(c);
        }
    }
    Some((lo, hi))
}

fn within_box(p: &[i64], lo: &[i64], hi: &[i64], pad: &[i64]) -> bool {
    p.iter().enumerate().all(|(i, &c)| c >= lo[i] - pad[i] && c <= hi[i] + pad[i])
}

/// Whether some `a ∈ A`, `b ∈ B` satisfy `‖a − b‖ < threshold`.
///
/// Candidates are pruned to each set's bounding box padded by the norm's
/// extent at `threshold`; the remaining pairs are either compared directly or,
/// when the open ball of offsets is smaller, probed through a hash set.
pub fn sets_closer_than(norm: &NormSpec, a: &[Point], b: &[Point], threshold: &Rational) -> bool {
    if !threshold.is_positive() {
        return false;
    }
    let (Some((alo, ahi)), Some((blo, bhi))) = (bbox(a), bbox(b)) else {
        return false;
    };
    let pad = norm.box_extent(threshold);
    let a_near: Vec<&Point> = a.iter().filter(|p| within_box(p, &blo, &bhi, &pad)).collect();
    if a_near.is_empty() {
        return false;
    }
    let b_near: Vec<&Point> = b.iter().filter(|p| within_box(p, &alo, &ahi, &pad)).collect();
    if b_near.is_empty() {
        return false;
    }
    let test = norm.open_test(threshold);
    let offsets_vol = box_volume(&pad.iter().map(|e| -e).collect::<Vec<_>>(), &pad);
    let mut diff = vec![0i64; norm.dim()];
    if (b_near.len() as u128) <= offsets_vol {
        for p in &a_near {
            for q in &b_near {
                for (o, (x, y)) in diff.iter_mut().zip(p.iter().zip(q.iter())) {
                    *o = x - y;
                }
                if norm.accepts(&test, &diff) {
                    return true;
                }
            }
        }
        false
    } else {
        let set: HashSet<&Point> = b_near.iter().copied().collect();
        let neg: Vec<i64> = pad.iter().map(|e| -e).collect();
        let mut offsets = Vec::new();
        for_each_in_box(&neg, &pad, |z| {
            if norm.accepts(&test, z) {
                offsets.push(z.to_vec());
            }
        });
        let mut probe = Point::origin(norm.dim());
        for p in &a_near {
            for z in &offsets {
                for (o, (x, dz)) in probe.0.iter_mut().zip(p.iter().zip(z)) {
                    *o = x + dz;
                }
                if set.contains(&probe) {
                    return true;
                }
            }
        }
        false
    }
}

/// Exact set distance `min ‖a − b‖` by exhaustive comparison (`None` if a set is empty).
pub fn set_distance(norm: &NormSpec, a: &[Point], b: &[Point]) -> Option<NormValue> {
    let mut best: Option<i128> = None;
    let mut diff = vec![0i64; norm.dim()];
    for p in a {
        for q in b {
            for (o, (x, y)) in diff.iter_mut().zip(p.iter().zip(q.iter())) {
                *o = x - y;
            }
            let g = norm.gauge(&diff);
            if best.is_none_or(|b| g < b) {
                best = Some(g);
            }
        }
    }
    best.map(|g| norm.value_from_gauge(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn ball(c: &[i64], r: Rational) -> LatticeBall {
        LatticeBall::new(Point::from(c), r)
    }

    #[test]
    fn named_ball_counts() {
        let b = ball(&[0, 0], int(1));
        assert_eq!(lattice_ball_points(&NormSpec::linf(2), &b).unwrap().len(), 9);
        assert_eq!(lattice_ball_points(&NormSpec::l1(2), &b).unwrap().len(), 5);
        let b2 = ball(&[0, 0], int(2));
        let pts = lattice_ball_points(&NormSpec::l2(2), &b2).unwrap();
        let brute =
            (-2i64..=2).flat_map(|x| (-2i64..=2).map(move |y| (x, y))).filter(|(x, y)| x * x + y * y <= 4).count();
        assert_eq!(pts.len(), brute);
        assert_eq!(pts.len(), 13);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let pts = lattice_ball_points(&NormSpec::l1(2), &ball(&[5, -1], int(2))).unwrap();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn thick_boundaries() {
        let s = ThickSphere::new([0, 0], int(2), int(1)).unwrap();
        assert_eq!(thick_boundary_points(&NormSpec::linf(2), &s).unwrap().len(), 40);
        let s = ThickSphere::new([0, 0], int(1), int(1)).unwrap();
        assert_eq!(thick_boundary_points(&NormSpec::l1(2), &s).unwrap().len(), 12);
        assert!(ThickSphere::new([0, 0], int(1), int(2)).is_err());
        let raw = ThickSphere { center: Point::from([0, 0]), radius: int(1), thickness: int(2) };
        assert!(matches!(thick_boundary_points(&NormSpec::l1(2), &raw), Err(Error::ThicknessExceedsRadius { .. })));
    }

    #[test]
    fn r_equals_t_drops_only_the_center() {
        for norm in [NormSpec::l1(2), NormSpec::l2(2), NormSpec::linf(2)] {
            let s = ThickSphere::new([1, 2], int(3), int(3)).unwrap();
            let shell = thick_boundary_points(&norm, &s).unwrap();
            let big = lattice_ball_points(&norm, &ball(&[1, 2], int(6))).unwrap();
            assert_eq!(shell.len() + 1, big.len());
            assert!(!shell.contains(&Point::from([1, 2])));
        }
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(doubling_ratio(&NormSpec::linf(1), &int(1)).unwrap(), rat(5, 3));
        assert_eq!(doubling_ratio(&NormSpec::linf(2), &int(2)).unwrap(), rat(81, 25));
        assert!(doubling_ratio(&NormSpec::linf(2), &rat(1, 2)).is_err());
    }

    #[test]
    fn cap_guard() {
        let b = ball(&[0, 0, 0], int(1_000_000));
        assert!(matches!(lattice_ball_points(&NormSpec::linf(3), &b), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn separation_matches_brute_force() {
        let norm = NormSpec::l2(2);
        let a = lattice_ball_points(&norm, &ball(&[0, 0], int(3))).unwrap();
        for dx in 0..12 {
            let b = lattice_ball_points(&norm, &ball(&[dx, 1], int(2))).unwrap();
            let d = set_distance(&norm, &a, &b).unwrap();
            for th in 1..6 {
                let th = int(th);
                let brute = d.cmp_rational(&th).is_lt();
                assert_eq!(sets_closer_than(&norm, &a, &b, &th), brute, "dx={dx} th={th}");
            }
        }
    }
}
