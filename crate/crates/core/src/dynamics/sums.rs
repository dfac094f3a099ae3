use num_traits::{One, Zero};

use super::{ActionModel, Observable};
use crate::covering::BallFamily;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{ball_contains, for_each_in_box, shell_contains, LatticeBall, NormSpec, Point};

/// `T̂^u f(ω) = f(T^{−u}ω)·ρ(u, ω)`.
pub fn dual_apply(action: &ActionModel, u: &[i64], f: &Observable, w: &Point) -> Result<Rational> {
    let rho = action.rn_derivative(u, w)?;
    let back: Vec<i64> = u.iter().map(|c| -c).collect();
    Ok(f.value(&action.apply_unchecked(&back, w)) * rho)
}

fn check_extent(action: &ActionModel, extent: &[i64]) -> Result<()> {
    if let Some(h) = action.horizon() {
        if extent.iter().any(|e| *e > h) {
            return Err(Error::HorizonOverflow(format!("ball extent {extent:?} exceeds the horizon {h}")));
        }
    }
    Ok(())
}

fn family_extent(family: &BallFamily, n: u64) -> Vec<i64> {
    let (lo, hi) = family.bounding_box(&LatticeBall::new(Point::origin(family.dim()), exact::int(n as i64)));
    lo.iter().zip(&hi).map(|(a, b)| a.abs().max(b.abs())).collect()
}

/// `S_n f(ω)`: the sum of `f(v)μ(v)/μ(ω)` over the window `v ∈ ω + B_n`,
/// i.e. `Σ_{u ∈ −B_n} T̂^u f(ω)`. For symmetric families this is `Σ_{u ∈ B_n}`.
/// Evaluated term by term.
pub fn ball_sum(action: &ActionModel, f: &Observable, family: &BallFamily, n: u64, w: &Point) -> Result<Rational> {
    action.check_atom(w)?;
    check_extent(action, &family_extent(family, n))?;
    let mut s = Rational::zero();
    for b in family.averaging_set(n)? {
        let u: Vec<i64> = b.iter().map(|c| -c).collect();
        s += dual_apply(action, &u, f, w)?;
    }
    Ok(s)
}

/// `[S_0 f(ω), …, S_{n_max} f(ω)]`, bucketing each window point by the
/// first index whose averaging set reaches it.
pub fn ball_sum_profile(
    action: &ActionModel,
    f: &Observable,
    family: &BallFamily,
    n_max: u64,
    w: &Point,
) -> Result<Vec<Rational>> {
    action.check_atom(w)?;
    let extent = family_extent(family, n_max);
    check_extent(action, &extent)?;
    let mut buckets = vec![Rational::zero(); n_max as usize + 1];
    let mut add = |b: &[i64], v: &Point, val: &Rational| {
        if let Some(i) = family.min_index(b) {
            if i <= n_max {
                buckets[i as usize] += val * action.mass_unchecked(v);
            }
        }
    };
    match f.support() {
        Some(support) => {
            for (v, val) in support {
                action.check_atom(v)?;
                let b = action.displacement(w, v);
                add(&b, v, val);
            }
        }
        None => {
            let c = f.value(w);
            let lo: Vec<i64> = extent.iter().map(|e| -e).collect();
            for_each_in_box(&lo, &extent, |b| {
                let v = action.apply_unchecked(b, w);
                add(b, &v, &c);
            });
        }
    }
    let mu_w = action.mass_unchecked(w);
    let mut acc = Rational::zero();
    Ok(buckets
        .into_iter()
        .map(|b| {
            acc += b;
            &acc / &mu_w
        })
        .collect())
}

/// `R_n(f, g)(ω)`.
pub fn ratio_average(
    action: &ActionModel,
    f: &Observable,
    g: &Observable,
    family: &BallFamily,
    n: u64,
    w: &Point,
) -> Result<Rational> {
    let num = ball_sum_profile(action, f, family, n, w)?.pop().unwrap();
    let den = ball_sum_profile(action, g, family, n, w)?.pop().unwrap();
    if den.is_zero() {
        return Err(Error::ZeroDenominator(format!("S_{n} g vanishes at {w}")));
    }
    Ok(num / den)
}

/// `R_n(f, g)(ω)` for `n = 0..=n_max`; `None` where the denominator vanishes.
pub fn ratio_profile(
    action: &ActionModel,
    f: &Observable,
    g: &Observable,
    family: &BallFamily,
    n_max: u64,
    w: &Point,
) -> Result<Vec<Option<Rational>>> {
    let num = ball_sum_profile(action, f, family, n_max, w)?;
    let den = ball_sum_profile(action, g, family, n_max, w)?;
    Ok(num.into_iter().zip(den).map(|(a, b)| (!b.is_zero()).then(|| a / b)).collect())
}

/// `Σ f(v)μ(v)/μ(ω)` over window points `v` whose displacement from `ω`
/// satisfies `keep`, searching displacements within `extent`.
pub(crate) fn window_sum(
    action: &ActionModel,
    f: &Observable,
    w: &Point,
    extent: &[i64],
    keep: impl Fn(&[i64]) -> bool,
) -> Result<Rational> {
    check_extent(action, extent)?;
    let mut s = Rational::zero();
    match f.support() {
        Some(support) => {
            for (v, val) in support {
                action.check_atom(v)?;
                let b = action.displacement(w, v);
                if b.iter().zip(extent).all(|(c, e)| c.abs() <= *e) && keep(&b) {
                    s += val * action.mass_unchecked(v);
                }
            }
        }
        None => {
            let c = f.value(w);
            let lo: Vec<i64> = extent.iter().map(|e| -e).collect();
            for_each_in_box(&lo, extent, |b| {
                if keep(b) {
                    s += &c * action.mass_unchecked(&action.apply_unchecked(b, w));
                }
            });
        }
    }
    Ok(s / action.mass_unchecked(w))
}

/// Shell-to-ball ratio `Σ_{∂_t B_n} T̂^u h / Σ_{B_n} T̂^u h` at `ω`.
pub fn shell_ratio(
    action: &ActionModel,
    h: &Observable,
    norm: &NormSpec,
    n: u64,
    t: u64,
    w: &Point,
) -> Result<Rational> {
    if t > n {
        return Err(Error::invalid(format!("thickness {t} exceeds n = {n}")));
    }
    action.check_atom(w)?;
    let (nr, tr) = (exact::int(n as i64), exact::int(t as i64));
    let origin = vec![0i64; norm.dim()];
    let den = window_sum(action, h, w, &norm.box_extent(&nr), |b| {
        ball_contains(norm, &LatticeBall::new(origin.clone(), nr.clone()), b)
    })?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator(format!("S_{n} h vanishes at {w}")));
    }
    let num = window_sum(action, h, w, &norm.box_extent(&(&nr + &tr)), |b| shell_contains(norm, &origin, &nr, &tr, b))?;
    Ok(num / den)
}

/// For the weighted model: `μ(Ω) − μ(ω + B_n)` for `n = 0..=n_max`.
pub fn window_tail_profile(action: &ActionModel, family: &BallFamily, n_max: u64, w: &Point) -> Result<Vec<Rational>> {
    let total = action.total_mass().ok_or_else(|| Error::invalid("tail mass needs a finite measure"))?;
    let mu_w = action.mass(w)?;
    let inside = ball_sum_profile(action, &Observable::Constant(Rational::one()), family, n_max, w)?;
    Ok(inside.into_iter().map(|s| &total - s * &mu_w).collect())
}

/// Exact bound on `|R_n(f,g)(ω) − ∫f/∫g|` from the tail mass `τ` outside the
/// window: `(∫g‖f‖τ + ∫f‖g‖τ) / (∫g (∫g − ‖g‖τ))`, or `None` when
/// `∫g ≤ ‖g‖τ`.
pub fn tail_ratio_bound(
    f_int: &Rational,
    f_sup: &Rational,
    g_int: &Rational,
    g_sup: &Rational,
    tau: &Rational,
) -> Option<Rational> {
    let slack = g_int - g_sup * tau;
    if slack <= Rational::zero() {
        return None;
    }
    Some((g_int * f_sup * tau + f_int * g_sup * tau) / (g_int * slack))
}
