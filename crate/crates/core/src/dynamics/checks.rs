use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{dual_apply, ActionModel, Observable};
use crate::concentration::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{ball_contains, lattice_ball_points, shell_points, LatticeBall, NormSpec, Point};

fn add(u: &[i64], v: &[i64]) -> Vec<i64> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

/// `T^{u+v}ω = T^u T^v ω`.
pub fn action_law_holds(action: &ActionModel, u: &[i64], v: &[i64], w: &Point) -> Result<bool> {
    Ok(action.apply(&add(u, v), w)? == action.apply(u, &action.apply(v, w)?)?)
}

/// `ρ(u+v, ω) = ρ(u, ω)·ρ(v, T^{−u}ω)`.
pub fn cocycle_holds(action: &ActionModel, u: &[i64], v: &[i64], w: &Point) -> Result<bool> {
    let back: Vec<i64> = u.iter().map(|c| -c).collect();
    let shifted = action.apply(&back, w)?;
    Ok(action.rn_derivative(&add(u, v), w)? == action.rn_derivative(u, w)? * action.rn_derivative(v, &shifted)?)
}

/// The two sides of `∫ (T̂^u f)·g dμ = ∫ f·(g∘T^u) dμ` for finite `f`.
pub fn duality_sides(action: &ActionModel, u: &[i64], f: &Observable, g: &Observable) -> Result<(Rational, Rational)> {
    let support = f.support().ok_or_else(|| Error::invalid("duality needs a finitely supported f"))?;
    let (mut lhs, mut rhs) = (Rational::zero(), Rational::zero());
    for (x, fx) in support {
        let y = action.apply(u, x)?;
        lhs += dual_apply(action, u, f, &y)? * g.value(&y) * action.mass_unchecked(&y);
        rhs += fx * g.value(&y) * action.mass_unchecked(x);
    }
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, Serialize)]
pub struct CoboundaryReport {
    pub v: Point,
    pub n: u64,
    /// Rational `s ≥ ‖v‖` used as the shell thickness.
    #[serde(with = "exact::serde_rat")]
    pub thickness: Rational,
    /// `|Σ_{u∈B_n} (T̂^u f − T̂^{u+v} f)(ω)|`.
    #[serde(with = "exact::serde_rat")]
    pub cancellation: Rational,
    /// `Σ_{u∈∂_s B_n} T̂^u|f|(ω)`.
    #[serde(with = "exact::serde_rat")]
    pub shell_sum: Rational,
    /// `‖f‖∞ Σ_{u∈∂_s B_n} ρ(u, ω)`.
    #[serde(with = "exact::serde_rat")]
    pub sup_bound: Rational,
}

impl CoboundaryReport {
    pub fn holds(&self) -> bool {
        self.cancellation <= self.shell_sum && self.shell_sum <= self.sup_bound
    }
}

/// Evaluates the coboundary cancellation chain at `ω` term by term.
pub fn coboundary_ratio_bound_check(
    action: &ActionModel,
    norm: &NormSpec,
    f: &Observable,
    v: &[i64],
    n: u64,
    w: &Point,
) -> Result<CoboundaryReport> {
    if v.len() != norm.dim() || norm.dim() != action.dim() {
        return Err(Error::DimensionMismatch { expected: action.dim(), got: v.len() });
    }
    let nr = exact::int(n as i64);
    let origin = Point::origin(norm.dim());
    let mut cancellation = Rational::zero();
    for u in lattice_ball_points(norm, &LatticeBall::new(origin.clone(), nr.clone()))? {
        cancellation += dual_apply(action, &u, f, w)? - dual_apply(action, &add(&u, v), f, w)?;
    }
    let thickness = norm.rational_upper(v);
    let abs = f.abs();
    let sup = f.sup_norm();
    let (mut shell_sum, mut rho_sum) = (Rational::zero(), Rational::zero());
    for u in shell_points(norm, &origin, &nr, &thickness)? {
        shell_sum += dual_apply(action, &u, &abs, w)?;
        rho_sum += action.rn_derivative(&u, w)?;
    }
    Ok(CoboundaryReport {
        v: Point::from(v),
        n,
        thickness,
        cancellation: cancellation.abs(),
        shell_sum,
        sup_bound: sup * rho_sum,
    })
}

/// `ν({u}) = T̂^u f(ω)` on `B_{2n}`; zero atoms are dropped.
pub fn transfer_measure(
    action: &ActionModel,
    norm: &NormSpec,
    f: &Observable,
    n: u64,
    w: &Point,
) -> Result<DiscreteMeasure> {
    if !f.is_nonnegative() {
        return Err(Error::invalid("transfer measure needs f ≥ 0"));
    }
    let ball = LatticeBall::new(Point::origin(norm.dim()), exact::int(2 * n as i64));
    let mut atoms = Vec::new();
    for u in lattice_ball_points(norm, &ball)? {
        let m = dual_apply(action, &u, f, w)?;
        if !m.is_zero() {
            atoms.push((u, m));
        }
    }
    DiscreteMeasure::new(atoms)
}

/// For `f = 1_A`: `(ν(U), Σ_{u∈B_n} T̂^u 1_A(ω))` with
/// `U = {u ∈ B_n : T^{−u}ω ∈ A}`.
pub fn bridging_sides(
    action: &ActionModel,
    norm: &NormSpec,
    a: &[Point],
    n: u64,
    w: &Point,
) -> Result<(Rational, Rational)> {
    let f = Observable::indicator(a);
    let nu = transfer_measure(action, norm, &f, n, w)?;
    let ball = LatticeBall::new(Point::origin(norm.dim()), exact::int(n as i64));
    let mut u_set = Vec::new();
    let mut direct = Rational::zero();
    for u in lattice_ball_points(norm, &ball)? {
        let back: Vec<i64> = u.iter().map(|c| -c).collect();
        if a.contains(&action.apply(&back, w)?) {
            u_set.push(u.clone());
        }
        direct += dual_apply(action, &u, &f, w)?;
    }
    debug_assert!(u_set.iter().all(|u| ball_contains(norm, &ball, u)));
    Ok((nu.mass_of(u_set.iter()), direct))
}
