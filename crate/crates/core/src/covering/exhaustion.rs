use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use super::carpet::spheres_apart;
use super::{incremental_select, spheres_well_separated, Carpet};
use crate::concentration::{DiscreteMeasure, Stack};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{shell_contains, shell_points, LatticeBall, NormSpec, Point, ThickSphere};

#[derive(Clone, Debug, Serialize)]
pub struct Exhaustion {
    pub k: usize,
    pub v: Vec<LatticeBall>,
    /// The `r` in `∂_{2r}`: `maxrad U_{k−1}`, or `1/2` when `k = 1`.
    #[serde(with = "exact::serde_rat")]
    pub r: Rational,
    #[serde(with = "exact::serde_rat")]
    pub captured: Rational,
    #[serde(with = "exact::serde_rat")]
    pub f_mass: Rational,
    pub rounds: usize,
}

/// `⌈2χ/(εδ)⌉`.
pub fn required_height(chi: usize, eps: &Rational, delta: &Rational) -> Result<usize> {
    let h = exact::ceil_int(&(exact::int(2 * chi as i64) / (eps * delta)));
    usize::try_from(h).map_err(|_| Error::invalid("required height overflows"))
}

fn unit_sphere(b: &LatticeBall) -> ThickSphere {
    ThickSphere { center: b.center.clone(), radius: b.radius.clone(), thickness: Rational::one() }
}

fn captured_mass(
    norm: &NormSpec,
    mu: &DiscreteMeasure,
    f: &BTreeSet<Point>,
    v: &[LatticeBall],
    r: &Rational,
) -> Rational {
    let t = r * exact::int(2);
    f.iter()
        .filter(|x| v.iter().any(|b| shell_contains(norm, &b.center, &b.radius, &t, x)))
        .map(|x| mu.mass_at(x))
        .sum()
}

/// Top-down exhaustion: walks the levels from the highest, each time adding
/// the best colour class of balls centred off the thickened spheres already
/// chosen, and stops once those spheres hold more than half of `μ(F)`.
pub fn sphere_exhaustion(
    stack: &Stack,
    mu: &DiscreteMeasure,
    f: &BTreeSet<Point>,
    eps: &Rational,
    delta: &Rational,
    chi: usize,
) -> Result<Exhaustion> {
    let norm =
        stack.family().norm().ok_or_else(|| Error::invalid("sphere exhaustion needs a norm-ball family"))?.clone();
    for (name, v) in [("epsilon", eps), ("delta", delta)] {
        if *v <= Rational::zero() || *v >= Rational::one() {
            return Err(Error::invalid(format!("{name} must lie in (0,1), got {v}")));
        }
    }
    if chi == 0 {
        return Err(Error::invalid("chi must be positive"));
    }
    if let Some(x) = f.iter().find(|x| !stack.centers().contains(*x)) {
        return Err(Error::invalid(format!("{x} is in F but not a stack centre")));
    }
    let f_mass = mu.mass_of(f.iter());
    let half = &f_mass / exact::int(2);
    let mut v: Vec<LatticeBall> = Vec::new();
    let mut v_spheres: Vec<(ThickSphere, Vec<Point>)> = Vec::new();
    let mut rounds = 0;
    for i in (1..=stack.height()).rev() {
        let level = stack.level(i);
        let r_i = level.maxrad().cloned().unwrap_or_else(Rational::zero);
        if !v.is_empty() {
            let cap = captured_mass(&norm, mu, f, &v, &r_i);
            if cap > half {
                return Ok(Exhaustion { k: i + 1, v, r: r_i, captured: cap, f_mass, rounds });
            }
        }
        rounds += 1;
        let t = &r_i * exact::int(2);
        let g: BTreeSet<&Point> =
            f.iter().filter(|x| !v.iter().any(|b| shell_contains(&norm, &b.center, &b.radius, &t, x))).collect();
        let mut candidates = Vec::new();
        for b in level.balls().iter().filter(|b| g.contains(&b.center)) {
            let s = unit_sphere(b);
            let sp = shell_points(&norm, &s.center, &s.radius, &s.thickness)?;
            if v_spheres.iter().all(|(w, wp)| spheres_apart(&norm, w, wp, &s, &sp, &b.radius)) {
                candidates.push(b.clone());
            }
        }
        if candidates.is_empty() {
            continue;
        }
        let sub = Carpet::new(stack.family().clone(), candidates)?;
        let class = best_sphere_class(&norm, &sub, mu, chi)?;
        for b in class {
            let s = unit_sphere(&b);
            let sp = shell_points(&norm, &s.center, &s.radius, &s.thickness)?;
            v_spheres.push((s, sp));
            v.push(b);
        }
    }
    let r0 = exact::rat(1, 2);
    let cap = captured_mass(&norm, mu, f, &v, &r0);
    if cap > half {
        return Ok(Exhaustion { k: 1, v, r: r0, captured: cap, f_mass, rounds });
    }
    Err(Error::ExhaustionOverrun { steps: rounds, diagnosis: diagnose(stack, mu, f, eps, delta, chi)? })
}

/// First-fit colouring where a class needs both its balls and their unit
/// spheres pairwise apart by the smaller radius; returns the class covering
/// the most centre mass.
fn best_sphere_class(norm: &NormSpec, carpet: &Carpet, mu: &DiscreteMeasure, chi: usize) -> Result<Vec<LatticeBall>> {
    let family = carpet.family();
    struct Member {
        ball: LatticeBall,
        pts: Vec<Point>,
        sphere: ThickSphere,
        spts: Vec<Point>,
    }
    let mut classes: Vec<Vec<Member>> = Vec::new();
    for ball in incremental_select(carpet) {
        let pts = family.points(&ball)?;
        let sphere = unit_sphere(&ball);
        let spts = shell_points(norm, &sphere.center, &sphere.radius, &sphere.thickness)?;
        let slot = classes.iter().position(|class| {
            class.iter().all(|m| {
                family.balls_separated(&m.ball, &m.pts, &ball, &pts, &ball.radius)
                    && spheres_apart(norm, &m.sphere, &m.spts, &sphere, &spts, &ball.radius)
            })
        });
        let member = Member { ball, pts, sphere, spts };
        match slot {
            Some(i) => classes[i].push(member),
            None if classes.len() < chi => classes.push(vec![member]),
            None => {
                return Err(Error::CertificateViolation {
                    center: member.ball.center,
                    radius: Box::new(member.ball.radius),
                    chi,
                })
            }
        }
    }
    let centers = carpet.centers();
    let mut best: Option<(Rational, usize)> = None;
    for (i, class) in classes.iter().enumerate() {
        let got: Rational =
            centers.iter().filter(|x| class.iter().any(|m| family.contains(&m.ball, x))).map(|x| mu.mass_at(x)).sum();
        if best.as_ref().is_none_or(|(b, _)| got > *b) {
            best = Some((got, i));
        }
    }
    let idx = best.map(|(_, i)| i).unwrap_or(0);
    Ok(classes.into_iter().nth(idx).map(|c| c.into_iter().map(|m| m.ball).collect()).unwrap_or_default())
}

fn diagnose(
    stack: &Stack,
    mu: &DiscreteMeasure,
    f: &BTreeSet<Point>,
    eps: &Rational,
    delta: &Rational,
    chi: usize,
) -> Result<String> {
    let need = required_height(chi, eps, delta)?;
    if stack.height() < need {
        return Ok(format!("stack height {} is below the required {need}", stack.height()));
    }
    let f_mass = mu.mass_of(f.iter());
    if f_mass <= delta * mu.total() {
        return Ok(format!("mu(F) = {f_mass} does not exceed delta * mu(X) = {}", delta * mu.total()));
    }
    for i in 2..=stack.height() {
        let (lo, hi) = (stack.level(i).minrad(), stack.level(i - 1).maxrad());
        if let (Some(lo), Some(hi)) = (lo, hi) {
            if lo < hi {
                return Ok(format!("level {i} has minrad {lo} below the previous maxrad {hi}"));
            }
        }
    }
    let norm = stack.family().norm().expect("checked by caller");
    for i in 1..=stack.height() {
        for b in stack.level(i).balls() {
            let shell = mu.mass_in_shell(norm, &b.center, &b.radius, &Rational::one());
            let ball = mu.mass_in_ball(norm, &b.center, &b.radius);
            if shell <= eps * &ball {
                return Ok(format!("ball at {} of radius {} in level {i} is not epsilon-thick", b.center, b.radius));
            }
        }
    }
    Ok("all preconditions hold; lattice-scale sphere separation lost the slack the continuum argument relies on".into())
}

/// Independent re-check of an exhaustion result: unit spheres of `V` pairwise
/// apart, and the captured mass recomputed from enumerated shell points.
pub fn verify_exhaustion(
    norm: &NormSpec,
    mu: &DiscreteMeasure,
    f: &BTreeSet<Point>,
    result: &Exhaustion,
) -> Result<(bool, Rational)> {
    let spheres: Vec<ThickSphere> = result.v.iter().map(unit_sphere).collect();
    let separated = spheres.is_empty() || spheres_well_separated(norm, &spheres, None)?;
    let t = &result.r * exact::int(2);
    let mut hit: BTreeSet<Point> = BTreeSet::new();
    for b in &result.v {
        hit.extend(shell_points(norm, &b.center, &b.radius, &t)?);
    }
    let captured = mu.mass_of(hit.intersection(f));
    Ok((separated, captured))
}
