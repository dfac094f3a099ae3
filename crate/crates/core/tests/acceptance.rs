use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use besicover::concentration::{
    boundary_ratio_scan, budget_big_q, budget_q, dyadic_schedule, thick_center_mass, Boundary, BudgetParams,
    DiscreteMeasure, GrowthMode, ScanMeasure, StackBuilder,
};
use besicover::covering::{
    certify_besicovitch, certify_doubling, chi_from_constants, color_with_budget, incremental_select, is_incremental,
    is_well_separated, measure_disjointify, multiplicity, random_carpet, staircase_balls, trial_rng, BallFamily,
    CarpetSampler,
};
use besicover::dynamics::{
    action_law_holds, ball_sum, ball_sum_profile, cocycle_holds, dual_apply, shell_ratio, tail_ratio_bound,
    window_tail_profile, ActionModel, Observable,
};
use besicover::exact::{fmt_rational, int, rat};
use besicover::maximal::{staircase_witness, weak_type_trials, witness_validate, WeakTypeTrials};
use besicover::{LatticeBall, NormSpec, Point, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

const SEED: u64 = 20_240_601;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into() }
    }
}

#[derive(Clone, Copy)]
enum Shape {
    L1,
    L2,
    Linf,
}

impl Shape {
    fn norm(self) -> NormSpec {
        match self {
            Shape::L1 => NormSpec::l1(2),
            Shape::L2 => NormSpec::l2(2),
            Shape::Linf => NormSpec::linf(2),
        }
    }

    fn inside(self, off: &[i64], r: i64) -> bool {
        match self {
            Shape::L1 => off.iter().map(|c| c.abs()).sum::<i64>() <= r,
            Shape::L2 => off.iter().map(|c| c * c).sum::<i64>() <= r * r,
            Shape::Linf => off.iter().all(|c| c.abs() <= r),
        }
    }

    fn covers(self, ball: &LatticeBall, p: &Point) -> bool {
        let r = besicover::exact::floor_i64(&ball.radius);
        let off: Vec<i64> = p.coords().iter().zip(ball.center.coords()).map(|(a, b)| a - b).collect();
        self.inside(&off, r)
    }
}

fn covering_suite() -> Verdict {
    let start = Instant::now();
    let trials = 10_000usize;
    let mut notes = Vec::new();
    for shape in [Shape::L1, Shape::L2, Shape::Linf] {
        let norm = shape.norm();
        let family = BallFamily::from(norm.clone());
        let calib = CarpetSampler { window: 200, centers: 80, min_radius: 1, max_radius: 16 };
        let c = match certify_besicovitch(&family, &calib, 2_000, 2_000, SEED) {
            Ok(c) => c.c as u64,
            Err(e) => return Verdict::new(false, format!("{}: certification failed: {e}", norm.label())),
        };
        let d = match certify_doubling(&norm, 64) {
            Ok(d) => d.d,
            Err(e) => return Verdict::new(false, format!("{}: doubling failed: {e}", norm.label())),
        };
        let chi = chi_from_constants(c, d).unwrap();
        let failures: Vec<String> = (0..trials)
            .into_par_iter()
            .filter_map(|i| {
                let mut rng = trial_rng(SEED ^ 0xc0fe, i as u64);
                let window = rng.gen_range(20..=200);
                let centers = rng.gen_range(5..=80);
                let sampler = CarpetSampler { window, centers, min_radius: 1, max_radius: 16 };
                let carpet = random_carpet(&mut rng, &family, &sampler).ok()?;
                let e: Vec<Point> = carpet.centers().into_iter().collect();
                let seq = incremental_select(&carpet);
                let mut problems = Vec::new();
                if !e.iter().all(|p| seq.iter().any(|b| shape.covers(b, p))) {
                    problems.push("selection misses a centre");
                }
                let oracle_incremental = seq.iter().enumerate().all(|(j, b)| {
                    (j == 0 || b.radius <= seq[j - 1].radius) && !seq[..j].iter().any(|a| shape.covers(a, &b.center))
                });
                if !oracle_incremental || !is_incremental(&family, &seq).unwrap_or(false) {
                    problems.push("selection not incremental");
                }
                match color_with_budget(&carpet, chi) {
                    Ok(col) => {
                        if col.class_count() > chi {
                            problems.push("too many classes");
                        }
                        if !e.iter().all(|p| col.classes.iter().flatten().any(|b| shape.covers(b, p))) {
                            problems.push("classes miss a centre");
                        }
                        if !col.classes.iter().all(|cl| is_well_separated(&family, cl, None).unwrap_or(false)) {
                            problems.push("class not well separated");
                        }
                    }
                    Err(_) => problems.push("colouring exceeded the budget"),
                }
                let mu = DiscreteMeasure::new(
                    e.iter().map(|p| (p.clone(), rat(rng.gen_range(1..=9), rng.gen_range(1..=9)))),
                )
                .unwrap();
                match measure_disjointify(&carpet, &mu, chi) {
                    Ok(cap) => {
                        if cap.center_mass != *mu.total() || cap.captured * int(chi as i64) < cap.center_mass {
                            problems.push("captured mass below mu(E)/chi");
                        }
                    }
                    Err(_) => problems.push("measure disjointification failed"),
                }
                (!problems.is_empty()).then(|| format!("trial {i}: {}", problems.join(", ")))
            })
            .collect();
        if let Some(f) = failures.first() {
            return Verdict::new(false, format!("{}: {} failing trials, first {f}", norm.label(), failures.len()));
        }
        notes.push(format!("{} C={c} D={d} chi={chi}", norm.label()));
    }
    let elapsed = start.elapsed();
    let pass = elapsed < Duration::from_secs(300);
    Verdict::new(
        pass,
        format!("{trials} carpets per norm; {}; {:.1}s of 300s", notes.join("; "), elapsed.as_secs_f64()),
    )
}

fn staircase_failure() -> Verdict {
    let m = Rational::one();
    let cube = BallFamily::one_sided_cube(2);
    let origin = Point::origin(2);
    for k in 2..=64u64 {
        let w = match staircase_witness(k, &m) {
            Ok(w) => w,
            Err(e) => return Verdict::new(false, format!("K={k}: {e}")),
        };
        if w.t != rat(1, 2) {
            return Verdict::new(false, format!("K={k}: t = {}", fmt_rational(&w.t)));
        }
        let report = witness_validate(&w, &m).unwrap();
        if !report.valid {
            return Verdict::new(
                false,
                format!("K={k}: package invalid at {:?}", report.first_failure.map(|f| f.label)),
            );
        }
        let balls = staircase_balls(k);
        let oracle = balls.iter().filter(|b| b.center.coords().iter().all(|c| (-(k as i64)..=0).contains(c))).count();
        let mult = multiplicity(&cube, &balls, Some(std::slice::from_ref(&origin))).unwrap();
        if mult != k as usize + 1 || oracle != k as usize + 1 {
            return Verdict::new(false, format!("K={k}: multiplicity {mult}, oracle {oracle}"));
        }
        match report.score {
            Some(s) if s >= int(k as i64 + 1) => {}
            s => return Verdict::new(false, format!("K={k}: score {:?}", s.map(|s| fmt_rational(&s)))),
        }
    }
    Verdict::new(true, "K=2..64 valid, multiplicity K+1 at the origin, score >= K+1")
}

fn symmetric_weak_type() -> Verdict {
    let family = BallFamily::from(NormSpec::linf(2));
    let sampler = CarpetSampler { window: 60, centers: 40, min_radius: 1, max_radius: 8 };
    let cert = match certify_besicovitch(&family, &sampler, 1_000, 1_000, SEED) {
        Ok(c) => c,
        Err(e) => return Verdict::new(false, format!("certification failed: {e}")),
    };
    let m_cert = int(cert.c as i64);
    let params = WeakTypeTrials {
        window: 12,
        f_atoms: 4,
        h_atoms: 12,
        max_value: 6,
        n_max: 64,
        eps: vec![rat(1, 2), rat(1, 4), rat(1, 10)],
    };
    match weak_type_trials(&family, &params, 1_000, &m_cert, SEED) {
        Ok(r) => Verdict::new(
            r.violations.is_empty(),
            format!(
                "M_cert={}, 1000 trials, {} violations, worst {} (trial {})",
                fmt_rational(&m_cert),
                r.violations.len(),
                fmt_rational(&r.worst),
                r.worst_trial
            ),
        ),
        Err(e) => Verdict::new(false, e.to_string()),
    }
}

fn shell_vanishing() -> Verdict {
    let action = ActionModel::counting(2);
    let shapes = [Shape::L1, Shape::L2, Shape::Linf];
    let mut checked = 0usize;
    for i in 0..100u64 {
        let mut rng = trial_rng(SEED ^ 0x5e11, i);
        let shape = shapes[i as usize % 3];
        let norm = shape.norm();
        let w = Point::new(vec![rng.gen_range(-10..=10), rng.gen_range(-10..=10)]);
        let atoms = rng.gen_range(1..=6);
        let h =
            Observable::finite((0..atoms).map(|_| {
                (Point::new(vec![rng.gen_range(-12..=12), rng.gen_range(-12..=12)]), int(rng.gen_range(1..=5)))
            }));
        let reach = h
            .support()
            .unwrap()
            .map(|(v, _)| {
                let off: Vec<i64> = v.coords().iter().zip(w.coords()).map(|(a, b)| a - b).collect();
                (0..).find(|&r| shape.inside(&off, r)).unwrap()
            })
            .max()
            .unwrap();
        for t in [1u64, 2, 4] {
            let n0 = reach as u64 + t;
            for n in n0..=n0 + 16 {
                match shell_ratio(&action, &h, &norm, n, t, &w) {
                    Ok(s) if s.is_zero() => checked += 1,
                    Ok(s) => return Verdict::new(false, format!("pair {i}, t={t}, n={n}: ratio {}", fmt_rational(&s))),
                    Err(e) => return Verdict::new(false, format!("pair {i}, t={t}, n={n}: {e}")),
                }
            }
            if n0 > t {
                match shell_ratio(&action, &h, &norm, n0 - 1, t, &w) {
                    Ok(s) if s.is_positive() => {}
                    other => return Verdict::new(false, format!("pair {i}, t={t}: n0 not sharp ({other:?})")),
                }
            }
        }
    }
    Verdict::new(true, format!("100 random (omega, h), t in {{1,2,4}}: {checked} shell ratios exactly 0 beyond n0"))
}

fn geometric_sum(lambda: &Rational, lo: i64, hi: i64) -> Rational {
    let mut s = Rational::zero();
    for x in lo..=hi {
        s += num_traits::pow(lambda.clone(), x.unsigned_abs() as usize);
    }
    s
}

fn ratio_convergence() -> Verdict {
    let lambda = rat(1, 2);
    let action = ActionModel::weighted(2, lambda.clone()).unwrap();
    let family = BallFamily::from(NormSpec::linf(2));
    let total = num_traits::pow((Rational::one() + &lambda) / (Rational::one() - &lambda), 2);
    let mass = |p: &Point| num_traits::pow(lambda.clone(), p.coords().iter().map(|c| c.unsigned_abs() as usize).sum());
    let n_max = 48u64;
    let tiny = rat(1, 1_000_000);
    let mut vacuous = 0usize;
    let mut worst: Option<Rational> = None;
    for i in 0..20u64 {
        let mut rng = trial_rng(SEED ^ 0x7a11, i);
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
            let atoms = rng.gen_range(1..=6);
            Observable::finite((0..atoms).map(|_| {
                (
                    Point::new(vec![rng.gen_range(-5..=5), rng.gen_range(-5..=5)]),
                    rat(rng.gen_range(1..=7), rng.gen_range(1..=7)),
                )
            }))
        };
        let f = pick(&mut rng);
        let g = pick(&mut rng);
        let w = Point::new(vec![rng.gen_range(-5..=5), rng.gen_range(-5..=5)]);
        let f_int: Rational = f.support().unwrap().map(|(p, v)| v * mass(p)).sum();
        let g_int: Rational = g.support().unwrap().map(|(p, v)| v * mass(p)).sum();
        let limit = &f_int / &g_int;
        let num = ball_sum_profile(&action, &f, &family, n_max, &w).unwrap();
        let den = ball_sum_profile(&action, &g, &family, n_max, &w).unwrap();
        let tails = window_tail_profile(&action, &family, n_max, &w).unwrap();
        for n in 0..=n_max {
            let r = n as i64;
            let (x, y) = (w.coords()[0], w.coords()[1]);
            let inside = geometric_sum(&lambda, x - r, x + r) * geometric_sum(&lambda, y - r, y + r);
            let tau = &total - inside;
            if tau != tails[n as usize] {
                return Verdict::new(false, format!("pair {i}, n={n}: tail mismatch"));
            }
            let in_window = |p: &Point| p.coords().iter().zip(w.coords()).all(|(a, b)| (a - b).abs() <= r);
            let fs: Rational = f.support().unwrap().filter(|(p, _)| in_window(p)).map(|(p, v)| v * mass(p)).sum();
            let gs: Rational = g.support().unwrap().filter(|(p, _)| in_window(p)).map(|(p, v)| v * mass(p)).sum();
            let mu_w = mass(&w);
            if fs != &num[n as usize] * &mu_w || gs != &den[n as usize] * &mu_w {
                return Verdict::new(false, format!("pair {i}, n={n}: window sums disagree with the oracle"));
            }
            if n % 12 == 0 && ball_sum(&action, &f, &family, n, &w).unwrap() != num[n as usize] {
                return Verdict::new(false, format!("pair {i}, n={n}: definitional sum differs from the profile"));
            }
            let bound = tail_ratio_bound(&f_int, &f.sup_norm(), &g_int, &g.sup_norm(), &tau);
            match (&bound, gs.is_zero()) {
                (Some(b), false) => {
                    let err = (&fs / &gs - &limit).abs();
                    if err > *b {
                        return Verdict::new(
                            false,
                            format!("pair {i}, n={n}: error {} > bound {}", fmt_rational(&err), fmt_rational(b)),
                        );
                    }
                }
                (Some(_), true) => return Verdict::new(false, format!("pair {i}, n={n}: bound defined but S_n g = 0")),
                (None, _) => vacuous += 1,
            }
            if n == n_max {
                match bound {
                    Some(b) if b < tiny => {
                        if worst.as_ref().is_none_or(|x| b > *x) {
                            worst = Some(b);
                        }
                    }
                    _ => return Verdict::new(false, format!("pair {i}: bound at n=48 not below 1e-6")),
                }
            }
        }
    }
    Verdict::new(
        true,
        format!(
            "20 pairs, n<=48: error <= bound; largest bound at n=48 is {:.3e}; {vacuous} small-n bounds undefined",
            besicover::exact::to_f64(&worst.unwrap())
        ),
    )
}

fn boundary_mass() -> Verdict {
    let start = Instant::now();
    let norm = NormSpec::linf(2);
    let measure = ScanMeasure::dyadic(10, 2);
    let mut radii = dyadic_schedule(10, 2, 8).unwrap();
    radii.sort_by(|a, b| b.cmp(a));
    let eps = rat(1, 10);
    let mut rng = trial_rng(SEED ^ 0xd7ad, 0);
    let mut pts = BTreeSet::new();
    while pts.len() < 200 {
        pts.insert(Point::new(vec![rng.gen_range(0..=1024), rng.gen_range(0..=1024)]));
    }
    let pts: Vec<Point> = pts.into_iter().collect();
    let report = match boundary_ratio_scan(&norm, &measure, &pts, &radii, &eps, Boundary::UnitShell) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, e.to_string()),
    };
    let fraction = report.fraction.clone().unwrap();
    let atom = ScanMeasure::Atomic(DiscreteMeasure::new([(Point::new(vec![512, 512]), Rational::one())]).unwrap());
    let single =
        boundary_ratio_scan(&norm, &atom, &[Point::new(vec![512, 512])], &radii, &eps, Boundary::UnitShell).unwrap();
    let mut cluster = Vec::new();
    for dx in -2..=2 {
        for dy in -2..=2 {
            cluster.push((Point::new(vec![512 + dx, 512 + dy]), Rational::one()));
        }
    }
    let interior = ScanMeasure::Atomic(DiscreteMeasure::new(cluster).unwrap());
    let far = boundary_ratio_scan(&norm, &interior, &[Point::new(vec![512, 512])], &radii, &eps, Boundary::UnitShell)
        .unwrap();
    let zero = |r: &besicover::concentration::ScanReport| {
        r.fraction.as_ref().is_some_and(|f| f.is_zero())
            && r.series.iter().flat_map(|s| &s.rows).all(|row| row.ratio.is_zero())
    };
    let pass = fraction < rat(1, 20) && zero(&single) && zero(&far);
    Verdict::new(
        pass,
        format!(
            "200 samples, fraction {} (< 1/20); single-atom {}, far-interior {}; {:.1}s",
            fmt_rational(&fraction),
            if zero(&single) { "0" } else { "nonzero" },
            if zero(&far) { "0" } else { "nonzero" },
            start.elapsed().as_secs_f64()
        ),
    )
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a + b - BigInt::one()) / b
}

/// `ε = en/ed`, `δ = dn/dd`.
fn oracle_q(k: u32, chi: &BigInt, en: &BigInt, ed: &BigInt, dn: &BigInt, dd: &BigInt) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    let a = ceil_div(&(BigInt::from(2) * chi * ed * dd), &(en * dn));
    let b = ceil_div(&(BigInt::from(64) * chi * ed * dd * dd), &(en * dn * dn));
    let inner = oracle_q(k - 1, chi, en, &(ed * 2), dn, &(dd * 8));
    a * (BigInt::one() + b) * (BigInt::one() + inner)
}

fn budget_identities() -> Verdict {
    let fracs = [(1, 2), (1, 4), (1, 10)];
    let mut mismatches = Vec::new();
    let mut q_below = Vec::new();
    let mut cells = 0;
    for k in 0..=3u32 {
        for chi in [1u64, 5, 10, 100] {
            for &(en, ed) in &fracs {
                for &(dn, dd) in &fracs {
                    cells += 1;
                    let p = BudgetParams::new(k, chi, rat(en, ed), rat(dn, dd)).unwrap();
                    let big = budget_big_q(&p).unwrap();
                    let oracle = oracle_q(k, &chi.into(), &en.into(), &ed.into(), &dn.into(), &dd.into());
                    if big != oracle {
                        mismatches.push(format!("k={k} chi={chi} eps={en}/{ed} delta={dn}/{dd}"));
                    }
                    if budget_q(&p).unwrap() < big {
                        q_below.push(format!("k={k} chi={chi} eps={en}/{ed} delta={dn}/{dd}"));
                    }
                }
            }
        }
    }
    let curve = surrogate_curve();
    let pass = mismatches.is_empty() && q_below.is_empty() && curve.is_ok();
    let mut detail =
        format!("{cells} grid cells: {} Q mismatches, {} cells with q < Q", mismatches.len(), q_below.len());
    if let Some(m) = mismatches.first().or(q_below.first()) {
        detail.push_str(&format!(" (first {m})"));
    }
    match curve {
        Ok(c) => detail.push_str(&format!("; surrogate thick-centre curve {c} antitone")),
        Err(e) => detail.push_str(&format!("; surrogate curve: {e}")),
    }
    detail.push_str("; full-height statement not reproducible at this scale");
    Verdict::new(pass, detail)
}

fn surrogate_curve() -> Result<String, String> {
    let mut rng = trial_rng(SEED ^ 0x7111c, 0);
    let mut atoms = Vec::new();
    let mut seen = BTreeSet::new();
    while atoms.len() < 40 {
        let p = Point::new(vec![rng.gen_range(0..40), rng.gen_range(0..40)]);
        if seen.insert(p.clone()) {
            atoms.push((p, rat(rng.gen_range(1..=4), 1)));
        }
    }
    let mu = DiscreteMeasure::new(atoms).map_err(|e| e.to_string())?;
    let builder =
        StackBuilder { family: NormSpec::linf(2).into(), growth: GrowthMode::Squared, base_minrad: int(2), spread: 1 };
    let centers: BTreeSet<Point> = mu.support().cloned().collect();
    let stack = builder.build(&mut rng, &centers, 3).map_err(|e| e.to_string())?;
    let eps = rat(1, 10);
    let mut prev: Option<BTreeSet<Point>> = None;
    let mut masses = Vec::new();
    for h in 0..=3 {
        let out = thick_center_mass(&mu, &stack.truncated(h), &eps).map_err(|e| e.to_string())?;
        let set: BTreeSet<Point> = out.centers.iter().cloned().collect();
        let resum: Rational = set.iter().map(|p| mu.mass_at(p)).sum();
        if resum != out.mass || &resum / mu.total() != out.fraction {
            return Err(format!("height {h}: re-summed mass differs"));
        }
        if let Some(p) = &prev {
            if !set.is_subset(p) {
                return Err(format!("height {h}: thick set grew"));
            }
        }
        masses.push(fmt_rational(&out.fraction));
        prev = Some(set);
    }
    Ok(format!("[{}]", masses.join(" ")))
}

fn random_odometer(rng: &mut rand_chacha::ChaCha8Rng, bits: usize) -> ActionModel {
    ActionModel::odometer(2, (0..bits).map(|_| rat(rng.gen_range(1..=9), 10)).collect()).unwrap()
}

fn oracle_mass(action: &ActionModel, p: &[i64]) -> Rational {
    match action {
        ActionModel::Counting { .. } => Rational::one(),
        ActionModel::Weighted { lambda, .. } => {
            num_traits::pow(lambda.clone(), p.iter().map(|c| c.unsigned_abs() as usize).sum())
        }
        ActionModel::Odometer { biases, .. } => p
            .iter()
            .flat_map(|&c| {
                biases
                    .iter()
                    .enumerate()
                    .map(move |(j, b)| if c >> j & 1 == 1 { b.clone() } else { Rational::one() - b })
            })
            .product(),
    }
}

fn oracle_apply(action: &ActionModel, u: &[i64], p: &[i64]) -> Vec<i64> {
    match action {
        ActionModel::Odometer { bits, .. } => p.iter().zip(u).map(|(a, b)| (a + b).rem_euclid(1 << bits)).collect(),
        _ => p.iter().zip(u).map(|(a, b)| a + b).collect(),
    }
}

fn identities() -> Verdict {
    let mut rng = trial_rng(SEED ^ 0x1de, 0);
    let actions = [
        ("counting", ActionModel::counting(2), 40i64, 40i64),
        ("weighted", ActionModel::weighted(2, rat(1, 2)).unwrap(), 12, 12),
        ("odometer", random_odometer(&mut rng, 8), 255, 60),
    ];
    let triples = 10_000u64;
    let mut notes = Vec::new();
    for (k, (name, action, atom_range, step)) in actions.iter().enumerate() {
        let (lo, hi) = if *name == "odometer" { (0, *atom_range) } else { (-atom_range, *atom_range) };
        let failures: usize = (0..triples)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(SEED ^ 0xc0c1, (k as u64) << 32 | i);
                let mut disp = || vec![rng.gen_range(-step..=*step), rng.gen_range(-step..=*step)];
                let (u, v) = (disp(), disp());
                let atom = |rng: &mut rand_chacha::ChaCha8Rng| {
                    Point::new(vec![rng.gen_range(lo..=hi), rng.gen_range(lo..=hi)])
                };
                let w = atom(&mut rng);
                let neg: Vec<i64> = u.iter().map(|c| -c).collect();
                let rho = action.rn_derivative(&u, w.coords()).unwrap();
                let rho_oracle =
                    oracle_mass(action, &oracle_apply(action, &neg, w.coords())) / oracle_mass(action, w.coords());
                let mut bad = usize::from(rho != rho_oracle);
                bad += usize::from(!cocycle_holds(action, &u, &v, &w).unwrap());
                bad += usize::from(!action_law_holds(action, &u, &v, &w).unwrap());
                bad +=
                    usize::from(action.apply(&u, w.coords()).unwrap().coords() != oracle_apply(action, &u, w.coords()));
                let f = Observable::finite(
                    (0..3).map(|_| (atom(&mut rng), rat(rng.gen_range(-5..=5), rng.gen_range(1..=5)))),
                );
                let g = Observable::finite(
                    (0..3).map(|_| (atom(&mut rng), rat(rng.gen_range(-5..=5), rng.gen_range(1..=5)))),
                );
                let lhs: Rational = g
                    .support()
                    .unwrap()
                    .map(|(x, gx)| dual_apply(action, &u, &f, x).unwrap() * gx * oracle_mass(action, x.coords()))
                    .sum();
                let rhs: Rational = f
                    .support()
                    .unwrap()
                    .map(|(x, fx)| {
                        fx * g.value(&Point::new(oracle_apply(action, &u, x.coords())))
                            * oracle_mass(action, x.coords())
                    })
                    .sum();
                bad + usize::from(lhs != rhs)
            })
            .sum();
        if failures > 0 {
            return Verdict::new(false, format!("{name}: {failures} identity failures in {triples} triples"));
        }
        notes.push(format!("{name} {triples}"));
    }
    Verdict::new(true, format!("cocycle, action law, RN oracle and duality exact on {}", notes.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("covering suite", covering_suite),
        ("staircase failure for one-sided cubes", staircase_failure),
        ("weak-type inequality for symmetric balls", symmetric_weak_type),
        ("shell ratios vanish beyond n0", shell_vanishing),
        ("ratio averages within the exact tail bound", ratio_convergence),
        ("boundary-mass fraction on the dyadic grid", boundary_mass),
        ("budget identities", budget_identities),
        ("cocycle and duality identities", identities),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        println!("criterion {} ({name}): {} ({})", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
