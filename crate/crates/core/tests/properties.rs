use std::collections::BTreeSet;

use besicover::concentration::{
    budget_big_q, budget_q, thick_center_mass, BudgetParams, DiscreteMeasure, GrowthMode, StackBuilder,
};
use besicover::covering::{incremental_select, is_incremental, measure_disjointify, trial_rng, BallFamily, Carpet};
use besicover::dynamics::{
    action_law_holds, ball_sum, ball_sum_profile, cocycle_holds, duality_sides, ratio_average, ActionModel, Observable,
};
use besicover::exact::{int, rat};
use besicover::geometry::{doubling_ratio, lattice_ball_points, thick_boundary_points};
use besicover::maximal::{maximal_ratio, staircase_witness, WitnessPackage};
use besicover::{LatticeBall, NormSpec, Point, Rational, ThickSphere};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn norm_of(kind: u8, d: usize) -> NormSpec {
    match kind % 3 {
        0 => NormSpec::l1(d),
        1 => NormSpec::l2(d),
        _ => NormSpec::linf(d),
    }
}

fn point(d: usize, range: i64) -> impl Strategy<Value = Point> {
    prop::collection::vec(-range..=range, d).prop_map(Point::from)
}

fn positive_rat() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=9).prop_map(|(p, q)| rat(p, q))
}

fn finite_obs(d: usize, range: i64, atoms: usize) -> impl Strategy<Value = Observable> {
    prop::collection::vec((point(d, range), (-9i64..=9, 1i64..=9)), 1..=atoms)
        .prop_map(|v| Observable::finite(v.into_iter().map(|(p, (a, b))| (p, rat(a, b)))))
}

fn nonneg_obs(d: usize, range: i64, atoms: usize) -> impl Strategy<Value = Observable> {
    prop::collection::vec((point(d, range), positive_rat()), 1..=atoms).prop_map(Observable::finite)
}

fn action(kind: u8) -> ActionModel {
    match kind % 3 {
        0 => ActionModel::counting(2),
        1 => ActionModel::weighted(2, rat(2, 5)).unwrap(),
        _ => ActionModel::odometer(2, vec![rat(1, 3), rat(1, 2), rat(3, 4), rat(1, 5), rat(2, 3), rat(1, 2)]).unwrap(),
    }
}

/// Atoms valid for every model in [`action`].
fn atom() -> impl Strategy<Value = Point> {
    prop::collection::vec(0i64..64, 2).prop_map(Point::from)
}

fn carpet(kind: u8) -> impl Strategy<Value = Carpet> {
    prop::collection::btree_map(prop::collection::vec(0i64..40, 2), 1i64..=8, 1..=30).prop_map(move |m| {
        let balls = m.into_iter().map(|(c, r)| LatticeBall::new(c, int(r))).collect();
        Carpet::new(norm_of(kind, 2).into(), balls).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_points_translate(kind in 0u8..3, d in 1usize..=3, x in point(3, 50), r in 0i64..=6) {
        let norm = norm_of(kind, d);
        let x = Point::from(&x.coords()[..d]);
        let at_origin = lattice_ball_points(&norm, &LatticeBall::new(Point::origin(d), int(r))).unwrap();
        let moved: BTreeSet<Point> = at_origin.iter().map(|p| p + &x).collect();
        let direct: BTreeSet<Point> = lattice_ball_points(&norm, &LatticeBall::new(x, int(r))).unwrap().into_iter().collect();
        prop_assert_eq!(moved, direct);
    }

    #[test]
    fn balls_nest(kind in 0u8..3, x in point(2, 20), r in positive_rat(), extra in 0i64..=3) {
        let norm = norm_of(kind, 2);
        let small: BTreeSet<Point> = lattice_ball_points(&norm, &LatticeBall::new(x.clone(), r.clone())).unwrap().into_iter().collect();
        let big: BTreeSet<Point> = lattice_ball_points(&norm, &LatticeBall::new(x, r + int(extra))).unwrap().into_iter().collect();
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn thick_boundaries_nest(kind in 0u8..3, x in point(2, 20), r in 2i64..=10, t in 1i64..=9, dt in 1i64..=9) {
        prop_assume!(t + dt <= r);
        let norm = norm_of(kind, 2);
        let thin = thick_boundary_points(&norm, &ThickSphere::new(x.clone(), int(r), int(t)).unwrap()).unwrap();
        let thick: BTreeSet<Point> =
            thick_boundary_points(&norm, &ThickSphere::new(x, int(r), int(t + dt)).unwrap()).unwrap().into_iter().collect();
        prop_assert!(thin.iter().all(|p| thick.contains(p)));
    }

    #[test]
    fn incremental_selection_covers(kind in 0u8..3, c in carpet(0)) {
        let c = Carpet::new(norm_of(kind, 2).into(), c.balls().to_vec()).unwrap();
        let seq = incremental_select(&c);
        prop_assert!(is_incremental(c.family(), &seq).unwrap());
        prop_assert!(c.centers().iter().all(|p| seq.iter().any(|b| c.family().contains(b, p))));
    }

    #[test]
    fn captured_mass_reaches_the_class_share(c in carpet(2), weights in prop::collection::vec(positive_rat(), 30)) {
        let mu = DiscreteMeasure::new(c.centers().into_iter().zip(weights)).unwrap();
        let cap = measure_disjointify(&c, &mu, 1_000).unwrap();
        prop_assert_eq!(&cap.center_mass, mu.total());
        prop_assert!(cap.captured * int(cap.class_count as i64) >= cap.center_mass);
    }

    #[test]
    fn budget_q_dominates(k in 0u32..=3, chi in 1u64..=100, e in 1i64..=9, dl in 1i64..=9) {
        let p = BudgetParams::new(k, chi, rat(e, 10), rat(dl, 10)).unwrap();
        prop_assert!(budget_q(&p).unwrap() >= budget_big_q(&p).unwrap());
    }

    #[test]
    fn thick_centres_shrink_with_height(seed in any::<u64>(), n in 2usize..=20) {
        let mut rng = trial_rng(seed, 0);
        let pts: BTreeSet<Point> = (0..n as i64).map(|i| Point::from([i * 3 % 17, i * 7 % 13])).collect();
        let mu = DiscreteMeasure::counting(pts.iter().cloned());
        let builder = StackBuilder { family: NormSpec::linf(2).into(), growth: GrowthMode::Squared, base_minrad: int(2), spread: 1 };
        let stack = builder.build(&mut rng, &pts, 3).unwrap();
        let mut prev: Option<BTreeSet<Point>> = None;
        for h in 0..=3 {
            let out = thick_center_mass(&mu, &stack.truncated(h), &rat(1, 10)).unwrap();
            let resum: Rational = out.centers.iter().map(|p| mu.mass_at(p)).sum();
            prop_assert_eq!(&resum, &out.mass);
            if let Some(p) = &prev {
                prop_assert!(out.centers.is_subset(p));
            }
            prev = Some(out.centers);
        }
    }

    #[test]
    fn cocycle_and_action_law(kind in 0u8..3, u in point(2, 15), v in point(2, 15), w in atom()) {
        let a = action(kind);
        prop_assert!(cocycle_holds(&a, &u, &v, &w).unwrap());
        prop_assert!(action_law_holds(&a, &u, &v, &w).unwrap());
    }

    #[test]
    fn duality(
        kind in 0u8..3,
        u in point(2, 15),
        f in prop::collection::vec((atom(), positive_rat()), 1..=5),
        g in prop::collection::vec((atom(), (-9i64..=9, 1i64..=9)), 0..=5),
    ) {
        let a = action(kind);
        let hit: Vec<(Point, Rational)> = f.iter().map(|(p, v)| (a.apply(&u, p).unwrap(), v * int(2))).collect();
        let g = Observable::finite(hit.into_iter().chain(g.into_iter().map(|(p, (x, y))| (p, rat(x, y)))));
        let (lhs, rhs) = duality_sides(&a, &u, &Observable::finite(f), &g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn profile_matches_definition(kind in 0u8..3, f in finite_obs(2, 8, 6), n in 0u64..=12, cube in any::<bool>()) {
        let a = action(kind);
        let f = Observable::finite(f.support().unwrap().map(|(p, v)| (Point::from([p[0] + 8, p[1] + 8]), v.clone())));
        let family = if cube { BallFamily::one_sided_cube(2) } else { NormSpec::l1(2).into() };
        let w = Point::from([10, 12]);
        let profile = ball_sum_profile(&a, &f, &family, n, &w).unwrap();
        for (i, s) in profile.iter().enumerate() {
            prop_assert_eq!(s, &ball_sum(&a, &f, &family, i as u64, &w).unwrap());
        }
    }

    #[test]
    fn ratio_identities(kind in 0u8..3, f in nonneg_obs(2, 5, 5), g in nonneg_obs(2, 5, 5), c in positive_rat(), n in 0u64..=10) {
        let a = action(kind);
        let shift = |o: &Observable| Observable::finite(o.support().unwrap().map(|(p, v)| (Point::from([p[0] + 10, p[1] + 10]), v.clone())));
        let (f, g) = (shift(&f), shift(&g));
        let family: BallFamily = NormSpec::linf(2).into();
        let w = Point::from([10, 10]);
        if let Ok(r) = ratio_average(&a, &f, &g, &family, n, &w) {
            prop_assert_eq!(ratio_average(&a, &f.scaled(&c), &g, &family, n, &w).unwrap(), &r * &c);
            prop_assert_eq!(ratio_average(&a, &g, &g, &family, n, &w).unwrap(), Rational::one());
        }
    }

    #[test]
    fn maximal_ratio_scale_invariant(f in nonneg_obs(2, 6, 5), h in nonneg_obs(2, 6, 5), c in positive_rat(), w in point(2, 6)) {
        let a = ActionModel::counting(2);
        let family: BallFamily = NormSpec::linf(2).into();
        let base = maximal_ratio(&a, &f, &h, &family, 20, &w);
        let scaled = maximal_ratio(&a, &f.scaled(&c), &h.scaled(&c), &family, 20, &w);
        match (base, scaled) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "only one side defined"),
        }
    }

    #[test]
    fn json_round_trips(f in finite_obs(3, 10, 6), k in 1u64..=12, kind in 0u8..3) {
        let text = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<Observable>(&text).unwrap(), f.clone());
        let mu = DiscreteMeasure::new(f.support().unwrap().map(|(p, v)| (p.clone(), v * v))).unwrap();
        let back: DiscreteMeasure = serde_json::from_str(&serde_json::to_string(&mu).unwrap()).unwrap();
        prop_assert_eq!(back.total(), mu.total());
        prop_assert_eq!(back.atoms().collect::<Vec<_>>(), mu.atoms().collect::<Vec<_>>());
        let a = action(kind);
        prop_assert_eq!(serde_json::from_str::<ActionModel>(&a.to_json().unwrap()).unwrap(), a);
        let pkg = staircase_witness(k + 1, &Rational::one()).unwrap();
        let again = WitnessPackage::from_json(&pkg.to_json().unwrap()).unwrap();
        prop_assert_eq!(again.to_json().unwrap(), pkg.to_json().unwrap());
    }
}

#[test]
fn doubling_stays_below_four_to_the_d() {
    for d in 1..=3usize {
        for kind in 0..3u8 {
            let norm = norm_of(kind, d);
            let bound = int(4i64.pow(d as u32));
            for r in 1..=64 {
                let q = doubling_ratio(&norm, &int(r)).unwrap();
                assert!(q <= bound, "{norm} r={r}: {q}");
                assert!(!q.is_zero());
            }
        }
    }
}
