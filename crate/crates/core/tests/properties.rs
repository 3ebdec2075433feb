//! Invariants as property tests.

use std::collections::BTreeSet;

use num_rational::Ratio;
use proptest::prelude::*;
use shiftlab::*;

fn bits(max: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 1..=max)
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    bits(max).prop_map(|b| Word::new(b).unwrap())
}

fn source() -> impl Strategy<Value = SymbolicSource> {
    prop_oneof![
        (-50i64..50).prop_map(|a| gen_champernowne().shift(a)),
        (0.05f64..0.95, any::<u64>()).prop_map(|(p, s)| gen_pnormal(p, s).unwrap()),
        (0.05f64..0.95, 0.0f64..1.0).prop_map(|(a, r)| gen_sturmian(a, r).unwrap()),
        word(12).prop_map(gen_periodic),
        Just(gen_step(Polarity::OnesThenZeros)),
    ]
}

fn centered(radius: usize) -> impl Strategy<Value = BitWindow> {
    prop::collection::vec(any::<bool>(), 2 * radius + 1).prop_map(move |b| BitWindow::new(-(radius as i64), b).unwrap())
}

proptest! {
    #[test]
    fn cantor_distance_is_ultrametric(l in 0usize..8, seed in any::<u64>()) {
        let src = gen_pnormal(0.5, seed).unwrap();
        let x = src.symmetric_window(l).unwrap();
        let y = src.shift(1).symmetric_window(l).unwrap();
        let z = src.complement().shift(3).symmetric_window(l).unwrap();
        let d = |a: &BitWindow, b: &BitWindow| cantor_distance(a, b, l as u32).unwrap();
        prop_assert!(d(&x, &y) <= d(&x, &z).max(d(&y, &z)));
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert_eq!(d(&x, &x), CantorDistance::AgreeTo(l as u32));
    }

    #[test]
    fn random_windows_are_ultrametric(x in centered(6), y in centered(6), z in centered(6)) {
        let d = |a: &BitWindow, b: &BitWindow| cantor_distance(a, b, 6).unwrap().value::<f64>();
        prop_assert!(d(&x, &y) <= d(&x, &z).max(d(&y, &z)));
    }

    #[test]
    fn switch_preserves_bit_multiset(b in bits(40), lo in -20i64..20, k in 0usize..39) {
        let win = BitWindow::new(lo, b).unwrap();
        prop_assume!(k + 1 < win.len());
        let at = lo + k as i64;
        let sw = win.switch_at(at).unwrap();
        prop_assert_eq!(sw.ones(), win.ones());
        prop_assert_eq!(sw.switch_at(at).unwrap(), win);
    }

    #[test]
    fn shift_is_a_bijection(b in bits(40), lo in -20i64..20, a in -30i64..30) {
        let win = BitWindow::new(lo, b).unwrap();
        let moved = win.shift(a);
        prop_assert_eq!(moved.shift(-a), win.clone());
        for i in win.lo()..=win.hi() {
            prop_assert_eq!(moved.get(i + a), win.get(i));
        }
    }

    #[test]
    fn symbolic_shift_matches_definition(src in source(), a in -40i64..40, i in -500i64..500) {
        prop_assert_eq!(src.shift(a).eval(i), src.eval(i - a));
        prop_assert_eq!(src.shift(a).shift(-a).eval(i), src.eval(i));
        prop_assert_eq!(src.complement().eval(i), !src.eval(i));
    }

    #[test]
    fn reach_paths_replay_to_target(target in word(4)) {
        let start = gen_step(Polarity::OnesThenZeros).symmetric_window(8).unwrap();
        match sw_reach(&start, &target, 50_000).unwrap() {
            ReachOutcome::Found { moves, .. } => {
                let end = replay(&start, &moves).unwrap();
                prop_assert!(cylinder_contains(&target, &end).unwrap());
            }
            ReachOutcome::BudgetExhausted { .. } => prop_assert!(false, "budget exhausted for {}", target),
        }
    }

    #[test]
    fn closure_contains_orbit_points(src in source(), a in -200i64..200, l in 0usize..10) {
        let x = src.shift(a).symmetric_window(l).unwrap();
        prop_assert!(closure_contains(&src, &x, l, 300).unwrap());
    }

    #[test]
    fn occurrences_match_shift_intersections(w in word(6), src in source(), n in 6usize..400) {
        let occ = occurrences::<f64, _>(&w, &src, n).unwrap();
        let set: BTreeSet<i64> = occ.indices.iter().copied().collect();
        prop_assert_eq!(set, intersect_shifts(&w, &src, n).unwrap());
    }

    #[test]
    fn complement_density(src in source(), n in 1usize..2000) {
        let d = density::<f64, _>(&src, n).unwrap();
        let c = density::<f64, _>(&src.complement(), n).unwrap();
        prop_assert!((d.point + c.point - 1.0).abs() < 1e-12);
        prop_assert!((d.lower + c.upper - 1.0).abs() < 1e-12);
        prop_assert!((d.upper + c.lower - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shift_moves_density_by_at_most_edge(src in source(), n in 10usize..3000, a in -8i64..8) {
        let d = density::<f64, _>(&src, n).unwrap().point;
        let s = density::<f64, _>(&src.shift(a), n).unwrap().point;
        prop_assert!((d - s).abs() <= 2.0 * a.unsigned_abs() as f64 / (2 * n + 1) as f64 + 1e-12);
    }

    #[test]
    fn bernoulli_refines_exactly(w in word(10), num in 1i64..9) {
        let p = Ratio::new(num, 10);
        let parent = bernoulli_cylinder(p, &w).unwrap();
        let kids = bernoulli_cylinder(p, &w.push(false)).unwrap() + bernoulli_cylinder(p, &w.push(true)).unwrap();
        prop_assert_eq!(parent, kids);
    }

    #[test]
    fn measure_algebra_triangle(a in source(), b in source(), c in source(), n in 1usize..1500) {
        let sys = ShiftOrbitSystem::new()
            .with_set("A", MembershipRule::Source(a))
            .with_set("B", MembershipRule::Source(b))
            .with_set("C", MembershipRule::Source(c));
        let d = |x: &str, y: &str| malg_distance::<f64>(x, y, &sys, 0, n).unwrap().point;
        prop_assert!(d("A", "C") <= d("A", "B") + d("B", "C") + 1e-12);
        prop_assert_eq!(d("A", "A"), 0.0);
    }

    #[test]
    fn block_entropy_is_monotone(src in source(), n in 1usize..10, radius in 20usize..2000) {
        let h = block_entropy::<f64, _>(&src, n, radius).unwrap().block_entropy;
        let h1 = block_entropy::<f64, _>(&src, n + 1, radius).unwrap().block_entropy;
        prop_assert!(h <= h1 + 1e-12);
    }

    #[test]
    fn block_entropy_is_subadditive_on_periodic(w in word(8), m in 1usize..6, n in 1usize..6, reps in 10usize..200) {
        // the window length 2N is a multiple of the period, so block counts are exact cyclic counts
        let radius = w.len() * reps;
        let src = gen_periodic(w);
        let h = |k: usize| block_entropy::<f64, _>(&src, k, radius).unwrap().block_entropy;
        prop_assert!(h(m + n) <= h(m) + h(n) + 1e-9);
    }

    #[test]
    fn finite_one_step_entropy_is_partition_entropy(perm in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle(), cut in 1usize..11) {
        let sys = FinitePermSystem::<f64>::uniform(perm).unwrap()
            .with_set("lo", (0..cut).collect()).unwrap()
            .with_set("hi", (cut..12).collect()).unwrap();
        let e = finite_system_entropy(&sys, &["lo", "hi"], 1).unwrap();
        let direct = partition_entropy(&[cut as f64 / 12.0, (12 - cut) as f64 / 12.0]).unwrap();
        prop_assert!((e.block_entropy - direct).abs() < 1e-12);
        let e2 = finite_system_entropy(&sys, &["lo", "hi"], 2).unwrap();
        prop_assert!(e2.block_entropy + 1e-12 >= e.block_entropy);
    }

    #[test]
    fn symbolic_image_commutes_with_successor(src in source(), a in -10_000i64..10_000, n in 1usize..300) {
        let sys = ShiftOrbitSystem::new().with_set("U", MembershipRule::Source(src));
        let moved = xi(&sys, sys.successor(a), "U", n).unwrap();
        let shifted = xi(&sys, a, "U", n + 1).unwrap().shift(-1);
        for i in -(n as i64)..=n as i64 {
            prop_assert_eq!(moved.get(i), shifted.get(i));
        }
    }

    #[test]
    fn independence_gives_a_staircase(code in 0u64..1 << 16, n in 1usize..4) {
        let m = RelationMatrix::from_code(4, 4, code);
        if ip_witness(&m, n).unwrap().is_some() {
            prop_assert!(op_witness(&m, n).unwrap().is_some());
        }
    }

    #[test]
    fn strict_order_gives_a_shorter_staircase(code in 0u64..1 << 20, k in 3usize..5) {
        let m = RelationMatrix::from_code(4, 5, code);
        if let Some(chain) = sop_witness(&m, k).unwrap() {
            prop_assert!(chain.verify(&m));
            prop_assert!(op_witness(&m, k - 1).unwrap().is_some());
        }
    }

    #[test]
    fn step_images_have_sop_shadow(k in -50i64..50, points in prop::collection::vec(-40i64..40, 1..6)) {
        let sys = ShiftOrbitSystem::new().with_set("U", MembershipRule::AtMost(k));
        let v = sop_image_check(&sys, "U", &points, 60).unwrap();
        prop_assert!(v.containment);
    }
}
