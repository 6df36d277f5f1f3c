use hypwalk::hyperbolic::models::{IntegerLine, LatticeGrid, RegularTree};
use hypwalk::hyperbolic::{
    busemann_value, cocycle_residual, estimate_delta, gromov_product, loxodromic_lower_bound, stable_translation_length, IsometricAction,
    MetricSpace,
};
use hypwalk::tree_flats::{GroupWord, TreeFlats};
use proptest::prelude::*;

fn tree_word() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 0..10).prop_map(|letters| letters.iter().fold(Vec::new(), |w, &l| RegularTree::multiply(&w, &[l])))
}

fn flats_word() -> impl Strategy<Value = GroupWord> {
    prop::collection::vec(0usize..6, 0..10).prop_map(|idx| {
        let gens = TreeFlats::generators();
        idx.iter().fold(GroupWord::identity(), |w, &i| w.multiply(&gens[i]))
    })
}

fn gromov_ok<S: MetricSpace>(s: &S, o: &S::Point, x: &S::Point, y: &S::Point) -> bool {
    let p = gromov_product(s, o, x, y);
    let bound = s.distance(o, x).to_f64().min(s.distance(o, y).to_f64());
    p == gromov_product(s, o, y, x) && p.to_f64() >= 0.0 && p.to_f64() <= bound
}

fn lipschitz_ok<S: MetricSpace>(s: &S, x: &S::Point, y: &S::Point, y2: &S::Point, o: &S::Point) -> bool {
    let diff = (busemann_value(s, x, y, o) - busemann_value(s, x, y2, o)).to_f64().abs();
    diff <= s.distance(y, y2).to_f64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gromov_on_line(o in -100i64..100, x in -100i64..100, y in -100i64..100, y2 in -100i64..100) {
        prop_assert!(gromov_ok(&IntegerLine, &o, &x, &y));
        prop_assert!(lipschitz_ok(&IntegerLine, &x, &y, &y2, &o));
    }

    #[test]
    fn gromov_on_grid(p in prop::array::uniform8(-30i64..30)) {
        let [a, b, c, d, e, f, g, h] = p;
        prop_assert!(gromov_ok(&LatticeGrid, &(a, b), &(c, d), &(e, f)));
        prop_assert!(lipschitz_ok(&LatticeGrid, &(a, b), &(c, d), &(g, h), &(e, f)));
    }

    #[test]
    fn gromov_on_tree(o in tree_word(), x in tree_word(), y in tree_word(), y2 in tree_word()) {
        let t = RegularTree::new(3);
        prop_assert!(gromov_ok(&t, &o, &x, &y));
        prop_assert!(lipschitz_ok(&t, &x, &y, &y2, &o));
    }

    #[test]
    fn gromov_on_tree_of_flats(o in flats_word(), x in flats_word(), y in flats_word(), y2 in flats_word()) {
        for s in [TreeFlats::word(), TreeFlats::chain(0)] {
            prop_assert!(gromov_ok(&s, &o, &x, &y));
            prop_assert!(lipschitz_ok(&s, &x, &y, &y2, &o));
        }
    }

    #[test]
    fn cocycle_is_exact(g1 in tree_word(), g2 in tree_word(), x in tree_word(), w1 in flats_word(), w2 in flats_word(), v in flats_word()) {
        prop_assert!(cocycle_residual(&RegularTree::new(3), &g1, &g2, &x).is_zero());
        prop_assert!(cocycle_residual(&TreeFlats::chain(0), &w1, &w2, &v).is_zero());
        prop_assert!(cocycle_residual(&IntegerLine, &(g1.len() as i64), &-(g2.len() as i64), &3).is_zero());
    }
}

#[test]
fn delta_is_monotone_on_nested_balls() {
    let tree = RegularTree::new(3);
    let mut prev = 0.0;
    for r in 1..=4 {
        let d = estimate_delta(&tree, &tree.ball(r), true).unwrap().delta;
        assert!(d >= prev);
        prev = d;
    }
    let mut prev = 0.0;
    for r in 1..=4 {
        let d = estimate_delta(&LatticeGrid, &LatticeGrid::ball(r), true).unwrap().delta;
        assert!(d >= prev, "grid radius {r}: {d} < {prev}");
        prev = d;
    }
    assert!(prev > 0.0, "the grid is not 0-hyperbolic");
    let small = estimate_delta(&TreeFlats::chain(0), &TreeFlats::ball(1), true).unwrap().delta;
    let large = estimate_delta(&TreeFlats::chain(0), &TreeFlats::ball(2), true).unwrap().delta;
    assert!(small <= large);
}

#[test]
fn certified_lower_bound_has_nonnegative_stable_length() {
    let t = RegularTree::new(3);
    let o = t.basepoint();
    for g in [vec![0, 1], vec![0, 1, 2], vec![2, 0, 1, 0], vec![0]] {
        let margin = 8.0 * estimate_delta(&t, &t.ball(3), true).unwrap().delta;
        let r = stable_translation_length(&t, &g, &o, 20, margin).unwrap();
        if let Some(v) = loxodromic_lower_bound(&t, &g, &o, margin) {
            assert!(r.stable_estimate >= 0.0);
            assert!(r.stable_estimate + 1e-12 >= v - margin, "{g:?}: {} vs {v}", r.stable_estimate);
        }
    }
}
