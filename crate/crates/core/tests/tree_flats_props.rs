use hypwalk::hyperbolic::stable_translation_length;
use hypwalk::oracles::dl_brute_force;
use hypwalk::tree_flats::{chain_metric_dl, contraction_certificate, walls_separating, word_distance, GroupWord, TreeFlats};
use proptest::prelude::*;

fn word(max_len: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0usize..6, 1i64..3), 0..max_len).prop_map(|steps| {
        let gens = TreeFlats::generators();
        steps.iter().fold(GroupWord::identity(), |w, &(i, k)| w.multiply(&gens[i].power(k as u32)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn wall_count_is_word_distance(x in word(12), y in word(12)) {
        prop_assert_eq!(walls_separating(&x, &y).len() as u64, word_distance(&x, &y));
    }

    #[test]
    fn chain_metric_is_a_metric(x in word(4), y in word(4), z in word(4)) {
        let d = |a: &GroupWord, b: &GroupWord| chain_metric_dl(a, b, 0);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        prop_assert_eq!(d(&x, &x), 0);
        // one wall still counts as a chain, so neighbours sit at d_L = 2
        let w = word_distance(&x, &y);
        prop_assert!(d(&x, &y) <= w.max(2 * (w > 0) as u64));
        prop_assert_eq!(d(&x, &y) == 0, x == y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn left_invariance(h in word(8), x in word(6), y in word(6)) {
        let (hx, hy) = (h.multiply(&x), h.multiply(&y));
        prop_assert_eq!(word_distance(&hx, &hy), word_distance(&x, &y));
        prop_assert_eq!(chain_metric_dl(&hx, &hy, 0), chain_metric_dl(&x, &y, 0));
        let moved: Vec<_> = walls_separating(&x, &y).iter().map(|w| w.translate(&h)).collect();
        let mut direct = walls_separating(&hx, &hy);
        let mut moved_sorted = moved.clone();
        direct.sort();
        moved_sorted.sort();
        prop_assert_eq!(direct, moved_sorted);
    }

    #[test]
    fn dynamic_programme_matches_subsets(x in word(4), y in word(4)) {
        prop_assume!(word_distance(&x, &y) <= 12);
        prop_assert_eq!(chain_metric_dl(&x, &y, 0), dl_brute_force(&x, &y, 0));
    }

    #[test]
    fn certificate_implies_positive_translation(g in word(5)) {
        prop_assume!(!g.is_identity());
        if contraction_certificate(&g, 0, 4).unwrap() {
            let r = stable_translation_length(&TreeFlats::chain(0), &g, &GroupWord::identity(), 12, 0.0).unwrap();
            prop_assert!(r.stable_estimate > 0.0, "{} has stable estimate {}", g, r.stable_estimate);
        }
    }
}

#[test]
fn b_line_is_unbounded() {
    let e = GroupWord::identity();
    for k in 1..=10u64 {
        assert!(chain_metric_dl(&e, &GroupWord::b(2 * k as i64), 0) >= k + 1);
    }
}

#[test]
fn a_flat_has_chain_diameter_two() {
    let h = "B(1).A(2,-1).B(-3)".parse::<GroupWord>().unwrap();
    for base in [GroupWord::identity(), h] {
        let pts: Vec<GroupWord> = (-3..=3).flat_map(|m| (-3..=3).map(move |n| (m, n))).map(|(m, n)| base.multiply(&GroupWord::a(m, n))).collect();
        for x in &pts {
            for y in &pts {
                for level in [0, 1, 3] {
                    assert!(chain_metric_dl(x, y, level) <= 2);
                }
            }
        }
    }
}
