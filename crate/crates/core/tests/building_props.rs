use hypwalk::building::{
    all_flags, canonicalize, cat0_distance, flags_opposite, germ_flag, sector_point, vector_distance, vector_distance_fast, Germ,
    LatticeClass, LaurentMatrix, LaurentPoly, SectorGerm, VectorDistance,
};
use hypwalk::oracles::{germ_by_neighbours, random_laurent_matrix, random_unimodular, seeded};
use proptest::prelude::*;
use rand::Rng;

/// A word of length ≤ 6 in `e_ij(1), e_ij(t), e_ij(t⁻¹)`.
fn elementary_word(rng: &mut impl Rng, q: u32) -> LaurentMatrix {
    let mut g = LaurentMatrix::identity(q);
    for _ in 0..rng.gen_range(0..=6) {
        let (i, j) = loop {
            let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
            if i != j {
                break (i, j);
            }
        };
        let e = rng.gen_range(-1..=1);
        g = g.mul(&LaurentMatrix::elementary(q, i, j, LaurentPoly::monomial(q, 1, e)));
    }
    g
}

fn vertex(rng: &mut impl Rng, q: u32) -> LatticeClass {
    canonicalize(&random_laurent_matrix(rng, q, -1, 2)).unwrap()
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn action_invariance(seed in any::<u64>(), q in prime()) {
        let mut rng = seeded(seed);
        let (g, x, y) = (elementary_word(&mut rng, q), vertex(&mut rng, q), vertex(&mut rng, q));
        let (gx, gy) = (x.act(&g), y.act(&g));
        prop_assert_eq!(vector_distance(&gx, &gy), vector_distance(&x, &y));
        prop_assert_eq!(gx.vertex_type(), x.vertex_type());
    }

    #[test]
    fn opposition_swaps(seed in any::<u64>(), q in prime()) {
        let mut rng = seeded(seed);
        let (x, y) = (vertex(&mut rng, q), vertex(&mut rng, q));
        prop_assert_eq!(vector_distance(&y, &x), vector_distance(&x, &y).swap());
        prop_assert_eq!(vector_distance_fast(&x, &y), vector_distance(&x, &y));
    }

    #[test]
    fn canonical_form_ignores_change_of_basis(seed in any::<u64>(), q in prime()) {
        let mut rng = seeded(seed);
        let m = random_laurent_matrix(&mut rng, q, -1, 2);
        let u = random_unimodular(&mut rng, q, 6);
        let scale = LaurentMatrix::monomial_diagonal(q, [3, 3, 3]);
        prop_assert_eq!(canonicalize(&m.mul(&u)).unwrap(), canonicalize(&m).unwrap());
        prop_assert_eq!(canonicalize(&m.mul(&scale)).unwrap(), canonicalize(&m).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn triangle_inequality(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (x, y, z) = (vertex(&mut rng, 2), vertex(&mut rng, 2), vertex(&mut rng, 2));
        prop_assert!(cat0_distance(&x, &z) <= cat0_distance(&x, &y) + cat0_distance(&y, &z) + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sector_round_trip(seed in any::<u64>(), q in prime(), a in 1u64..6, b in 1u64..6) {
        let mut rng = seeded(seed);
        let base = vertex(&mut rng, q);
        let flags = all_flags(q);
        let flag = flags[rng.gen_range(0..flags.len())];
        let y = sector_point(&SectorGerm::new(base.clone(), flag).unwrap(), VectorDistance::new(a, b));
        prop_assert_eq!(vector_distance(&base, &y), VectorDistance::new(a, b));
        prop_assert_eq!(germ_flag(&base, &y).unwrap(), Germ::Chamber(flag));
    }

    #[test]
    fn germ_matches_nearest_neighbours(seed in any::<u64>(), q in prime()) {
        let mut rng = seeded(seed);
        let y = vertex(&mut rng, q);
        let o = LatticeClass::standard(q);
        prop_assume!(vector_distance(&o, &y).is_regular());
        let germ = germ_flag(&o, &y).unwrap();
        prop_assert_eq!(Some(germ), germ_by_neighbours(&y).map(Germ::Chamber));
    }

    #[test]
    fn germ_is_equivariant_under_the_stabiliser(seed in any::<u64>(), q in prime()) {
        let mut rng = seeded(seed);
        let y = vertex(&mut rng, q);
        let o = LatticeClass::standard(q);
        prop_assume!(y != o);
        let k = random_unimodular(&mut rng, q, 6);
        let Germ::Chamber(f) = germ_flag(&o, &y).unwrap() else {
            return Ok(());
        };
        prop_assert_eq!(germ_flag(&o, &y.act(&k)).unwrap(), Germ::Chamber(f.transform(&k.reduce_at(0))));
    }
}

#[test]
fn midpoint_inequality_in_an_apartment() {
    let q = 2;
    let o = LatticeClass::standard(q);
    let v = |i: i64, j: i64| o.act(&LaurentMatrix::monomial_diagonal(q, [i, j, 0]));
    let coords: Vec<(i64, i64)> = (0..=4).flat_map(|i| (0..=4).map(move |j| (i, j))).collect();
    for &(xi, xj) in &coords {
        for &(yi, yj) in &coords {
            if (xi + yi) % 2 != 0 || (xj + yj) % 2 != 0 {
                continue;
            }
            let (x, y, m) = (v(xi, xj), v(yi, yj), v((xi + yi) / 2, (xj + yj) / 2));
            let dxy = cat0_distance(&x, &y);
            for &(zi, zj) in &coords {
                let z = v(zi, zj);
                let lhs = cat0_distance(&z, &m).powi(2);
                let rhs = 0.5 * (cat0_distance(&z, &x).powi(2) + cat0_distance(&z, &y).powi(2)) - 0.25 * dxy * dxy;
                assert!(lhs <= rhs + 1e-9, "z={zi},{zj} x={xi},{xj} y={yi},{yj}");
            }
        }
    }
}

#[test]
fn flag_counts() {
    for (q, flags, opposite) in [(2, 21, 8), (3, 52, 27)] {
        let all = all_flags(q);
        assert_eq!(all.len(), flags);
        for f in all {
            assert_eq!(all.iter().filter(|g| flags_opposite(f, g).unwrap()).count(), opposite);
        }
    }
}
