use hypwalk::building::{vector_distance_fast, LatticeClass};
use hypwalk::oracles::{simple_walk_mean_abs, simple_walk_pmf};
use hypwalk::tree_flats::GroupWord;
use hypwalk::walk::contracting::contracting_proportion;
use hypwalk::walk::measure::{
    building_elementary, grid_symmetric, line_symmetric, line_translation, tree_flats_b_only, tree_flats_flat_only, tree_flats_symmetric,
};
use hypwalk::walk::output::csv_string;
use hypwalk::walk::rng::draw;
use hypwalk::walk::{
    clt_harness, estimate_drift, replay, run_walks, run_walks_with_workers, Backend, BuildingBackend, GridBackend, LineBackend,
    Observation, TreeFlatsBackend, WalkConfig, WalkTrace,
};
use proptest::prelude::*;

#[test]
fn csv_is_identical_across_worker_counts() {
    let cfg = WalkConfig::new(80, 17, 5);
    let m = building_elementary(3).unwrap();
    let b = BuildingBackend::standard(3).certifying(true);
    let one = csv_string(&run_walks_with_workers(&b, &m, &cfg, 1).unwrap());
    let four = csv_string(&run_walks_with_workers(&b, &m, &cfg, 4).unwrap());
    assert_eq!(one, four);
    assert_eq!(one, csv_string(&run_walks(&b, &m, &cfg).unwrap()));
}

#[test]
fn draws_depend_only_on_seed_trial_step() {
    let a: Vec<u64> = (1..=5).map(|s| draw(9, 3, s)).collect();
    let b: Vec<u64> = (1..=5).rev().map(|s| draw(9, 3, s)).rev().collect();
    assert_eq!(a, b);
    assert_ne!(draw(9, 3, 1), draw(9, 4, 1));
}

/// `d(Z_{n+m}o, o) ≤ d(Zₙo, o) + d(Zₙ⁻¹Z_{n+m}o, o)` along replayed paths.
#[test]
fn subadditivity_on_replayed_paths() {
    let tree = TreeFlatsBackend::word();
    let m = tree_flats_symmetric();
    for trial in 0..20 {
        let mut path = vec![GroupWord::identity()];
        replay(&tree, &m, 4, trial, 64, |_, s| path.push(s.clone()));
        for n in [1usize, 4, 16, 32] {
            for k in [1usize, 8, 32] {
                let (zn, znk) = (&path[n], &path[n + k]);
                assert!(znk.length() <= zn.length() + zn.inverse().multiply(znk).length());
            }
        }
    }
    let b = BuildingBackend::standard(2);
    let m = building_elementary(2).unwrap();
    let o = LatticeClass::standard(2);
    for trial in 0..10 {
        let mut path = vec![b.initial()];
        replay(&b, &m, 4, trial, 48, |_, s| path.push(s.clone()));
        for n in [1usize, 8, 16] {
            for k in [4usize, 16, 32] {
                let (zn, znk) = (&path[n], &path[n + k]);
                let d = |g: &hypwalk::building::LaurentMatrix| vector_distance_fast(&o, &o.act(g)).squared_length() as f64;
                let lhs = d(&znk.z).sqrt();
                let rhs = d(&zn.z).sqrt() + d(&zn.z_inv.mul(&znk.z)).sqrt();
                assert!(lhs <= rhs + 1e-9);
            }
        }
    }
}

fn drift_consistent<B: Backend>(backend: &B, measure: &hypwalk::walk::StepMeasure<B::Element>, n: u64, trials: u64) {
    let cfg = WalkConfig::new(2 * n, trials, 21).with_schedule(vec![n, 2 * n]);
    let traces = run_walks(backend, measure, &cfg).unwrap();
    let rates = |i: usize, h: u64| -> Vec<f64> { traces.iter().map(|t| t.checkpoints[i].displacement / h as f64).collect() };
    let est = |xs: Vec<f64>| hypwalk::walk::stats::MeanEstimate::from_samples(&xs);
    let (a, b) = (est(rates(0, n)), est(rates(1, 2 * n)));
    let pooled = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    let gap = (a.mean - b.mean).abs();
    assert!(gap <= 3.0 * pooled + 1e-12, "λ̂ {} vs {}, gap {gap} > 3·{pooled}", a.mean, b.mean);
}

#[test]
fn drift_estimates_agree_between_n_and_2n() {
    drift_consistent(&LineBackend, &line_translation(), 500, 64);
    drift_consistent(&TreeFlatsBackend::word(), &tree_flats_symmetric(), 500, 64);
    drift_consistent(&BuildingBackend::standard(2), &building_elementary(2).unwrap(), 200, 64);
}

/// Zero drift: E|Zₙ| grows like √n, so n·λ̂ₙ over 2n·λ̂₂ₙ sits near 1/√2 rather than 1.
#[test]
fn zero_drift_rates_shrink_like_root_n() {
    fn ratio<B: Backend>(backend: &B, measure: &hypwalk::walk::StepMeasure<B::Element>) -> f64 {
        let n = 500;
        let cfg = WalkConfig::new(2 * n, 400, 21).with_schedule(vec![n, 2 * n]);
        let traces = run_walks(backend, measure, &cfg).unwrap();
        let mean = |i: usize| traces.iter().map(|t| t.checkpoints[i].displacement).sum::<f64>() / traces.len() as f64;
        mean(0) / mean(1)
    }
    for r in [
        ratio(&LineBackend, &line_symmetric()),
        ratio(&GridBackend, &grid_symmetric()),
        ratio(&TreeFlatsBackend::word(), &tree_flats_flat_only()),
        ratio(&TreeFlatsBackend::word(), &tree_flats_b_only()),
    ] {
        assert!((r - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.08, "ratio {r}");
    }
}

#[test]
fn contracting_fraction_is_monotone_in_power_bound() {
    let cfg = WalkConfig::new(40, 200, 13);
    let m = tree_flats_symmetric();
    let runs: Vec<_> = [2u32, 3, 4, 6].iter().map(|&k| run_walks(&TreeFlatsBackend::certifying(0, k), &m, &cfg).unwrap()).collect();
    for w in runs.windows(2) {
        for (lo, hi) in w[0].iter().zip(&w[1]) {
            for (c_lo, c_hi) in lo.checkpoints.iter().zip(&hi.checkpoints) {
                assert!(c_lo.certified <= c_hi.certified || c_lo.certified != Some(true));
            }
        }
        let (f_lo, f_hi) = (contracting_proportion(&w[0]), contracting_proportion(&w[1]));
        assert!(f_lo.iter().zip(&f_hi).all(|(a, b)| a.1 <= b.1));
    }
}

/// Exact law of the simple walk against the engine, by χ² on ten cells.
#[test]
fn line_walk_matches_binomial_law() {
    let n = 10;
    let traces = run_walks(&LineBackend, &line_symmetric(), &WalkConfig::new(n, 4000, 8)).unwrap();
    let mut counts = [0f64; 6];
    for t in &traces {
        counts[(t.last().displacement as usize) / 2] += 1.0;
    }
    let mut chi2 = 0.0;
    for (cell, &obs) in counts.iter().enumerate() {
        let k = 2 * cell as i64;
        let p = if k == 0 { simple_walk_pmf(n, 0) } else { 2.0 * simple_walk_pmf(n, k) };
        let expected = p * traces.len() as f64;
        chi2 += (obs - expected).powi(2) / expected;
    }
    // 5 degrees of freedom, 0.999 quantile
    assert!(chi2 < 20.52, "χ² = {chi2}");
    let mean = traces.iter().map(|t| t.last().displacement).sum::<f64>() / traces.len() as f64;
    assert!((mean - simple_walk_mean_abs(n)).abs() < 0.1);
}

fn fake_traces(values: &[f64]) -> Vec<WalkTrace<()>> {
    values
        .iter()
        .enumerate()
        .map(|(i, &d)| WalkTrace { seed: 0, trial_id: i as u64, checkpoints: vec![Observation::scalar(64, d)], positions: vec![] })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clt_degenerate_iff_constant(values in prop::collection::vec(0u8..4, 100..130)) {
        let traces = fake_traces(&values.iter().map(|&v| v as f64).collect::<Vec<_>>());
        let lambda = estimate_drift(&traces).unwrap().lambda_hat;
        let r = clt_harness(&traces, lambda).unwrap();
        prop_assert_eq!(r.degenerate, values.iter().all(|&v| v == values[0]));
    }

    #[test]
    fn clt_constant_samples_are_degenerate(v in 0u8..50, len in 100usize..130) {
        let traces = fake_traces(&vec![v as f64; len]);
        prop_assert!(clt_harness(&traces, 0.0).unwrap().degenerate);
    }
}
