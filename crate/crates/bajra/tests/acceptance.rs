//! Acceptance suite: one test per release criterion, each printing a
//! `criterion N: PASS` line (run with `--nocapture` to see them). Every
//! tolerance is pinned in code; the suite is deterministic through fixed
//! ChaCha seeds.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bajra::axioms::{run_axiom_suite, run_casuativity_suite, run_delegation_suite};
use bajra::convexity::{in_fconvex_hull, sample_fconvex_hull, HullQuery};
use bajra::equality::{test_mean_equality, EqualityTolerances};
use bajra::families::{gini_effort, gini_map, gini_mean, hyperboloid_map, GiniParams};
use bajra::linalg::Matrix;
use bajra::maps::RatioMap;
use bajra::means::aggregate;
use bajra::profiles::DecisionProfile;
use bajra::registry::build_map;
use bajra::sampling::sample_profile;
use bajra::synergy::{
    check_null_synergy, coalition_table, gini_synergy, stable_coalitions, CoalitionGame,
    Preference,
};
use bajra::{AdmissibleMap, Tolerance};

const MAP_SPECS: [&str; 5] = ["gini:1,0", "gini:2,-1", "gini:1.5,1.5", "hyperboloid", "quasi:ln(x)"];

fn scalar_profile(xs: &[f64], ws: &[f64]) -> DecisionProfile {
    DecisionProfile::from_scalars(xs, ws).unwrap()
}

/// Criterion 1: the hyperboloid aggregate of the two unit points with unit
/// weights is ((sqrt6/6, sqrt6/6), sqrt6) within 1e-10 absolute, in under a
/// millisecond.
#[test]
fn criterion_01_hyperboloid_value() {
    let map = hyperboloid_map();
    let profile =
        DecisionProfile::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0, 1.0]).unwrap();
    // warm call outside the timed region
    aggregate(&map, &profile).unwrap();

    let started = Instant::now();
    let out = aggregate(&map, &profile).unwrap();
    let elapsed = started.elapsed();

    let sixth = 6.0f64.sqrt() / 6.0;
    assert!((out.decision[0] - sixth).abs() < 1e-10);
    assert!((out.decision[1] - sixth).abs() < 1e-10);
    assert!((out.effort - 6.0f64.sqrt()).abs() < 1e-10);
    assert!(
        elapsed.as_secs_f64() < 1e-3,
        "took {:?}, budget 1 ms",
        elapsed
    );
    println!(
        "criterion 1: PASS - hyperboloid aggregate (sqrt6/6, sqrt6/6; sqrt6) in {elapsed:?}"
    );
}

/// Criterion 2: both parliament situations reproduce exactly in integer
/// arithmetic; situation I has the unique stable pair BC; the situation II
/// grand coalition follows the stated rule (-45) rather than the printed 0.
#[test]
fn criterion_02_parliament_tables() {
    let started = Instant::now();

    let one = CoalitionGame::new(vec![45.0, 35.0, 20.0], 51.0).unwrap();
    let table = coalition_table(&one);
    let synergy = |table: &[bajra::synergy::SynergyReport], c: &[usize]| {
        table
            .iter()
            .find(|r| r.coalition == c)
            .expect("coalition row")
            .synergy
    };
    assert_eq!(synergy(&table, &[0, 1]), 20.0);
    assert_eq!(synergy(&table, &[0, 2]), 35.0);
    assert_eq!(synergy(&table, &[1, 2]), 45.0);
    assert_eq!(synergy(&table, &[0, 1, 2]), 0.0);
    let stable = stable_coalitions(&one, Preference::Weak).unwrap();
    assert_eq!(stable.stable, vec![[1, 2]], "situation I equilibrium");

    let two = CoalitionGame::new(vec![55.0, 30.0, 15.0], 51.0).unwrap();
    let table = coalition_table(&two);
    assert_eq!(synergy(&table, &[0, 1]), -30.0);
    assert_eq!(synergy(&table, &[0, 2]), -15.0);
    assert_eq!(synergy(&table, &[1, 2]), 0.0);
    // the threshold rule gives 100 - (100 + 30 + 15) = -45 for the grand
    // coalition; presentations of this example sometimes tabulate 0, which
    // contradicts the rule (see the README note)
    assert_eq!(synergy(&table, &[0, 1, 2]), -45.0);

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1e-2,
        "took {:?}, budget 10 ms",
        elapsed
    );
    println!("criterion 2: PASS - parliament synergies and BC equilibrium in {elapsed:?}");
}

/// Criterion 3: over 1000 seeded cases the sign of the Gini synergy equals
/// -sign(pq), with |sigma| <= 1e-8 reading as zero. Zero failures, < 2 s.
#[test]
fn criterion_03_gini_synergy_sign_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let started = Instant::now();
    let mut failures = 0usize;
    for case in 0..1000 {
        let p = rng.gen_range(-3.0f64..3.0);
        let q = rng.gen_range(-3.0f64..3.0);
        let n = rng.gen_range(2..=6usize);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1f64..10.0)).collect();
        let ws: Vec<f64> = (0..n).map(|_| 1.0 - rng.gen::<f64>()).collect();
        let profile = scalar_profile(&xs, &ws);
        let sigma = gini_synergy(GiniParams::new(p, q), &profile).unwrap();
        let sign = if sigma.abs() <= 1e-8 {
            0
        } else {
            sigma.signum() as i8
        };
        let expected = -((p * q).signum() as i8);
        if sign != expected {
            failures += 1;
            eprintln!("case {case}: p={p} q={q} sigma={sigma:e} sign={sign} expected={expected}");
        }
    }
    let elapsed = started.elapsed();
    assert_eq!(failures, 0, "sign-law failures");
    assert!(elapsed.as_secs_f64() < 2.0, "took {:?}, budget 2 s", elapsed);
    println!("criterion 3: PASS - 1000/1000 sign-law cases in {elapsed:?}");
}

/// Criterion 4: the five-axiom suite holds on 500 seeded profiles for every
/// built-in map, within relative 1e-9. Zero failures, < 5 s across all maps.
#[test]
fn criterion_04_axiom_suite() {
    let started = Instant::now();
    for (index, spec) in MAP_SPECS.iter().enumerate() {
        let map = build_map(spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42 + index as u64);
        let outcomes =
            run_axiom_suite(map.as_ref(), 500, Tolerance::DECISION, &mut rng).unwrap();
        for outcome in &outcomes {
            assert!(
                outcome.passed(),
                "{spec} / {}: {} failures, first: {:?}",
                outcome.name,
                outcome.failures,
                outcome.first_failure
            );
            assert_eq!(outcome.trials, 500);
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {:?}, budget 5 s", elapsed);
    println!(
        "criterion 4: PASS - 5 axioms x 500 trials x {} maps in {elapsed:?}",
        MAP_SPECS.len()
    );
}

/// Criterion 5: delegation holds in pair, group and matrix form on 200
/// seeded instances per map within 1e-9.
#[test]
fn criterion_05_delegation() {
    for (index, spec) in MAP_SPECS.iter().enumerate() {
        let map = build_map(spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1042 + index as u64);
        let outcomes =
            run_delegation_suite(map.as_ref(), 200, Tolerance::DECISION, &mut rng).unwrap();
        for outcome in &outcomes {
            assert!(
                outcome.passed(),
                "{spec} / {}: {} failures, first: {:?}",
                outcome.name,
                outcome.failures,
                outcome.first_failure
            );
            assert_eq!(outcome.trials, 200);
        }
    }
    println!(
        "criterion 5: PASS - delegation (pair, groups, matrix) x 200 trials x {} maps",
        MAP_SPECS.len()
    );
}

/// Criterion 6: casuativity equivalence on 200 seeded probes per map, plus
/// 200 two-point strictness cases with distinct endpoints.
#[test]
fn criterion_06_casuativity() {
    for (index, spec) in MAP_SPECS.iter().enumerate() {
        let map = build_map(spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2042 + index as u64);
        let outcomes =
            run_casuativity_suite(map.as_ref(), 200, Tolerance::DECISION, &mut rng).unwrap();
        for outcome in &outcomes {
            assert!(
                outcome.passed(),
                "{spec} / {}: {} failures, first: {:?}",
                outcome.name,
                outcome.failures,
                outcome.first_failure
            );
            assert_eq!(outcome.trials, 200);
        }
    }
    println!(
        "criterion 6: PASS - casuativity + two-point strictness x 200 trials x {} maps",
        MAP_SPECS.len()
    );
}

/// Criterion 7: quasi-arithmetic maps report (true, true, true) in the
/// null-synergy check with 300 trials; gini:1,-1 and the hyperboloid report
/// (false, false, false); the three flags never disagree.
#[test]
fn criterion_07_null_synergy_equivalence() {
    let tol = Tolerance::DECISION;
    let mut rng = ChaCha8Rng::seed_from_u64(3042);

    for spec in ["quasi:ln(x)", "power:2", "quasi:x"] {
        let map = build_map(spec).unwrap();
        let report = check_null_synergy(map.as_ref(), 300, tol, &mut rng).unwrap();
        assert!(report.all_equivalent(), "{spec} flags disagree: {report:?}");
        assert!(
            report.zero_synergy && report.associative && report.flat_formula_matches,
            "{spec} expected all true: {report:?}"
        );
    }
    for spec in ["gini:1,-1", "hyperboloid"] {
        let map = build_map(spec).unwrap();
        let report = check_null_synergy(map.as_ref(), 300, tol, &mut rng).unwrap();
        assert!(report.all_equivalent(), "{spec} flags disagree: {report:?}");
        assert!(
            !report.zero_synergy && !report.associative && !report.flat_formula_matches,
            "{spec} expected all false: {report:?}"
        );
    }
    println!("criterion 7: PASS - null-synergy equivalence on 5 maps x 300 trials");
}

/// Criterion 8: gini:1,0 vs gini:0,1 judged equal with the swap matrix to
/// 1e-10 entrywise; gini:1,0 vs gini:2,0 judged unequal with the witness
/// profile showing 1.5 vs sqrt(2.5); and whenever means agree, efforts
/// agree on 1000 probes within 1e-8.
#[test]
fn criterion_08_equality_testing() {
    let f = gini_map(GiniParams::new(1.0, 0.0)).unwrap();
    let g = gini_map(GiniParams::new(0.0, 1.0)).unwrap();
    let h = gini_map(GiniParams::new(2.0, 0.0)).unwrap();
    let fit_samples: Vec<Vec<f64>> = [0.5, 1.0, 2.0, 4.0].iter().map(|&x| vec![x]).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(4042);
    let domain = bajra::Domain::positive_half_line();
    let probes: Vec<DecisionProfile> = (0..1000)
        .map(|_| sample_profile(&domain, 2..=5, &mut rng).unwrap())
        .collect();

    let verdict = test_mean_equality(&f, &g, &fit_samples, &probes, EqualityTolerances::default())
        .unwrap();
    assert!(verdict.equal, "swap pair not judged equal: {verdict:?}");
    let swap = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
    assert!(verdict.linear_map.as_ref().unwrap().max_abs_diff(&swap) <= 1e-10);
    // the Bbeta direction: mean agreement forces effort agreement
    assert!(verdict.max_effort_discrepancy <= 1e-8);
    assert!(verdict.max_mean_discrepancy <= 1e-8);

    // soundness: a positive verdict must survive 1000 probes it never saw
    for _ in 0..1000 {
        let fresh = sample_profile(&domain, 2..=5, &mut rng).unwrap();
        let of = aggregate(&f, &fresh).unwrap();
        let og = aggregate(&g, &fresh).unwrap();
        let scale = of.decision[0].abs().max(1.0);
        assert!((of.decision[0] - og.decision[0]).abs() <= 1e-8 * scale);
        assert!((of.effort - og.effort).abs() <= 1e-8 * of.effort.abs().max(1.0));
    }

    let verdict = test_mean_equality(&f, &h, &fit_samples, &probes, EqualityTolerances::default())
        .unwrap();
    assert!(!verdict.equal, "distinct parameters judged equal");
    let witness = scalar_profile(&[1.0, 2.0], &[1.0, 1.0]);
    let mf = aggregate(&f, &witness).unwrap().decision[0];
    let mh = aggregate(&h, &witness).unwrap().decision[0];
    assert!((mf - 1.5).abs() < 1e-10);
    assert!((mh - 2.5f64.sqrt()).abs() < 1e-10);
    println!(
        "criterion 8: PASS - swap matrix fitted, witness means 1.5 vs {:.7}, efforts within 1e-8 on 1000 probes",
        2.5f64.sqrt()
    );
}

/// Criterion 9: hull membership says yes to the hyperboloid mean point and
/// no to (1, 1); 500 sampled hull points all pass membership.
#[test]
fn criterion_09_hull_membership() {
    let map = hyperboloid_map();
    let generators = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let sixth = 6.0f64.sqrt() / 6.0;

    assert!(in_fconvex_hull(
        &map,
        &HullQuery::new(generators.clone(), vec![sixth, sixth]).unwrap()
    )
    .unwrap());
    assert!(!in_fconvex_hull(
        &map,
        &HullQuery::new(generators.clone(), vec![1.0, 1.0]).unwrap()
    )
    .unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(5042);
    let points = sample_fconvex_hull(&map, &generators, 500, &mut rng).unwrap();
    assert_eq!(points.len(), 500);
    for point in points {
        assert!(
            in_fconvex_hull(&map, &HullQuery::new(generators.clone(), point.clone()).unwrap())
                .unwrap(),
            "sampled hull point {point:?} rejected"
        );
    }
    println!("criterion 9: PASS - mean point in, (1,1) out, 500/500 sampled points members");
}

/// Criterion 10: the closed forms agree with generic aggregation over the
/// corresponding ratio maps on 500 seeded profiles within 1e-9, including a
/// |p - q| = 1e-9 batch exercising the diagonal-branch routing and an exact
/// p = q batch over the logarithmic generators.
#[test]
fn criterion_10_dual_path_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(6042);
    let domain = bajra::Domain::positive_half_line();
    let mut checked = 0usize;

    let check = |params: GiniParams, map: &dyn AdmissibleMap, rng: &mut ChaCha8Rng| {
        let profile = sample_profile(&domain, 2..=5, rng).unwrap();
        let out = aggregate(map, &profile).unwrap();
        let mean = gini_mean(params, &profile).unwrap();
        let effort = gini_effort(params, &profile).unwrap();
        assert!(
            (out.decision[0] - mean).abs() <= 1e-9 * mean.abs(),
            "mean mismatch at ({}, {}): {} vs {}",
            params.p,
            params.q,
            out.decision[0],
            mean
        );
        assert!(
            (out.effort - effort).abs() <= 1e-9 * effort.abs(),
            "effort mismatch at ({}, {}): {} vs {}",
            params.p,
            params.q,
            out.effort,
            effort
        );
    };

    // 350 well-separated parameter pairs
    for _ in 0..350 {
        let p = rng.gen_range(-3.0f64..3.0);
        let gap: f64 = rng.gen_range(0.001f64..4.0);
        let params = GiniParams::new(p, p - gap);
        let (pp, qq) = (params.p, params.q);
        let map = RatioMap::new(
            "dual",
            move |x: f64| x.powf(pp),
            move |x: f64| x.powf(qq),
            0.0,
            f64::INFINITY,
        )
        .unwrap();
        check(params, &map, &mut rng);
        checked += 1;
    }

    // 100 near-degenerate pairs with |p - q| = 1e-9: both paths route to the
    // logarithmic branch (inverting the raw x^(p-q) ratio would amplify
    // float noise by 1/|p - q|, which is the reason the routing exists)
    for _ in 0..100 {
        let p = rng.gen_range(-2.0f64..2.0);
        let params = GiniParams::new(p, p - 1e-9);
        let map = gini_map(params).unwrap();
        check(params, &map, &mut rng);
        checked += 1;
    }

    // 50 exact diagonal pairs over the logarithmic generator pair
    for _ in 0..50 {
        let p = rng.gen_range(-2.0f64..2.0);
        let params = GiniParams::new(p, p);
        let map = RatioMap::new(
            "dual-diagonal",
            move |x: f64| x.powf(p) * x.ln(),
            move |x: f64| x.powf(p),
            0.0,
            f64::INFINITY,
        )
        .unwrap();
        check(params, &map, &mut rng);
        checked += 1;
    }

    assert_eq!(checked, 500);
    println!("criterion 10: PASS - 500/500 dual-path profiles within 1e-9");
}
