//! Runtime property suites: the five decision-making/effort axioms,
//! delegation in group and matrix form, and casuativity. The CLI `check`
//! subcommand and the acceptance tests both run these.

use rand::Rng;

use crate::error::Result;
use crate::maps::AdmissibleMap;
use crate::means::{
    aggregate, aggregate_with_delegation, check_casuativity, delegate_matrix,
};
use crate::numeric::Tolerance;
use crate::profiles::DecisionProfile;
use crate::sampling::{sample_permutation, sample_point, sample_profile, sample_weight};

/// Result of one quantified property.
#[derive(Clone, Debug)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl PropertyOutcome {
    fn new(name: &'static str) -> Self {
        PropertyOutcome {
            name,
            trials: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// True when every outcome in the slice is failure-free.
pub fn all_passed(outcomes: &[PropertyOutcome]) -> bool {
    outcomes.iter().all(PropertyOutcome::passed)
}

fn describe_profile(p: &DecisionProfile) -> String {
    format!("decisions {:?} weights {:?}", p.decisions(), p.weights())
}

/// The five axioms, `trials` random instances each: reflexivity (mean and
/// effort), nullhomogeneity of the mean with degree-one homogeneity of the
/// effort, symmetry, elimination and reduction.
pub fn run_axiom_suite<R: Rng>(
    map: &dyn AdmissibleMap,
    trials: usize,
    tol: Tolerance,
    rng: &mut R,
) -> Result<Vec<PropertyOutcome>> {
    let domain = map.domain();
    let mut reflexivity = PropertyOutcome::new("reflexivity");
    let mut homogeneity = PropertyOutcome::new("nullhomogeneity");
    let mut symmetry = PropertyOutcome::new("symmetry");
    let mut elimination = PropertyOutcome::new("elimination");
    let mut reduction = PropertyOutcome::new("reduction");

    for _ in 0..trials {
        // reflexivity on a fresh singleton
        let y = sample_point(domain, rng);
        let lambda = sample_weight(rng);
        let single = DecisionProfile::new(vec![y.clone()], vec![lambda])?;
        let outcome = aggregate(map, &single)?;
        reflexivity.record(
            tol.all_close(&outcome.decision, &y) && tol.close(outcome.effort, lambda),
            || format!("singleton ({y:?}, {lambda})"),
        );

        let profile = sample_profile(domain, 2..=6, rng)?;
        let base = aggregate(map, &profile)?;

        // scaling the weights fixes the mean and scales the effort
        let t = 0.25 + 3.75 * rng.gen::<f64>();
        let scaled = aggregate(map, &profile.scale_weights(t)?)?;
        homogeneity.record(
            tol.all_close(&scaled.decision, &base.decision)
                && tol.close(scaled.effort, t * base.effort),
            || format!("t = {t} on {}", describe_profile(&profile)),
        );

        let perm = sample_permutation(profile.len(), rng);
        let permuted = aggregate(map, &profile.permuted(&perm)?)?;
        symmetry.record(
            tol.all_close(&permuted.decision, &base.decision)
                && tol.close(permuted.effort, base.effort),
            || format!("perm {perm:?} on {}", describe_profile(&profile)),
        );

        // a zero-weight entry anywhere is invisible
        let ghost = sample_point(domain, rng);
        let position = rng.gen_range(0..=profile.len());
        let mut decisions = profile.decisions().to_vec();
        let mut weights = profile.weights().to_vec();
        decisions.insert(position, ghost);
        weights.insert(position, 0.0);
        let padded = aggregate(map, &DecisionProfile::new(decisions, weights)?)?;
        elimination.record(
            tol.all_close(&padded.decision, &base.decision)
                && tol.close(padded.effort, base.effort),
            || format!("zero entry at {position} in {}", describe_profile(&profile)),
        );

        // splitting one weight across two copies of its decision is invisible
        let split_at = rng.gen_range(0..profile.len());
        let share = rng.gen::<f64>();
        let mut decisions = profile.decisions().to_vec();
        let mut weights = profile.weights().to_vec();
        let w = weights[split_at];
        weights[split_at] = w * share;
        decisions.insert(split_at + 1, decisions[split_at].clone());
        weights.insert(split_at + 1, w * (1.0 - share));
        let duplicated = aggregate(map, &DecisionProfile::new(decisions, weights)?)?;
        reduction.record(
            tol.all_close(&duplicated.decision, &base.decision)
                && tol.close(duplicated.effort, base.effort),
            || format!("split index {split_at} of {}", describe_profile(&profile)),
        );
    }
    Ok(vec![reflexivity, homogeneity, symmetry, elimination, reduction])
}

/// Delegation in all three forms, `trials` random instances each: a single
/// folded group, a full partition into groups, and the weight-matrix form.
pub fn run_delegation_suite<R: Rng>(
    map: &dyn AdmissibleMap,
    trials: usize,
    tol: Tolerance,
    rng: &mut R,
) -> Result<Vec<PropertyOutcome>> {
    let domain = map.domain();
    let mut pair = PropertyOutcome::new("delegation_pair");
    let mut groups = PropertyOutcome::new("delegation_groups");
    let mut matrix = PropertyOutcome::new("delegation_matrix");

    for _ in 0..trials {
        // replace a group by its (mean, effort) pair inside a larger profile
        let rest = sample_profile(domain, 1..=4, rng)?;
        let group = sample_profile(domain, 1..=4, rng)?;
        let folded = aggregate(map, &group)?;
        let flat = aggregate(map, &rest.concat(&group)?)?;
        let delegated = aggregate(map, &rest.append(folded.decision.clone(), folded.effort)?)?;
        pair.record(
            tol.all_close(&flat.decision, &delegated.decision)
                && tol.close(flat.effort, delegated.effort),
            || {
                format!(
                    "rest {} group {}",
                    describe_profile(&rest),
                    describe_profile(&group)
                )
            },
        );

        // partition a profile into consecutive groups
        let profile = sample_profile(domain, 3..=6, rng)?;
        let cut = rng.gen_range(1..profile.len());
        let head = DecisionProfile::new(
            profile.decisions()[..cut].to_vec(),
            profile.weights()[..cut].to_vec(),
        )?;
        let tail = DecisionProfile::new(
            profile.decisions()[cut..].to_vec(),
            profile.weights()[cut..].to_vec(),
        )?;
        let by_groups = aggregate_with_delegation(map, &[head, tail])?;
        let direct = aggregate(map, &profile)?;
        groups.record(
            tol.all_close(&by_groups.decision, &direct.decision)
                && tol.close(by_groups.effort, direct.effort),
            || format!("cut {cut} of {}", describe_profile(&profile)),
        );

        // matrix form; delegate_matrix itself asserts the two routes agree
        let n = rng.gen_range(2..=4usize);
        let m = rng.gen_range(1..=3usize);
        let decisions: Vec<_> = (0..n).map(|_| sample_point(domain, rng)).collect();
        let columns: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| sample_weight(rng)).collect())
            .collect();
        let t: Vec<f64> = (0..m).map(|_| sample_weight(rng)).collect();
        let ok = delegate_matrix(map, &decisions, &columns, &t, tol).is_ok();
        matrix.record(ok, || format!("x {decisions:?} columns {columns:?} t {t:?}"));
    }
    Ok(vec![pair, groups, matrix])
}

/// Casuativity probes plus two-point strictness, `trials` instances each.
pub fn run_casuativity_suite<R: Rng>(
    map: &dyn AdmissibleMap,
    trials: usize,
    tol: Tolerance,
    rng: &mut R,
) -> Result<Vec<PropertyOutcome>> {
    let domain = map.domain();
    let mut random_probe = PropertyOutcome::new("casuativity_random");
    let mut at_mean = PropertyOutcome::new("casuativity_at_mean");
    let mut strictness = PropertyOutcome::new("two_point_strictness");

    for _ in 0..trials {
        let profile = sample_profile(domain, 2..=5, rng)?;
        let y = sample_point(domain, rng);
        let mu = sample_weight(rng);
        let report = check_casuativity(map, &profile, &y, mu, tol)?;
        random_probe.record(report.consistent(), || {
            format!("y {y:?} mu {mu} on {}", describe_profile(&profile))
        });

        let mean = aggregate(map, &profile)?.decision;
        let report = check_casuativity(map, &profile, &mean, mu, tol)?;
        at_mean.record(report.mean_unchanged && report.y_equals_mean, || {
            format!("mean {mean:?} on {}", describe_profile(&profile))
        });

        // distinct endpoints with positive weights: the mean avoids both
        let a = sample_point(domain, rng);
        let mut b = sample_point(domain, rng);
        for _ in 0..64 {
            let far = a
                .iter()
                .zip(&b)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max)
                >= 0.2;
            if far {
                break;
            }
            b = sample_point(domain, rng);
        }
        let weights = vec![0.1 + 0.9 * rng.gen::<f64>(), 0.1 + 0.9 * rng.gen::<f64>()];
        let two = DecisionProfile::new(vec![a.clone(), b.clone()], weights.clone())?;
        let mid = aggregate(map, &two)?.decision;
        strictness.record(
            !tol.all_close(&mid, &a) && !tol.all_close(&mid, &b),
            || format!("endpoints {a:?}, {b:?} weights {weights:?}"),
        );
    }
    Ok(vec![random_probe, at_mean, strictness])
}
