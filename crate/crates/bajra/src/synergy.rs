//! Synergy of effort functions, the Gini synergy-sign law, the null-synergy
//! characterization of quasi-arithmetic means, and the threshold coalition
//! game.
//!
//! Synergy is aggregated effort minus the sum of individual efforts. It is
//! zero exactly for the associative (quasi-arithmetic) members of the family,
//! positive when pooling effort pays off, and negative when cooperation
//! carries friction.

use rand::Rng;

use crate::error::{Error, Result};
use crate::families::{gini_effort, GiniParams};
use crate::maps::AdmissibleMap;
use crate::means::{aggregate, image_sum};
use crate::numeric::{same_decision, Tolerance};
use crate::profiles::DecisionProfile;
use crate::sampling::{sample_point, sample_profile, sample_weight};
use crate::selective::arithmetic_effort;

/// Synergy of an arbitrary effort function on one profile.
pub fn synergy<E>(effort: E, profile: &DecisionProfile) -> Result<f64>
where
    E: Fn(&DecisionProfile) -> Result<f64>,
{
    Ok(effort(profile)? - arithmetic_effort(profile))
}

/// Synergy of the effort associated with an admissible map.
pub fn map_synergy(map: &dyn AdmissibleMap, profile: &DecisionProfile) -> Result<f64> {
    synergy(|p| Ok(aggregate(map, p)?.effort), profile)
}

/// Synergy of the closed-form Gini effort.
pub fn gini_synergy(params: GiniParams, profile: &DecisionProfile) -> Result<f64> {
    synergy(|p| gini_effort(params, p), profile)
}

/// Absolute synergy band treated as sign zero.
pub const SYNERGY_ZERO_BAND: f64 = 1e-8;

/// Sign of the Gini synergy on a nonconstant positive profile, in
/// `{-1, 0, +1}` with `|sigma| <=` [`SYNERGY_ZERO_BAND`] counting as zero.
/// The sign law says this always equals `-sign(p q)`.
pub fn gini_synergy_sign(params: GiniParams, profile: &DecisionProfile) -> Result<i8> {
    let effective = profile.normalize();
    let first = &effective.decisions()[0];
    if effective
        .decisions()
        .iter()
        .all(|d| same_decision(d, first))
    {
        return Err(Error::ConstantDecisions);
    }
    let sigma = gini_synergy(params, profile)?;
    Ok(if sigma.abs() <= SYNERGY_ZERO_BAND {
        0
    } else if sigma > 0.0 {
        1
    } else {
        -1
    })
}

/// Trial-based report of the three equivalent null-synergy conditions.
/// For any admissible map the three flags coincide: zero synergy, the
/// associativity identity, and the flat quotient formula reproducing the
/// aggregate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NullSynergyReport {
    pub zero_synergy: bool,
    pub associative: bool,
    pub flat_formula_matches: bool,
}

impl NullSynergyReport {
    pub fn all_equivalent(&self) -> bool {
        self.zero_synergy == self.associative && self.associative == self.flat_formula_matches
    }
}

/// Samples random profiles in the map's domain window and tests the three
/// null-synergy conditions on each. A flag stays `true` only if its
/// condition held on every trial.
pub fn check_null_synergy<R: Rng>(
    map: &dyn AdmissibleMap,
    trials: usize,
    tol: Tolerance,
    rng: &mut R,
) -> Result<NullSynergyReport> {
    let mut zero_synergy = true;
    let mut associative = true;
    let mut flat = true;
    for _ in 0..trials {
        let profile = sample_profile(map.domain(), 2..=5, rng)?;
        let outcome = aggregate(map, &profile)?;
        let weight_sum = profile.weight_sum();

        let sigma = outcome.effort - weight_sum;
        if sigma.abs() > tol.absolute.max(tol.relative * weight_sum) {
            zero_synergy = false;
        }

        // associativity: fold the profile into its mean with the arithmetic
        // effort, append a fresh entry, compare with the one-shot aggregate
        let y = sample_point(map.domain(), rng);
        let mu = sample_weight(rng);
        let appended = aggregate(map, &profile.append(y.clone(), mu)?)?;
        let folded_profile =
            DecisionProfile::new(vec![outcome.decision.clone(), y], vec![weight_sum, mu])?;
        let folded = aggregate(map, &folded_profile)?;
        if !tol.all_close(&appended.decision, &folded.decision) {
            associative = false;
        }

        // flat formula: the image mean must land on the image itself
        let sum = image_sum(map, &profile)?;
        let mean_image: Vec<f64> = sum.iter().map(|c| c / weight_sum).collect();
        match map.ray_solve(&mean_image) {
            Ok((u, eta)) => {
                if !tol.close(eta, 1.0) || !tol.all_close(&u, &outcome.decision) {
                    flat = false;
                }
            }
            Err(Error::OutsideCone | Error::RootNotBracketed { .. }) => flat = false,
            Err(other) => return Err(other),
        }
    }
    Ok(NullSynergyReport {
        zero_synergy,
        associative,
        flat_formula_matches: flat,
    })
}

/// Threshold voting game: parties with positive vote weights, a quota, and
/// the thresholded effort rule `t(S) = total` when the coalition reaches the
/// quota, plain vote sum otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct CoalitionGame {
    party_weights: Vec<f64>,
    quota: f64,
    total: f64,
}

impl CoalitionGame {
    pub fn new(party_weights: Vec<f64>, quota: f64) -> Result<Self> {
        if party_weights.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if party_weights.len() > 20 {
            return Err(Error::InvalidInput(format!(
                "coalition enumeration is desk-scale: at most 20 parties, got {}",
                party_weights.len()
            )));
        }
        for &w in &party_weights {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::NonPositiveWeight(w));
            }
        }
        let total = party_weights.iter().sum();
        if !quota.is_finite() || quota <= 0.0 || quota > total {
            return Err(Error::InvalidQuota { quota, total });
        }
        Ok(CoalitionGame {
            party_weights,
            quota,
            total,
        })
    }

    pub fn party_weights(&self) -> &[f64] {
        &self.party_weights
    }

    pub fn quota(&self) -> f64 {
        self.quota
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn parties(&self) -> usize {
        self.party_weights.len()
    }

    /// Thresholded effort of a coalition: the whole house once the quota is
    /// met, the plain vote sum below it.
    pub fn thresholded_effort(&self, coalition: &[usize]) -> f64 {
        let votes: f64 = coalition.iter().map(|&i| self.party_weights[i]).sum();
        if votes >= self.quota {
            self.total
        } else {
            votes
        }
    }

    /// Synergy of a coalition under the thresholded effort.
    pub fn coalition_synergy(&self, coalition: &[usize]) -> f64 {
        let solo: f64 = coalition
            .iter()
            .map(|&i| self.thresholded_effort(&[i]))
            .sum();
        self.thresholded_effort(coalition) - solo
    }
}

/// One row of the coalition synergy table.
#[derive(Clone, Debug, PartialEq)]
pub struct SynergyReport {
    pub coalition: Vec<usize>,
    pub threshold_effort: f64,
    pub sum_individual: f64,
    pub synergy: f64,
}

/// Synergy reports for every coalition of size at least two, ordered by
/// size and then lexicographically.
pub fn coalition_table(game: &CoalitionGame) -> Vec<SynergyReport> {
    let n = game.parties();
    debug_assert!(n <= 20, "bounded at game construction");
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() >= 2 {
            subsets.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subsets
        .into_iter()
        .map(|coalition| {
            let threshold_effort = game.thresholded_effort(&coalition);
            let sum_individual = coalition
                .iter()
                .map(|&i| game.thresholded_effort(&[i]))
                .sum::<f64>();
            SynergyReport {
                synergy: threshold_effort - sum_individual,
                coalition,
                threshold_effort,
                sum_individual,
            }
        })
        .collect()
}

/// Whether stability comparisons are weak or strict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preference {
    Weak,
    Strict,
}

/// Stable pairs plus the zero-synergy ("irrelevant") pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub stable: Vec<[usize; 2]>,
    pub irrelevant: Vec<[usize; 2]>,
}

/// Pairwise coalition stability: `{i, j}` is stable when each member prefers
/// it to every alternative pair and to standing alone (synergy zero). Weak
/// preference compares with `>=`, strict with `>`.
pub fn stable_coalitions(game: &CoalitionGame, preference: Preference) -> Result<StabilityReport> {
    let n = game.parties();
    if n < 3 {
        return Err(Error::TooFewParties(n));
    }
    let synergy_of = |i: usize, j: usize| game.coalition_synergy(&[i.min(j), i.max(j)]);
    let prefers = |a: f64, b: f64| match preference {
        Preference::Weak => a >= b,
        Preference::Strict => a > b,
    };
    let mut stable = Vec::new();
    let mut irrelevant = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let s_ij = synergy_of(i, j);
            if s_ij == 0.0 {
                irrelevant.push([i, j]);
            }
            let i_content = (0..n)
                .filter(|&k| k != i && k != j)
                .all(|k| prefers(s_ij, synergy_of(i, k)))
                && prefers(s_ij, 0.0);
            let j_content = (0..n)
                .filter(|&k| k != i && k != j)
                .all(|k| prefers(s_ij, synergy_of(j, k)))
                && prefers(s_ij, 0.0);
            if i_content && j_content {
                stable.push([i, j]);
            }
        }
    }
    Ok(StabilityReport { stable, irrelevant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gini_map, hyperboloid_map, quasi_arithmetic_map};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn profile(xs: &[f64], ws: &[f64]) -> DecisionProfile {
        DecisionProfile::from_scalars(xs, ws).unwrap()
    }

    #[test]
    fn power_mean_effort_has_zero_synergy() {
        let prof = profile(&[0.5, 2.0, 7.0], &[1.0, 2.0, 0.5]);
        for p in [-2.0, 0.0, 1.0, 3.0] {
            let sigma = gini_synergy(GiniParams::new(p, 0.0), &prof).unwrap();
            assert!(sigma.abs() < 1e-10, "sigma = {sigma} at p = {p}");
        }
    }

    #[test]
    fn hyperboloid_synergy_from_known_effort() {
        let map = hyperboloid_map();
        let prof =
            DecisionProfile::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0, 1.0]).unwrap();
        let sigma = map_synergy(&map, &prof).unwrap();
        assert!((sigma - (6.0f64.sqrt() - 2.0)).abs() < 1e-10);
    }

    #[test]
    fn singleton_synergy_vanishes() {
        let map = gini_map(GiniParams::new(2.0, -1.0)).unwrap();
        let sigma = map_synergy(&map, &profile(&[3.0], &[1.75])).unwrap();
        assert!(sigma.abs() < 1e-12);
    }

    #[test]
    fn gini_sign_examples() {
        // sigma = sqrt(4.5) - 2 > 0, and -sign(pq) = -sign(-1) = +1
        let plus =
            gini_synergy_sign(GiniParams::new(1.0, -1.0), &profile(&[1.0, 2.0], &[1.0, 1.0]))
                .unwrap();
        assert_eq!(plus, 1);

        let minus =
            gini_synergy_sign(GiniParams::new(2.0, 1.0), &profile(&[0.5, 3.0], &[1.0, 0.5]))
                .unwrap();
        assert_eq!(minus, -1);

        let zero =
            gini_synergy_sign(GiniParams::new(1.7, 0.0), &profile(&[0.5, 3.0], &[1.0, 0.5]))
                .unwrap();
        assert_eq!(zero, 0);
    }

    #[test]
    fn constant_profiles_are_rejected_for_sign() {
        let err = gini_synergy_sign(
            GiniParams::new(1.0, -1.0),
            &profile(&[2.0, 2.0, 5.0], &[1.0, 1.0, 0.0]),
        )
        .unwrap_err();
        assert_eq!(err, Error::ConstantDecisions);
    }

    #[test]
    fn synergy_scales_with_the_weights() {
        let map = gini_map(GiniParams::new(1.0, -1.0)).unwrap();
        let base = profile(&[1.0, 2.0], &[1.0, 1.0]);
        let sigma = map_synergy(&map, &base).unwrap();
        let scaled = map_synergy(&map, &base.scale_weights(3.0).unwrap()).unwrap();
        assert!((scaled - 3.0 * sigma).abs() < 1e-9 * sigma.abs());
    }

    #[test]
    fn null_synergy_equivalence_both_ways() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tol = Tolerance::DECISION;

        let quasi = quasi_arithmetic_map("quasi:ln", f64::ln, 0.0, f64::INFINITY).unwrap();
        let report = check_null_synergy(&quasi, 60, tol, &mut rng).unwrap();
        assert_eq!(
            report,
            NullSynergyReport {
                zero_synergy: true,
                associative: true,
                flat_formula_matches: true
            }
        );

        let gini = gini_map(GiniParams::new(1.0, -1.0)).unwrap();
        let report = check_null_synergy(&gini, 60, tol, &mut rng).unwrap();
        assert!(report.all_equivalent());
        assert!(!report.zero_synergy);

        let hyper = hyperboloid_map();
        let report = check_null_synergy(&hyper, 60, tol, &mut rng).unwrap();
        assert!(report.all_equivalent());
        assert!(!report.zero_synergy);
    }

    #[test]
    fn situation_one_table_and_equilibrium() {
        let game = CoalitionGame::new(vec![45.0, 35.0, 20.0], 51.0).unwrap();
        let table = coalition_table(&game);
        let by_coalition = |c: &[usize]| {
            table
                .iter()
                .find(|r| r.coalition == c)
                .expect("coalition present")
                .synergy
        };
        assert_eq!(by_coalition(&[0, 1]), 20.0);
        assert_eq!(by_coalition(&[0, 2]), 35.0);
        assert_eq!(by_coalition(&[1, 2]), 45.0);
        assert_eq!(by_coalition(&[0, 1, 2]), 0.0);

        let report = stable_coalitions(&game, Preference::Weak).unwrap();
        assert_eq!(report.stable, vec![[1, 2]]);
        let strict = stable_coalitions(&game, Preference::Strict).unwrap();
        assert_eq!(strict.stable, vec![[1, 2]]);
    }

    #[test]
    fn situation_two_table_follows_the_stated_rule() {
        let game = CoalitionGame::new(vec![55.0, 30.0, 15.0], 51.0).unwrap();
        let table = coalition_table(&game);
        let by_coalition = |c: &[usize]| {
            table
                .iter()
                .find(|r| r.coalition == c)
                .expect("coalition present")
                .synergy
        };
        assert_eq!(by_coalition(&[0, 1]), -30.0);
        assert_eq!(by_coalition(&[0, 2]), -15.0);
        assert_eq!(by_coalition(&[1, 2]), 0.0);
        // the stated threshold rule forces -45 for the grand coalition
        assert_eq!(by_coalition(&[0, 1, 2]), -45.0);

        let weak = stable_coalitions(&game, Preference::Weak).unwrap();
        assert_eq!(weak.stable, vec![[1, 2]]);
        assert_eq!(weak.irrelevant, vec![[1, 2]]);
        let strict = stable_coalitions(&game, Preference::Strict).unwrap();
        assert!(strict.stable.is_empty());
        assert_eq!(strict.irrelevant, vec![[1, 2]]);
    }

    #[test]
    fn symmetric_game_stabilizes_every_pair() {
        // equal weights, quota reachable by any pair: all synergies equal
        let game = CoalitionGame::new(vec![1.0, 1.0, 1.0], 2.0).unwrap();
        let report = stable_coalitions(&game, Preference::Weak).unwrap();
        assert_eq!(report.stable, vec![[0, 1], [0, 2], [1, 2]]);
    }

    #[test]
    fn small_games_are_rejected_for_stability() {
        let game = CoalitionGame::new(vec![60.0, 40.0], 51.0).unwrap();
        assert_eq!(
            stable_coalitions(&game, Preference::Weak).unwrap_err(),
            Error::TooFewParties(2)
        );
    }

    #[test]
    fn game_validation() {
        assert!(matches!(
            CoalitionGame::new(vec![50.0, -1.0], 40.0),
            Err(Error::NonPositiveWeight(_))
        ));
        assert!(matches!(
            CoalitionGame::new(vec![50.0, 40.0], 120.0),
            Err(Error::InvalidQuota { .. })
        ));
    }
}
