//! The four conservative (selective) aggregators and the arithmetic effort
//! function. Their output is always one of the inputs; none of them is
//! symmetric.

use crate::numeric::same_decision;
use crate::profiles::{DecisionProfile, Point};

/// Which conservative rule to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectiveRule {
    /// First decision carrying a nonzero weight.
    PrimacyEffect,
    /// Last decision carrying a nonzero weight.
    RecencyEffect,
    /// Decision at the first index attaining the maximal weight.
    FirstDominatingDecision,
    /// FirstDominatingDecision applied to weights accumulated over equal
    /// decisions.
    FirstDominant,
}

impl SelectiveRule {
    /// CLI names: `pe`, `re`, `fdd`, `fd`.
    pub fn from_name(name: &str) -> Option<SelectiveRule> {
        match name {
            "pe" => Some(SelectiveRule::PrimacyEffect),
            "re" => Some(SelectiveRule::RecencyEffect),
            "fdd" => Some(SelectiveRule::FirstDominatingDecision),
            "fd" => Some(SelectiveRule::FirstDominant),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SelectiveRule::PrimacyEffect => "pe",
            SelectiveRule::RecencyEffect => "re",
            SelectiveRule::FirstDominatingDecision => "fdd",
            SelectiveRule::FirstDominant => "fd",
        }
    }
}

/// Applies a selective rule. Total on valid profiles: membership of the
/// weight vector in `W_n` guarantees a nonzero weight exists, and ties in
/// the dominating rules resolve to the first index by definition.
pub fn select(rule: SelectiveRule, profile: &DecisionProfile) -> Point {
    let weights = profile.weights();
    let decisions = profile.decisions();
    let index = match rule {
        SelectiveRule::PrimacyEffect => weights
            .iter()
            .position(|&w| w != 0.0)
            .expect("W_n excludes the zero vector"),
        SelectiveRule::RecencyEffect => weights
            .iter()
            .rposition(|&w| w != 0.0)
            .expect("W_n excludes the zero vector"),
        SelectiveRule::FirstDominatingDecision => first_max_index(weights),
        SelectiveRule::FirstDominant => {
            let accumulated: Vec<f64> = (0..decisions.len())
                .map(|i| {
                    (0..decisions.len())
                        .filter(|&j| same_decision(&decisions[j], &decisions[i]))
                        .map(|j| weights[j])
                        .sum()
                })
                .collect();
            first_max_index(&accumulated)
        }
    };
    decisions[index].clone()
}

fn first_max_index(weights: &[f64]) -> usize {
    let max = weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    weights
        .iter()
        .position(|&w| w == max)
        .expect("nonempty weight vector")
}

/// The arithmetic effort function: the plain weight sum.
pub fn arithmetic_effort(profile: &DecisionProfile) -> f64 {
    profile.weight_sum()
}
