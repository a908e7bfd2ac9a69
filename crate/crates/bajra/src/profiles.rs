//! Weighted decision profiles and the axiom-level normalizations.
//!
//! A profile is a pair `(x, lambda)` of `n` decisions with `n` nonnegative
//! weights, at least one of them positive. Decisions are points of a real
//! interval or of `R^d`; scalars are stored as one-dimensional points.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::numeric::same_decision;

/// A decision point. Scalar decisions have length 1.
pub type Point = Vec<f64>;

/// Validated weighted decision profile.
///
/// Immutable after construction; entries keep the order they were given in.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionProfile {
    decisions: Vec<Point>,
    weights: Vec<f64>,
}

impl DecisionProfile {
    /// Validates and stores a profile.
    ///
    /// Weights must be finite and nonnegative with at least one positive
    /// entry; decision points must share one dimension.
    pub fn new(decisions: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if decisions.is_empty() && weights.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if decisions.len() != weights.len() {
            return Err(Error::MismatchedLengths {
                decisions: decisions.len(),
                weights: weights.len(),
            });
        }
        let dim = decisions[0].len();
        if dim == 0 {
            return Err(Error::InconsistentDimensions {
                expected: 1,
                found: 0,
                index: 0,
            });
        }
        for (index, d) in decisions.iter().enumerate() {
            if d.len() != dim {
                return Err(Error::InconsistentDimensions {
                    expected: dim,
                    found: d.len(),
                    index,
                });
            }
        }
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { index, value: w });
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { index, value: w });
            }
        }
        if weights.iter().all(|&w| w == 0.0) {
            return Err(Error::ZeroWeightVector);
        }
        Ok(DecisionProfile { decisions, weights })
    }

    /// Profile over scalar decisions.
    pub fn from_scalars(xs: &[f64], ws: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| vec![x]).collect(), ws.to_vec())
    }

    pub fn decisions(&self) -> &[Point] {
        &self.decisions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    /// A valid profile is never empty.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimension of the decision points.
    pub fn dim(&self) -> usize {
        self.decisions[0].len()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.decisions.iter().zip(self.weights.iter().copied())
    }

    /// Scalar decisions, or an error if the points are not one-dimensional.
    pub fn scalar_decisions(&self) -> Result<Vec<f64>> {
        if self.dim() != 1 {
            return Err(Error::WrongDimension {
                expected: 1,
                found: self.dim(),
            });
        }
        Ok(self.decisions.iter().map(|d| d[0]).collect())
    }

    /// Drops zero-weight entries and merges runs of bitwise-equal decisions,
    /// summing their weights into the first occurrence. Equality is exact:
    /// approximately equal decisions are deliberately not merged.
    ///
    /// The result is value-equivalent to the original under every
    /// decision-making and effort function.
    pub fn normalize(&self) -> DecisionProfile {
        let mut decisions: Vec<Point> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (d, w) in self.entries() {
            if w == 0.0 {
                continue;
            }
            match decisions.iter().position(|seen| same_decision(seen, d)) {
                Some(i) => weights[i] += w,
                None => {
                    decisions.push(d.clone());
                    weights.push(w);
                }
            }
        }
        // Invariants hold: the original is in W_n, so something survives.
        DecisionProfile { decisions, weights }
    }

    /// New profile with one `(decision, weight)` entry appended.
    pub fn append(&self, decision: Point, weight: f64) -> Result<Self> {
        let mut decisions = self.decisions.clone();
        let mut weights = self.weights.clone();
        decisions.push(decision);
        weights.push(weight);
        DecisionProfile::new(decisions, weights)
    }

    /// Concatenation of two profiles over the same decision space.
    pub fn concat(&self, other: &DecisionProfile) -> Result<Self> {
        let mut decisions = self.decisions.clone();
        let mut weights = self.weights.clone();
        decisions.extend(other.decisions.iter().cloned());
        weights.extend_from_slice(&other.weights);
        DecisionProfile::new(decisions, weights)
    }

    /// Same decisions with every weight scaled by `t > 0`.
    pub fn scale_weights(&self, t: f64) -> Result<Self> {
        DecisionProfile::new(
            self.decisions.clone(),
            self.weights.iter().map(|w| w * t).collect(),
        )
    }

    /// Entries reordered by `perm` (a permutation of `0..n`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::MismatchedShapes(format!(
                "permutation length {} vs profile length {}",
                perm.len(),
                self.len()
            )));
        }
        DecisionProfile::new(
            perm.iter().map(|&i| self.decisions[i].clone()).collect(),
            perm.iter().map(|&i| self.weights[i]).collect(),
        )
    }

    /// Parses the JSON profile schema
    /// `{"decisions": [...], "weights": [...]}` where each decision is a
    /// number or an array of numbers.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: ProfileJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let decisions = raw.decisions.into_iter().map(PointJson::into_point).collect();
        DecisionProfile::new(decisions, raw.weights)
    }
}

#[derive(Deserialize)]
struct ProfileJson {
    decisions: Vec<PointJson>,
    weights: Vec<f64>,
}

/// A decision in JSON form: a bare number or an array of coordinates.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum PointJson {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl PointJson {
    pub(crate) fn into_point(self) -> Point {
        match self {
            PointJson::Scalar(x) => vec![x],
            PointJson::Vector(v) => v,
        }
    }
}

/// Split of a signed weight vector into disjointly supported nonnegative
/// parts with `original = positive_part - negative_part`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedWeightSplit {
    pub positive_part: Vec<f64>,
    pub negative_part: Vec<f64>,
}

impl SignedWeightSplit {
    pub fn positive_is_zero(&self) -> bool {
        self.positive_part.iter().all(|&w| w == 0.0)
    }

    pub fn negative_is_zero(&self) -> bool {
        self.negative_part.iter().all(|&w| w == 0.0)
    }
}

/// Componentwise `(max(0, w_i), max(0, -w_i))`.
pub fn split_signed_weights(weights: &[f64]) -> SignedWeightSplit {
    SignedWeightSplit {
        positive_part: weights.iter().map(|&w| if w > 0.0 { w } else { 0.0 }).collect(),
        negative_part: weights.iter().map(|&w| if w < 0.0 { -w } else { 0.0 }).collect(),
    }
}
