//! The generalized Bajraktarević mean and its effort function, delegation
//! and casuativity.
//!
//! For an admissible map `f`, the aggregated decision is the extended
//! inverse of the weighted image sum and the aggregated effort is the scale
//! of that sum along its ray:
//!
//! ```text
//! eta * f(u) = sum_k lambda_k f(x_k),   u = B_f(x, lambda),  eta = beta_f(x, lambda)
//! ```
//!
//! The pair `(u, eta)` exists and is unique because the image is observable
//! and conically convex; everything downstream (delegation, casuativity,
//! synergy, convexity) rides on that single identity.

use crate::error::{Error, Result};
use crate::maps::AdmissibleMap;
use crate::numeric::{CompensatedSum, Tolerance};
use crate::profiles::{DecisionProfile, Point};

/// The unique `(decision, effort)` pair aggregating a profile.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregationOutcome {
    pub decision: Point,
    pub effort: f64,
}

/// Weighted image sum `sum_k lambda_k f(x_k)`, compensated per coordinate.
/// Zero-weight entries are skipped after the domain check, so elimination
/// holds bit for bit.
pub(crate) fn image_sum(map: &dyn AdmissibleMap, profile: &DecisionProfile) -> Result<Vec<f64>> {
    let mut acc = vec![CompensatedSum::new(); map.range_dim()];
    for (x, w) in profile.entries() {
        if !map.domain().contains(x) {
            return Err(Error::DomainViolation { point: x.clone() });
        }
        if w == 0.0 {
            continue;
        }
        let image = map.evaluate(x);
        debug_assert_eq!(image.len(), map.range_dim());
        for (slot, value) in acc.iter_mut().zip(&image) {
            slot.add(w * value);
        }
    }
    Ok(acc.iter().map(|s| s.value()).collect())
}

/// Aggregates a profile: `B_f` and `beta_f` in one call.
pub fn aggregate(map: &dyn AdmissibleMap, profile: &DecisionProfile) -> Result<AggregationOutcome> {
    let sum = image_sum(map, profile)?;
    let (decision, effort) = map.ray_solve(&sum)?;
    Ok(AggregationOutcome { decision, effort })
}

/// Aggregates each group to its `(decision, effort)` pair, then aggregates
/// the pairs. Delegativity makes this equal to aggregating the flattened
/// concatenation of the groups.
pub fn aggregate_with_delegation(
    map: &dyn AdmissibleMap,
    groups: &[DecisionProfile],
) -> Result<AggregationOutcome> {
    if groups.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let mut decisions = Vec::with_capacity(groups.len());
    let mut efforts = Vec::with_capacity(groups.len());
    for group in groups {
        let outcome = aggregate(map, group)?;
        decisions.push(outcome.decision);
        efforts.push(outcome.effort);
    }
    let delegates = DecisionProfile::new(decisions, efforts)?;
    aggregate(map, &delegates)
}

/// Matrix form of delegation: aggregates `(x, Lambda t)` directly and through
/// the per-column delegates `(B_f(x, lambda^(j)), beta_f(x, lambda^(j)))`,
/// asserts the two routes agree within `tol`, and returns the direct result.
pub fn delegate_matrix(
    map: &dyn AdmissibleMap,
    decisions: &[Point],
    weight_columns: &[Vec<f64>],
    t: &[f64],
    tol: Tolerance,
) -> Result<AggregationOutcome> {
    if weight_columns.is_empty() {
        return Err(Error::MismatchedShapes("no weight columns".into()));
    }
    if t.len() != weight_columns.len() {
        return Err(Error::MismatchedShapes(format!(
            "{} weight columns but {} outer weights",
            weight_columns.len(),
            t.len()
        )));
    }
    for column in weight_columns {
        if column.len() != decisions.len() {
            return Err(Error::MismatchedShapes(format!(
                "weight column of length {} over {} decisions",
                column.len(),
                decisions.len()
            )));
        }
    }

    // combined weights Lambda t
    let n = decisions.len();
    let mut combined = vec![0.0; n];
    for (column, &tj) in weight_columns.iter().zip(t) {
        for (slot, &w) in combined.iter_mut().zip(column) {
            *slot += tj * w;
        }
    }
    let direct = aggregate(map, &DecisionProfile::new(decisions.to_vec(), combined)?)?;

    // delegated route: y_j = B_f(x, lambda^(j)), mu_j = beta_f(x, lambda^(j))
    let mut delegate_decisions = Vec::with_capacity(weight_columns.len());
    let mut delegate_weights = Vec::with_capacity(weight_columns.len());
    for (column, &tj) in weight_columns.iter().zip(t) {
        let outcome = aggregate(
            map,
            &DecisionProfile::new(decisions.to_vec(), column.clone())?,
        )?;
        delegate_decisions.push(outcome.decision);
        delegate_weights.push(tj * outcome.effort);
    }
    let delegated = aggregate(
        map,
        &DecisionProfile::new(delegate_decisions, delegate_weights)?,
    )?;

    let decision_gap = direct
        .decision
        .iter()
        .zip(&delegated.decision)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if !tol.all_close(&direct.decision, &delegated.decision)
        || !tol.close(direct.effort, delegated.effort)
    {
        let effort_gap = (direct.effort - delegated.effort).abs();
        return Err(Error::DelegationMismatch {
            discrepancy: decision_gap.max(effort_gap),
        });
    }
    Ok(direct)
}

/// Report of one casuativity probe: appending `(y, mu)` with `mu > 0` leaves
/// the mean unchanged exactly when `y` already equals the mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CasuativityReport {
    pub mean_unchanged: bool,
    pub y_equals_mean: bool,
}

impl CasuativityReport {
    /// Casuativity asserts the two flags always coincide.
    pub fn consistent(&self) -> bool {
        self.mean_unchanged == self.y_equals_mean
    }
}

/// Evaluates both sides of the casuativity equivalence for one `(y, mu)`.
pub fn check_casuativity(
    map: &dyn AdmissibleMap,
    profile: &DecisionProfile,
    y: &[f64],
    mu: f64,
    tol: Tolerance,
) -> Result<CasuativityReport> {
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::NonPositiveWeight(mu));
    }
    if !map.domain().contains(y) {
        return Err(Error::DomainViolation { point: y.to_vec() });
    }
    let base = aggregate(map, profile)?;
    let extended = aggregate(map, &profile.append(y.to_vec(), mu)?)?;
    Ok(CasuativityReport {
        mean_unchanged: tol.all_close(&base.decision, &extended.decision),
        y_equals_mean: tol.all_close(&base.decision, y),
    })
}
