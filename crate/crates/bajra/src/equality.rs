//! Equality of two generalized means, decided numerically: `B_f = B_g`
//! holds exactly when `g = A o f` for a linear map `A`, so the test fits `A`
//! by least squares over sample images and probes the means and efforts on
//! random profiles. Verdicts are judgments over the probes used, not proofs.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, QrFactors};
use crate::maps::AdmissibleMap;
use crate::means::aggregate;
use crate::numeric::{norm2, relative_discrepancy, Tolerance};
use crate::profiles::{split_signed_weights, DecisionProfile, Point};

/// Fitted linear relation `g ~= A o f` with its worst relative residual.
#[derive(Clone, Debug)]
pub struct LinearFit {
    pub matrix: Matrix,
    pub max_relative_residual: f64,
}

/// Least-squares fit of `A` minimizing `sum_i ||g(x_i) - A f(x_i)||^2`.
///
/// Needs at least `range_dim(f)` samples whose f-images span the range;
/// rank-deficient sample sets are refused rather than silently producing an
/// underdetermined matrix.
pub fn fit_linear_map(
    f: &dyn AdmissibleMap,
    g: &dyn AdmissibleMap,
    samples: &[Point],
) -> Result<LinearFit> {
    let df = f.range_dim();
    let dg = g.range_dim();
    if samples.len() < df {
        return Err(Error::RankDeficientSamples);
    }
    for x in samples {
        if !f.domain().contains(x) || !g.domain().contains(x) {
            return Err(Error::DomainViolation { point: x.clone() });
        }
    }
    let f_rows: Vec<Vec<f64>> = samples.iter().map(|x| f.evaluate(x)).collect();
    let g_rows: Vec<Vec<f64>> = samples.iter().map(|x| g.evaluate(x)).collect();
    let design = Matrix::from_rows(&f_rows);
    let qr = QrFactors::new(&design);
    if !qr.rank_ok() {
        return Err(Error::RankDeficientSamples);
    }

    // each row of A solves the same design against one g-coordinate
    let mut a = Matrix::zeros(dg, df);
    for r in 0..dg {
        let rhs: Vec<f64> = g_rows.iter().map(|row| row[r]).collect();
        let coeffs = qr.solve(&rhs)?;
        for c in 0..df {
            a[(r, c)] = coeffs[c];
        }
    }

    let mut worst = 0.0f64;
    for (fx, gx) in f_rows.iter().zip(&g_rows) {
        let predicted = a.mul_vec(fx);
        let err: f64 = predicted
            .iter()
            .zip(gx)
            .map(|(p, t)| (p - t) * (p - t))
            .sum::<f64>()
            .sqrt();
        worst = worst.max(err / norm2(gx));
    }
    Ok(LinearFit {
        matrix: a,
        max_relative_residual: worst,
    })
}

/// Outcome of the numerical equality test.
#[derive(Clone, Debug)]
pub struct EqualityVerdict {
    /// All three residual gates passed: the maps are consistent with
    /// equality on the probes used.
    pub equal: bool,
    pub linear_map: Option<Matrix>,
    pub max_fit_residual: f64,
    pub max_mean_discrepancy: f64,
    pub max_effort_discrepancy: f64,
}

/// Residual gates of [`test_mean_equality`].
#[derive(Clone, Copy, Debug)]
pub struct EqualityTolerances {
    pub fit: f64,
    pub mean: f64,
    pub effort: f64,
}

impl Default for EqualityTolerances {
    fn default() -> Self {
        // one order above the ray-solver residual to absorb accumulation
        EqualityTolerances {
            fit: 1e-8,
            mean: 1e-8,
            effort: 1e-8,
        }
    }
}

/// Fits the linear relation on `fit_samples` and compares means and efforts
/// over `probes`. Equality of the means forces equality of the efforts, so
/// both discrepancies are reported.
pub fn test_mean_equality(
    f: &dyn AdmissibleMap,
    g: &dyn AdmissibleMap,
    fit_samples: &[Point],
    probes: &[DecisionProfile],
    tol: EqualityTolerances,
) -> Result<EqualityVerdict> {
    let fit = fit_linear_map(f, g, fit_samples)?;
    let mut max_mean = 0.0f64;
    let mut max_effort = 0.0f64;
    for probe in probes {
        let of = aggregate(f, probe)?;
        let og = aggregate(g, probe)?;
        max_mean = max_mean.max(relative_discrepancy(&of.decision, &og.decision));
        max_effort = max_effort.max(relative_discrepancy(&[of.effort], &[og.effort]));
    }
    Ok(EqualityVerdict {
        equal: fit.max_relative_residual <= tol.fit
            && max_mean <= tol.mean
            && max_effort <= tol.effort,
        linear_map: Some(fit.matrix),
        max_fit_residual: fit.max_relative_residual,
        max_mean_discrepancy: max_mean,
        max_effort_discrepancy: max_effort,
    })
}

/// Checks the signed-weight biconditional on one combination: the signed
/// image sum of `f` vanishes exactly when that of `g` does.
///
/// Each side is decided through the split into disjointly supported
/// nonnegative parts and two aggregate calls: the sum vanishes exactly when
/// the positive and negative halves aggregate to the same `(mean, effort)`
/// pair.
pub fn verify_signed_claim(
    f: &dyn AdmissibleMap,
    g: &dyn AdmissibleMap,
    decisions: &[Point],
    signed_weights: &[f64],
    tol: Tolerance,
) -> Result<bool> {
    let lhs = signed_sum_vanishes(f, decisions, signed_weights, tol)?;
    let rhs = signed_sum_vanishes(g, decisions, signed_weights, tol)?;
    Ok(lhs == rhs)
}

fn signed_sum_vanishes(
    map: &dyn AdmissibleMap,
    decisions: &[Point],
    signed_weights: &[f64],
    tol: Tolerance,
) -> Result<bool> {
    if decisions.len() != signed_weights.len() {
        return Err(Error::MismatchedLengths {
            decisions: decisions.len(),
            weights: signed_weights.len(),
        });
    }
    let split = split_signed_weights(signed_weights);
    match (split.positive_is_zero(), split.negative_is_zero()) {
        // identically zero weights: the sum is trivially zero
        (true, true) => Ok(true),
        // a one-signed nonzero combination cannot vanish: the convex hull of
        // the image avoids the origin
        (true, false) | (false, true) => Ok(false),
        (false, false) => {
            let plus = aggregate(
                map,
                &DecisionProfile::new(decisions.to_vec(), split.positive_part)?,
            )?;
            let minus = aggregate(
                map,
                &DecisionProfile::new(decisions.to_vec(), split.negative_part)?,
            )?;
            Ok(tol.all_close(&plus.decision, &minus.decision)
                && tol.close(plus.effort, minus.effort))
        }
    }
}
