//! Concrete closed-form map families: the two-parameter Gini family (both
//! branches), power and quasi-arithmetic means, and the hyperboloid mean.

use crate::error::{Error, Result};
use crate::maps::{AdmissibleMap, Domain, RatioMap};
use crate::numeric::{log_sum_exp, CompensatedSum};
use crate::profiles::{DecisionProfile, Point};

/// Parameters `(p, q)` selecting a member of the Gini family. The diagonal
/// `p = q` selects the logarithmic branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GiniParams {
    pub p: f64,
    pub q: f64,
}

impl GiniParams {
    pub fn new(p: f64, q: f64) -> Self {
        GiniParams { p, q }
    }

    /// Parameter gaps below this route to the logarithmic branch evaluated
    /// at the midpoint: the generic formula loses all precision as `p -> q`.
    pub const DEGENERATE_GAP: f64 = 1e-8;

    pub fn is_degenerate(&self) -> bool {
        (self.p - self.q).abs() < Self::DEGENERATE_GAP
    }
}

/// Weighted power sums of a positive profile, kept in the log domain:
/// `log_phi = ln(sum_i w_i x_i^p)` and `mean_log = psi_p / phi_p`, the
/// `x^p`-weighted average of `ln x_i`.
#[derive(Clone, Copy, Debug)]
pub struct PowerSums {
    pub log_phi: f64,
    pub mean_log: f64,
}

impl PowerSums {
    /// Computes both sums for exponent `p`. Entries with zero weight are
    /// skipped. Callers guarantee `x_i > 0` and at least one positive weight.
    ///
    /// Plain summation is used while `|p ln x_i|` stays below 30; beyond
    /// that everything shifts into the log domain so that large exponents on
    /// spread data cannot overflow.
    pub fn new(p: f64, xs: &[f64], ws: &[f64]) -> PowerSums {
        debug_assert_eq!(xs.len(), ws.len());
        let max_exponent = xs
            .iter()
            .zip(ws)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&x, _)| (p * x.ln()).abs())
            .fold(0.0, f64::max);
        if max_exponent <= 30.0 {
            let mut phi = CompensatedSum::new();
            let mut psi = CompensatedSum::new();
            for (&x, &w) in xs.iter().zip(ws) {
                if w == 0.0 {
                    continue;
                }
                let term = w * x.powf(p);
                phi.add(term);
                psi.add(term * x.ln());
            }
            let phi = phi.value();
            PowerSums {
                log_phi: phi.ln(),
                mean_log: psi.value() / phi,
            }
        } else {
            let terms: Vec<(f64, f64)> = xs
                .iter()
                .zip(ws)
                .filter(|(_, &w)| w > 0.0)
                .map(|(&x, &w)| (w.ln() + p * x.ln(), x.ln()))
                .collect();
            let log_phi = log_sum_exp(&terms.iter().map(|t| t.0).collect::<Vec<_>>());
            let mut mean = CompensatedSum::new();
            for &(t, log_x) in &terms {
                mean.add((t - log_phi).exp() * log_x);
            }
            PowerSums {
                log_phi,
                mean_log: mean.value(),
            }
        }
    }

    /// `phi_p` itself; may overflow for extreme exponents.
    pub fn phi(&self) -> f64 {
        self.log_phi.exp()
    }

    /// `psi_p = phi_p * mean_log`; may overflow for extreme exponents.
    pub fn psi(&self) -> f64 {
        self.phi() * self.mean_log
    }
}

fn positive_scalars(profile: &DecisionProfile) -> Result<Vec<f64>> {
    let xs = profile.scalar_decisions()?;
    for &x in &xs {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::NonPositiveDecision(x));
        }
    }
    Ok(xs)
}

/// Gini mean `G_{p,q}`: `(phi_p / phi_q)^(1/(p-q))` off the diagonal and
/// `exp(psi_p / phi_p)` on it. Symmetric in `(p, q)`.
pub fn gini_mean(params: GiniParams, profile: &DecisionProfile) -> Result<f64> {
    let xs = positive_scalars(profile)?;
    let ws = profile.weights();
    if params.is_degenerate() {
        let mid = 0.5 * (params.p + params.q);
        let sums = PowerSums::new(mid, &xs, ws);
        Ok(sums.mean_log.exp())
    } else {
        let sp = PowerSums::new(params.p, &xs, ws);
        let sq = PowerSums::new(params.q, &xs, ws);
        Ok(((sp.log_phi - sq.log_phi) / (params.p - params.q)).exp())
    }
}

/// Gini effort `gamma_{p,q}`: `phi_q^(p/(p-q)) / phi_p^(q/(p-q))` off the
/// diagonal and `phi_p exp(-p psi_p / phi_p)` on it. Symmetric in `(p, q)`.
pub fn gini_effort(params: GiniParams, profile: &DecisionProfile) -> Result<f64> {
    let xs = positive_scalars(profile)?;
    let ws = profile.weights();
    if params.is_degenerate() {
        let mid = 0.5 * (params.p + params.q);
        let sums = PowerSums::new(mid, &xs, ws);
        Ok((sums.log_phi - mid * sums.mean_log).exp())
    } else {
        let sp = PowerSums::new(params.p, &xs, ws);
        let sq = PowerSums::new(params.q, &xs, ws);
        Ok(((params.p * sq.log_phi - params.q * sp.log_phi) / (params.p - params.q)).exp())
    }
}

/// The generator pair behind `G_{p,q}` as a ratio map on `(0, inf)`:
/// `(x^p, x^q)` off the diagonal, `(x^p ln x, x^p)` on it. This is the
/// aggregation route independent of the closed forms above.
///
/// Construction can fail for extreme parameters whose powers overflow on
/// the sampling window; the closed forms keep working there.
pub fn gini_map(params: GiniParams) -> Result<RatioMap> {
    let label = format!("gini:{},{}", params.p, params.q);
    if params.is_degenerate() {
        let mid = 0.5 * (params.p + params.q);
        RatioMap::new(
            label,
            move |x: f64| x.powf(mid) * x.ln(),
            move |x: f64| x.powf(mid),
            0.0,
            f64::INFINITY,
        )
    } else {
        let (p, q) = (params.p, params.q);
        RatioMap::new(
            label,
            move |x: f64| x.powf(p),
            move |x: f64| x.powf(q),
            0.0,
            f64::INFINITY,
        )
    }
}

/// Power-mean map: `power:p` is `gini:p,0` (geometric mean at `p = 0`).
pub fn power_map(p: f64) -> Result<RatioMap> {
    gini_map(GiniParams::new(p, 0.0))
}

/// Quasi-arithmetic map with generator `g`: the ratio map `(g, 1)`. Its mean
/// is the weighted quasi-arithmetic mean and its effort is exactly the
/// weight sum.
pub fn quasi_arithmetic_map(
    label: impl Into<String>,
    g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    lo: f64,
    hi: f64,
) -> Result<RatioMap> {
    RatioMap::new(label, g, |_| 1.0, lo, hi)
}

/// The hyperboloid parametrization `f(x, y) = (x, y, sqrt(1 + x^2 + y^2))`
/// on `D = R^2`, with a closed-form ray solver.
pub struct HyperboloidMap {
    domain: Domain,
}

impl HyperboloidMap {
    pub fn new() -> Self {
        HyperboloidMap {
            domain: Domain::plane(),
        }
    }
}

impl Default for HyperboloidMap {
    fn default() -> Self {
        Self::new()
    }
}

/// Builder matching the registry name `hyperboloid`.
pub fn hyperboloid_map() -> HyperboloidMap {
    HyperboloidMap::new()
}

impl AdmissibleMap for HyperboloidMap {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn range_dim(&self) -> usize {
        3
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), 2);
        vec![x[0], x[1], (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt()]
    }

    fn ray_solve(&self, v: &[f64]) -> Result<(Point, f64)> {
        if v.len() != 3 {
            return Err(Error::WrongDimension {
                expected: 3,
                found: v.len(),
            });
        }
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::OutsideCone);
        }
        let delta = v[2] * v[2] - v[0] * v[0] - v[1] * v[1];
        if delta <= 0.0 || v[2] <= 0.0 {
            return Err(Error::OutsideCone);
        }
        let eta = delta.sqrt();
        Ok((vec![v[0] / eta, v[1] / eta], eta))
    }

    fn describe(&self) -> String {
        "hyperboloid".into()
    }
}
