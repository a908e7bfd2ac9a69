//! Shared numeric helpers: comparison tolerances, compensated summation and
//! a max-shifted log-sum-exp.

/// Relative/absolute tolerance pair used for approximate comparisons.
///
/// Two scalars compare equal when `|a - b| <= max(absolute, relative * max(|a|, |b|))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl Tolerance {
    /// Decision-space tolerance used uniformly by the property checks:
    /// relative 1e-9 with an absolute floor of 1e-12.
    pub const DECISION: Tolerance = Tolerance {
        relative: 1e-9,
        absolute: 1e-12,
    };

    pub const fn new(relative: f64, absolute: f64) -> Self {
        Tolerance { relative, absolute }
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        if a == b {
            return true;
        }
        if !a.is_finite() || !b.is_finite() {
            return false;
        }
        (a - b).abs() <= self.absolute.max(self.relative * a.abs().max(b.abs()))
    }

    pub fn all_close(&self, a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.close(*x, *y))
    }
}

/// Largest componentwise discrepancy of `a` and `b` relative to their scale,
/// `max_i |a_i - b_i| / max(1, |a_i|, |b_i|)`. Infinite on shape mismatch.
pub fn relative_discrepancy(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / 1.0_f64.max(x.abs()).max(y.abs()))
        .fold(0.0, f64::max)
}

/// Neumaier-compensated running sum.
///
/// Keeps a separate correction term so that adding many terms of mixed
/// magnitude loses almost no precision.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    correction: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.correction += (self.sum - t) + value;
        } else {
            self.correction += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.correction
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// `ln(sum(exp(t_i)))` computed with a max shift; `-inf` for an empty slice.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let mut acc = CompensatedSum::new();
    for &t in terms {
        acc.add((t - m).exp());
    }
    m + acc.value().ln()
}

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Componentwise `a - b` Euclidean distance.
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Exact bitwise equality of decision points, the equality notion used for
/// reduction and duplicate detection. No tolerance is involved.
pub fn same_decision(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}
