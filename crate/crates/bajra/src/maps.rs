//! Admissible generator maps: evaluation, ray solving and admissibility
//! certification.
//!
//! An admissible map `f: D -> X` is injective with an observable, conically
//! convex image, so every vector of `cone(f(D))` is `eta * f(u)` for exactly
//! one pair `(u, eta)` with `eta > 0`. `ray_solve` recovers that pair; it is
//! the extended inverse together with the ray scale.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, QrFactors};
use crate::numeric::{dist2, norm2};
use crate::profiles::Point;
use crate::rootfind::{invert_monotone, RootConfig};

/// Relative residual bound ray solvers must meet: `||eta f(u) - v|| <= RAY_RESIDUAL * ||v||`.
pub const RAY_RESIDUAL: f64 = 1e-10;

/// Number of validation samples used when a ratio map is constructed.
const VALIDATION_SAMPLES: usize = 512;

/// Strictness tolerance for the sampled monotonicity check.
const MONOTONE_TOL: f64 = 1e-12;

/// Description of the decision space `D`.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// Open interval `(lo, hi)`; endpoints may be infinite.
    Interval { lo: f64, hi: f64 },
    /// Open box in `R^d`; bounds may be infinite.
    Box { bounds: Vec<(f64, f64)> },
}

impl Domain {
    pub fn real_line() -> Self {
        Domain::Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn positive_half_line() -> Self {
        Domain::Interval {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn plane() -> Self {
        Domain::Box {
            bounds: vec![
                (f64::NEG_INFINITY, f64::INFINITY),
                (f64::NEG_INFINITY, f64::INFINITY),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Box { bounds } => bounds.len(),
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            Domain::Interval { lo, hi } => p.len() == 1 && *lo < p[0] && p[0] < *hi,
            Domain::Box { bounds } => {
                p.len() == bounds.len()
                    && p.iter()
                        .zip(bounds)
                        .all(|(x, (lo, hi))| *lo < *x && *x < *hi)
            }
        }
    }

    /// Finite per-coordinate window used for sampling and bracket seeding.
    ///
    /// Finite bounds are kept; half-infinite axes get a width-10 window just
    /// inside the finite end, and doubly infinite axes get `(-5, 5)`.
    pub fn sampling_window(&self) -> Vec<(f64, f64)> {
        let clip = |lo: f64, hi: f64| match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo, hi),
            (true, false) => (lo + 0.1, lo + 10.0),
            (false, true) => (hi - 10.0, hi - 0.1),
            (false, false) => (-5.0, 5.0),
        };
        match self {
            Domain::Interval { lo, hi } => vec![clip(*lo, *hi)],
            Domain::Box { bounds } => bounds.iter().map(|&(lo, hi)| clip(lo, hi)).collect(),
        }
    }

    /// The interval endpoints, if this is an interval domain.
    pub fn as_interval(&self) -> Option<(f64, f64)> {
        match self {
            Domain::Interval { lo, hi } => Some((*lo, *hi)),
            Domain::Box { .. } => None,
        }
    }
}

/// A generator map bundling evaluation, a domain description and a ray
/// solver realizing the extended inverse.
pub trait AdmissibleMap: Send + Sync {
    fn domain(&self) -> &Domain;

    /// Dimension of the range space `X`.
    fn range_dim(&self) -> usize;

    /// Evaluates `f` at a domain point. Behaviour outside the domain is
    /// unspecified; callers check membership first.
    fn evaluate(&self, x: &[f64]) -> Vec<f64>;

    /// Solves `eta * f(u) = v` for `v` in `cone(f(D))`, returning `(u, eta)`
    /// with `eta > 0` and relative residual at most [`RAY_RESIDUAL`].
    fn ray_solve(&self, v: &[f64]) -> Result<(Point, f64)>;

    /// Short human-readable description used in reports.
    fn describe(&self) -> String;
}

/// Checks the residual contract of a ray solution.
pub(crate) fn ray_residual_ok(map: &dyn AdmissibleMap, u: &[f64], eta: f64, v: &[f64]) -> bool {
    let image = map.evaluate(u);
    let scaled: Vec<f64> = image.iter().map(|c| eta * c).collect();
    dist2(&scaled, v) <= RAY_RESIDUAL * norm2(v)
}

type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Planar map `x -> (f1(x), f2(x))` on an interval, with `f2` nowhere zero
/// and `f1/f2` strictly monotone. Ray solving inverts the ratio by bracketed
/// monotone root finding.
pub struct RatioMap {
    f1: ScalarFn,
    f2: ScalarFn,
    domain: Domain,
    label: String,
    increasing: bool,
    root_cfg: RootConfig,
}

impl std::fmt::Debug for RatioMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RatioMap")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("increasing", &self.increasing)
            .finish_non_exhaustive()
    }
}

impl RatioMap {
    /// Validates the generator pair by sampling: `f2` must keep one sign and
    /// the ratio must be strictly ordered across 512 interior points.
    pub fn new(
        label: impl Into<String>,
        f1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lo: f64,
        hi: f64,
    ) -> Result<Self> {
        let domain = Domain::Interval { lo, hi };
        let (wlo, whi) = domain.sampling_window()[0];
        let mut prev_ratio: Option<f64> = None;
        let mut direction = 0i8;
        let mut f2_sign = 0i8;
        for k in 0..VALIDATION_SAMPLES {
            let t = (k as f64 + 0.5) / VALIDATION_SAMPLES as f64;
            let x = wlo + t * (whi - wlo);
            let denom = f2(x);
            if !denom.is_finite() || denom == 0.0 {
                return Err(Error::ZeroCrossingInF2);
            }
            let sign = if denom > 0.0 { 1 } else { -1 };
            if f2_sign == 0 {
                f2_sign = sign;
            } else if f2_sign != sign {
                return Err(Error::ZeroCrossingInF2);
            }
            let ratio = f1(x) / denom;
            if !ratio.is_finite() {
                return Err(Error::NonMonotoneRatio);
            }
            if let Some(prev) = prev_ratio {
                let step = ratio - prev;
                if step.abs() <= MONOTONE_TOL {
                    return Err(Error::NonMonotoneRatio);
                }
                let dir = if step > 0.0 { 1 } else { -1 };
                if direction == 0 {
                    direction = dir;
                } else if direction != dir {
                    return Err(Error::NonMonotoneRatio);
                }
            }
            prev_ratio = Some(ratio);
        }
        Ok(RatioMap {
            f1: Box::new(f1),
            f2: Box::new(f2),
            domain,
            label: label.into(),
            increasing: direction >= 0,
            root_cfg: RootConfig::default(),
        })
    }

    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    fn ratio_at(&self, x: f64) -> f64 {
        (self.f1)(x) / (self.f2)(x)
    }

    fn solve_ratio(&self, target: f64, cfg: RootConfig) -> Result<f64> {
        let seed = self.domain.sampling_window()[0];
        let interval = self.domain.as_interval().expect("ratio maps live on intervals");
        invert_monotone(|x| self.ratio_at(x), target, seed, interval, cfg)
    }
}

impl AdmissibleMap for RatioMap {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn range_dim(&self) -> usize {
        2
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), 1);
        vec![(self.f1)(x[0]), (self.f2)(x[0])]
    }

    fn ray_solve(&self, v: &[f64]) -> Result<(Point, f64)> {
        if v.len() != 2 {
            return Err(Error::WrongDimension {
                expected: 2,
                found: v.len(),
            });
        }
        if !v.iter().all(|c| c.is_finite()) || v[1] == 0.0 {
            return Err(Error::OutsideCone);
        }
        let target = v[0] / v[1];
        let mut u = self.solve_ratio(target, self.root_cfg)?;
        let mut eta = v[1] / (self.f2)(u);
        if !eta.is_finite() || eta <= 0.0 {
            return Err(Error::OutsideCone);
        }
        if !ray_residual_ok(self, &[u], eta, v) {
            // polish with a machine-precision pass before giving up
            u = self.solve_ratio(target, RootConfig::machine())?;
            eta = v[1] / (self.f2)(u);
            if !eta.is_finite() || eta <= 0.0 || !ray_residual_ok(self, &[u], eta, v) {
                return Err(Error::ConvergenceFailure);
            }
        }
        Ok((vec![u], eta))
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Outcome of the planar admissibility grid certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Sampling certificate for planar admissibility. A `Fail` verdict carries a
/// witness pair whose images are linearly dependent up to tolerance; a
/// `Pass` certifies the sampled grid only, not the whole domain.
#[derive(Clone, Debug)]
pub struct AdmissibilityCertificate {
    pub verdict: Verdict,
    pub witness: Option<(Point, Point)>,
    pub samples_used: usize,
}

/// Pairwise determinant certificate of planar admissibility over a finite
/// grid. For a continuous map on an interval, admissibility is equivalent
/// to every pair of image vectors being linearly independent.
///
/// Images are normalized to unit length first, so `tol` bounds the sine of
/// the angle between image directions. All determinants above tolerance and
/// of one sign certify the grid. Mixed signs fall back to a direct check of
/// the finite image (pairwise-disjoint rays and origin outside the hull):
/// passing it means the grid alone cannot distinguish the map from an
/// admissible one. Non-finite evaluations are inconclusive, as is a grid
/// whose image hull swallows the origin without any near-dependent pair.
pub fn check_admissibility_2d(
    map: &dyn AdmissibleMap,
    grid: &[Point],
    tol: f64,
) -> Result<AdmissibilityCertificate> {
    if map.range_dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: map.range_dim(),
        });
    }
    let mut points: Vec<Point> = Vec::new();
    for p in grid {
        if !points.iter().any(|q| crate::numeric::same_decision(q, p)) {
            points.push(p.clone());
        }
    }
    if points.len() < 2 {
        return Err(Error::InsufficientGrid);
    }
    let samples_used = points.len();

    let mut dirs: Vec<[f64; 2]> = Vec::with_capacity(points.len());
    for p in &points {
        let img = map.evaluate(p);
        let n = norm2(&img);
        if !img.iter().all(|c| c.is_finite()) || n == 0.0 {
            if n == 0.0 && img.iter().all(|c| c.is_finite()) {
                // the origin itself sits in the image: dependent with anything
                let other = if crate::numeric::same_decision(&points[0], p) {
                    points[1].clone()
                } else {
                    points[0].clone()
                };
                return Ok(AdmissibilityCertificate {
                    verdict: Verdict::Fail,
                    witness: Some((p.clone(), other)),
                    samples_used,
                });
            }
            return Ok(AdmissibilityCertificate {
                verdict: Verdict::Inconclusive,
                witness: None,
                samples_used,
            });
        }
        dirs.push([img[0] / n, img[1] / n]);
    }

    let mut all_positive = true;
    let mut all_negative = true;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let det = dirs[i][0] * dirs[j][1] - dirs[i][1] * dirs[j][0];
            if det.abs() <= tol {
                return Ok(AdmissibilityCertificate {
                    verdict: Verdict::Fail,
                    witness: Some((points[i].clone(), points[j].clone())),
                    samples_used,
                });
            }
            if det > 0.0 {
                all_negative = false;
            } else {
                all_positive = false;
            }
        }
    }
    if all_positive || all_negative || grid_image_admissible(&dirs, tol) {
        return Ok(AdmissibilityCertificate {
            verdict: Verdict::Pass,
            witness: None,
            samples_used,
        });
    }
    // The grid image is provably inadmissible (origin inside its hull), but
    // no single pair witnesses it; the determinant vocabulary cannot say
    // more than "not certified".
    Ok(AdmissibilityCertificate {
        verdict: Verdict::Inconclusive,
        witness: None,
        samples_used,
    })
}

/// Spot check of finite-image admissibility: the grid rays are pairwise
/// disjoint and the convex hull of the (normalized) grid images excludes the
/// origin.
fn grid_image_admissible(dirs: &[[f64; 2]], tol: f64) -> bool {
    for i in 0..dirs.len() {
        for j in (i + 1)..dirs.len() {
            let d = ((dirs[i][0] - dirs[j][0]).powi(2) + (dirs[i][1] - dirs[j][1]).powi(2)).sqrt();
            if d <= tol {
                return false;
            }
        }
    }
    // origin in conv(dirs) iff some simplex combination cancels exactly
    let mut rows = vec![Vec::with_capacity(dirs.len()); 2];
    for dir in dirs {
        rows[0].push(dir[0]);
        rows[1].push(dir[1]);
    }
    rows.push(vec![1.0; dirs.len()]);
    let a = crate::linalg::Matrix::from_rows(&rows);
    match crate::linalg::feasible_nonneg(&a, &[0.0, 0.0, 1.0], tol.max(1e-9)) {
        Ok(Some(_)) => false,
        Ok(None) => true,
        Err(_) => false,
    }
}

/// Uniform grid over an interval domain's sampling window (default size 256).
pub fn default_grid(domain: &Domain, size: usize) -> Vec<Point> {
    let window = domain.sampling_window();
    let size = size.max(2);
    match window.as_slice() {
        [(lo, hi)] => (0..size)
            .map(|k| vec![lo + (hi - lo) * (k as f64 + 0.5) / size as f64])
            .collect(),
        bounds => {
            // axis-aligned diagonal sweep for multi-dimensional domains
            (0..size)
                .map(|k| {
                    let t = (k as f64 + 0.5) / size as f64;
                    bounds.iter().map(|(lo, hi)| lo + (hi - lo) * t).collect()
                })
                .collect()
        }
    }
}

/// Post-composition of an admissible map with a linear map of full column
/// rank. Ray solving pulls vectors back through a least-squares solve and
/// delegates to the inner map.
pub struct LinearlyMappedMap {
    inner: Box<dyn AdmissibleMap>,
    matrix: Matrix,
    qr: QrFactors,
    label: String,
}

impl LinearlyMappedMap {
    pub fn new(inner: Box<dyn AdmissibleMap>, matrix: Matrix) -> Result<Self> {
        if matrix.cols() != inner.range_dim() {
            return Err(Error::MismatchedShapes(format!(
                "linear map expects {} columns, found {}",
                inner.range_dim(),
                matrix.cols()
            )));
        }
        if matrix.rows() < matrix.cols() {
            return Err(Error::SingularLinearMap);
        }
        let qr = QrFactors::new(&matrix);
        if !qr.rank_ok() {
            return Err(Error::SingularLinearMap);
        }
        let label = format!("linear({})", inner.describe());
        Ok(LinearlyMappedMap {
            inner,
            matrix,
            qr,
            label,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

impl AdmissibleMap for LinearlyMappedMap {
    fn domain(&self) -> &Domain {
        self.inner.domain()
    }

    fn range_dim(&self) -> usize {
        self.matrix.rows()
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.mul_vec(&self.inner.evaluate(x))
    }

    fn ray_solve(&self, v: &[f64]) -> Result<(Point, f64)> {
        if v.len() != self.matrix.rows() {
            return Err(Error::WrongDimension {
                expected: self.matrix.rows(),
                found: v.len(),
            });
        }
        let w = self.qr.solve(v).map_err(|_| Error::OutsideCone)?;
        // v must lie in the column space for the pullback to be faithful
        let back = self.matrix.mul_vec(&w);
        if dist2(&back, v) > 1e-8 * norm2(v).max(1e-300) {
            return Err(Error::OutsideCone);
        }
        self.inner.ray_solve(&w)
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}
