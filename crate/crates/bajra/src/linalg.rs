#![allow(clippy::needless_range_loop)] // indexed loops mirror the factorization math

//! Small dense linear algebra: a row-major matrix, Householder least squares
//! and a phase-1 simplex feasibility solver. Everything here is sized for
//! desk-scale problems (a handful of rows, at most a few dozen columns).

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols));
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Householder QR of a tall matrix, kept in factored form for repeated
/// right-hand sides.
#[derive(Clone, Debug)]
pub struct QrFactors {
    /// Packed reflectors below the diagonal, R on and above it.
    qr: Matrix,
    /// Leading scalar of each reflector.
    betas: Vec<f64>,
    rank_ok: bool,
}

impl QrFactors {
    /// Factors `a` (rows >= cols required). `rank_ok` is false when some
    /// diagonal of R is negligible relative to the largest one.
    pub fn new(a: &Matrix) -> QrFactors {
        let m = a.rows;
        let n = a.cols;
        assert!(m >= n, "QR expects at least as many rows as columns");
        let mut qr = a.clone();
        let mut betas = vec![0.0; n];
        for k in 0..n {
            // build reflector for column k
            let mut norm = 0.0f64;
            for i in k..m {
                norm = norm.hypot(qr[(i, k)]);
            }
            if norm == 0.0 {
                betas[k] = 0.0;
                continue;
            }
            let alpha = if qr[(k, k)] > 0.0 { -norm } else { norm };
            let v0 = qr[(k, k)] - alpha;
            for i in (k + 1)..m {
                qr[(i, k)] /= v0;
            }
            betas[k] = -v0 / alpha;
            qr[(k, k)] = alpha;
            // apply to remaining columns
            for j in (k + 1)..n {
                let mut s = qr[(k, j)];
                for i in (k + 1)..m {
                    s += qr[(i, k)] * qr[(i, j)];
                }
                s *= betas[k];
                qr[(k, j)] -= s;
                for i in (k + 1)..m {
                    let vik = qr[(i, k)];
                    qr[(i, j)] -= s * vik;
                }
            }
        }
        let diag_max = (0..n).map(|k| qr[(k, k)].abs()).fold(0.0, f64::max);
        let rank_ok = diag_max > 0.0
            && (0..n).all(|k| qr[(k, k)].abs() > 1e-10 * diag_max.max(1e-300));
        QrFactors { qr, betas, rank_ok }
    }

    pub fn rank_ok(&self) -> bool {
        self.rank_ok
    }

    /// Least-squares solution of `a x = b` for the factored `a`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let m = self.qr.rows;
        let n = self.qr.cols;
        assert_eq!(b.len(), m);
        if !self.rank_ok {
            return Err(Error::RankDeficientSamples);
        }
        let mut y = b.to_vec();
        // apply reflectors
        for k in 0..n {
            if self.betas[k] == 0.0 {
                continue;
            }
            let mut s = y[k];
            for i in (k + 1)..m {
                s += self.qr[(i, k)] * y[i];
            }
            s *= self.betas[k];
            y[k] -= s;
            for i in (k + 1)..m {
                let vik = self.qr[(i, k)];
                y[i] -= s * vik;
            }
        }
        // back substitution on R
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let mut s = y[k];
            for j in (k + 1)..n {
                s -= self.qr[(k, j)] * x[j];
            }
            x[k] = s / self.qr[(k, k)];
        }
        Ok(x)
    }
}

/// Least squares `min ||a x - b||` convenience wrapper.
pub fn least_squares(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    QrFactors::new(a).solve(b)
}

/// Finds `z >= 0` with `a z = b` via a phase-1 simplex with Bland's rule,
/// or reports infeasibility. `tol` bounds the accepted constraint residual.
///
/// Returns `Ok(Some(z))` when feasible, `Ok(None)` when the artificial
/// objective stays positive, and an error when the pivoting stalls.
pub fn feasible_nonneg(a: &Matrix, b: &[f64], tol: f64) -> Result<Option<Vec<f64>>> {
    let m = a.rows;
    let n = a.cols;
    assert_eq!(b.len(), m);

    // Equilibrate rows and flip signs so the right-hand side is nonnegative.
    let mut t = Matrix::zeros(m, n + m);
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        let scale = a
            .row(i)
            .iter()
            .chain(std::iter::once(&b[i]))
            .map(|x| x.abs())
            .fold(0.0, f64::max)
            .max(1e-300);
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[(i, j)] = sign * a[(i, j)] / scale;
        }
        t[(i, n + i)] = 1.0;
        rhs[i] = sign * b[i] / scale;
    }

    // Basis starts as the artificial columns.
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs for minimizing the sum of artificials.
    let mut cost = vec![0.0; n + m];
    let mut objective = 0.0;
    for j in 0..n {
        cost[j] = -(0..m).map(|i| t[(i, j)]).sum::<f64>();
    }
    for i in 0..m {
        objective -= rhs[i];
    }

    let pivot_tol = 1e-11;
    let max_pivots = 200 * (n + m).max(4);
    for _ in 0..max_pivots {
        // Bland: smallest index with a negative reduced cost.
        let entering = (0..n + m).find(|&j| cost[j] < -pivot_tol);
        let Some(e) = entering else {
            // optimal; feasible iff artificials vanished
            if -objective > tol {
                return Ok(None);
            }
            let mut z = vec![0.0; n];
            for (i, &bi) in basis.iter().enumerate() {
                if bi < n {
                    z[bi] = rhs[i].max(0.0);
                }
            }
            return Ok(Some(z));
        };
        // Ratio test, Bland tie-break on the leaving row.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[(i, e)] > pivot_tol {
                let ratio = rhs[i] / t[(i, e)];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-15 || (ratio <= lr + 1e-15 && basis[i] < basis[li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((l, _)) = leave else {
            // Phase-1 objective is bounded below by zero, so an unbounded
            // direction can only be numerical noise.
            return Err(Error::SolverStalled);
        };
        // pivot on (l, e)
        let pv = t[(l, e)];
        for j in 0..n + m {
            t[(l, j)] /= pv;
        }
        rhs[l] /= pv;
        for i in 0..m {
            if i != l {
                let factor = t[(i, e)];
                if factor != 0.0 {
                    for j in 0..n + m {
                        t[(i, j)] -= factor * t[(l, j)];
                    }
                    rhs[i] -= factor * rhs[l];
                }
            }
        }
        let cfactor = cost[e];
        if cfactor != 0.0 {
            for j in 0..n + m {
                cost[j] -= cfactor * t[(l, j)];
            }
            objective -= cfactor * rhs[l];
        }
        basis[l] = e;
    }
    Err(Error::SolverStalled)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr_solves_square_system() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = least_squares(&a, &[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn qr_least_squares_overdetermined() {
        // fit y = 2x + 1 through exact samples
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 1.0], vec![3.0, 1.0]]);
        let x = least_squares(&a, &[3.0, 5.0, 7.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qr_flags_rank_deficiency() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]);
        assert!(matches!(
            least_squares(&a, &[1.0, 2.0, 3.0]),
            Err(Error::RankDeficientSamples)
        ));
    }

    #[test]
    fn feasibility_finds_convex_combination() {
        // Is (2, 1)/something in the cone over {(1,0),(1,1),(1,3)} with unit mass?
        // lambda1*(1,0)+lambda2*(1,1)+lambda3*(1,3) = eta*(2,1) has solutions.
        let a = Matrix::from_rows(&[
            vec![1.0, 1.0, 1.0, -2.0],
            vec![0.0, 1.0, 3.0, -1.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ]);
        let b = vec![0.0, 0.0, 1.0];
        let z = feasible_nonneg(&a, &b, 1e-9).unwrap().unwrap();
        // verify a z = b
        let az = a.mul_vec(&z);
        for (x, y) in az.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!(z.iter().all(|&v| v >= -1e-12));
    }

    #[test]
    fn feasibility_rejects_impossible_system() {
        // lambda1 + lambda2 = 1 and lambda1 + lambda2 = 2 cannot both hold.
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let b = vec![1.0, 2.0];
        assert!(feasible_nonneg(&a, &b, 1e-9).unwrap().is_none());
    }
}
