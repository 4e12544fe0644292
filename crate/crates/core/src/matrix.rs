//! Dense complex matrices and the global statistics `D1`, `D2`.
//!
//! The quadratic statistic is built from the operator
//! `B = -(1/n) P_par + 1/(n(n-1)) P_m`, where `P_par` projects onto matrices
//! of the form `x 1^T + 1 y^T` (row- and column-constant parts, including the
//! all-ones direction) and `P_m = I - P_par` onto matrices with vanishing row
//! and column sums. Both projections are applied through row and column sums
//! in `O(n^2)`; the `n^2 x n^2` operator is never formed.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall {
                what: "matrix",
                n,
                min: 1,
            });
        }
        if data.len() != n * n {
            return Err(Error::ShapeMismatch {
                len: data.len(),
                expected: n * n,
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::new(n, data)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let data = rows
            .iter()
            .flatten()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        Self::new(n, data)
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| Complex64::new(0.0, 0.0))
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| Complex64::new(1.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn diag(d: &[Complex64]) -> Self {
        Self::from_fn(d.len(), |i, j| {
            if i == j {
                d[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
        }
    }

    /// `J + z W`, the matrix whose permanent defines `P_n(z)`.
    pub fn shifted_by_ones(&self, z: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&w| 1.0 + z * w).collect(),
        }
    }

    /// `self + c J`.
    pub fn plus_constant(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&w| w + c).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), |a, b| self[(rows[a], cols[b])])
    }

    pub fn sum(&self) -> Complex64 {
        self.data.iter().sum()
    }

    pub fn row_sums(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); self.n];
        for i in 0..self.n {
            for (cj, &w) in c.iter_mut().zip(self.row(i)) {
                *cj += w;
            }
        }
        c
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// `D1(W) = (1/n) sum_ij W_ij`.
pub fn d1(w: &ComplexMatrix) -> Complex64 {
    w.sum() / w.n() as f64
}

/// Projection onto the span of row-constant and column-constant matrices:
/// `(P_par W)_ij = r_i/n + c_j/n - s/n^2`.
pub fn project_parallel(w: &ComplexMatrix) -> ComplexMatrix {
    let n = w.n() as f64;
    let r = w.row_sums();
    let c = w.col_sums();
    let s = w.sum();
    ComplexMatrix::from_fn(w.n(), |i, j| r[i] / n + c[j] / n - s / (n * n))
}

/// Projection onto matrices with zero row and column sums.
pub fn project_mixed(w: &ComplexMatrix) -> ComplexMatrix {
    let par = project_parallel(w);
    w.combine(Complex64::new(1.0, 0.0), &par, Complex64::new(-1.0, 0.0))
}

fn require_n2(w: &ComplexMatrix, what: &'static str) -> Result<()> {
    if w.n() < 2 {
        return Err(Error::DimensionTooSmall {
            what,
            n: w.n(),
            min: 2,
        });
    }
    Ok(())
}

/// `B vec(W)` reshaped, with eigenvalue `-1/n` on the parallel part and
/// `1/(n(n-1))` on the mixed part.
pub fn apply_b(w: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_n2(w, "apply_B")?;
    let n = w.n() as f64;
    let par = project_parallel(w);
    let lam_par = -1.0 / n;
    let lam_m = 1.0 / (n * (n - 1.0));
    // B W = lam_par P W + lam_m (W - P W)
    Ok(ComplexMatrix::from_fn(w.n(), |i, j| {
        let p = par[(i, j)];
        lam_par * p + lam_m * (w[(i, j)] - p)
    }))
}

/// `D2(W) = w^T B w` (bilinear, no conjugation).
pub fn d2(w: &ComplexMatrix) -> Result<Complex64> {
    let bw = apply_b(w)?;
    Ok(w
        .entries()
        .iter()
        .zip(bw.entries())
        .map(|(&a, &b)| a * b)
        .sum())
}
