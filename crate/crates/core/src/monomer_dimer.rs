//! Monomer-dimer model on `L(K_{n,n})` and its reweightings.

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{line_graph_knn, WeightVector};
use crate::hardcore::hardcore_z;
use crate::matrix::ComplexMatrix;

/// Largest `n` accepted by the monomer-dimer reweightings.
pub const MONOMER_DIMER_MAX_N: usize = 4;
/// Largest `n` and `m` accepted by [`catalan_weighted_count`].
pub const CATALAN_MAX: usize = 4;

fn guard(n: usize) -> Result<()> {
    if n > MONOMER_DIMER_MAX_N {
        return Err(Error::DimensionExceedsGuard {
            what: "monomer-dimer enumeration",
            n,
            limit: MONOMER_DIMER_MAX_N,
        });
    }
    Ok(())
}

/// `(Z, L1, L2)` at fugacities `x = zW` on `L(K_{n,n})`, with
/// `L1 = sum x`, `L2 = -sum x^2 / 2 - sum_{adjacent pairs} x x'`.
fn pieces(w: &ComplexMatrix, z: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
    let n = w.n();
    guard(n)?;
    let g = line_graph_knn(n);
    let x: Vec<Complex64> = w.entries().iter().map(|&e| z * e).collect();
    let zval = hardcore_z(&g, &WeightVector::new(x.clone())?)?;
    let l1: Complex64 = x.iter().sum();
    let squares: Complex64 = x.iter().map(|v| v * v).sum();
    let adjacent: Complex64 = g.edges().iter().map(|&(a, b)| x[a] * x[b]).sum();
    Ok((zval, l1, -0.5 * squares - adjacent))
}

/// `Z_{L(K_{n,n})}(zW) exp(-L1(zW) - L2(zW))`.
pub fn monomer_dimer_x2(w: &ComplexMatrix, z: Complex64) -> Result<Complex64> {
    let (zval, l1, l2) = pieces(w, z)?;
    Ok(zval * (-l1 - l2).exp())
}

/// `Z_{L(K_{n,n})}(zW) exp(-L1(zW))`.
pub fn monomer_dimer_x1(w: &ComplexMatrix, z: Complex64) -> Result<Complex64> {
    let (zval, l1, _) = pieces(w, z)?;
    Ok(zval * (-l1).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalanCount {
    pub lhs: u64,
    pub rhs: u64,
}

fn catalan(m: u64) -> u64 {
    // C(2m, m) / (m + 1)
    let mut c = 1u64;
    for i in 0..m {
        c = c * (2 * m - i) / (i + 1);
    }
    c / (m + 1)
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Sum over connected edge sets `U` of `K_{n,n}` with `|U| = m` containing
/// `(0, 0)` of `prod_i (r_i - 1)! prod_j (c_j - 1)!` over occupied rows and
/// columns, against `Cat_m n^{m-1}`.
pub fn catalan_weighted_count(n: usize, m: usize) -> Result<CatalanCount> {
    if n > CATALAN_MAX || m > CATALAN_MAX || n == 0 || m == 0 {
        return Err(Error::DimensionExceedsGuard {
            what: "Catalan enumeration",
            n: n.max(m),
            limit: CATALAN_MAX,
        });
    }
    let g = line_graph_knn(n);
    let mut lhs = 0u64;
    for rest in (1..n * n).combinations(m - 1) {
        let mut set = vec![0usize];
        set.extend(rest);
        if !g.induced(&set).is_connected() {
            continue;
        }
        let mut rows = vec![0usize; n];
        let mut cols = vec![0usize; n];
        for &e in &set {
            rows[e / n] += 1;
            cols[e % n] += 1;
        }
        let weight: u64 = rows
            .iter()
            .chain(cols.iter())
            .filter(|&&r| r > 0)
            .map(|&r| factorial(r - 1))
            .product();
        lhs += weight;
    }
    Ok(CatalanCount {
        lhs,
        rhs: catalan(m as u64) * (n as u64).pow(m as u32 - 1),
    })
}
