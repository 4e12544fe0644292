//! Exact permanents.
//!
//! [`permanent_ryser`] evaluates Ryser's formula in the Nijenhuis-Wilf form
//! `per(A) = 2 (-1)^{n-1} sum_{S in [n-1]} (-1)^{|S|} prod_i (x_i + sum_{j in S} A_ij)`
//! with `x_i = A_{i,n-1} - sum_j A_ij / 2`, visiting subsets in Gray-code
//! order so each step adds or removes a single column from the `n` running
//! row sums: `O(2^{n-1} n)` work.

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Largest dimension accepted by [`permanent_ryser`].
pub const RYSER_MAX_N: usize = 26;
/// Largest dimension accepted by [`permanent_naive`].
pub const NAIVE_MAX_N: usize = 9;
/// Largest order accepted by [`subpermanent_coeff`].
pub const SUBPERM_MAX_K: usize = 5;
/// Default work budget `C(n,k)^2 k 2^k` for [`subpermanent_coeff`].
pub const SUBPERM_BUDGET: u128 = 4_000_000_000;

pub fn permanent_ryser(a: &ComplexMatrix) -> Result<Complex64> {
    permanent_ryser_bounded(a, RYSER_MAX_N)
}

pub fn permanent_ryser_bounded(a: &ComplexMatrix, max_n: usize) -> Result<Complex64> {
    let n = a.n();
    if n > max_n || n > 62 {
        return Err(Error::DimensionExceedsGuard {
            what: "Ryser permanent",
            n,
            limit: max_n.min(62),
        });
    }
    Ok(ryser_unchecked(a))
}

fn ryser_unchecked(a: &ComplexMatrix) -> Complex64 {
    let n = a.n();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // centred start x_i = A_{i,n-1} - sum_j A_ij / 2, so running sums stay
    // near half-sums and only the first n-1 columns are toggled
    let mut row_sums: Vec<Complex64> = (0..n)
        .map(|i| a[(i, n - 1)] - 0.5 * (0..n).map(|j| a[(i, j)]).sum::<Complex64>())
        .collect();
    let mut total = row_sums.iter().product::<Complex64>();
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << (n - 1)) {
        let j = k.trailing_zeros() as usize;
        let bit = 1u64 << j;
        gray ^= bit;
        if gray & bit != 0 {
            for (i, r) in row_sums.iter_mut().enumerate() {
                *r += a[(i, j)];
            }
        } else {
            for (i, r) in row_sums.iter_mut().enumerate() {
                *r -= a[(i, j)];
            }
        }
        let prod = row_sums.iter().fold(Complex64::new(1.0, 0.0), |p, &r| p * r);
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    let sign = if n % 2 == 1 { 2.0 } else { -2.0 };
    sign * total
}

/// Sum over all `n!` permutations. Test oracle only.
pub fn permanent_naive(a: &ComplexMatrix) -> Result<Complex64> {
    let n = a.n();
    if n > NAIVE_MAX_N {
        return Err(Error::DimensionExceedsGuard {
            what: "naive permanent",
            n,
            limit: NAIVE_MAX_N,
        });
    }
    Ok((0..n)
        .permutations(n)
        .map(|sigma| {
            sigma
                .iter()
                .enumerate()
                .fold(Complex64::new(1.0, 0.0), |p, (i, &j)| p * a[(i, j)])
        })
        .sum())
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `g_k = ((n-k)!/n!) sum_{|I|=|J|=k} per(W_{I,J})`, the `z^k` coefficient of
/// `per(J + zW)/n!`.
pub fn subpermanent_coeff(w: &ComplexMatrix, k: usize) -> Result<Complex64> {
    subpermanent_coeff_budgeted(w, k, SUBPERM_BUDGET)
}

pub fn subpermanent_coeff_budgeted(w: &ComplexMatrix, k: usize, budget: u128) -> Result<Complex64> {
    let n = w.n();
    if k > SUBPERM_MAX_K {
        return Err(Error::DimensionExceedsGuard {
            what: "subpermanent order",
            n: k,
            limit: SUBPERM_MAX_K,
        });
    }
    if k > n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if k == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let c = binomial(n, k);
    let needed = c * c * k as u128 * (1u128 << k);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let col_sets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for rows in (0..n).combinations(k) {
        for cols in &col_sets {
            total += ryser_unchecked(&w.submatrix(&rows, cols));
        }
    }
    // (n-k)!/n! = 1 / (n (n-1) ... (n-k+1))
    let falling: f64 = (0..k).map(|i| (n - i) as f64).product();
    Ok(total / falling)
}
