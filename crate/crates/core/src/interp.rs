//! Coefficient recovery by evaluation on a circle and inverse DFT.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::permanent::permanent_ryser;
use crate::poly::PolynomialCoefficients;

/// Largest dimension accepted by [`poly_from_matrix`].
pub const INTERP_MAX_N: usize = 20;
/// Relative residual above which interpolation is reported as ill-conditioned.
pub const INTERP_RESIDUAL_THRESHOLD: f64 = 1e-6;

/// Recovers the coefficients of a polynomial of degree at most `degree` from
/// its values at `degree + 1` equispaced nodes on `|z| = radius`, then
/// re-evaluates at two offset nodes and reports a residual relative to the
/// largest sampled magnitude.
pub fn interpolate_on_circle<F>(
    degree: usize,
    radius: f64,
    f: F,
) -> Result<(PolynomialCoefficients, f64)>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "interpolation radius must be positive, got {radius}"
        )));
    }
    let m = degree + 1;
    let node = |j: f64| Complex64::from_polar(radius, 2.0 * PI * j / m as f64);
    let values: Vec<Complex64> = (0..m)
        .into_par_iter()
        .map(|j| f(node(j as f64)))
        .collect::<Result<_>>()?;

    let mut coeffs = Vec::with_capacity(m);
    for k in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let phase = -2.0 * PI * ((j * k) % m) as f64 / m as f64;
            acc += v * Complex64::from_polar(1.0, phase);
        }
        coeffs.push(acc / (m as f64 * radius.powi(k as i32)));
    }
    let poly = PolynomialCoefficients::new(coeffs)?;

    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    let mut residual: f64 = 0.0;
    for j in [0.5, m as f64 - 0.5] {
        let z = node(j);
        residual = residual.max((poly.eval(z) - f(z)?).norm() / scale);
    }
    Ok((poly, residual))
}

/// Coefficients `g_0..g_n` of `P_n(z) = per(J + zW)/n!` on the unit circle.
pub fn poly_from_matrix(w: &ComplexMatrix) -> Result<PolynomialCoefficients> {
    poly_from_matrix_with_radius(w, 1.0)
}

pub fn poly_from_matrix_with_radius(w: &ComplexMatrix, radius: f64) -> Result<PolynomialCoefficients> {
    let n = w.n();
    if n > INTERP_MAX_N {
        return Err(Error::DimensionExceedsGuard {
            what: "coefficient interpolation",
            n,
            limit: INTERP_MAX_N,
        });
    }
    let n_fact: f64 = (1..=n).map(|i| i as f64).product();
    let (poly, residual) = interpolate_on_circle(n, radius, |z| {
        Ok(permanent_ryser(&w.shifted_by_ones(z))? / n_fact)
    })?;
    if residual > INTERP_RESIDUAL_THRESHOLD {
        return Err(Error::InterpolationConditioning {
            residual,
            threshold: INTERP_RESIDUAL_THRESHOLD,
        });
    }
    let mut coeffs = poly.into_coeffs();
    coeffs[0] = Complex64::new(1.0, 0.0);
    PolynomialCoefficients::new(coeffs)
}
