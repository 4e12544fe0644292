//! Expansion of `log per(zJ/sqrt(n) + A)` about `z = infinity`.
//!
//! With `w = 1/z`,
//! `log per(zJ/sqrt(n) + A) = n log z + log(n!/n^{n/2}) + sum_k q_k w^k`,
//! where the `q_k` are the log-series coefficients of `P_n` for the matrix
//! `sqrt(n) A`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interp::{interpolate_on_circle, poly_from_matrix, INTERP_RESIDUAL_THRESHOLD};
use crate::matrix::ComplexMatrix;
use crate::permanent::permanent_ryser;
use crate::poly::{log_coeffs, truncated_log, PolynomialCoefficients};

/// Largest dimension accepted by [`RescaledExpansion`].
pub const RESCALED_MAX_N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaledPoint {
    pub approx_log: Complex64,
    /// `log per` on the branch nearest `approx_log`.
    pub exact_log: Complex64,
    /// `|1 - exp(approx_log - exact_log)|`.
    pub rel_error: f64,
}

#[derive(Debug, Clone)]
pub struct RescaledExpansion {
    a: ComplexMatrix,
    q: PolynomialCoefficients,
    log_const: f64,
}

impl RescaledExpansion {
    /// Precomputes `q_1..q_{max_degree}`.
    pub fn new(a: &ComplexMatrix, max_degree: usize) -> Result<Self> {
        let n = a.n();
        if n > RESCALED_MAX_N {
            return Err(Error::DimensionExceedsGuard {
                what: "rescaled expansion",
                n,
                limit: RESCALED_MAX_N,
            });
        }
        let nf = n as f64;
        let g = poly_from_matrix(a)?.rescale_argument(Complex64::new(nf.sqrt(), 0.0));
        let q = log_coeffs(&g, max_degree)?;
        let log_const = (1..=n).map(|i| (i as f64).ln()).sum::<f64>() - 0.5 * nf * nf.ln();
        Ok(Self {
            a: a.clone(),
            q,
            log_const,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.q.degree()
    }

    pub fn q(&self) -> &PolynomialCoefficients {
        &self.q
    }

    pub fn approx_log(&self, z: Complex64, degree: usize) -> Result<Complex64> {
        if z.norm() == 0.0 {
            return Err(Error::InvalidParameter("z must be nonzero".into()));
        }
        if degree > self.max_degree() {
            return Err(Error::InvalidParameter(format!(
                "degree {degree} exceeds precomputed {}",
                self.max_degree()
            )));
        }
        let n = self.a.n() as f64;
        Ok(n * z.ln() + self.log_const + truncated_log(&self.q, z.inv(), degree))
    }

    /// `per(zJ/sqrt(n) + A)` by Ryser.
    pub fn exact(&self, z: Complex64) -> Result<Complex64> {
        let s = z / (self.a.n() as f64).sqrt();
        permanent_ryser(&self.a.plus_constant(s))
    }

    pub fn evaluate(&self, z: Complex64, degree: usize) -> Result<RescaledPoint> {
        let exact = self.exact(z)?;
        self.evaluate_with_exact(z, degree, exact)
    }

    /// [`Self::evaluate`] with `per(zJ/sqrt(n) + A)` already computed, so a
    /// grid can be reused across degrees.
    pub fn evaluate_with_exact(
        &self,
        z: Complex64,
        degree: usize,
        exact: Complex64,
    ) -> Result<RescaledPoint> {
        let approx_log = self.approx_log(z, degree)?;
        if exact.norm() == 0.0 || !exact.is_finite() {
            return Err(Error::ZeroPermanent);
        }
        let principal = exact.ln();
        let turns = ((approx_log.im - principal.im) / (2.0 * std::f64::consts::PI)).round();
        let exact_log = principal + Complex64::new(0.0, 2.0 * std::f64::consts::PI * turns);
        let rel_error = (Complex64::new(1.0, 0.0) - (approx_log - principal).exp()).norm();
        Ok(RescaledPoint {
            approx_log,
            exact_log,
            rel_error,
        })
    }
}

/// One-shot form of [`RescaledExpansion::evaluate`].
pub fn rescaled_expansion(a: &ComplexMatrix, z: Complex64, degree: usize) -> Result<RescaledPoint> {
    if z.norm() == 0.0 {
        return Err(Error::InvalidParameter("z must be nonzero".into()));
    }
    RescaledExpansion::new(a, degree)?.evaluate(z, degree)
}

/// Coefficients in `z` of `per(zJ/sqrt(n) + A)`, by interpolation on
/// `|z| = radius`.
pub fn rescaled_permanent_poly(a: &ComplexMatrix, radius: f64) -> Result<PolynomialCoefficients> {
    let n = a.n();
    if n > RESCALED_MAX_N {
        return Err(Error::DimensionExceedsGuard {
            what: "rescaled permanent polynomial",
            n,
            limit: RESCALED_MAX_N,
        });
    }
    let root_n = (n as f64).sqrt();
    let (poly, residual) = interpolate_on_circle(n, radius, |z| {
        permanent_ryser(&a.plus_constant(z / root_n))
    })?;
    if residual > INTERP_RESIDUAL_THRESHOLD {
        return Err(Error::InterpolationConditioning {
            residual,
            threshold: INTERP_RESIDUAL_THRESHOLD,
        });
    }
    Ok(poly)
}
