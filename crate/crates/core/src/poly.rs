//! Complex coefficient lists and log-series manipulation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients `c_0, ..., c_d` of `sum_k c_k z^k`. The leading coefficient
/// may vanish (truncated series are allowed).
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoefficients {
    coeffs: Vec<Complex64>,
}

impl PolynomialCoefficients {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("empty coefficient list".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Monic-free product form `scale * prod_j (1 - z/rho_j)`.
    pub fn from_roots_normalized(roots: &[Complex64], scale: Complex64) -> Result<Self> {
        let mut c = vec![scale];
        for &rho in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k] += ck;
                next[k + 1] -= ck / rho;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Stored degree `len - 1`, counting vanishing leading terms.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree after stripping exactly-zero leading coefficients.
    pub fn effective_degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != Complex64::new(0.0, 0.0))
            .unwrap_or(0)
    }

    pub fn get(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` by a single Horner sweep.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum_k |c_k| |z|^k`, the scale against which rounding in `eval` is
    /// measured.
    pub fn eval_abs(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficients of `p(s z)`.
    pub fn rescale_argument(&self, s: Complex64) -> Self {
        let mut f = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * f;
                f *= s;
                v
            })
            .collect();
        Self { coeffs }
    }
}

/// Log-series coefficients `a_1..a_m` of a series with `g_0 = 1`, from
/// `k g_k = sum_{j=1}^k j a_j g_{k-j}`. Coefficients past the stored degree
/// are taken as zero. The result stores `a_0 = 0` in slot 0.
pub fn log_coeffs(g: &PolynomialCoefficients, m: usize) -> Result<PolynomialCoefficients> {
    if g.get(0) != Complex64::new(1.0, 0.0) {
        return Err(Error::NotNormalized(g.get(0)));
    }
    let mut a = vec![Complex64::new(0.0, 0.0); m + 1];
    for k in 1..=m {
        let mut acc = g.get(k);
        for j in 1..k {
            acc -= a[j] * g.get(k - j) * (j as f64 / k as f64);
        }
        a[k] = acc;
    }
    PolynomialCoefficients::new(a)
}

/// Inverse of [`log_coeffs`]: coefficients `g_0..g_m` of `exp(sum a_k z^k)`
/// for a series with `a_0 = 0`.
pub fn exp_coeffs(a: &PolynomialCoefficients, m: usize) -> PolynomialCoefficients {
    let mut g = vec![Complex64::new(0.0, 0.0); m + 1];
    g[0] = Complex64::new(1.0, 0.0);
    for k in 1..=m {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k {
            acc += j as f64 * a.get(j) * g[k - j];
        }
        g[k] = acc / k as f64;
    }
    PolynomialCoefficients { coeffs: g }
}

/// `T_d(z) = sum_{k=1}^d a_k z^k`.
///
/// Panics if `d` exceeds the number of stored coefficients.
pub fn truncated_log(a: &PolynomialCoefficients, z: Complex64, d: usize) -> Complex64 {
    assert!(
        d <= a.degree(),
        "truncation degree {d} exceeds available coefficients {}",
        a.degree()
    );
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (1..=d).rev() {
        acc = (acc + a.get(k)) * z;
    }
    acc
}
