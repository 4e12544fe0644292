//! Entry laws for random matrices and random fugacities, with their tilt
//! functions.
//!
//! Two families of generating functions are exposed:
//!
//! * the real-exponential tilt `M(u) = E exp(u W + conj(u) conj(W))`, with
//!   `Psi = log M`, tilted mean `mu(u)`, tilted variance `sigma2(u)` and
//!   tilted second moment `tau(u) = sigma2(u) + |mu(u)|^2`;
//! * the holomorphic generating function `E exp(u W)`, with cumulant function
//!   `K(u)` and its derivative `K'(u)`, and the pseudo-variance
//!   `kappa = E[W^2]`.
//!
//! The complex Laplace law is `X + iY` with `X`, `Y` independent symmetric
//! Laplace variables of scale `b = sqrt(nu)/2`, so that `E|W|^2 = nu`.
//! Independence of the two parts makes every tilt function a product of
//! one-dimensional Laplace transforms, available in closed form.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::rng::SeededStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistributionKind {
    ComplexGaussian,
    RealGaussian,
    ComplexLaplace,
}

impl DistributionKind {
    pub fn name(&self) -> &'static str {
        match self {
            DistributionKind::ComplexGaussian => "complex-gaussian",
            DistributionKind::RealGaussian => "real-gaussian",
            DistributionKind::ComplexLaplace => "complex-laplace",
        }
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex-gaussian" => Ok(DistributionKind::ComplexGaussian),
            "real-gaussian" => Ok(DistributionKind::RealGaussian),
            "complex-laplace" => Ok(DistributionKind::ComplexLaplace),
            other => Err(Error::UnsupportedDistribution(other.to_string())),
        }
    }
}

/// I.i.d. entry law with `E W = 0` and `E|W|^2 = variance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryDistribution {
    kind: DistributionKind,
    variance: f64,
}

impl EntryDistribution {
    pub fn new(kind: DistributionKind, variance: f64) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "variance must be positive and finite, got {variance}"
            )));
        }
        Ok(Self { kind, variance })
    }

    pub fn complex_gaussian(variance: f64) -> Self {
        Self::new(DistributionKind::ComplexGaussian, variance).expect("positive variance")
    }

    pub fn real_gaussian(variance: f64) -> Self {
        Self::new(DistributionKind::RealGaussian, variance).expect("positive variance")
    }

    pub fn complex_laplace(variance: f64) -> Self {
        Self::new(DistributionKind::ComplexLaplace, variance).expect("positive variance")
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Laplace scale of each real component.
    fn laplace_scale(&self) -> f64 {
        self.variance.sqrt() / 2.0
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let nu = self.variance;
        match self.kind {
            DistributionKind::ComplexGaussian => {
                let s = (nu / 2.0).sqrt();
                let x: f64 = StandardNormal.sample(rng);
                let y: f64 = StandardNormal.sample(rng);
                Complex64::new(s * x, s * y)
            }
            DistributionKind::RealGaussian => {
                let x: f64 = StandardNormal.sample(rng);
                Complex64::new(nu.sqrt() * x, 0.0)
            }
            DistributionKind::ComplexLaplace => {
                let b = self.laplace_scale();
                let mut comp = || {
                    let e: f64 = Exp1.sample(rng);
                    if rng.random::<bool>() {
                        b * e
                    } else {
                        -b * e
                    }
                };
                let x = comp();
                let y = comp();
                Complex64::new(x, y)
            }
        }
    }

    pub fn sample_vec<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Complex64> {
        (0..len).map(|_| self.sample(rng)).collect()
    }

    /// Pseudo-variance `E[W^2]`.
    pub fn pseudo_variance(&self) -> f64 {
        match self.kind {
            DistributionKind::RealGaussian => self.variance,
            DistributionKind::ComplexGaussian | DistributionKind::ComplexLaplace => 0.0,
        }
    }

    /// Real-exponential tilt parameters `(s_re, s_im)` such that
    /// `u W + conj(u W) = s_re X + s_im Y` for `W = X + iY`.
    fn tilt_slopes(u: Complex64) -> (f64, f64) {
        (2.0 * u.re, -2.0 * u.im)
    }

    fn laplace_check(&self, u: Complex64, a: f64, b_: f64) -> Result<()> {
        let b = self.laplace_scale();
        if (b * a).abs() >= 1.0 || (b * b_).abs() >= 1.0 {
            return Err(Error::TiltUnavailable { u });
        }
        Ok(())
    }

    /// `Psi(u) = log E exp(u W + conj(u) conj(W))`.
    pub fn log_mgf(&self, u: Complex64) -> Result<f64> {
        let nu = self.variance;
        match self.kind {
            DistributionKind::ComplexGaussian => Ok(nu * u.norm_sqr()),
            DistributionKind::RealGaussian => Ok(2.0 * nu * u.re * u.re),
            DistributionKind::ComplexLaplace => {
                let (sx, sy) = Self::tilt_slopes(u);
                self.laplace_check(u, sx, sy)?;
                let b2 = self.laplace_scale().powi(2);
                Ok(-(1.0 - b2 * sx * sx).ln() - (1.0 - b2 * sy * sy).ln())
            }
        }
    }

    pub fn mgf(&self, u: Complex64) -> Result<f64> {
        self.log_mgf(u).map(f64::exp)
    }

    /// Mean of one component of a Laplace variable under tilt `e^{s x}`,
    /// and its variance.
    fn laplace_component(&self, s: f64) -> (f64, f64) {
        let b2 = self.laplace_scale().powi(2);
        let d = 1.0 - b2 * s * s;
        (2.0 * b2 * s / d, 2.0 * b2 * (1.0 + b2 * s * s) / (d * d))
    }

    /// Tilted mean `mu(u) = E_u[W]`.
    pub fn tilted_mean(&self, u: Complex64) -> Result<Complex64> {
        let nu = self.variance;
        match self.kind {
            DistributionKind::ComplexGaussian => Ok(nu * u.conj()),
            DistributionKind::RealGaussian => Ok(Complex64::new(2.0 * nu * u.re, 0.0)),
            DistributionKind::ComplexLaplace => {
                let (sx, sy) = Self::tilt_slopes(u);
                self.laplace_check(u, sx, sy)?;
                let (mx, _) = self.laplace_component(sx);
                let (my, _) = self.laplace_component(sy);
                Ok(Complex64::new(mx, my))
            }
        }
    }

    /// Tilted variance `sigma2(u) = E_u |W - mu(u)|^2`.
    pub fn tilted_variance(&self, u: Complex64) -> Result<f64> {
        match self.kind {
            DistributionKind::ComplexGaussian | DistributionKind::RealGaussian => {
                Ok(self.variance)
            }
            DistributionKind::ComplexLaplace => {
                let (sx, sy) = Self::tilt_slopes(u);
                self.laplace_check(u, sx, sy)?;
                let (_, vx) = self.laplace_component(sx);
                let (_, vy) = self.laplace_component(sy);
                Ok(vx + vy)
            }
        }
    }

    /// Tilted second moment `tau(u) = E_u |W|^2`.
    pub fn tau(&self, u: Complex64) -> Result<f64> {
        Ok(self.tilted_variance(u)? + self.tilted_mean(u)?.norm_sqr())
    }

    /// Holomorphic generating function `E exp(u W)`.
    pub fn holomorphic_mgf(&self, u: Complex64) -> Result<Complex64> {
        match self.kind {
            DistributionKind::ComplexGaussian => Ok(Complex64::new(1.0, 0.0)),
            DistributionKind::RealGaussian => Ok((0.5 * self.variance * u * u).exp()),
            DistributionKind::ComplexLaplace => {
                let b = self.laplace_scale();
                if (b * u.re).abs() >= 1.0 || (b * u.im).abs() >= 1.0 {
                    return Err(Error::TiltUnavailable { u });
                }
                let b4u4 = (b * u).powi(4);
                Ok(1.0 / (1.0 - b4u4))
            }
        }
    }

    /// `K(u) = log E exp(u W)` on the branch with `K(0) = 0`.
    pub fn holomorphic_cumulant(&self, u: Complex64) -> Result<Complex64> {
        match self.kind {
            DistributionKind::ComplexGaussian => Ok(Complex64::new(0.0, 0.0)),
            DistributionKind::RealGaussian => Ok(0.5 * self.variance * u * u),
            DistributionKind::ComplexLaplace => {
                self.holomorphic_mgf(u)?;
                let b4u4 = (self.laplace_scale() * u).powi(4);
                Ok(-(1.0 - b4u4).ln())
            }
        }
    }

    /// `K'(u) = E[W e^{uW}] / E[e^{uW}]`.
    pub fn holomorphic_cumulant_deriv(&self, u: Complex64) -> Result<Complex64> {
        match self.kind {
            DistributionKind::ComplexGaussian => Ok(Complex64::new(0.0, 0.0)),
            DistributionKind::RealGaussian => Ok(self.variance * u),
            DistributionKind::ComplexLaplace => {
                self.holomorphic_mgf(u)?;
                let b4 = self.laplace_scale().powi(4);
                let u3 = u * u * u;
                Ok(4.0 * b4 * u3 / (1.0 - b4 * u3 * u))
            }
        }
    }
}

impl fmt::Display for EntryDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(nu={})", self.kind, self.variance)
    }
}

/// `n x n` matrix of i.i.d. draws, deterministic in `stream`.
pub fn sample_matrix(
    dist: &EntryDistribution,
    n: usize,
    stream: SeededStream,
) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::DimensionTooSmall {
            what: "sample_matrix",
            n,
            min: 1,
        });
    }
    let mut rng = stream.rng();
    let data = dist.sample_vec(n * n, &mut rng);
    ComplexMatrix::new(n, data)
}
