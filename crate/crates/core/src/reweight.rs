//! Reweighted permanents and their closed-form moments.

use itertools::Itertools;
use num_complex::Complex64;

use crate::distribution::EntryDistribution;
use crate::error::{Error, Result};
use crate::matrix::{d1, d2, ComplexMatrix};
use crate::permanent::permanent_ryser;

/// Largest `n` accepted by [`fix_pgf_enum`].
pub const FIX_ENUM_MAX_N: usize = 8;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `(n, t = |z|^2, nu)` with derived `alpha = nu t / n`, `kappa = 1 - alpha`,
/// `beta = alpha / (1 - alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentParameters {
    pub n: usize,
    pub t: f64,
    pub nu: f64,
}

impl MomentParameters {
    pub fn new(n: usize, t: f64, nu: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall {
                what: "moment parameters",
                n,
                min: 1,
            });
        }
        if !(t >= 0.0 && t.is_finite()) || !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need t >= 0 and nu > 0, got t = {t}, nu = {nu}"
            )));
        }
        Ok(Self { n, t, nu })
    }

    pub fn from_z(n: usize, z: Complex64, nu: f64) -> Result<Self> {
        Self::new(n, z.norm_sqr(), nu)
    }

    pub fn alpha(&self) -> f64 {
        self.nu * self.t / self.n as f64
    }

    pub fn kappa(&self) -> f64 {
        1.0 - self.alpha()
    }

    pub fn beta(&self) -> f64 {
        self.alpha() / self.kappa()
    }
}

/// `P_n(z) = per(J + zW)/n!`.
pub fn normalized_perturbed_permanent(w: &ComplexMatrix, z: Complex64) -> Result<Complex64> {
    Ok(permanent_ryser(&w.shifted_by_ones(z))? / factorial(w.n()))
}

/// `X1(z) = P_n(z) exp(-z D1(W))`.
pub fn x1(w: &ComplexMatrix, z: Complex64) -> Result<Complex64> {
    Ok(normalized_perturbed_permanent(w, z)? * (-z * d1(w)).exp())
}

/// `X2(z) = P_n(z) exp(-z D1(W) - z^2 D2(W)/2)`.
pub fn x2(w: &ComplexMatrix, z: Complex64) -> Result<Complex64> {
    let dd = d2(w)?;
    Ok(normalized_perturbed_permanent(w, z)? * (-z * d1(w) - 0.5 * z * z * dd).exp())
}

/// `E|X1(z)|^2 = e^{t'} kappa^{2n} sum_{k<=n} (t'/kappa^2)^k / k!` for
/// circular Gaussian entries, with `t' = nu t`.
pub fn exact_x1_moment(p: &MomentParameters) -> Result<f64> {
    let alpha = p.alpha();
    if alpha >= 1.0 {
        return Err(Error::AlphaOutOfRange { alpha });
    }
    let t = p.nu * p.t;
    let kappa = p.kappa();
    let x = t / (kappa * kappa);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=p.n {
        term *= x / k as f64;
        sum += term;
    }
    Ok((t + 2.0 * p.n as f64 * kappa.ln() + sum.ln()).exp())
}

/// `E|X1(z)|^2 = M(u)^{n^2} |1 + z mu(u)|^{2n} sum_{k<=n} (|z|^2 sigma2(u)/|1 + z mu(u)|^2)^k / k!`
/// with `u = -z/n`, valid for any entry law with finite tilts.
pub fn universal_x_moment(dist: &EntryDistribution, n: usize, z: Complex64) -> Result<f64> {
    if n == 0 {
        return Err(Error::DimensionTooSmall {
            what: "universal moment",
            n,
            min: 1,
        });
    }
    let nf = n as f64;
    let u = -z / nf;
    let psi = dist.log_mgf(u)?;
    let mean_shift = (1.0 + z * dist.tilted_mean(u)?).norm_sqr();
    if mean_shift == 0.0 {
        return Err(Error::TiltUnavailable { u });
    }
    let x = z.norm_sqr() * dist.tilted_variance(u)? / mean_shift;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=n {
        term *= x / k as f64;
        sum += term;
    }
    Ok((nf * nf * psi + nf * mean_shift.ln() + sum.ln()).exp())
}

/// `E X1(z) = E[e^{uW}]^{n^2} (1 + z K'(u))^n` with `u = -z/n`, using integer
/// powers so no logarithm branch is chosen.
pub fn first_moment_formula(dist: &EntryDistribution, n: usize, z: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::DimensionTooSmall {
            what: "first moment",
            n,
            min: 1,
        });
    }
    let u = -z / n as f64;
    let m = dist.holomorphic_mgf(u)?;
    let shift = 1.0 + z * dist.holomorphic_cumulant_deriv(u)?;
    Ok(m.powi((n * n) as i32) * shift.powi(n as i32))
}

/// `E[t^{fix(pi)}]` over uniform permutations: `sum_{k<=n} (t-1)^k / k!`.
pub fn fix_pgf(n: usize, t: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=n {
        term *= (t - 1.0) / k as f64;
        sum += term;
    }
    sum
}

/// Average of `t^{fix(pi)}` over all `n!` permutations.
pub fn fix_pgf_enum(n: usize, t: f64) -> Result<f64> {
    if n == 0 || n > FIX_ENUM_MAX_N {
        return Err(Error::DimensionExceedsGuard {
            what: "fixed-point enumeration",
            n,
            limit: FIX_ENUM_MAX_N,
        });
    }
    // integer histogram of fixed-point counts, so only the final sum rounds
    let mut counts = vec![0u64; n + 1];
    for p in (0..n).permutations(n) {
        counts[p.iter().enumerate().filter(|(i, &j)| *i == j).count()] += 1;
    }
    let total = counts.iter().rev().fold(0.0, |acc, &c| acc * t + c as f64);
    Ok(total / factorial(n))
}

/// `E|per(W + mu J) - per(W)|^2 = (n!)^2 sum_{k=1}^n |mu|^{2k} / (n-k)!` for
/// standard circular Gaussian `W`.
pub fn stability_exact(n: usize, mu: Complex64) -> Result<f64> {
    if n == 0 {
        return Err(Error::DimensionTooSmall {
            what: "stability moment",
            n,
            min: 1,
        });
    }
    let m2 = mu.norm_sqr();
    let nf = factorial(n);
    Ok((1..=n)
        .map(|k| nf * nf * m2.powi(k as i32) / factorial(n - k))
        .sum())
}

/// `n! c^2 / (1 - c^2)`, the geometric-series bound for `|mu| = c/sqrt(n)`.
pub fn stability_bound(n: usize, c: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&c) {
        return Err(Error::InvalidParameter(format!("need 0 <= c < 1, got {c}")));
    }
    Ok(factorial(n) * c * c / (1.0 - c * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::sample_matrix;
    use crate::rng::SeededStream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reweighted_at_origin_and_zero_matrix() {
        let w = sample_matrix(&EntryDistribution::complex_gaussian(1.0), 5, SeededStream::new(1, 0))
            .unwrap();
        assert!((x1(&w, c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((x2(&w, c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        let zero = ComplexMatrix::zeros(4);
        for z in [c(0.5, 0.0), c(-1.0, 2.0)] {
            assert!((x1(&zero, z).unwrap() - 1.0).norm() < 1e-14);
            assert!((x2(&zero, z).unwrap() - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn exact_moment_small_cases() {
        let p = MomentParameters::new(6, 0.0, 1.0).unwrap();
        assert!((exact_x1_moment(&p).unwrap() - 1.0).abs() < 1e-15);
        // n = 1: kappa = 1 - t, e^t ((1-t)^2 + t)
        for t in [0.1, 0.4, 0.7] {
            let v = exact_x1_moment(&MomentParameters::new(1, t, 1.0).unwrap()).unwrap();
            assert!((v - t.exp() * (1.0 - t + t * t)).abs() < 1e-13);
        }
        assert!(matches!(
            exact_x1_moment(&MomentParameters::new(4, 4.0, 1.0).unwrap()),
            Err(Error::AlphaOutOfRange { .. })
        ));
    }

    #[test]
    fn variance_rescaling_matches_z_scaling() {
        let a = exact_x1_moment(&MomentParameters::new(7, 0.3, 2.0).unwrap()).unwrap();
        let b = exact_x1_moment(&MomentParameters::new(7, 0.6, 1.0).unwrap()).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn universal_specializes_to_gaussian() {
        let dist = EntryDistribution::complex_gaussian(1.0);
        for n in 3..=10 {
            for t in [0.1f64, 0.5] {
                let z = Complex64::from_polar(t.sqrt(), 0.9);
                let exact = exact_x1_moment(&MomentParameters::new(n, t, 1.0).unwrap()).unwrap();
                let uni = universal_x_moment(&dist, n, z).unwrap();
                assert!((uni - exact).abs() / exact <= 1e-10);
            }
        }
        for d in [
            EntryDistribution::real_gaussian(1.0),
            EntryDistribution::complex_laplace(1.0),
        ] {
            assert!((universal_x_moment(&d, 5, c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn first_moment_closed_forms() {
        let cg = EntryDistribution::complex_gaussian(1.0);
        assert_eq!(first_moment_formula(&cg, 5, c(0.7, -0.2)).unwrap(), c(1.0, 0.0));
        let rg = EntryDistribution::real_gaussian(1.0);
        let v = first_moment_formula(&rg, 4, c(0.5, 0.0)).unwrap();
        let expect = 0.125f64.exp() * (1.0f64 - 0.0625).powi(4);
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn fixed_point_pgf() {
        assert!((fix_pgf(1, 0.3) - 0.3).abs() < 1e-15);
        assert!((fix_pgf_enum(1, 0.3).unwrap() - 0.3).abs() < 1e-15);
        assert!((fix_pgf(2, 3.0) - 5.0).abs() < 1e-15);
        assert!((fix_pgf_enum(2, 3.0).unwrap() - 5.0).abs() < 1e-15);
        let closed = fix_pgf(7, 1.5);
        assert!((closed - fix_pgf_enum(7, 1.5).unwrap()).abs() <= 1e-12);
        assert!(closed <= 0.5f64.exp());
    }

    #[test]
    fn stability_values() {
        let mu = 0.4;
        let v = stability_exact(2, c(mu, 0.0)).unwrap();
        assert!((v - 4.0 * (mu * mu + mu.powi(4))).abs() < 1e-14);
        assert_eq!(stability_exact(3, c(0.0, 0.0)).unwrap(), 0.0);
        let cc: f64 = 0.3;
        let exact = stability_exact(3, c(cc / 3f64.sqrt(), 0.0)).unwrap();
        let bound = stability_bound(3, cc).unwrap();
        assert!((bound - 6.0 * 0.09 / 0.91).abs() < 1e-14);
        assert!(exact <= bound);
        assert!(stability_bound(3, 1.0).is_err());
    }
}
