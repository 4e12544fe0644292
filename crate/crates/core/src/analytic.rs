//! Holomorphic logarithm along a segment and Jensen's formula.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::PolynomialCoefficients;
use crate::roots::roots;

/// Minimum allowed distance from a root to the integration path or circle.
pub const PATH_CLEARANCE: f64 = 1e-8;

fn distance_to_segment(a: Complex64, b: Complex64, q: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (q - a).norm();
    }
    let t = (((q - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (a + ab * t - q).norm()
}

/// Logarithm of `p(z)` continued from the principal value of `log p(0)`
/// along the straight segment `0 -> z`.
///
/// Steps are sized so `sum_j h/|x - rho_j| <= pi/16`, which keeps the
/// argument change of `p` over each step well below `pi/4`. The real part is
/// set to `ln|p(z)|` at the end.
pub fn reference_log(p: &PolynomialCoefficients, z: Complex64) -> Result<Complex64> {
    let p0 = p.get(0);
    if p0.norm() == 0.0 {
        return Err(Error::InvalidParameter("p(0) must be nonzero".into()));
    }
    if p.effective_degree() == 0 {
        return Ok(p0.ln());
    }
    let rs = roots(p)?;
    let origin = Complex64::new(0.0, 0.0);
    for &rho in &rs.roots {
        if distance_to_segment(origin, z, rho) <= PATH_CLEARANCE {
            return Err(Error::RootOnPath { root: rho });
        }
    }
    let length = z.norm();
    if length == 0.0 {
        return Ok(p0.ln());
    }
    let dir = z / length;
    let mut s = 0.0;
    let mut x = origin;
    let mut px = p0;
    let mut acc = p0.ln();
    while s < length {
        let inv_dist: f64 = rs.roots.iter().map(|r| 1.0 / (x - r).norm()).sum();
        let h = (PI / 16.0 / inv_dist).min(length - s);
        s = if length - s <= h { length } else { s + h };
        let next = if s == length { z } else { dir * s };
        let pn = p.eval(next);
        acc += (pn / px).ln();
        x = next;
        px = pn;
    }
    Ok(Complex64::new(px.norm().ln(), acc.im))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl JensenCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// `lhs = log|p(0)|`, `rhs = mean_k log|p(R e^{i theta_k})| - sum_{|a|<R} log(R/|a|)`
/// with a `nodes`-point trapezoid rule on the circle.
pub fn jensen_check(p: &PolynomialCoefficients, radius: f64, nodes: usize) -> Result<JensenCheck> {
    let p0 = p.get(0);
    if p0.norm() == 0.0 {
        return Err(Error::InvalidParameter("p(0) must be nonzero".into()));
    }
    if radius.is_nan() || radius <= 0.0 || nodes == 0 {
        return Err(Error::InvalidParameter(
            "Jensen check needs R > 0 and at least one node".into(),
        ));
    }
    let inside_sum = if p.effective_degree() == 0 {
        0.0
    } else {
        let rs = roots(p)?;
        let mut acc = 0.0;
        for &a in &rs.roots {
            if (a.norm() - radius).abs() <= PATH_CLEARANCE {
                return Err(Error::RootOnCircle { root: a, radius });
            }
            if a.norm() < radius {
                acc += (radius / a.norm()).ln();
            }
        }
        acc
    };
    let boundary: f64 = (0..nodes)
        .map(|k| {
            let z = Complex64::from_polar(radius, 2.0 * PI * k as f64 / nodes as f64);
            p.eval(z).norm().ln()
        })
        .sum::<f64>()
        / nodes as f64;
    Ok(JensenCheck {
        lhs: p0.norm().ln(),
        rhs: boundary - inside_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededStream;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_one_plus_z() {
        let p = PolynomialCoefficients::from_real(&[1.0, 1.0]).unwrap();
        let l = reference_log(&p, c(1.0, 0.0)).unwrap();
        assert!((l - c(2f64.ln(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn negative_real_roots_give_real_log() {
        let p = PolynomialCoefficients::from_roots_normalized(
            &[c(-1.0, 0.0), c(-2.5, 0.0), c(-0.3, 0.0)],
            c(1.0, 0.0),
        )
        .unwrap();
        let l = reference_log(&p, c(4.0, 0.0)).unwrap();
        assert!(l.im.abs() < 1e-12);
    }

    #[test]
    fn exp_of_log_reproduces_value() {
        let mut rng = SeededStream::new(10, 0).rng();
        let coeffs: Vec<Complex64> = std::iter::once(c(1.0, 0.0))
            .chain((0..10).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
            .collect();
        let p = PolynomialCoefficients::new(coeffs).unwrap();
        for _ in 0..20 {
            let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let l = reference_log(&p, z).unwrap();
            let v = p.eval(z);
            assert!((l.exp() - v).norm() / v.norm() < 1e-9);
            assert!((l.re - v.norm().ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn winding_is_tracked() {
        // (1 - z)^2 with z passing just off the root: the imaginary part
        // picks up the full argument change, not its principal reduction.
        let p = PolynomialCoefficients::from_real(&[1.0, -2.0, 1.0]).unwrap();
        let z = c(3.0, 0.01);
        let l = reference_log(&p, z).unwrap();
        let principal = p.eval(z).ln();
        assert!((l.exp() - p.eval(z)).norm() < 1e-9);
        assert!((l.im - principal.im).abs() > 1.0);
    }

    #[test]
    fn root_on_path_reported() {
        let p = PolynomialCoefficients::from_real(&[1.0, -1.0]).unwrap();
        assert!(matches!(
            reference_log(&p, c(2.0, 0.0)),
            Err(Error::RootOnPath { .. })
        ));
    }

    #[test]
    fn jensen_examples() {
        let one = PolynomialCoefficients::from_real(&[1.0]).unwrap();
        let j = jensen_check(&one, 1.0, 16).unwrap();
        assert_eq!((j.lhs, j.rhs), (0.0, 0.0));

        let p = PolynomialCoefficients::from_real(&[1.0, -0.5]).unwrap();
        assert!(jensen_check(&p, 1.0, 4096).unwrap().discrepancy() <= 1e-6);

        let mut rng = SeededStream::new(77, 0).rng();
        let known: Vec<Complex64> = (0..10)
            .map(|_| Complex64::from_polar(rng.random_range(0.3..4.0), rng.random_range(0.0..2.0 * PI)))
            .collect();
        let q = PolynomialCoefficients::from_roots_normalized(&known, c(0.7, 0.2)).unwrap();
        assert!(jensen_check(&q, 2.0, 4096).unwrap().discrepancy() <= 1e-6);
    }

    #[test]
    fn root_on_circle_reported() {
        let p = PolynomialCoefficients::from_real(&[1.0, -1.0]).unwrap();
        assert!(matches!(
            jensen_check(&p, 1.0, 64),
            Err(Error::RootOnCircle { .. })
        ));
    }
}
