//! Simultaneous polynomial root finding (Aberth–Ehrlich).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::PolynomialCoefficients;
use crate::rng::SeededStream;

pub const ABERTH_TOLERANCE: f64 = 1e-12;
pub const ABERTH_MAX_ITER: usize = 500;
pub const ABERTH_RESTARTS: usize = 5;
/// Largest accepted backward error `|p(r)| / sum_k |c_k| |r|^k`.
pub const ROOT_BACKWARD_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `max |p(root)| / max |c_k|`.
    pub residual: f64,
    /// `max |p(root)| / sum_k |c_k| |root|^k`.
    pub backward_error: f64,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// All complex roots with multiplicity, after stripping zero leading
/// coefficients. Exact zero constant terms contribute roots at the origin.
pub fn roots(p: &PolynomialCoefficients) -> Result<RootSet> {
    let d = p.effective_degree();
    if d == 0 {
        return Err(Error::InvalidParameter(
            "root finding needs degree >= 1".into(),
        ));
    }
    let full = &p.coeffs()[..=d];
    let zeros_at_origin = full.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = PolynomialCoefficients::new(full[zeros_at_origin..].to_vec())?;

    let mut found = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    if reduced.degree() > 0 {
        found.extend(aberth(&reduced)?);
    }
    let scale = p.max_abs_coeff();
    let mut residual: f64 = 0.0;
    let mut backward: f64 = 0.0;
    for &r in &found {
        let v = p.eval(r).norm();
        residual = residual.max(v / scale);
        backward = backward.max(v / p.eval_abs(r).max(f64::MIN_POSITIVE));
    }
    Ok(RootSet {
        roots: found,
        residual,
        backward_error: backward,
    })
}

/// Number of roots with `|rho| < r`.
pub fn zero_count_disk(rs: &RootSet, r: f64) -> usize {
    rs.roots.iter().filter(|z| z.norm() < r).count()
}

fn backward_error(p: &PolynomialCoefficients, z: Complex64) -> f64 {
    p.eval(z).norm() / p.eval_abs(z).max(f64::MIN_POSITIVE)
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(k, log|c_k|)`, the usual Newton-polygon estimate of root moduli.
fn initial_guesses(p: &PolynomialCoefficients, phase: f64) -> Vec<Complex64> {
    let d = p.degree();
    let pts: Vec<(usize, f64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - x1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut guesses = Vec::with_capacity(d);
    for seg in hull.windows(2) {
        let (i, yi) = seg[0];
        let (j, yj) = seg[1];
        let count = j - i;
        let radius = ((yi - yj) / count as f64).exp();
        for l in 0..count {
            let theta = 2.0 * PI * l as f64 / count as f64 + 2.0 * PI * i as f64 / d as f64 + phase;
            guesses.push(Complex64::from_polar(radius, theta));
        }
    }
    guesses
}

fn aberth(p: &PolynomialCoefficients) -> Result<Vec<Complex64>> {
    let d = p.degree();
    if d == 1 {
        return Ok(vec![-p.get(0) / p.get(1)]);
    }
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    let mut rng = SeededStream::new(0x005e_ed0f_ab37, 0).rng();
    for attempt in 0..=ABERTH_RESTARTS {
        let phase = if attempt == 0 {
            0.4
        } else {
            rng.random_range(0.0..2.0 * PI)
        };
        let mut z = initial_guesses(p, phase);
        if attempt > 0 {
            for zi in &mut z {
                *zi *= 1.0 + rng.random_range(-0.1..0.1);
            }
        }
        iterate(p, &mut z);
        polish(p, &mut z);
        let worst = z.iter().map(|&r| backward_error(p, r)).fold(0.0, f64::max);
        if worst <= ROOT_BACKWARD_TOLERANCE {
            return Ok(z);
        }
        if best.as_ref().is_none_or(|(b, _)| worst < *b) {
            best = Some((worst, z));
        }
    }
    Err(Error::NoConvergence {
        best_residual: best.map(|(b, _)| b).unwrap_or(f64::INFINITY),
    })
}

fn iterate(p: &PolynomialCoefficients, z: &mut [Complex64]) -> bool {
    let d = z.len();
    let mut done = vec![false; d];
    for _ in 0..ABERTH_MAX_ITER {
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (v, dv) = p.eval_with_derivative(z[i]);
            if v.norm() == 0.0 || backward_error(p, z[i]) < 1e-17 {
                done[i] = true;
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let denom = dv / v - s;
            let w = if denom.norm() > 0.0 && denom.is_finite() {
                denom.inv()
            } else {
                Complex64::new(1e-8 * (1.0 + z[i].norm()), 0.0)
            };
            z[i] -= w;
            if w.norm() <= ABERTH_TOLERANCE * z[i].norm().max(1.0) {
                done[i] = true;
            }
        }
        if done.iter().all(|&b| b) {
            return true;
        }
    }
    false
}

fn polish(p: &PolynomialCoefficients, z: &mut [Complex64]) {
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = p.eval_with_derivative(*zi);
            if dv.norm() == 0.0 {
                break;
            }
            let cand = *zi - v / dv;
            if p.eval(cand).norm() < v.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
}
