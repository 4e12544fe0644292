//! Seeded, thread-count independent Monte Carlo estimators.
//!
//! Sample `k` draws from `stream.substream(k)`, so each sample depends only
//! on its index. Values are collected in index order and reduced
//! sequentially, which makes every estimate bit-reproducible regardless of
//! how many workers ran.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::distribution::{sample_matrix, EntryDistribution};
use crate::error::{Error, Result};
use crate::permanent::permanent_ryser;
use crate::reweight::{x1, x2};
use crate::rng::SeededStream;

pub const MIN_SAMPLES: usize = 100;
/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Redraws allowed for a single sample whose permanent vanishes.
const MAX_REDRAWS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: Complex64,
    /// Sample standard deviation over `sqrt(samples)`.
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    /// Samples redrawn because the statistic was undefined.
    pub redrawn: usize,
}

impl McEstimate {
    /// `|mean - target| <= k * std_error`.
    pub fn within(&self, target: Complex64, k: f64) -> bool {
        (self.mean - target).norm() <= k * self.std_error
    }
}

/// Mean and standard error of values already in index order.
pub fn summarize(values: &[Complex64], seed: u64) -> Result<McEstimate> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    let mean = values.iter().sum::<Complex64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (n - 1) as f64;
    Ok(McEstimate {
        mean,
        std_error: (var / n as f64).sqrt(),
        samples: n,
        seed,
        redrawn: 0,
    })
}

/// Evaluates `f` on streams `stream.substream(k)`, `k < samples`, in
/// parallel and returns the values in index order.
pub fn mc_values<F>(samples: usize, stream: SeededStream, f: F) -> Result<Vec<Complex64>>
where
    F: Fn(SeededStream) -> Result<Complex64> + Sync,
{
    (0..samples as u64)
        .into_par_iter()
        .map(|k| f(stream.substream(k)))
        .collect()
}

/// Generic estimator over per-sample streams; needs `samples >= 100`.
pub fn mc_estimate<F>(samples: usize, stream: SeededStream, f: F) -> Result<McEstimate>
where
    F: Fn(SeededStream) -> Result<Complex64> + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    summarize(&mc_values(samples, stream, f)?, stream.master_seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Statistic {
    X1Sq(Complex64),
    X2Sq(Complex64),
    X1(Complex64),
    /// `|per(W + mu J) - per(W)|^2`.
    DeltaSq(Complex64),
    /// `log |per(W)|^2`.
    LogPermSq,
}

impl Statistic {
    pub fn name(&self) -> &'static str {
        match self {
            Statistic::X1Sq(_) => "x1_sq",
            Statistic::X2Sq(_) => "x2_sq",
            Statistic::X1(_) => "x1",
            Statistic::DeltaSq(_) => "delta_sq",
            Statistic::LogPermSq => "log_perm_sq",
        }
    }
}

/// Monte Carlo mean of `statistic` over `n x n` matrices with i.i.d.
/// entries from `dist`.
pub fn mc_moment(
    statistic: Statistic,
    dist: &EntryDistribution,
    n: usize,
    samples: usize,
    stream: SeededStream,
) -> Result<McEstimate> {
    if let Statistic::LogPermSq = statistic {
        return mc_log_perm(dist, n, samples, stream);
    }
    mc_estimate(samples, stream, |s| {
        let w = sample_matrix(dist, n, s)?;
        match statistic {
            Statistic::X1Sq(z) => Ok(Complex64::new(x1(&w, z)?.norm_sqr(), 0.0)),
            Statistic::X2Sq(z) => Ok(Complex64::new(x2(&w, z)?.norm_sqr(), 0.0)),
            Statistic::X1(z) => x1(&w, z),
            Statistic::DeltaSq(mu) => {
                let delta = permanent_ryser(&w.plus_constant(mu))? - permanent_ryser(&w)?;
                Ok(Complex64::new(delta.norm_sqr(), 0.0))
            }
            Statistic::LogPermSq => unreachable!(),
        }
    })
}

fn mc_log_perm(
    dist: &EntryDistribution,
    n: usize,
    samples: usize,
    stream: SeededStream,
) -> Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let draws: Vec<(f64, usize)> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let base = stream.substream(k);
            for redraw in 0..MAX_REDRAWS {
                // Redraws use disjoint index ranges above the sample range.
                let s = if redraw == 0 {
                    base
                } else {
                    SeededStream::new(
                        base.master_seed ^ (redraw as u64).rotate_left(32),
                        base.stream_index,
                    )
                };
                let p = permanent_ryser(&sample_matrix(dist, n, s)?)?;
                if p.norm_sqr() > 0.0 {
                    return Ok((p.norm_sqr().ln(), redraw));
                }
            }
            Err(Error::ZeroPermanent)
        })
        .collect::<Result<_>>()?;
    let values: Vec<Complex64> = draws.iter().map(|&(v, _)| Complex64::new(v, 0.0)).collect();
    let mut est = summarize(&values, stream.master_seed)?;
    est.redrawn = draws.iter().map(|&(_, r)| r).sum();
    Ok(est)
}

/// Monte Carlo mean of `log|per(W)|^2` for standard circular Gaussian `W`,
/// to be compared with the lower bound `log n! - gamma n`.
pub fn log_perm_lower_check(n: usize, samples: usize, stream: SeededStream) -> Result<McEstimate> {
    if n > 9 {
        return Err(Error::DimensionExceedsGuard {
            what: "log-permanent check",
            n,
            limit: 9,
        });
    }
    mc_log_perm(&EntryDistribution::complex_gaussian(1.0), n, samples, stream)
}

/// `log n! - gamma n`.
pub fn log_perm_lower_bound(n: usize) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum::<f64>() - EULER_GAMMA * n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reweight::{exact_x1_moment, MomentParameters};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn too_few_samples_rejected() {
        let d = EntryDistribution::complex_gaussian(1.0);
        assert!(mc_moment(Statistic::X1Sq(c(0.5, 0.0)), &d, 3, 50, SeededStream::new(1, 0)).is_err());
        assert!(EntryDistribution::new(crate::distribution::DistributionKind::ComplexGaussian, 0.0)
            .is_err());
    }

    #[test]
    fn reproducible_across_pool_sizes() {
        let d = EntryDistribution::complex_gaussian(1.0);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_moment(Statistic::X1(c(0.5, 0.2)), &d, 4, 2000, SeededStream::new(9, 0)))
                .unwrap()
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a.mean.re.to_bits(), b.mean.re.to_bits());
        assert_eq!(a.mean.im.to_bits(), b.mean.im.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn x1_square_small_run_near_closed_form() {
        let d = EntryDistribution::complex_gaussian(1.0);
        let est = mc_moment(Statistic::X1Sq(c(0.5, 0.0)), &d, 4, 20_000, SeededStream::new(3, 0))
            .unwrap();
        let exact = exact_x1_moment(&MomentParameters::new(4, 0.25, 1.0).unwrap()).unwrap();
        assert!(est.within(c(exact, 0.0), 4.0));
    }

    #[test]
    fn log_perm_one_by_one() {
        let est = log_perm_lower_check(1, 20_000, SeededStream::new(5, 0)).unwrap();
        assert!(est.within(c(-EULER_GAMMA, 0.0), 4.0));
        assert!((log_perm_lower_bound(1) + EULER_GAMMA).abs() < 1e-15);
    }
}
