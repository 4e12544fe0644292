//! Hardcore and matching partition functions.
//!
//! Independent sets are enumerated by branching on a vertex of maximum
//! remaining degree: `Z(S) = Z(S - v) + x_v Z(S - N[v])`. Once no edges
//! remain the rest factorizes as `prod (1 + x_v)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{Graph, WeightVector};
use crate::poly::PolynomialCoefficients;

/// Largest vertex count accepted by [`hardcore_z`].
pub const HARDCORE_MAX_VERTICES: usize = 30;
/// Largest edge count accepted by [`matching_z`].
pub const MATCHING_MAX_EDGES: usize = 30;
/// Largest vertex count accepted by [`hardcore_exact_second_moment`].
pub const SECOND_MOMENT_MAX_VERTICES: usize = 10;
/// Default tolerance on the omitted tail of the second-moment sum.
pub const SECOND_MOMENT_TAIL_TOLERANCE: f64 = 1e-6;

fn masks(g: &Graph) -> Vec<u64> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1u64 << u)))
        .collect()
}

fn guard(g: &Graph) -> Result<()> {
    if g.vertex_count() > HARDCORE_MAX_VERTICES {
        return Err(Error::DimensionExceedsGuard {
            what: "hardcore enumeration",
            n: g.vertex_count(),
            limit: HARDCORE_MAX_VERTICES,
        });
    }
    Ok(())
}

fn branch(avail: u64, nb: &[u64], x: &[Complex64]) -> Complex64 {
    if avail == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut best = None;
    let mut best_deg = 0;
    let mut rest = avail;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (nb[v] & avail).count_ones();
        if d > best_deg {
            best_deg = d;
            best = Some(v);
        }
    }
    match best {
        None => {
            let mut p = Complex64::new(1.0, 0.0);
            let mut rest = avail;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                p *= 1.0 + x[v];
            }
            p
        }
        Some(v) => {
            let without = avail & !(1u64 << v);
            branch(without, nb, x) + x[v] * branch(without & !nb[v], nb, x)
        }
    }
}

/// `Z_G(x) = sum over independent sets I of prod_{v in I} x_v`.
pub fn hardcore_z(g: &Graph, x: &WeightVector) -> Result<Complex64> {
    guard(g)?;
    x.check_len(g.vertex_count())?;
    let all = (1u64 << g.vertex_count()) - 1;
    Ok(branch(all, &masks(g), x.values()))
}

fn branch_poly(avail: u64, nb: &[u64], x: &[Complex64]) -> Vec<Complex64> {
    if avail == 0 {
        return vec![Complex64::new(1.0, 0.0)];
    }
    let mut rest = avail;
    let mut pick = None;
    let mut best_deg = 0;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (nb[v] & avail).count_ones();
        if pick.is_none() || d > best_deg {
            best_deg = d;
            pick = Some(v);
        }
    }
    let v = pick.expect("nonempty");
    let without = avail & !(1u64 << v);
    let mut a = branch_poly(without, nb, x);
    let b = branch_poly(without & !nb[v], nb, x);
    if a.len() < b.len() + 1 {
        a.resize(b.len() + 1, Complex64::new(0.0, 0.0));
    }
    for (k, bk) in b.into_iter().enumerate() {
        a[k + 1] += x[v] * bk;
    }
    a
}

/// Coefficients in `s` of `Z_G(s x)`: entry `k` sums `prod x_v` over
/// independent sets of size `k`.
pub fn hardcore_z_poly(g: &Graph, x: &WeightVector) -> Result<PolynomialCoefficients> {
    guard(g)?;
    x.check_len(g.vertex_count())?;
    let all = (1u64 << g.vertex_count()) - 1;
    PolynomialCoefficients::new(branch_poly(all, &masks(g), x.values()))
}

fn matching_guard(base: &Graph, w: &WeightVector) -> Result<()> {
    if base.edge_count() > MATCHING_MAX_EDGES {
        return Err(Error::DimensionExceedsGuard {
            what: "matching enumeration",
            n: base.edge_count(),
            limit: MATCHING_MAX_EDGES,
        });
    }
    w.check_len(base.edge_count())
}

/// Matching partition function with weights indexed like [`Graph::edges`].
pub fn matching_z(base: &Graph, w: &WeightVector) -> Result<Complex64> {
    matching_guard(base, w)?;
    hardcore_z(&base.line_graph(), w)
}

pub fn matching_z_poly(base: &Graph, w: &WeightVector) -> Result<PolynomialCoefficients> {
    matching_guard(base, w)?;
    hardcore_z_poly(&base.line_graph(), w)
}

/// `X(lambda) = Z(lambda W) exp(-lambda sum_v W_v)`.
pub fn hardcore_x1(g: &Graph, w: &WeightVector, lambda: Complex64) -> Result<Complex64> {
    Ok(hardcore_z(g, &w.scaled(lambda))? * (-lambda * w.sum()).exp())
}

/// Nonnegative multiplicities over the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityVector {
    counts: Vec<u32>,
}

impl MultiplicityVector {
    pub fn new(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.counts.len()).filter(|&v| self.counts[v] > 0).collect()
    }

    /// `m! = prod_v m_v!`.
    pub fn factorial(&self) -> f64 {
        self.counts
            .iter()
            .map(|&m| (1..=m).map(f64::from).product::<f64>())
            .product()
    }
}

/// Calls `f` on every multiplicity vector of length `len` with total `k`.
pub fn for_each_multiplicity(len: usize, k: u32, f: &mut impl FnMut(&MultiplicityVector)) {
    fn rec(
        pos: usize,
        left: u32,
        m: &mut MultiplicityVector,
        f: &mut impl FnMut(&MultiplicityVector),
    ) {
        if pos + 1 == m.counts.len() {
            m.counts[pos] = left;
            f(m);
            m.counts[pos] = 0;
            return;
        }
        for c in 0..=left {
            m.counts[pos] = c;
            rec(pos + 1, left - c, m, f);
        }
        m.counts[pos] = 0;
    }
    if len == 0 {
        if k == 0 {
            f(&MultiplicityVector::new(Vec::new()));
        }
        return;
    }
    let mut m = MultiplicityVector::new(vec![0; len]);
    rec(0, k, &mut m, f);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedMoment {
    pub value: f64,
    /// Upper bound on the omitted terms with `|m| > m_max`.
    pub tail_bound: f64,
}

/// `E|X(lambda)|^2 = sum_m t^{|m|} / m! |Z_{G[supp m]}(-m)|^2` for standard
/// circular Gaussian weights, truncated at `|m| <= m_max`, with `t = |lambda|^2`.
///
/// Each omitted term is at most `prod_v t^{m_v} (1 + m_v)^2 / m_v!`; their sum
/// is the tail of `(e^s (1 + 3s + s^2))^{|V|}` at `s = t`.
pub fn hardcore_exact_second_moment(g: &Graph, t: f64, m_max: u32) -> Result<TruncatedMoment> {
    hardcore_exact_second_moment_with_tolerance(g, t, m_max, SECOND_MOMENT_TAIL_TOLERANCE)
}

pub fn hardcore_exact_second_moment_with_tolerance(
    g: &Graph,
    t: f64,
    m_max: u32,
    tolerance: f64,
) -> Result<TruncatedMoment> {
    let nv = g.vertex_count();
    if nv > SECOND_MOMENT_MAX_VERTICES {
        return Err(Error::DimensionExceedsGuard {
            what: "hardcore second moment",
            n: nv,
            limit: SECOND_MOMENT_MAX_VERTICES,
        });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("need 0 <= t <= 1, got {t}")));
    }
    let mut value = 0.0;
    let mut failure = None;
    for k in 0..=m_max {
        let tk = t.powi(k as i32);
        let mut level = 0.0;
        for_each_multiplicity(nv, k, &mut |m| {
            let x = WeightVector::new(m.counts().iter().map(|&c| Complex64::new(-f64::from(c), 0.0)).collect())
                .expect("finite");
            match hardcore_z(g, &x) {
                Ok(z) => level += z.norm_sqr() / m.factorial(),
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure.take() {
            return Err(e);
        }
        value += tk * level;
    }
    let tail_bound = domination_tail(nv, t, m_max);
    if tail_bound > tolerance {
        return Err(Error::TailTooLarge {
            tail: tail_bound,
            tolerance,
        });
    }
    Ok(TruncatedMoment { value, tail_bound })
}

/// `sum_{k > m_max} t^k [s^k] F(s)^nv` with `F(s) = sum_j (1+j)^2 s^j / j!`,
/// summed to degree `m_max + 200`, plus the Cauchy estimate
/// `F(2)^nv (t/2)^{K+1} / (1 - t/2)` for the rest.
fn domination_tail(nv: usize, t: f64, m_max: u32) -> f64 {
    let top = m_max as usize + 200;
    let mut f = vec![0.0; top + 1];
    let mut inv_fact = 1.0;
    for (j, fj) in f.iter_mut().enumerate() {
        if j > 0 {
            inv_fact /= j as f64;
        }
        *fj = ((1 + j) as f64).powi(2) * inv_fact;
    }
    let mut power = vec![0.0; top + 1];
    power[0] = 1.0;
    for _ in 0..nv {
        let mut next = vec![0.0; top + 1];
        for (i, &pi) in power.iter().enumerate() {
            if pi == 0.0 {
                continue;
            }
            for (j, &fj) in f.iter().enumerate().take(top + 1 - i) {
                next[i + j] += pi * fj;
            }
        }
        power = next;
    }
    let partial: f64 = (m_max as usize + 1..=top)
        .map(|k| power[k] * t.powi(k as i32))
        .sum();
    let f2 = 2f64.exp() * 11.0;
    let rest = f2.powi(nv as i32) * (t / 2.0).powi(top as i32 + 1) / (1.0 - t / 2.0);
    partial + rest
}
