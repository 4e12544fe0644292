//! Four-state pair model encoding the second moment of the reweighted
//! hardcore partition function.
//!
//! Each vertex is in state `0`, `L`, `R` or `B` with weights
//! `1, a_L, a_R, a_B`. Adjacent vertices may not both lie in `{L, B}`, nor
//! both in `{R, B}`.

use num_complex::Complex64;

use crate::distribution::EntryDistribution;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest component accepted by brute-force enumeration.
pub const PAIR_ENUM_MAX_VERTICES: usize = 12;
/// Largest path or cycle accepted by the transfer-matrix route.
pub const PAIR_TRANSFER_MAX_VERTICES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairActivities {
    pub a_l: Complex64,
    pub a_r: Complex64,
    pub a_b: Complex64,
}

impl PairActivities {
    pub fn new(a_l: Complex64, a_r: Complex64, a_b: Complex64) -> Result<Self> {
        if !(a_l.is_finite() && a_r.is_finite() && a_b.is_finite()) {
            return Err(Error::NonFinite("pair activities"));
        }
        Ok(Self { a_l, a_r, a_b })
    }

    fn weights(&self) -> [Complex64; 4] {
        [Complex64::new(1.0, 0.0), self.a_l, self.a_r, self.a_b]
    }
}

// state bits: bit 0 = "left occupied", bit 1 = "right occupied"
// 0 -> empty, 1 -> L, 2 -> R, 3 -> B
fn compatible(s: usize, t: usize) -> bool {
    s & t == 0
}

fn enumerate(g: &Graph, vertices: &[usize], w: &[Complex64; 4]) -> Complex64 {
    let local: Vec<Vec<usize>> = vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            vertices[..i]
                .iter()
                .enumerate()
                .filter(|(_, &u)| g.has_edge(u, v))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    fn rec(i: usize, states: &mut Vec<usize>, local: &[Vec<usize>], w: &[Complex64; 4]) -> Complex64 {
        if i == local.len() {
            return Complex64::new(1.0, 0.0);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for s in 0..4 {
            if w[s] == Complex64::new(0.0, 0.0) {
                continue;
            }
            if local[i].iter().all(|&j| compatible(states[j], s)) {
                states.push(s);
                total += w[s] * rec(i + 1, states, local, w);
                states.pop();
            }
        }
        total
    }
    rec(0, &mut Vec::with_capacity(vertices.len()), &local, w)
}

/// Vertex order along a path or cycle component, and whether it closes.
fn path_or_cycle_order(g: &Graph, comp: &[usize]) -> Option<(Vec<usize>, bool)> {
    if comp.iter().any(|&v| g.degree(v) > 2) {
        return None;
    }
    let edges: usize = comp.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
    let closed = edges == comp.len();
    let start = if closed {
        comp[0]
    } else {
        *comp.iter().find(|&&v| g.degree(v) <= 1)?
    };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < comp.len() {
        let next = *g.neighbors(cur).iter().find(|&&u| u != prev && u != start)?;
        order.push(next);
        prev = cur;
        cur = next;
    }
    Some((order, closed))
}

fn transfer(len: usize, closed: bool, w: &[Complex64; 4]) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    if !closed {
        let mut v = *w;
        for _ in 1..len {
            let mut next = [zero; 4];
            for (t, nt) in next.iter_mut().enumerate() {
                for (s, &vs) in v.iter().enumerate() {
                    if compatible(s, t) {
                        *nt += vs;
                    }
                }
                *nt *= w[t];
            }
            v = next;
        }
        return v.iter().sum();
    }
    // trace of (C D)^len, tracking each starting state separately
    let mut total = zero;
    for first in 0..4 {
        let mut v = [zero; 4];
        v[first] = w[first];
        for _ in 1..len {
            let mut next = [zero; 4];
            for (t, nt) in next.iter_mut().enumerate() {
                for (s, &vs) in v.iter().enumerate() {
                    if compatible(s, t) {
                        *nt += vs;
                    }
                }
                *nt *= w[t];
            }
            v = next;
        }
        for (s, &vs) in v.iter().enumerate() {
            if compatible(s, first) {
                total += vs;
            }
        }
    }
    total
}

/// Weighted sum over admissible configurations, factorized over connected
/// components. Components with more than 12 vertices must be paths or
/// cycles.
pub fn pair_z(g: &Graph, a: &PairActivities) -> Result<Complex64> {
    let w = a.weights();
    let mut total = Complex64::new(1.0, 0.0);
    for comp in g.components() {
        let part = if comp.len() <= PAIR_ENUM_MAX_VERTICES {
            enumerate(g, &comp, &w)
        } else if comp.len() <= PAIR_TRANSFER_MAX_VERTICES {
            let (order, closed) = path_or_cycle_order(g, &comp).ok_or(Error::DimensionExceedsGuard {
                what: "pair-model enumeration",
                n: comp.len(),
                limit: PAIR_ENUM_MAX_VERTICES,
            })?;
            // a 2-vertex "cycle" cannot occur in a simple graph
            transfer(order.len(), closed && order.len() >= 3, &w)
        } else {
            return Err(Error::DimensionExceedsGuard {
                what: "pair-model transfer matrix",
                n: comp.len(),
                limit: PAIR_TRANSFER_MAX_VERTICES,
            });
        };
        total *= part;
    }
    Ok(total)
}

/// `a_L = lambda mu(u)`, `a_R = conj(a_L)`, `a_B = |lambda|^2 tau(u)` at
/// `u = -lambda`.
pub fn pair_activities(dist: &EntryDistribution, lambda: Complex64) -> Result<PairActivities> {
    let u = -lambda;
    let a_l = lambda * dist.tilted_mean(u)?;
    let a_b = lambda.norm_sqr() * dist.tau(u)?;
    PairActivities::new(a_l, a_l.conj(), Complex64::new(a_b, 0.0))
}

/// `E|Z(lambda W) e^{-lambda sum W}|^2 = e^{N Psi(-lambda)} Z_pair`.
pub fn second_moment_via_pair(g: &Graph, dist: &EntryDistribution, lambda: Complex64) -> Result<f64> {
    let psi = dist.log_mgf(-lambda)?;
    let z = pair_z(g, &pair_activities(dist, lambda)?)?;
    Ok((g.vertex_count() as f64 * psi).exp() * z.re)
}
