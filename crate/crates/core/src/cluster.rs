//! Ursell functions, cluster coefficients and Kotecký–Preiss checks.

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analytic::reference_log;
use crate::error::{Error, Result};
use crate::graph::{Graph, WeightVector};
use crate::hardcore::{for_each_multiplicity, hardcore_z_poly, matching_z_poly, MultiplicityVector};

/// Largest edge count accepted by [`ursell_phi`].
pub const URSELL_MAX_EDGES: usize = 20;
/// Largest order accepted by [`cluster_coefficient`].
pub const CLUSTER_MAX_K: usize = 4;
/// Largest vertex count accepted by [`cluster_coefficient`].
pub const CLUSTER_MAX_VERTICES: usize = 20;
/// Largest edge count accepted by [`matching_cluster_bound_check`].
pub const MATCHING_CHECK_MAX_EDGES: usize = 25;

struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.components -= 1;
        }
    }
}

/// `phi(H) = sum over connected spanning edge subsets A of (-1)^{|A|}`;
/// zero for disconnected `H`.
pub fn ursell_phi(h: &Graph) -> Result<i64> {
    if !h.is_connected() {
        return Ok(0);
    }
    let edges = h.edges();
    if edges.len() > URSELL_MAX_EDGES {
        return Err(Error::DimensionExceedsGuard {
            what: "Ursell function",
            n: edges.len(),
            limit: URSELL_MAX_EDGES,
        });
    }
    let n = h.vertex_count();
    let mut total = 0i64;
    for mask in 0u32..(1u32 << edges.len()) {
        if (mask.count_ones() as usize) + 1 < n {
            continue;
        }
        let mut uf = UnionFind::new(n);
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask & (1 << i) != 0 {
                uf.union(u, v);
            }
        }
        if uf.components <= 1 {
            total += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    Ok(total)
}

/// Number of spanning trees by the matrix-tree theorem.
pub fn spanning_tree_count(h: &Graph) -> Result<u64> {
    let n = h.vertex_count();
    if n <= 1 {
        return Ok(1);
    }
    let lap = DMatrix::from_fn(n - 1, n - 1, |i, j| {
        if i == j {
            h.degree(i) as f64
        } else if h.has_edge(i, j) {
            -1.0
        } else {
            0.0
        }
    });
    let det = lap.determinant();
    let rounded = det.round();
    if (det - rounded).abs() > 1e-6 * rounded.abs().max(1.0) || rounded < 0.0 {
        return Err(Error::RoundingResidual { value: det });
    }
    Ok(rounded as u64)
}

/// Incompatibility graph of a multiset: one vertex per copy, copies joined
/// when their base vertices coincide or are adjacent.
pub fn incompatibility_graph(g: &Graph, m: &MultiplicityVector) -> Graph {
    let copies: Vec<usize> = m
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(v, &c)| std::iter::repeat_n(v, c as usize))
        .collect();
    let mut edges = Vec::new();
    for i in 0..copies.len() {
        for j in i + 1..copies.len() {
            let (a, b) = (copies[i], copies[j]);
            if a == b || g.has_edge(a, b) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(copies.len(), &edges).expect("incompatibility graph is simple")
}

/// Coefficient of `lambda^k` in `log Z_G(lambda W)`:
/// `a_k = sum_{|m| = k} phi(H[m]) / m! prod_v W_v^{m_v}` over multiplicity
/// vectors with connected support.
pub fn cluster_coefficient(g: &Graph, w: &WeightVector, k: usize) -> Result<Complex64> {
    let nv = g.vertex_count();
    if k > CLUSTER_MAX_K || nv > CLUSTER_MAX_VERTICES {
        return Err(Error::DimensionExceedsGuard {
            what: "cluster coefficient",
            n: k.max(nv),
            limit: if k > CLUSTER_MAX_K {
                CLUSTER_MAX_K
            } else {
                CLUSTER_MAX_VERTICES
            },
        });
    }
    w.check_len(nv)?;
    if k == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for size in 1..=k.min(nv) {
        for support in (0..nv).combinations(size) {
            if !g.induced(&support).is_connected() {
                continue;
            }
            let mut failure = None;
            // each support vertex carries at least one copy
            for_each_multiplicity(size, (k - size) as u32, &mut |extra| {
                let mut counts = vec![0u32; nv];
                for (i, &v) in support.iter().enumerate() {
                    counts[v] = 1 + extra.counts()[i];
                }
                let m = MultiplicityVector::new(counts);
                match ursell_phi(&incompatibility_graph(g, &m)) {
                    Ok(phi) => {
                        let mono = support
                            .iter()
                            .fold(Complex64::new(1.0, 0.0), |p, &v| p * w[v].powi(m.counts()[v] as i32));
                        total += phi as f64 / m.factorial() * mono;
                    }
                    Err(e) => failure = Some(e),
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
        }
    }
    Ok(total)
}

fn check_kp_inputs(g: &Graph, a: &[f64]) -> Result<()> {
    if a.len() != g.vertex_count() {
        return Err(Error::ShapeMismatch {
            len: a.len(),
            expected: g.vertex_count(),
        });
    }
    if a.iter().any(|&x| x.is_nan() || x < 0.0) {
        return Err(Error::InvalidParameter("KP weights must be nonnegative".into()));
    }
    Ok(())
}

/// `sum_{u in {v} + N(v)} |lambda_u| e^{a_u} <= a_v` for every vertex.
pub fn kp_check(g: &Graph, lambda: &WeightVector, a: &[f64]) -> Result<bool> {
    check_kp_inputs(g, a)?;
    lambda.check_len(g.vertex_count())?;
    Ok((0..g.vertex_count()).all(|v| {
        let s: f64 = std::iter::once(v)
            .chain(g.neighbors(v).iter().copied())
            .map(|u| lambda[u].norm() * a[u].exp())
            .sum();
        s <= a[v]
    }))
}

/// `sum_v a_v`, the bound on `|log Z|` when [`kp_check`] holds.
pub fn kp_bound(g: &Graph, a: &[f64]) -> Result<f64> {
    check_kp_inputs(g, a)?;
    Ok(a.iter().sum())
}

/// `log Z_G(x)` continued from `log Z(0) = 0` along `s x`, `s in [0, 1]`.
pub fn log_hardcore_z(g: &Graph, x: &WeightVector) -> Result<Complex64> {
    continue_log(&hardcore_z_poly(g, x)?)
}

/// `log` of the matching partition function, continued along `s w`.
pub fn log_matching_z(base: &Graph, w: &WeightVector) -> Result<Complex64> {
    continue_log(&matching_z_poly(base, w)?)
}

fn continue_log(p: &crate::poly::PolynomialCoefficients) -> Result<Complex64> {
    match reference_log(p, Complex64::new(1.0, 0.0)) {
        Err(Error::RootOnPath { .. }) => Err(Error::ZeroOnPath),
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingClusterCheck {
    /// `max_v sum_{e ∋ v} |w_e|`.
    pub delta: f64,
    /// `|log Z(w) - sum_e w_e|`.
    pub lhs: f64,
    /// `2 e^2 |V| delta^2`.
    pub rhs: f64,
    /// `delta > 1/(4e)` or `lhs <= rhs`.
    pub pass: bool,
}

pub fn matching_cluster_bound_check(base: &Graph, w: &WeightVector) -> Result<MatchingClusterCheck> {
    let edges = base.edges();
    if edges.len() > MATCHING_CHECK_MAX_EDGES {
        return Err(Error::DimensionExceedsGuard {
            what: "matching cluster check",
            n: edges.len(),
            limit: MATCHING_CHECK_MAX_EDGES,
        });
    }
    w.check_len(edges.len())?;
    let mut load = vec![0.0; base.vertex_count()];
    for (i, &(u, v)) in edges.iter().enumerate() {
        load[u] += w[i].norm();
        load[v] += w[i].norm();
    }
    let delta = load.iter().copied().fold(0.0, f64::max);
    let lhs = (log_matching_z(base, w)? - w.sum()).norm();
    let e = std::f64::consts::E;
    let rhs = 2.0 * e * e * base.vertex_count() as f64 * delta * delta;
    Ok(MatchingClusterCheck {
        delta,
        lhs,
        rhs,
        pass: delta > 1.0 / (4.0 * e) || lhs <= rhs,
    })
}
