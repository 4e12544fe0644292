//! Finite simple graphs, vertex weights, generators and text formats.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::SeededStream;

/// Simple undirected graph stored as sorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(vertex_count: usize) -> Self {
        Self {
            adj: vec![Vec::new(); vertex_count],
        }
    }

    /// Rejects self-loops, repeated edges (in either orientation) and
    /// out-of-range endpoints.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(vertex_count);
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Graph(format!(
                    "edge ({u},{v}) out of range for {vertex_count} vertices"
                )));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Graph(format!("duplicate edge ({u},{v})")));
            }
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        for nb in &mut g.adj {
            nb.sort_unstable();
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// True for the empty graph as well.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Subgraph induced on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Self::empty(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            g.adj[i] = self.adj[v]
                .iter()
                .filter(|&&u| index[u] != usize::MAX)
                .map(|&u| index[u])
                .collect();
            g.adj[i].sort_unstable();
        }
        g
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.vertex_count();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|nb| nb.iter().map(|&u| u + off).collect::<Vec<_>>()),
        );
        Graph { adj }
    }

    /// Line graph; vertex `i` is edge `i` of [`Graph::edges`].
    pub fn line_graph(&self) -> Graph {
        let edges = self.edges();
        let mut pairs = Vec::new();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if a == c || a == d || b == c || b == d {
                    pairs.push((i, j));
                }
            }
        }
        Graph::from_edges(edges.len(), &pairs).expect("line graph edges are simple")
    }

    /// Adjacency-list text: one line per vertex, `v: u1 u2 ...`, 0-indexed.
    /// An edge may be listed from one or both endpoints. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse_adjacency_list(text: &str) -> Result<Graph> {
        let mut edges = BTreeSet::new();
        let mut heads = BTreeSet::new();
        let mut max_vertex: Option<usize> = None;
        let parse = |tok: &str, line: usize| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid vertex `{tok}`"),
            })
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (head, rest) = body.split_once(':').ok_or(Error::Parse {
                line,
                msg: "expected `v: neighbors`".into(),
            })?;
            let v = parse(head.trim(), line)?;
            if !heads.insert(v) {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex {v} listed twice"),
                });
            }
            max_vertex = max_vertex.max(Some(v));
            let mut local = BTreeSet::new();
            for tok in rest.split_whitespace() {
                let u = parse(tok, line)?;
                if u == v {
                    return Err(Error::Parse {
                        line,
                        msg: format!("self-loop at {v}"),
                    });
                }
                if !local.insert(u) {
                    return Err(Error::Parse {
                        line,
                        msg: format!("duplicate neighbor {u} of {v}"),
                    });
                }
                max_vertex = max_vertex.max(Some(u));
                edges.insert((u.min(v), u.max(v)));
            }
        }
        let n = max_vertex.map_or(0, |m| m + 1);
        Graph::from_edges(n, &edges.into_iter().collect::<Vec<_>>())
    }

    /// Edge-list CSV with rows `u,v` and an optional `u,v` header. The vertex
    /// count is `vertex_count` if given, else one more than the largest index.
    pub fn parse_edge_csv(text: &str, vertex_count: Option<usize>) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        let mut max_vertex: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = body.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line,
                    msg: "expected two fields `u,v`".into(),
                });
            }
            if edges.is_empty() && seen.is_empty() && fields == ["u", "v"] {
                continue;
            }
            let mut ends = [0usize; 2];
            for (slot, tok) in ends.iter_mut().zip(&fields) {
                *slot = tok.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("invalid vertex `{tok}`"),
                })?;
            }
            let [u, v] = ends;
            if u == v {
                return Err(Error::Parse {
                    line,
                    msg: format!("self-loop at {u}"),
                });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate edge ({u},{v})"),
                });
            }
            max_vertex = max_vertex.max(Some(u.max(v)));
            edges.push((u, v));
        }
        let n = vertex_count.unwrap_or(max_vertex.map_or(0, |m| m + 1));
        Graph::from_edges(n, &edges)
    }
}

pub fn path(k: usize) -> Graph {
    let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
    Graph::from_edges(k, &edges).expect("path is simple")
}

/// Cycle on `k >= 3` vertices; smaller `k` gives the path.
pub fn cycle(k: usize) -> Graph {
    if k < 3 {
        return path(k);
    }
    let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    Graph::from_edges(k, &edges).expect("cycle is simple")
}

pub fn complete(k: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            edges.push((i, j));
        }
    }
    Graph::from_edges(k, &edges).expect("complete graph is simple")
}

/// `G(k, p)`: each pair joined independently with probability `p`.
pub fn erdos_renyi(k: usize, p: f64, stream: SeededStream) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} not in [0,1]")));
    }
    let mut rng = stream.rng();
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(k, &edges)
}

/// `L(K_{n,n})`: vertex `i*n + j` is the edge `(i, j)`; two vertices are
/// adjacent when the edges share a row or a column.
pub fn line_graph_knn(n: usize) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n * n {
        for b in a + 1..n * n {
            if a / n == b / n || a % n == b % n {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n * n, &edges).expect("line graph is simple")
}

/// Per-vertex (or per-edge) complex weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<Complex64>,
}

impl WeightVector {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("weight vector"));
        }
        Ok(Self { values })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn uniform(len: usize, value: Complex64) -> Self {
        Self {
            values: vec![value; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.values.len() != expected {
            return Err(Error::ShapeMismatch {
                len: self.values.len(),
                expected,
            });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.values[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        let l2 = line_graph_knn(2);
        assert_eq!(l2.vertex_count(), 4);
        assert!((0..4).all(|v| l2.degree(v) == 2));
        let l3 = line_graph_knn(3);
        assert_eq!((l3.vertex_count(), l3.max_degree()), (9, 4));
        assert_eq!(line_graph_knn(4).max_degree(), 6);
        let p1 = path(1);
        assert_eq!((p1.vertex_count(), p1.edge_count()), (1, 0));
        assert_eq!(cycle(5).edge_count(), 5);
        assert_eq!(complete(5).edge_count(), 10);
        let er = erdos_renyi(10, 0.3, SeededStream::new(1, 0)).unwrap();
        assert_eq!(er, erdos_renyi(10, 0.3, SeededStream::new(1, 0)).unwrap());
        assert!(erdos_renyi(3, 1.5, SeededStream::new(1, 0)).is_err());
    }

    #[test]
    fn line_graph_of_four_cycle_is_four_cycle() {
        let lg = cycle(4).line_graph();
        assert_eq!(lg.vertex_count(), 4);
        assert!((0..4).all(|v| lg.degree(v) == 2));
        assert!(lg.is_connected());
    }

    #[test]
    fn induced_and_union() {
        let g = path(5).induced(&[0, 1, 3, 4]);
        assert_eq!(g.edge_count(), 2);
        assert!(!g.is_connected());
        let u = complete(3).disjoint_union(&path(2));
        assert_eq!((u.vertex_count(), u.edge_count()), (5, 4));
        assert_eq!(u.components(), vec![vec![0, 1, 2], vec![3, 4]]);
    }

    #[test]
    fn strict_parsing() {
        let g = Graph::parse_adjacency_list("0: 1 2\n1: 0\n2:\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 2));
        assert!(Graph::parse_adjacency_list("0: 0\n").is_err());
        assert!(Graph::parse_adjacency_list("0: 1 1\n").is_err());
        assert!(Graph::parse_adjacency_list("0: 1\n0: 2\n").is_err());
        assert!(Graph::parse_adjacency_list("0 1\n").is_err());

        let h = Graph::parse_edge_csv("u,v\n0,1\n1,2\n", None).unwrap();
        assert_eq!(h, path(3));
        assert!(Graph::parse_edge_csv("0,1\n1,0\n", None).is_err());
        assert!(Graph::parse_edge_csv("2,2\n", None).is_err());
        assert!(Graph::parse_edge_csv("0,1,2\n", None).is_err());
        assert_eq!(Graph::parse_edge_csv("0,1\n", Some(4)).unwrap().vertex_count(), 4);
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
        assert!(Graph::from_edges(2, &[(1, 1)]).is_err());
    }
}
