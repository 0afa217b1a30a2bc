//! Undirected multigraphs with loops.
//!
//! Vertices are dense indices `0..order`. The edge list is kept normalized
//! (`u <= v` within each pair, pairs sorted), so two graphs with the same edge
//! multiset compare equal no matter how they were built.

mod canon;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use canon::{canonical_labeling, CanonicalForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{order}")]
    EndpointOutOfRange { u: usize, v: usize, order: usize },
    #[error("{family}({n}) is undefined; need n >= {min}")]
    TooSmall {
        family: &'static str,
        n: usize,
        min: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multigraph {
    order: usize,
    edges: Vec<(usize, usize)>,
}

/// Distinct-degree counts of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    /// Number of distinct vertex degrees.
    pub all: usize,
    /// Number of distinct even vertex degrees.
    pub even: usize,
    /// Number of distinct odd vertex degrees.
    pub odd: usize,
}

impl Multigraph {
    pub fn new<I>(order: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= order || v >= order {
                return Err(GraphError::EndpointOutOfRange { u, v, order });
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        Ok(Multigraph {
            order,
            edges: normalized,
        })
    }

    pub fn empty(order: usize) -> Self {
        Multigraph {
            order,
            edges: Vec::new(),
        }
    }

    /// The wheel `W_n`: vertices `0..n-1` form the outer cycle, `n-1` is the hub.
    pub fn wheel(n: usize) -> Result<Self, GraphError> {
        if n < 4 {
            return Err(GraphError::TooSmall {
                family: "wheel",
                n,
                min: 4,
            });
        }
        let rim = n - 1;
        let hub = n - 1;
        let cycle = (0..rim).map(|i| (i, (i + 1) % rim));
        let spokes = (0..rim).map(|i| (i, hub));
        Multigraph::new(n, cycle.chain(spokes))
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::TooSmall {
                family: "cycle",
                n,
                min: 3,
            });
        }
        Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Multigraph::new(n, edges).expect("endpoints are in range")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of edges, counting multiplicity and loops.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degree of `v`; a loop contributes 2.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.order];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn sorted_degrees(&self) -> Vec<usize> {
        let mut deg = self.degrees();
        deg.sort_unstable();
        deg
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let key = (u.min(v), u.max(v));
        self.edges.iter().filter(|&&e| e == key).count()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    /// No loops and no repeated edges.
    pub fn is_simple(&self) -> bool {
        !self.has_loops() && self.edges.windows(2).all(|w| w[0] != w[1])
    }

    /// Row-major `order x order` multiplicity matrix; the diagonal counts loops.
    pub fn adjacency(&self) -> Vec<u32> {
        let n = self.order;
        let mut adj = vec![0u32; n * n];
        for &(u, v) in &self.edges {
            adj[u * n + v] += 1;
            if u != v {
                adj[v * n + u] += 1;
            }
        }
        adj
    }

    /// Sorted, deduplicated neighbour lists (loops dropped).
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut nbrs = vec![Vec::new(); self.order];
        for &(u, v) in &self.edges {
            if u != v {
                nbrs[u].push(v);
                nbrs[v].push(u);
            }
        }
        for list in &mut nbrs {
            list.sort_unstable();
            list.dedup();
        }
        nbrs
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Multigraph {
        assert_eq!(perm.len(), self.order, "permutation length mismatch");
        Multigraph::new(self.order, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("permutation stays in range")
    }

    pub fn is_connected(&self) -> bool {
        if self.order == 0 {
            return true;
        }
        let nbrs = self.neighbours();
        let mut seen = vec![false; self.order];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &nbrs[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let mut deg = self.degrees();
        deg.sort_unstable();
        deg.dedup();
        let even = deg.iter().filter(|&&d| d % 2 == 0).count();
        DegreeStats {
            all: deg.len(),
            even,
            odd: deg.len() - even,
        }
    }

    /// Whether some cycle passes through every vertex exactly once.
    ///
    /// Parallel edges and loops are ignored, so graphs of order below 3 are
    /// never Hamiltonian.
    pub fn is_hamiltonian(&self) -> bool {
        let n = self.order;
        if n < 3 {
            return false;
        }
        let nbrs = self.neighbours();
        if nbrs.iter().any(|l| l.len() < 2) {
            return false;
        }
        let mut visited = vec![false; n];
        visited[0] = true;
        hamilton_extend(&nbrs, &mut visited, 0, 1)
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canonical_labeling(self).0
    }

    /// A vertex bijection `phi` with `self.permuted(&phi) == *other`, if any.
    pub fn isomorphism(&self, other: &Multigraph) -> Option<Vec<usize>> {
        if self.order != other.order
            || self.size() != other.size()
            || self.sorted_degrees() != other.sorted_degrees()
        {
            return None;
        }
        let (form_a, lab_a) = canonical_labeling(self);
        let (form_b, lab_b) = canonical_labeling(other);
        if form_a != form_b {
            return None;
        }
        let mut inv_b = vec![0; other.order];
        for (v, &l) in lab_b.iter().enumerate() {
            inv_b[l] = v;
        }
        Some(lab_a.iter().map(|&l| inv_b[l]).collect())
    }

    pub fn is_isomorphic(&self, other: &Multigraph) -> bool {
        self.isomorphism(other).is_some()
    }

    /// Renders the graph text format (`n=<order>` then one `u v` line per edge).
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn hamilton_extend(nbrs: &[Vec<usize>], visited: &mut [bool], last: usize, count: usize) -> bool {
    if count == nbrs.len() {
        return nbrs[last].contains(&0);
    }
    for &w in &nbrs[last] {
        if !visited[w] {
            visited[w] = true;
            if hamilton_extend(nbrs, visited, w, count + 1) {
                return true;
            }
            visited[w] = false;
        }
    }
    false
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.order)?;
        for &(u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Multigraph {
    type Err = GraphError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut order = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| GraphError::Parse {
                line: line_no,
                message,
            };
            match order {
                None => {
                    let value = line
                        .strip_prefix("n=")
                        .ok_or_else(|| parse_err(format!("expected `n=<order>`, found `{line}`")))?;
                    let n = value
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| parse_err(format!("bad order `{value}`: {e}")))?;
                    order = Some(n);
                }
                Some(n) => {
                    let mut it = line.split_whitespace();
                    let mut endpoint = || -> Result<usize, GraphError> {
                        let tok = it
                            .next()
                            .ok_or_else(|| parse_err("expected two endpoints".into()))?;
                        tok.parse::<usize>()
                            .map_err(|e| parse_err(format!("bad vertex `{tok}`: {e}")))
                    };
                    let u = endpoint()?;
                    let v = endpoint()?;
                    if it.next().is_some() {
                        return Err(parse_err("trailing tokens after edge".into()));
                    }
                    if u >= n || v >= n {
                        return Err(parse_err(format!("vertex out of range for n={n}")));
                    }
                    edges.push((u, v));
                }
            }
        }
        let order = order.ok_or(GraphError::Parse {
            line: 0,
            message: "missing `n=<order>` header".into(),
        })?;
        Multigraph::new(order, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wheel_seven_shape() {
        let w = Multigraph::wheel(7).unwrap();
        assert_eq!(w.order(), 7);
        assert_eq!(w.size(), 12);
        assert_eq!(w.degree(6), 6);
        assert!(w.is_simple());
    }

    #[test]
    fn wheel_five_degrees() {
        assert_eq!(Multigraph::wheel(5).unwrap().sorted_degrees(), vec![3, 3, 3, 3, 4]);
    }

    #[test]
    fn small_families_rejected() {
        assert!(matches!(
            Multigraph::wheel(3),
            Err(GraphError::TooSmall { min: 4, .. })
        ));
        assert!(Multigraph::cycle(2).is_err());
    }

    #[test]
    fn cycle_basics() {
        assert_eq!(Multigraph::cycle(3).unwrap().size(), 3);
        assert!(Multigraph::cycle(4).unwrap().degrees().iter().all(|&d| d == 2));
        assert!(Multigraph::cycle(5).unwrap().is_hamiltonian());
    }

    #[test]
    fn outer_rim_of_wheel_is_a_cycle() {
        let w = Multigraph::wheel(7).unwrap();
        let rim = Multigraph::new(6, w.edges().iter().copied().filter(|&(_, v)| v != 6)).unwrap();
        assert_eq!(rim, Multigraph::cycle(6).unwrap());
    }

    #[test]
    fn degree_stats_of_wheels() {
        let s = Multigraph::wheel(7).unwrap().degree_stats();
        assert_eq!((s.all, s.even, s.odd), (2, 1, 1));
        let s = Multigraph::wheel(6).unwrap().degree_stats();
        assert_eq!((s.all, s.even, s.odd), (2, 0, 2));
        assert_eq!(Multigraph::wheel(4).unwrap().degree_stats().all, 1);
    }

    #[test]
    fn loops_count_twice() {
        let g = Multigraph::new(2, [(0, 0), (0, 1), (0, 1)]).unwrap();
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.multiplicity(1, 0), 2);
        assert!(!g.is_simple());
    }

    #[test]
    fn edge_order_is_irrelevant() {
        let a = Multigraph::new(3, [(0, 1), (2, 1)]).unwrap();
        let b = Multigraph::new(3, [(1, 2), (1, 0)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_range_edge() {
        assert_eq!(
            Multigraph::new(2, [(0, 2)]),
            Err(GraphError::EndpointOutOfRange { u: 0, v: 2, order: 2 })
        );
    }

    #[test]
    fn hamiltonicity_ignores_multiplicity() {
        let digon = Multigraph::new(2, [(0, 1), (0, 1)]).unwrap();
        assert!(!digon.is_hamiltonian());
        // hub joined to two disjoint triangles
        let h = Multigraph::new(
            7,
            [
                (0, 1), (1, 2), (2, 0),
                (3, 4), (4, 5), (5, 3),
                (0, 6), (1, 6), (2, 6), (3, 6), (4, 6), (5, 6),
            ],
        )
        .unwrap();
        assert!(!h.is_hamiltonian());
        for n in 4..=9 {
            assert!(Multigraph::wheel(n).unwrap().is_hamiltonian());
        }
    }

    #[test]
    fn text_format() {
        let text = "# a triangle with a loop\nn=3\n0 1\n\n1 2 # rim\n2 0\n1 1\n";
        let g: Multigraph = text.parse().unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.size(), 4);
        assert_eq!(g.to_text().parse::<Multigraph>().unwrap(), g);
        assert!(matches!(
            "0 1\n".parse::<Multigraph>(),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            "n=2\n0 5\n".parse::<Multigraph>(),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn wheel_four_is_k4() {
        let w = Multigraph::wheel(4).unwrap();
        let k = Multigraph::complete(4);
        let phi = w.isomorphism(&k).expect("W4 is K4");
        assert_eq!(w.permuted(&phi), k);
    }
}
