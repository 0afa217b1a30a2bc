//! Canonical labeling by individualization and refinement.
//!
//! Colours are refined to an equitable partition by counting (with
//! multiplicity) the neighbours each vertex has in every cell. When the
//! partition is not discrete the first non-singleton cell is split by
//! individualizing each of its vertices in turn. Every leaf of that tree
//! yields a relabeled multiplicity matrix; the canonical form is the
//! lexicographically largest one. Automorphisms found along the way prune
//! sibling branches that lie in the same orbit.

use super::Multigraph;

/// Isomorphism-invariant fingerprint of a multigraph: its order and the upper
/// triangle (diagonal included) of the canonically relabeled multiplicity
/// matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    order: usize,
    upper: Vec<u32>,
}

impl CanonicalForm {
    pub fn order(&self) -> usize {
        self.order
    }

    /// The canonical representative graph.
    pub fn to_graph(&self) -> Multigraph {
        let n = self.order;
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u..n {
                for _ in 0..self.upper[k] {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        Multigraph::new(n, edges).expect("canonical form is well formed")
    }
}

/// Returns the canonical form together with the labeling `lab` that produced
/// it: vertex `v` of `g` becomes vertex `lab[v]` of the canonical graph.
pub fn canonical_labeling(g: &Multigraph) -> (CanonicalForm, Vec<usize>) {
    let n = g.order();
    if n == 0 {
        return (
            CanonicalForm {
                order: 0,
                upper: Vec::new(),
            },
            Vec::new(),
        );
    }
    let adj = g.adjacency();
    let degrees = g.degrees();
    let initial: Vec<u64> = (0..n)
        .map(|v| ((degrees[v] as u64) << 16) | u64::from(adj[v * n + v]))
        .collect();
    let mut search = Search {
        n,
        adj: &adj,
        best: None,
        automorphisms: Vec::new(),
    };
    let colours = search.refine(compress(&initial));
    let mut path = Vec::new();
    search.descend(colours, &mut path);
    let (upper, lab) = search.best.expect("at least one leaf");
    (CanonicalForm { order: n, upper }, lab)
}

struct Search<'a> {
    n: usize,
    adj: &'a [u32],
    best: Option<(Vec<u32>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

fn compress(keys: &[u64]) -> Vec<usize> {
    let mut sorted: Vec<u64> = keys.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

impl Search<'_> {
    fn refine(&self, mut colours: Vec<usize>) -> Vec<usize> {
        let n = self.n;
        let mut cells = colours.iter().max().map_or(0, |&c| c + 1);
        loop {
            let mut sigs: Vec<Vec<u32>> = Vec::with_capacity(n);
            for v in 0..n {
                let mut sig = vec![0u32; cells + 1];
                sig[0] = colours[v] as u32;
                for w in 0..n {
                    sig[1 + colours[w]] += self.adj[v * n + w];
                }
                sigs.push(sig);
            }
            let mut distinct = sigs.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let next: Vec<usize> = sigs
                .iter()
                .map(|s| distinct.binary_search(s).expect("signature present"))
                .collect();
            colours = next;
            if distinct.len() == cells {
                return colours;
            }
            cells = distinct.len();
        }
    }

    fn descend(&mut self, colours: Vec<usize>, path: &mut Vec<usize>) {
        let n = self.n;
        let mut counts = vec![0usize; n];
        for &c in &colours {
            counts[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| counts[c] > 1) else {
            self.leaf(&colours);
            return;
        };
        let members: Vec<usize> = (0..n).filter(|&v| colours[v] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &members {
            if self.same_orbit_as_tried(v, &tried, path) {
                continue;
            }
            tried.push(v);
            let keys: Vec<u64> = (0..n)
                .map(|w| {
                    let base = 2 * colours[w] as u64;
                    if colours[w] == target && w != v {
                        base + 1
                    } else {
                        base
                    }
                })
                .collect();
            let refined = self.refine(compress(&keys));
            path.push(v);
            self.descend(refined, path);
            path.pop();
        }
    }

    /// Orbit test under the known automorphisms that fix `path` pointwise.
    fn same_orbit_as_tried(&self, v: usize, tried: &[usize], path: &[usize]) -> bool {
        if tried.is_empty() {
            return false;
        }
        let gens: Vec<&Vec<usize>> = self
            .automorphisms
            .iter()
            .filter(|a| path.iter().all(|&p| a[p] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for a in gens {
            for (x, &y) in a.iter().enumerate() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry;
                }
            }
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&t| find(&mut parent, t) == rv)
    }

    fn leaf(&mut self, colours: &[usize]) {
        let n = self.n;
        let mut inv = vec![0usize; n];
        for (v, &c) in colours.iter().enumerate() {
            inv[c] = v;
        }
        let mut upper = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                upper.push(self.adj[inv[i] * n + inv[j]]);
            }
        }
        match &self.best {
            Some((best, best_lab)) if *best == upper => {
                // lab_best^{-1} o lab is an automorphism
                let mut best_inv = vec![0usize; n];
                for (v, &l) in best_lab.iter().enumerate() {
                    best_inv[l] = v;
                }
                let auto: Vec<usize> = colours.iter().map(|&c| best_inv[c]).collect();
                if auto.iter().enumerate().any(|(i, &x)| i != x) {
                    self.automorphisms.push(auto);
                }
            }
            Some((best, _)) if *best > upper => {}
            _ => self.best = Some((upper, colours.to_vec())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_round_trips_through_graph() {
        let g = Multigraph::new(4, [(0, 1), (1, 1), (1, 2), (1, 2), (3, 0)]).unwrap();
        let (form, lab) = canonical_labeling(&g);
        assert_eq!(g.permuted(&lab), form.to_graph());
        assert_eq!(form.to_graph().canonical_form(), form);
    }

    #[test]
    fn highly_symmetric_graphs_terminate() {
        let loops = Multigraph::new(10, (0..10).map(|v| (v, v))).unwrap();
        let empty = Multigraph::empty(12);
        let k6 = Multigraph::complete(6);
        for g in [loops, empty, k6] {
            let (form, lab) = canonical_labeling(&g);
            assert_eq!(g.permuted(&lab), form.to_graph());
        }
    }

    #[test]
    fn relabeled_cycles_agree() {
        let c = Multigraph::cycle(8).unwrap();
        let perm = [3, 7, 1, 0, 5, 2, 6, 4];
        assert_eq!(c.canonical_form(), c.permuted(&perm).canonical_form());
    }

    #[test]
    fn distinguishes_loop_from_digon() {
        let a = Multigraph::new(2, [(0, 0), (1, 1), (0, 1)]).unwrap();
        let b = Multigraph::new(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_ne!(a.canonical_form(), b.canonical_form());
    }
}
