//! Independent reference implementations used to cross-check the library.
//! Nothing here calls the library's canonical forms, matrices or enumerators.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use flextile::{Multigraph, Pot};

/// Multiplicity matrix as nested vectors.
pub fn matrix(g: &Multigraph) -> Vec<Vec<u32>> {
    let n = g.order();
    let mut m = vec![vec![0u32; n]; n];
    for &(u, v) in g.edges() {
        m[u][v] += 1;
        if u != v {
            m[v][u] += 1;
        }
    }
    m
}

/// Isomorphism by backtracking over all degree-preserving bijections.
pub fn brute_isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    let n = a.order();
    if n != b.order() || a.size() != b.size() {
        return false;
    }
    let (ma, mb) = (matrix(a), matrix(b));
    let (da, db) = (a.degrees(), b.degrees());
    let mut sa = da.clone();
    let mut sb = db.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    fn extend(
        v: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ma: &[Vec<u32>],
        mb: &[Vec<u32>],
        da: &[usize],
        db: &[usize],
    ) -> bool {
        let n = ma.len();
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] || da[v] != db[w] || ma[v][v] != mb[w][w] {
                continue;
            }
            if (0..v).any(|u| ma[u][v] != mb[map[u]][w]) {
                continue;
            }
            used[w] = true;
            map.push(w);
            if extend(v + 1, map, used, ma, mb, da, db) {
                return true;
            }
            map.pop();
            used[w] = false;
        }
        false
    }
    extend(0, &mut Vec::new(), &mut vec![false; n], &ma, &mb, &da, &db)
}

/// Cheap isomorphism invariant for bucketing.
pub fn invariant(g: &Multigraph) -> (Vec<usize>, Vec<(usize, usize, usize)>) {
    let d = g.degrees();
    let mut degs = d.clone();
    degs.sort_unstable();
    let mut pairs: Vec<(usize, usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (d[u].min(d[v]), d[u].max(d[v]), usize::from(u == v)))
        .collect();
    pairs.sort_unstable();
    (degs, pairs)
}

/// Isomorphism classes of a list of graphs, one representative each.
#[derive(Default)]
pub struct Classes {
    buckets: BTreeMap<(Vec<usize>, Vec<(usize, usize, usize)>), Vec<Multigraph>>,
    seen: HashSet<Vec<(usize, usize)>>,
}

impl Classes {
    pub fn add(&mut self, g: Multigraph) {
        if !self.seen.insert(g.edges().to_vec()) {
            return;
        }
        let bucket = self.buckets.entry(invariant(&g)).or_default();
        if !bucket.iter().any(|h| brute_isomorphic(h, &g)) {
            bucket.push(g);
        }
    }

    pub fn len(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }

    pub fn graphs(&self) -> Vec<Multigraph> {
        self.buckets.values().flatten().cloned().collect()
    }

    pub fn contains(&self, g: &Multigraph) -> bool {
        self.buckets
            .get(&invariant(g))
            .is_some_and(|b| b.iter().any(|h| brute_isomorphic(h, g)))
    }
}

/// Per-instance end counts `(unhatted, hatted)` for each bond, read straight
/// off the tiles.
fn end_counts(pot: &Pot, usage: &[usize]) -> (Vec<Vec<(usize, usize)>>, usize) {
    let bonds = pot.bond_count();
    let mut per_instance = Vec::new();
    for (tile, &r) in pot.tiles().iter().zip(usage) {
        let mut c = vec![(0usize, 0usize); bonds];
        for e in tile.ends() {
            let slot = &mut c[e.bond.0 as usize - 1];
            if e.hatted {
                slot.1 += 1;
            } else {
                slot.0 += 1;
            }
        }
        for _ in 0..r {
            per_instance.push(c.clone());
        }
    }
    (per_instance, bonds)
}

/// Every complex for a usage vector, by assigning each unhatted end to an
/// instance that still has a free complementary end. Identical ends on the
/// same instance take nondecreasing partners, which skips only exact
/// duplicates.
pub fn brute_complexes(pot: &Pot, usage: &[usize]) -> Classes {
    let (counts, bonds) = end_counts(pot, usage);
    let n = counts.len();
    let mut classes = Classes::default();
    // unhatted ends in order: (bond, instance)
    let mut ends = Vec::new();
    for b in 0..bonds {
        let plain: usize = counts.iter().map(|c| c[b].0).sum();
        let hatted: usize = counts.iter().map(|c| c[b].1).sum();
        if plain != hatted {
            return classes;
        }
        for (i, c) in counts.iter().enumerate() {
            for _ in 0..c[b].0 {
                ends.push((b, i));
            }
        }
    }
    let mut free: Vec<Vec<usize>> = counts.iter().map(|c| c.iter().map(|x| x.1).collect()).collect();
    let mut edges = Vec::new();
    fn go(
        k: usize,
        ends: &[(usize, usize)],
        free: &mut Vec<Vec<usize>>,
        edges: &mut Vec<(usize, usize)>,
        n: usize,
        out: &mut Classes,
    ) {
        if k == ends.len() {
            out.add(Multigraph::new(n, edges.iter().copied()).unwrap());
            return;
        }
        let (b, i) = ends[k];
        let start = match k.checked_sub(1).map(|p| ends[p]) {
            Some(prev) if prev == (b, i) => edges.last().unwrap().1,
            _ => 0,
        };
        for j in start..n {
            if free[j][b] == 0 {
                continue;
            }
            free[j][b] -= 1;
            edges.push((i, j));
            go(k + 1, ends, free, edges, n, out);
            edges.pop();
            free[j][b] += 1;
        }
    }
    go(0, &ends, &mut free, &mut edges, n, &mut classes);
    classes
}

/// Balanced usage vectors summing to `n`, by enumerating compositions and
/// counting ends directly.
pub fn brute_usages(pot: &Pot, n: usize) -> Vec<Vec<usize>> {
    let p = pot.len();
    let mut out = Vec::new();
    let mut r = vec![0usize; p];
    fn go(j: usize, left: usize, r: &mut Vec<usize>, pot: &Pot, out: &mut Vec<Vec<usize>>) {
        let p = r.len();
        if j + 1 == p {
            r[j] = left;
            if balanced(pot, r) {
                out.push(r.clone());
            }
            return;
        }
        for x in 0..=left {
            r[j] = x;
            go(j + 1, left - x, r, pot, out);
        }
    }
    if p > 0 {
        go(0, n, &mut r, pot, &mut out);
    }
    out
}

pub fn balanced(pot: &Pot, usage: &[usize]) -> bool {
    let bonds = pot.bond_count();
    let mut net = vec![0i64; bonds];
    for (tile, &r) in pot.tiles().iter().zip(usage) {
        for e in tile.ends() {
            net[e.bond.0 as usize - 1] += if e.hatted { -(r as i64) } else { r as i64 };
        }
    }
    net.iter().all(|&x| x == 0)
}

pub fn brute_min_order(pot: &Pot, cap: usize) -> Option<usize> {
    (1..=cap).find(|&n| !brute_usages(pot, n).is_empty())
}

/// Whether the simple graph underlying `g` has a Hamilton cycle, by trying
/// every vertex order that starts at 0.
pub fn brute_hamiltonian(g: &Multigraph) -> bool {
    let n = g.order();
    if n < 3 {
        return false;
    }
    let m = matrix(g);
    let mut rest: Vec<usize> = (1..n).collect();
    fn permute(k: usize, rest: &mut Vec<usize>, m: &[Vec<u32>]) -> bool {
        if k == rest.len() {
            let mut prev = 0;
            for &v in rest.iter() {
                if m[prev][v] == 0 {
                    return false;
                }
                prev = v;
            }
            return m[prev][0] > 0;
        }
        for i in k..rest.len() {
            rest.swap(k, i);
            if permute(k + 1, rest, m) {
                return true;
            }
            rest.swap(k, i);
        }
        false
    }
    permute(0, &mut rest, &m)
}
