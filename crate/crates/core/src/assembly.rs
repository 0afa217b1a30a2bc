//! Complete complexes: what a pot actually builds.
//!
//! A usage vector fixes how many copies (instances) of each tile go into the
//! complex. For every bond type the unhatted ends must then be paired off
//! against the hatted ends. Ends of the same kind on the same instance are
//! indistinguishable, so a pairing is recorded as a transport table: how
//! many `a_i` ends of instance `x` bond to `a_i*` ends of instance `y`. Each
//! table entry becomes that many edges `x -> y`; `x == y` gives loops.
//! Enumerating all tables for all bonds yields every complex, which is then
//! reduced to multigraphs up to isomorphism.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::matrix::{build_matrix, realizable_below, usage_vectors};
use crate::multigraph::{canonical_labeling, CanonicalForm, Multigraph};
use crate::tiles::{BondType, CohesiveEnd, Pot};

/// Default node cap for the matching search tree.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssemblyError {
    #[error("usage vector has {got} entries, pot has {want} tiles")]
    UsageLength { got: usize, want: usize },
    #[error("usage vector is unbalanced (net ends per bond: {imbalance:?})")]
    Unbalanced { imbalance: Vec<i64> },
    #[error("matching search exceeded its budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
}

/// One bonded pair of ends: an edge directed from the unhatted end (`tail`)
/// to the hatted end (`head`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledEdge {
    pub bond: BondType,
    pub tail: usize,
    pub head: usize,
}

/// A complex with its tile and bond annotations: `tiles[v]` is the pot index
/// of the tile placed at vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labeling {
    pub tiles: Vec<usize>,
    pub edges: Vec<LabeledEdge>,
}

impl Labeling {
    pub fn order(&self) -> usize {
        self.tiles.len()
    }

    pub fn graph(&self) -> Multigraph {
        Multigraph::new(self.tiles.len(), self.edges.iter().map(|e| (e.tail, e.head)))
            .expect("labeling endpoints are in range")
    }

    /// Copies of each pot tile used.
    pub fn usage(&self, pot_len: usize) -> Vec<usize> {
        let mut usage = vec![0; pot_len];
        for &t in &self.tiles {
            usage[t] += 1;
        }
        usage
    }

    /// Ends present at vertex `v`, sorted.
    pub fn ends_at(&self, v: usize) -> Vec<CohesiveEnd> {
        let mut ends = Vec::new();
        for e in &self.edges {
            if e.tail == v {
                ends.push(CohesiveEnd {
                    bond: e.bond,
                    hatted: false,
                });
            }
            if e.head == v {
                ends.push(CohesiveEnd {
                    bond: e.bond,
                    hatted: true,
                });
            }
        }
        ends.sort_unstable();
        ends
    }

    /// Every vertex carries exactly the ends of its tile.
    pub fn is_consistent_with(&self, pot: &Pot) -> bool {
        (0..self.order()).all(|v| {
            self.tiles[v] < pot.len() && pot.tiles()[self.tiles[v]].ends() == self.ends_at(v)
        })
    }

    /// Relabels vertex `v` as `perm[v]`, keeping edges sorted.
    pub fn permuted(&self, perm: &[usize]) -> Labeling {
        let mut tiles = vec![0; self.tiles.len()];
        for (v, &t) in self.tiles.iter().enumerate() {
            tiles[perm[v]] = t;
        }
        let mut edges: Vec<LabeledEdge> = self
            .edges
            .iter()
            .map(|e| LabeledEdge {
                bond: e.bond,
                tail: perm[e.tail],
                head: perm[e.head],
            })
            .collect();
        edges.sort_unstable_by_key(|e| (e.tail.min(e.head), e.tail.max(e.head), e.bond, e.tail));
        Labeling { tiles, edges }
    }

    /// Text rendering: `vertex <v> <tile-name>` lines, then
    /// `edge <bond> <tail> <head>` lines.
    pub fn render(&self, pot: &Pot) -> String {
        let mut out = String::new();
        for (v, &t) in self.tiles.iter().enumerate() {
            out.push_str(&format!("vertex {v} {}\n", pot.names()[t]));
        }
        for e in &self.edges {
            out.push_str(&format!("edge {} {} {}\n", e.bond, e.tail, e.head));
        }
        out
    }
}

/// A usage vector expanded into vertex slots, grouped by tile index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileInstancing {
    pub usage: Vec<usize>,
    pub instances: Vec<usize>,
}

impl TileInstancing {
    pub fn new(pot: &Pot, usage: &[usize]) -> Result<Self, AssemblyError> {
        if usage.len() != pot.len() {
            return Err(AssemblyError::UsageLength {
                got: usage.len(),
                want: pot.len(),
            });
        }
        let matrix = build_matrix(pot);
        if !matrix.is_balanced(usage) {
            return Err(AssemblyError::Unbalanced {
                imbalance: matrix.imbalance(usage),
            });
        }
        let instances = usage
            .iter()
            .enumerate()
            .flat_map(|(t, &k)| std::iter::repeat_n(t, k))
            .collect();
        Ok(TileInstancing {
            usage: usage.to_vec(),
            instances,
        })
    }

    pub fn order(&self) -> usize {
        self.instances.len()
    }
}

/// One bond's transport problem: `(instance, count)` for unhatted ends
/// (rows) and hatted ends (columns).
struct Transport {
    bond: BondType,
    rows: Vec<(usize, u32)>,
    cols: Vec<(usize, u32)>,
}

struct Walker<'a, F> {
    transports: Vec<Transport>,
    capacity: Vec<Vec<u32>>,
    labeling: Labeling,
    nodes: u64,
    budget: u64,
    visit: &'a mut F,
}

impl<F> Walker<'_, F>
where
    F: FnMut(&Labeling) -> ControlFlow<()>,
{
    fn start_row(&mut self, b: usize, r: usize) -> Result<ControlFlow<()>, AssemblyError> {
        if b == self.transports.len() {
            return Ok((self.visit)(&self.labeling));
        }
        if r == self.transports[b].rows.len() {
            return self.start_row(b + 1, 0);
        }
        let left = self.transports[b].rows[r].1;
        self.fill(b, r, 0, left)
    }

    fn fill(&mut self, b: usize, r: usize, c: usize, left: u32) -> Result<ControlFlow<()>, AssemblyError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(AssemblyError::BudgetExceeded {
                budget: self.budget,
            });
        }
        if left == 0 {
            return self.start_row(b, r + 1);
        }
        let cols = self.transports[b].cols.len();
        if c == cols {
            return Ok(ControlFlow::Continue(()));
        }
        let rest: u32 = self.capacity[b][c + 1..].iter().sum();
        let hi = left.min(self.capacity[b][c]);
        let lo = left.saturating_sub(rest);
        if lo > hi {
            return Ok(ControlFlow::Continue(()));
        }
        let bond = self.transports[b].bond;
        let tail = self.transports[b].rows[r].0;
        let head = self.transports[b].cols[c].0;
        for x in (lo..=hi).rev() {
            self.capacity[b][c] -= x;
            for _ in 0..x {
                self.labeling.edges.push(LabeledEdge { bond, tail, head });
            }
            let flow = self.fill(b, r, c + 1, left - x);
            let keep = self.labeling.edges.len() - x as usize;
            self.labeling.edges.truncate(keep);
            self.capacity[b][c] += x;
            if flow?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Calls `visit` on every complete complex built from `usage`, in a fixed
/// deterministic order. Returns `Break` if the visitor stopped early.
pub fn for_each_complex<F>(
    pot: &Pot,
    usage: &[usize],
    budget: u64,
    mut visit: F,
) -> Result<ControlFlow<()>, AssemblyError>
where
    F: FnMut(&Labeling) -> ControlFlow<()>,
{
    let inst = TileInstancing::new(pot, usage)?;
    let transports: Vec<Transport> = pot
        .bonds()
        .map(|bond| {
            let count = |hatted: bool| -> Vec<(usize, u32)> {
                inst.instances
                    .iter()
                    .enumerate()
                    .filter_map(|(x, &t)| {
                        let k = pot.tiles()[t].count(CohesiveEnd { bond, hatted }) as u32;
                        (k > 0).then_some((x, k))
                    })
                    .collect()
            };
            Transport {
                bond,
                rows: count(false),
                cols: count(true),
            }
        })
        .collect();
    let capacity = transports
        .iter()
        .map(|t| t.cols.iter().map(|&(_, k)| k).collect())
        .collect();
    let mut walker = Walker {
        transports,
        capacity,
        labeling: Labeling {
            tiles: inst.instances.clone(),
            edges: Vec::new(),
        },
        nodes: 0,
        budget,
        visit: &mut visit,
    };
    walker.start_row(0, 0)
}

/// One isomorphism class of realized complexes, in canonical vertex order,
/// with one tile/bond labeling that produces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub graph: Multigraph,
    pub labeling: Labeling,
}

/// Pairwise non-isomorphic complexes of one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationSet {
    pub order: usize,
    pub classes: Vec<Realization>,
    /// True when every matching was explored.
    pub complete: bool,
}

impl RealizationSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &Multigraph> {
        self.classes.iter().map(|c| &c.graph)
    }

    pub fn contains_isomorphic(&self, g: &Multigraph) -> bool {
        if g.order() != self.order {
            return false;
        }
        let form = g.canonical_form();
        self.classes.iter().any(|c| c.graph.canonical_form() == form)
    }
}

#[derive(Default)]
struct ClassCollector {
    classes: BTreeMap<CanonicalForm, Realization>,
}

impl ClassCollector {
    fn add(&mut self, labeling: &Labeling) {
        let (form, lab) = canonical_labeling(&labeling.graph());
        self.classes.entry(form).or_insert_with_key(|form| Realization {
            graph: form.to_graph(),
            labeling: labeling.permuted(&lab),
        });
    }

    fn finish(self, order: usize) -> RealizationSet {
        RealizationSet {
            order,
            classes: self.classes.into_values().collect(),
            complete: true,
        }
    }
}

/// Every complex `usage` can form, up to isomorphism.
pub fn enumerate_complexes(pot: &Pot, usage: &[usize], budget: u64) -> Result<RealizationSet, AssemblyError> {
    let order = usage.iter().sum();
    let mut collector = ClassCollector::default();
    let _ = for_each_complex(pot, usage, budget, |l| {
        collector.add(l);
        ControlFlow::Continue(())
    })?;
    Ok(collector.finish(order))
}

/// Every complex of the given order, over all balanced usage vectors. The
/// budget applies to each usage vector's search tree separately.
pub fn realizations_at_order(pot: &Pot, order: usize, budget: u64) -> Result<RealizationSet, AssemblyError> {
    let mut collector = ClassCollector::default();
    for usage in usage_vectors(pot, order) {
        let _ = for_each_complex(pot, &usage, budget, |l| {
            collector.add(l);
            ControlFlow::Continue(())
        })?;
    }
    Ok(collector.finish(order))
}

/// Searches for a placement of pot tiles on the vertices of `g` and a bond
/// label plus orientation for every edge such that each vertex carries
/// exactly its tile's ends. The first placement in (tile index, bond index,
/// forward-before-reverse) order is returned.
pub fn realizes(pot: &Pot, g: &Multigraph) -> Option<Labeling> {
    let n = g.order();
    let degrees = g.degrees();
    let slots = 2 * (pot.bond_count() + 1);
    let code = |e: &CohesiveEnd| 2 * e.bond.index() + usize::from(e.hatted);
    let tile_counts: Vec<Vec<u32>> = pot
        .tiles()
        .iter()
        .map(|t| {
            let mut c = vec![0u32; slots];
            for e in t.ends() {
                c[code(e)] += 1;
            }
            c
        })
        .collect();
    let candidates: Vec<Vec<usize>> = degrees
        .iter()
        .map(|&d| (0..pot.len()).filter(|&t| pot.tiles()[t].arms() == d).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    // edges grouped by their larger endpoint
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        groups[v].push((u, v));
    }
    let mut state = Realizer {
        bonds: pot.bond_count(),
        tile_counts,
        candidates,
        groups,
        remaining: vec![vec![0; slots]; n],
        tiles: vec![usize::MAX; n],
        labels: Vec::new(),
    };
    if !state.place(0) {
        return None;
    }
    let edges = state
        .labels
        .iter()
        .map(|&(bond, tail, head)| LabeledEdge {
            bond: BondType(bond as u16),
            tail,
            head,
        })
        .collect();
    Some(Labeling {
        tiles: state.tiles,
        edges,
    })
}

struct Realizer {
    bonds: usize,
    tile_counts: Vec<Vec<u32>>,
    candidates: Vec<Vec<usize>>,
    groups: Vec<Vec<(usize, usize)>>,
    remaining: Vec<Vec<u32>>,
    tiles: Vec<usize>,
    /// (bond, tail, head) per labeled edge, in edge order
    labels: Vec<(usize, usize, usize)>,
}

impl Realizer {
    fn place(&mut self, v: usize) -> bool {
        if v == self.tiles.len() {
            return true;
        }
        for i in 0..self.candidates[v].len() {
            let t = self.candidates[v][i];
            self.tiles[v] = t;
            self.remaining[v] = self.tile_counts[t].clone();
            if self.label(v, 0, None) {
                return true;
            }
        }
        self.tiles[v] = usize::MAX;
        false
    }

    /// Labels edge `k` of group `v`; `prev` is the option chosen for the
    /// previous edge if it joined the same endpoints.
    fn label(&mut self, v: usize, k: usize, prev: Option<(usize, bool)>) -> bool {
        if k == self.groups[v].len() {
            return self.place(v + 1);
        }
        let (u, w) = self.groups[v][k];
        let parallel = k > 0 && self.groups[v][k - 1] == (u, w);
        for bond in 1..=self.bonds {
            for reverse in [false, true] {
                if parallel && prev.is_some_and(|p| (bond, reverse) < p) {
                    continue;
                }
                if u == w && reverse {
                    continue;
                }
                let (tail, head) = if reverse { (w, u) } else { (u, w) };
                let (plain, hat) = (2 * bond, 2 * bond + 1);
                if self.remaining[tail][plain] == 0 {
                    continue;
                }
                self.remaining[tail][plain] -= 1;
                if self.remaining[head][hat] == 0 {
                    self.remaining[tail][plain] += 1;
                    continue;
                }
                self.remaining[head][hat] -= 1;
                self.labels.push((bond, tail, head));
                if self.label(v, k + 1, Some((bond, reverse))) {
                    return true;
                }
                self.labels.pop();
                self.remaining[head][hat] += 1;
                self.remaining[tail][plain] += 1;
            }
        }
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scenario {
    /// The target is realizable.
    One,
    /// ... and nothing of smaller order is.
    Two,
    /// ... and nothing non-isomorphic of the same order is.
    Three,
}

impl Scenario {
    pub fn number(self) -> u8 {
        match self {
            Scenario::One => 1,
            Scenario::Two => 2,
            Scenario::Three => 3,
        }
    }

    pub fn all() -> [Scenario; 3] {
        [Scenario::One, Scenario::Two, Scenario::Three]
    }
}

impl TryFrom<u8> for Scenario {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        match value {
            1 => Ok(Scenario::One),
            2 => Ok(Scenario::Two),
            3 => Ok(Scenario::Three),
            other => Err(format!("scenario must be 1, 2 or 3, got {other}")),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Indeterminate => "INDETERMINATE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The pot does not build the target at all.
    NotRealized,
    /// A complex of smaller order exists.
    SmallerOrder,
    /// A complex of the target's order is not isomorphic to the target.
    NonIsomorphic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    pub verdict: Verdict,
    pub witness: Option<Labeling>,
    pub violation: Option<Violation>,
    /// The offending complex, for `SmallerOrder` / `NonIsomorphic`.
    pub counterexample: Option<Labeling>,
    pub note: String,
}

/// First complex at order `target.order()` that is not isomorphic to
/// `target`, stopping as soon as one is seen.
pub fn find_nonisomorphic(
    pot: &Pot,
    target: &Multigraph,
    target_form: &CanonicalForm,
    budget: u64,
) -> Result<Option<Labeling>, AssemblyError> {
    let simple = target.is_simple();
    for usage in usage_vectors(pot, target.order()) {
        let mut found = None;
        let _ = for_each_complex(pot, &usage, budget, |l| {
            let g = l.graph();
            let differs = (simple && !g.is_simple()) || g.canonical_form() != *target_form;
            if differs {
                found = Some(l.clone());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Any complex of order below `order`, as proof that the minimum order is smaller.
pub fn smaller_complex(pot: &Pot, order: usize) -> Option<Labeling> {
    let usage = realizable_below(pot, order)?;
    let mut first = None;
    let _ = for_each_complex(pot, &usage, u64::MAX, |l| {
        first = Some(l.clone());
        ControlFlow::Break(())
    })
    .expect("balanced usage with unlimited budget");
    first
}

/// Checks `pot` against `target` under `scenario`.
pub fn verify_scenario(pot: &Pot, target: &Multigraph, scenario: Scenario, budget: u64) -> ScenarioReport {
    let mut report = ScenarioReport {
        scenario,
        verdict: Verdict::Fail,
        witness: None,
        violation: None,
        counterexample: None,
        note: String::new(),
    };
    let Some(witness) = realizes(pot, target) else {
        report.violation = Some(Violation::NotRealized);
        report.note = "pot does not realize the target".into();
        return report;
    };
    report.witness = Some(witness);
    if scenario >= Scenario::Two {
        if let Some(small) = smaller_complex(pot, target.order()) {
            report.note = format!("pot realizes a complex of order {}", small.order());
            report.violation = Some(Violation::SmallerOrder);
            report.counterexample = Some(small);
            return report;
        }
    }
    if scenario == Scenario::Three {
        match find_nonisomorphic(pot, target, &target.canonical_form(), budget) {
            Err(e) => {
                report.verdict = Verdict::Indeterminate;
                report.note = e.to_string();
                return report;
            }
            Ok(Some(other)) => {
                report.note = "pot realizes a non-isomorphic complex of the same order".into();
                report.violation = Some(Violation::NonIsomorphic);
                report.counterexample = Some(other);
                return report;
            }
            Ok(None) => {}
        }
    }
    report.verdict = Verdict::Pass;
    report
}
