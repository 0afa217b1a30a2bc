//! Exhaustive minimization of bond and tile types.
//!
//! Every pot that realizes a target induces an edge labeling of it (bond
//! letter plus orientation per edge), and the pot read back from that
//! labeling is contained in the original, so it passes any scenario the
//! original passes. Searching labelings of the fixed target is therefore
//! complete. Letters are introduced in order of first use and each letter's
//! first edge is oriented forward, which removes renaming and polarity
//! symmetry.
//!
//! Two minima are reported: fewest bonds then fewest tiles at that bond
//! count, and fewest tiles then fewest bonds at that tile count.
//!
//! Optional pruning rules for scenario 3, each toggled separately:
//! - no tile type on two adjacent vertices (loopless targets);
//! - on wheels, no letter on a rim edge and a spoke not touching it;
//! - on wheels, no letter on more than two rim edges.
//!
//! The rules are necessary conditions for scenario 3 on those targets, so
//! they should only cut runtime; results found with them are flagged as
//! conditional on the rules.

use std::collections::{HashMap, VecDeque};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::assembly::{find_nonisomorphic, Labeling, LabeledEdge, Scenario};
use crate::matrix::realizable_below;
use crate::multigraph::{CanonicalForm, Multigraph};
use crate::tiles::{BondType, CohesiveEnd, Pot, Tile};

/// Default per-candidate node budget for scenario-3 verification.
pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PruneFlags {
    pub no_adjacent_tiles: bool,
    pub rim_spoke_exclusive: bool,
    pub rim_at_most_twice: bool,
}

impl PruneFlags {
    pub fn all() -> Self {
        PruneFlags {
            no_adjacent_tiles: true,
            rim_spoke_exclusive: true,
            rim_at_most_twice: true,
        }
    }

    pub fn any(self) -> bool {
        self.no_adjacent_tiles || self.rim_spoke_exclusive || self.rim_at_most_twice
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub target: Multigraph,
    pub scenario: Scenario,
    pub max_bonds: usize,
    pub max_tiles: usize,
    pub prune: PruneFlags,
    /// Node budget per scenario-3 verification.
    pub budget: u64,
}

impl SearchSpec {
    /// Unbounded, unpruned search.
    pub fn new(target: Multigraph, scenario: Scenario) -> Self {
        let max_bonds = target.size().max(1);
        let max_tiles = target.order().max(1);
        SearchSpec {
            target,
            scenario,
            max_bonds,
            max_tiles,
            prune: PruneFlags::default(),
            budget: DEFAULT_SEARCH_BUDGET,
        }
    }

    pub fn with_prune(mut self, prune: PruneFlags) -> Self {
        self.prune = prune;
        self
    }
}

/// A minimizing pot together with the labeling of the target it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimum {
    pub bonds: usize,
    pub tiles: usize,
    pub pot: Pot,
    pub labeling: Labeling,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaResult {
    pub scenario: Scenario,
    /// Fewest bonds, then fewest tiles.
    pub bonds_first: Option<Minimum>,
    /// Fewest tiles, then fewest bonds.
    pub tiles_first: Option<Minimum>,
    /// No candidate that could have improved a minimum was left undecided.
    pub exhaustive: bool,
    /// Pruning rules were in effect.
    pub lemma_conditional: bool,
}

impl MinimaResult {
    /// Minimum number of bond types.
    pub fn min_bonds(&self) -> Option<usize> {
        self.bonds_first.as_ref().map(|m| m.bonds)
    }

    /// Minimum number of tile types.
    pub fn min_tiles(&self) -> Option<usize> {
        self.tiles_first.as_ref().map(|m| m.tiles)
    }
}

/// Tile-count bounds for scenario 1: distinct degrees at least, distinct
/// even degrees plus twice the distinct odd degrees at most.
pub fn check_bounds(target: &Multigraph, result: &MinimaResult) -> bool {
    let Some(t) = result.min_tiles() else {
        return false;
    };
    let stats = target.degree_stats();
    stats.all <= t && t <= stats.even + 2 * stats.odd
}

/// Bond and tile minima never decrease from scenario 1 to 2 to 3.
pub fn check_hierarchy(r1: &MinimaResult, r2: &MinimaResult, r3: &MinimaResult) -> bool {
    let seq = |f: fn(&MinimaResult) -> Option<usize>| -> Option<[usize; 3]> {
        Some([f(r1)?, f(r2)?, f(r3)?])
    };
    let (Some(b), Some(t)) = (seq(MinimaResult::min_bonds), seq(MinimaResult::min_tiles)) else {
        return false;
    };
    b[0] <= b[1] && b[1] <= b[2] && t[0] <= t[1] && t[1] <= t[2]
}

pub fn search_minima(spec: &SearchSpec) -> MinimaResult {
    let engine = Engine::new(spec);
    let mut exhaustive = true;
    let mut bonds_first = None;
    for k in 1..=spec.max_bonds.min(engine.edges.len()) {
        let run = engine.run(Mode::ExactBonds(k), spec.max_tiles);
        exhaustive &= run.decided;
        if let Some(found) = run.best {
            bonds_first = Some(found);
            break;
        }
    }
    let tiles_first = match &bonds_first {
        Some(b) if b.tiles > 1 => {
            let run = engine.run(Mode::AtMostBonds(spec.max_bonds), b.tiles - 1);
            exhaustive &= run.decided;
            Some(run.best.unwrap_or_else(|| b.clone()))
        }
        Some(b) => Some(b.clone()),
        None => None,
    };
    MinimaResult {
        scenario: spec.scenario,
        bonds_first,
        tiles_first,
        exhaustive,
        lemma_conditional: engine.prune.any(),
    }
}

/// Calls `visit` with every labeling (up to letter renaming and polarity)
/// whose induced pot passes `spec.scenario`, using at most
/// `spec.max_bonds` letters and `spec.max_tiles` tiles. Returns `false` if
/// some candidate could not be decided within the budget.
pub fn for_each_passing_labeling<F>(spec: &SearchSpec, visit: F) -> bool
where
    F: Fn(&Pot, &Labeling) + Sync,
{
    let engine = Engine::new(spec);
    let collector = |pot: &Pot, labeling: &Labeling| visit(pot, labeling);
    engine.run_all(&collector)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// Exactly `k` letters; minimize tiles.
    ExactBonds(usize),
    /// At most `k` letters; minimize (tiles, bonds).
    AtMostBonds(usize),
}

struct RunResult {
    best: Option<Minimum>,
    decided: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail,
    Undecided,
}

struct Engine<'s> {
    spec: &'s SearchSpec,
    target_form: CanonicalForm,
    n: usize,
    /// Edges in search order, as stored in the target (`u <= v`).
    edges: Vec<(usize, usize)>,
    /// Vertices whose last incident edge is at each position.
    completes_at: Vec<Vec<usize>>,
    degree: Vec<usize>,
    neighbours: Vec<Vec<usize>>,
    prune: PruneFlags,
    /// For wheels: per search position, `Some((a, b))` for a rim edge and
    /// `None` for a spoke; `spoke_rim_end[pos]` is the rim end of a spoke.
    rim: Vec<Option<(usize, usize)>>,
    spoke_rim_end: Vec<usize>,
    cache: Mutex<HashMap<Vec<Tile>, Outcome>>,
}

impl<'s> Engine<'s> {
    fn new(spec: &'s SearchSpec) -> Self {
        let g = &spec.target;
        let n = g.order();
        let degree = g.degrees();
        let neighbours = g.neighbours();
        // breadth-first ranks from a highest-degree vertex so vertices close early
        let mut rank = vec![usize::MAX; n];
        let mut next = 0;
        while next < n {
            let start = (0..n)
                .filter(|&v| rank[v] == usize::MAX)
                .max_by_key(|&v| (degree[v], std::cmp::Reverse(v)))
                .expect("unranked vertex");
            let mut queue = VecDeque::from([start]);
            rank[start] = next;
            next += 1;
            while let Some(u) = queue.pop_front() {
                for &w in &neighbours[u] {
                    if rank[w] == usize::MAX {
                        rank[w] = next;
                        next += 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
        edges.sort_by_key(|&(u, v)| {
            let (a, b) = (rank[u].min(rank[v]), rank[u].max(rank[v]));
            (b, a)
        });
        let mut completes_at = vec![Vec::new(); edges.len()];
        for v in 0..n {
            if let Some(last) = edges.iter().rposition(|&(a, b)| a == v || b == v) {
                completes_at[last].push(v);
            }
        }

        let mut prune = PruneFlags::default();
        let mut rim = vec![None; edges.len()];
        let mut spoke_rim_end = vec![usize::MAX; edges.len()];
        if spec.scenario == Scenario::Three {
            prune.no_adjacent_tiles = spec.prune.no_adjacent_tiles && !g.has_loops();
            if spec.prune.rim_spoke_exclusive || spec.prune.rim_at_most_twice {
                if let Some(hub) = wheel_hub(g) {
                    prune.rim_spoke_exclusive = spec.prune.rim_spoke_exclusive;
                    prune.rim_at_most_twice = spec.prune.rim_at_most_twice;
                    for (pos, &(u, v)) in edges.iter().enumerate() {
                        if u == hub || v == hub {
                            spoke_rim_end[pos] = if u == hub { v } else { u };
                        } else {
                            rim[pos] = Some((u, v));
                        }
                    }
                }
            }
        }
        Engine {
            spec,
            target_form: g.canonical_form(),
            n,
            edges,
            completes_at,
            degree,
            neighbours,
            prune,
            rim,
            spoke_rim_end,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn letter_limit(&self, mode: Mode) -> usize {
        match mode {
            Mode::ExactBonds(k) | Mode::AtMostBonds(k) => k.min(self.edges.len()),
        }
    }

    /// Prefixes of the labeling tree to hand out to worker threads.
    fn prefixes(&self, mode: Mode, tile_bound: usize) -> Vec<Vec<(u8, bool)>> {
        let depth = self.edges.len().min(5);
        let mut state = State::new(self, mode, tile_bound);
        let mut out = Vec::new();
        fn walk(state: &mut State<'_, '_>, pos: usize, depth: usize, out: &mut Vec<Vec<(u8, bool)>>) {
            if pos == depth {
                out.push(state.labels.clone());
                return;
            }
            for (letter, reverse) in state.options(pos) {
                if state.apply(pos, letter, reverse) {
                    walk(state, pos + 1, depth, out);
                }
                state.undo(pos);
            }
        }
        walk(&mut state, 0, depth, &mut out);
        out
    }

    fn run(&self, mode: Mode, tile_bound: usize) -> RunResult {
        let best_key = AtomicU64::new(pack(tile_bound, 0xFFFF));
        let prefixes = self.prefixes(mode, tile_bound);
        let branch_results: Vec<(Option<(u64, Minimum)>, Option<u64>)> = prefixes
            .par_iter()
            .map(|prefix| {
                let mut state = State::new(self, mode, tile_bound);
                state.shared_best = Some(&best_key);
                let mut ok = true;
                for (pos, &(letter, reverse)) in prefix.iter().enumerate() {
                    ok &= state.apply(pos, letter, reverse);
                }
                let mut found: Option<(u64, Minimum)> = None;
                let mut undecided: Option<u64> = None;
                if ok {
                    let mut on_leaf = |state: &State<'_, '_>| -> ControlFlow<()> {
                        let (pot, labeling) = state.induced();
                        let key = pack(pot.len(), pot.bond_count());
                        let key = self.mode_key(mode, key);
                        if key > best_key.load(Ordering::Relaxed) {
                            return ControlFlow::Continue(());
                        }
                        match self.verify(&pot, &labeling) {
                            Outcome::Pass => {
                                best_key.fetch_min(key, Ordering::Relaxed);
                                if found.as_ref().is_none_or(|(k, _)| key < *k) {
                                    found = Some((
                                        key,
                                        Minimum {
                                            bonds: pot.bond_count(),
                                            tiles: pot.len(),
                                            pot,
                                            labeling,
                                        },
                                    ));
                                }
                            }
                            Outcome::Undecided => {
                                undecided = Some(undecided.map_or(key, |u| u.min(key)));
                            }
                            Outcome::Fail => {}
                        }
                        ControlFlow::Continue(())
                    };
                    let _ = state.descend(prefix.len(), &mut on_leaf);
                }
                for pos in (0..prefix.len()).rev() {
                    state.undo(pos);
                }
                (found, undecided)
            })
            .collect();
        let mut best: Option<(u64, Minimum)> = None;
        let mut undecided: Option<u64> = None;
        for (found, und) in branch_results {
            if let Some((k, m)) = found {
                if best.as_ref().is_none_or(|(bk, _)| k < *bk) {
                    best = Some((k, m));
                }
            }
            if let Some(u) = und {
                undecided = Some(undecided.map_or(u, |x| x.min(u)));
            }
        }
        let decided = match (&best, undecided) {
            (_, None) => true,
            (Some((bk, _)), Some(u)) => u >= *bk,
            (None, Some(_)) => false,
        };
        RunResult {
            best: best.map(|(_, m)| m),
            decided,
        }
    }

    fn run_all<F>(&self, visit: &F) -> bool
    where
        F: Fn(&Pot, &Labeling) + Sync,
    {
        let mode = Mode::AtMostBonds(self.spec.max_bonds);
        let tile_bound = self.spec.max_tiles;
        self.prefixes(mode, tile_bound)
            .par_iter()
            .map(|prefix| {
                let mut state = State::new(self, mode, tile_bound);
                let mut ok = true;
                for (pos, &(letter, reverse)) in prefix.iter().enumerate() {
                    ok &= state.apply(pos, letter, reverse);
                }
                let mut decided = true;
                if ok {
                    let mut on_leaf = |state: &State<'_, '_>| -> ControlFlow<()> {
                        let (pot, labeling) = state.induced();
                        match self.verify(&pot, &labeling) {
                            Outcome::Pass => visit(&pot, &labeling),
                            Outcome::Undecided => decided = false,
                            Outcome::Fail => {}
                        }
                        ControlFlow::Continue(())
                    };
                    let _ = state.descend(prefix.len(), &mut on_leaf);
                }
                decided
            })
            .reduce(|| true, |a, b| a && b)
    }

    fn mode_key(&self, mode: Mode, key: u64) -> u64 {
        match mode {
            // bonds are fixed, rank by tiles only
            Mode::ExactBonds(_) => key | 0xFFFF,
            Mode::AtMostBonds(_) => key,
        }
    }

    fn verify(&self, pot: &Pot, labeling: &Labeling) -> Outcome {
        let order = self.n;
        match self.spec.scenario {
            Scenario::One => Outcome::Pass,
            Scenario::Two => {
                if realizable_below(pot, order).is_some() {
                    Outcome::Fail
                } else {
                    Outcome::Pass
                }
            }
            Scenario::Three => {
                if self.swap_counterexample(labeling) {
                    return Outcome::Fail;
                }
                let key = pot.tiles().to_vec();
                if let Some(&cached) = self.cache.lock().expect("cache lock").get(&key) {
                    return cached;
                }
                let outcome = if realizable_below(pot, order).is_some() {
                    Outcome::Fail
                } else {
                    match find_nonisomorphic(pot, &self.spec.target, &self.target_form, self.spec.budget) {
                        Ok(None) => Outcome::Pass,
                        Ok(Some(_)) => Outcome::Fail,
                        Err(_) => Outcome::Undecided,
                    }
                };
                self.cache.lock().expect("cache lock").insert(key, outcome);
                outcome
            }
        }
    }

    /// Whether exchanging the heads of two same-letter edges gives a complex
    /// that is not the target.
    fn swap_counterexample(&self, labeling: &Labeling) -> bool {
        let edges = &labeling.edges;
        let simple = self.spec.target.is_simple();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = (edges[i], edges[j]);
                if a.bond != b.bond || a.tail == b.tail || a.head == b.head {
                    continue;
                }
                if simple && (a.tail == b.head || b.tail == a.head) {
                    return true;
                }
                let swapped = edges.iter().enumerate().map(|(k, e)| {
                    if k == i {
                        (a.tail, b.head)
                    } else if k == j {
                        (b.tail, a.head)
                    } else {
                        (e.tail, e.head)
                    }
                });
                let g = Multigraph::new(self.n, swapped).expect("in range");
                if (simple && !g.is_simple()) || g.canonical_form() != self.target_form {
                    return true;
                }
            }
        }
        false
    }
}

fn pack(tiles: usize, bonds: usize) -> u64 {
    ((tiles.min(0xFFFF) as u64) << 16) | bonds.min(0xFFFF) as u64
}

/// The hub of a wheel-shaped target (for `W_4` any vertex serves).
fn wheel_hub(g: &Multigraph) -> Option<usize> {
    let n = g.order();
    let wheel = Multigraph::wheel(n).ok()?;
    let phi = g.isomorphism(&wheel)?;
    phi.iter().position(|&x| x == n - 1)
}

/// Mutable DFS state over edge positions.
struct State<'e, 's> {
    engine: &'e Engine<'s>,
    mode: Mode,
    letter_limit: usize,
    tile_bound: usize,
    shared_best: Option<&'e AtomicU64>,
    labels: Vec<(u8, bool)>,
    letters: usize,
    /// `counts[v][2 * letter + hatted]`
    counts: Vec<Vec<u8>>,
    filled: Vec<usize>,
    /// Distinct completed tiles with reference counts.
    tiles: Vec<(Vec<u8>, usize)>,
    tile_of: Vec<usize>,
    /// Per letter: rim edges and spoke rim-ends carrying it.
    rim_uses: Vec<Vec<(usize, usize)>>,
    spoke_uses: Vec<Vec<usize>>,
    /// Whether `apply` at each position introduced a new letter.
    opened: Vec<bool>,
}

impl<'e, 's> State<'e, 's> {
    fn new(engine: &'e Engine<'s>, mode: Mode, tile_bound: usize) -> Self {
        let limit = engine.letter_limit(mode);
        let slots = 2 * limit.max(1);
        State {
            engine,
            mode,
            letter_limit: limit,
            tile_bound,
            shared_best: None,
            labels: Vec::with_capacity(engine.edges.len()),
            letters: 0,
            counts: vec![vec![0u8; slots]; engine.n],
            filled: vec![0; engine.n],
            tiles: Vec::new(),
            tile_of: vec![usize::MAX; engine.n],
            rim_uses: vec![Vec::new(); limit.max(1)],
            spoke_uses: vec![Vec::new(); limit.max(1)],
            opened: Vec::with_capacity(engine.edges.len()),
        }
    }

    fn options(&self, pos: usize) -> Vec<(u8, bool)> {
        let (u, v) = self.engine.edges[pos];
        let mut opts = Vec::with_capacity(2 * self.letters + 1);
        for letter in 0..self.letters {
            opts.push((letter as u8, false));
            // a loop reads the same either way round
            if u != v {
                opts.push((letter as u8, true));
            }
        }
        if self.letters < self.letter_limit {
            opts.push((self.letters as u8, false));
        }
        opts
    }

    /// Current (tiles, bonds) bound: the tighter of the run's initial bound
    /// and the best result found so far.
    fn bound(&self) -> (usize, usize) {
        let key = match self.shared_best {
            Some(b) => b.load(Ordering::Relaxed),
            None => pack(self.tile_bound, 0xFFFF),
        };
        (((key >> 16) as usize).min(self.tile_bound), (key & 0xFFFF) as usize)
    }

    /// Applies a label at `pos`; returns false if the partial labeling is
    /// already hopeless. `undo(pos)` must follow either way.
    fn apply(&mut self, pos: usize, letter: u8, reverse: bool) -> bool {
        let engine = self.engine;
        let (u, v) = engine.edges[pos];
        let (tail, head) = if reverse { (v, u) } else { (u, v) };
        let l = letter as usize;
        let opened = l == self.letters;
        if opened {
            self.letters += 1;
        }
        self.opened.push(opened);
        self.labels.push((letter, reverse));
        self.counts[tail][2 * l] += 1;
        self.counts[head][2 * l + 1] += 1;
        self.filled[u] += 1;
        if u != v {
            self.filled[v] += 1;
        }
        let mut ok = true;
        if let Some(r) = engine.rim[pos] {
            self.rim_uses[l].push(r);
        } else if engine.spoke_rim_end[pos] != usize::MAX {
            self.spoke_uses[l].push(engine.spoke_rim_end[pos]);
        }
        if engine.prune.rim_at_most_twice && self.rim_uses[l].len() > 2 {
            ok = false;
        }
        if ok && engine.prune.rim_spoke_exclusive {
            ok = self.spoke_uses[l]
                .iter()
                .all(|&w| self.rim_uses[l].iter().all(|&(a, b)| w == a || w == b));
        }
        let mut pushed = false;
        for &w in &engine.completes_at[pos] {
            let key = self.counts[w].clone();
            let id = match self.tiles.iter().position(|(k, _)| *k == key) {
                Some(id) => {
                    self.tiles[id].1 += 1;
                    id
                }
                None => {
                    self.tiles.push((key, 1));
                    pushed = true;
                    self.tiles.len() - 1
                }
            };
            self.tile_of[w] = id;
            if engine.prune.no_adjacent_tiles
                && engine.neighbours[w].iter().any(|&x| self.tile_of[x] == id)
            {
                ok = false;
            }
        }
        if !ok {
            return false;
        }
        if let Mode::ExactBonds(k) = self.mode {
            if self.letters + (engine.edges.len() - pos - 1) < k {
                return false;
            }
        }
        let (tile_bound, bond_bound) = self.bound();
        let distinct = self.tiles.len();
        if distinct > tile_bound {
            return false;
        }
        if let Mode::AtMostBonds(_) = self.mode {
            if distinct == tile_bound && self.letters > bond_bound {
                return false;
            }
        }
        if distinct == tile_bound {
            let check = |x: usize| self.fits_existing(x);
            if pushed {
                if !(0..engine.n).all(check) {
                    return false;
                }
            } else if !check(tail) || !check(head) {
                return false;
            }
        }
        true
    }

    /// An incomplete vertex can still become one of the existing tiles.
    fn fits_existing(&self, x: usize) -> bool {
        if self.tile_of[x] != usize::MAX || self.filled[x] == 0 {
            return true;
        }
        let arms = self.engine.degree[x];
        let have = &self.counts[x];
        self.tiles.iter().any(|(tile, _)| {
            tile.iter().map(|&c| c as usize).sum::<usize>() == arms
                && tile.iter().zip(have).all(|(&t, &h)| h <= t)
        })
    }

    fn undo(&mut self, pos: usize) {
        let engine = self.engine;
        let (u, v) = engine.edges[pos];
        let (letter, reverse) = self.labels.pop().expect("label to undo");
        let l = letter as usize;
        for &w in engine.completes_at[pos].iter().rev() {
            let id = self.tile_of[w];
            self.tile_of[w] = usize::MAX;
            self.tiles[id].1 -= 1;
            if self.tiles[id].1 == 0 {
                debug_assert_eq!(id, self.tiles.len() - 1);
                self.tiles.pop();
            }
        }
        if engine.rim[pos].is_some() {
            self.rim_uses[l].pop();
        } else if engine.spoke_rim_end[pos] != usize::MAX {
            self.spoke_uses[l].pop();
        }
        let (tail, head) = if reverse { (v, u) } else { (u, v) };
        self.counts[tail][2 * l] -= 1;
        self.counts[head][2 * l + 1] -= 1;
        self.filled[u] -= 1;
        if u != v {
            self.filled[v] -= 1;
        }
        if self.opened.pop().expect("opened flag") {
            self.letters -= 1;
        }
    }

    fn descend<F>(&mut self, pos: usize, on_leaf: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&State<'_, '_>) -> ControlFlow<()>,
    {
        if pos == self.engine.edges.len() {
            if let Mode::ExactBonds(k) = self.mode {
                if self.letters != k {
                    return ControlFlow::Continue(());
                }
            }
            return on_leaf(self);
        }
        for (letter, reverse) in self.options(pos) {
            let flow = if self.apply(pos, letter, reverse) {
                self.descend(pos + 1, on_leaf)
            } else {
                ControlFlow::Continue(())
            };
            self.undo(pos);
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// The pot read off the current full labeling, and the labeling itself
    /// in the pot's numbering.
    fn induced(&self) -> (Pot, Labeling) {
        let engine = self.engine;
        // pot tiles in order of first vertex
        let mut order: Vec<usize> = Vec::new();
        for v in 0..engine.n {
            let id = self.tile_of[v];
            if !order.contains(&id) {
                order.push(id);
            }
        }
        let raw_tiles: Vec<Tile> = order
            .iter()
            .map(|&id| {
                let counts = &self.tiles[id].0;
                let mut ends = Vec::new();
                for (slot, &c) in counts.iter().enumerate() {
                    let end = CohesiveEnd {
                        bond: BondType((slot / 2 + 1) as u16),
                        hatted: slot % 2 == 1,
                    };
                    ends.extend(std::iter::repeat_n(end, c as usize));
                }
                Tile::new(ends)
            })
            .collect();
        // first-appearance renumbering, matching Pot's own normalization
        let mut renumber: HashMap<u16, u16> = HashMap::new();
        for t in &raw_tiles {
            for e in t.ends() {
                let next = renumber.len() as u16 + 1;
                renumber.entry(e.bond.0).or_insert(next);
            }
        }
        let map_end = |e: &CohesiveEnd| CohesiveEnd {
            bond: BondType(renumber[&e.bond.0]),
            hatted: e.hatted,
        };
        let tiles: Vec<Tile> = raw_tiles
            .iter()
            .map(|t| Tile::new(t.ends().iter().map(map_end).collect()))
            .collect();
        let pot = Pot::new(tiles).expect("labeling tiles are distinct and nonempty");
        let vertex_tiles = (0..engine.n)
            .map(|v| order.iter().position(|&id| id == self.tile_of[v]).expect("listed"))
            .collect();
        let edges = engine
            .edges
            .iter()
            .zip(&self.labels)
            .map(|(&(u, v), &(letter, reverse))| {
                let (tail, head) = if reverse { (v, u) } else { (u, v) };
                LabeledEdge {
                    bond: BondType(renumber[&(letter as u16 + 1)]),
                    tail,
                    head,
                }
            })
            .collect();
        let labeling = Labeling {
            tiles: vertex_tiles,
            edges,
        };
        debug_assert!(labeling.is_consistent_with(&pot));
        (pot, labeling)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minima(g: Multigraph, s: Scenario, prune: PruneFlags) -> MinimaResult {
        search_minima(&SearchSpec::new(g, s).with_prune(prune))
    }

    #[test]
    fn wheel_six_scenario_one() {
        let r = minima(Multigraph::wheel(6).unwrap(), Scenario::One, PruneFlags::default());
        assert_eq!((r.min_bonds(), r.min_tiles()), (Some(1), Some(2)));
        assert!(r.exhaustive && !r.lemma_conditional);
        let m = r.bonds_first.unwrap();
        assert!(m.labeling.is_consistent_with(&m.pot));
    }

    #[test]
    fn triangle_scenario_three() {
        let r = minima(Multigraph::cycle(3).unwrap(), Scenario::Three, PruneFlags::default());
        assert_eq!((r.min_bonds(), r.min_tiles()), (Some(2), Some(3)));
    }

    #[test]
    fn cycle_five_scenario_three() {
        let r = minima(Multigraph::cycle(5).unwrap(), Scenario::Three, PruneFlags::default());
        assert_eq!((r.min_bonds(), r.min_tiles()), (Some(3), Some(4)));
    }

    #[test]
    fn bounds_and_hierarchy_helpers() {
        let w = Multigraph::wheel(7).unwrap();
        let r1 = minima(w.clone(), Scenario::One, PruneFlags::default());
        assert!(check_bounds(&w, &r1));
        assert!(check_hierarchy(&r1, &r1, &r1));
        let empty = MinimaResult {
            scenario: Scenario::One,
            bonds_first: None,
            tiles_first: None,
            exhaustive: true,
            lemma_conditional: false,
        };
        assert!(!check_bounds(&w, &empty));
        assert!(!check_hierarchy(&r1, &empty, &r1));
    }

    #[test]
    fn hub_detection() {
        let w = Multigraph::wheel(6).unwrap();
        assert_eq!(wheel_hub(&w), Some(5));
        let perm = [5, 0, 1, 2, 3, 4];
        assert_eq!(wheel_hub(&w.permuted(&perm)), Some(4));
        assert_eq!(wheel_hub(&Multigraph::cycle(6).unwrap()), None);
    }
}
