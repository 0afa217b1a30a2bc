//! Construction matrices and tile-usage spectra.
//!
//! Row `i` of the construction matrix holds, for every tile `t_j`, the net
//! number `z[i][j]` of unhatted minus hatted ends of bond `a_{i+1}`. A usage
//! vector `R` (how many copies of each tile go into a complex) is admissible
//! exactly when `z . R = 0`; dividing by the order gives the proportion
//! vector, which also satisfies `sum r = 1`.
//!
//! Everything here is exact: integers for usage vectors, [`BigRational`] for
//! the proportion system.

use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::tiles::Pot;

/// Default bound on the ascending order search in [`min_order`].
pub const DEFAULT_ORDER_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionMatrix {
    /// `z[i][j]`: net count of bond `i + 1` on tile `j`.
    z: Vec<Vec<i64>>,
    tiles: usize,
}

impl ConstructionMatrix {
    pub fn bonds(&self) -> usize {
        self.z.len()
    }

    pub fn tiles(&self) -> usize {
        self.tiles
    }

    pub fn net(&self, bond: usize, tile: usize) -> i64 {
        self.z[bond][tile]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.z
    }

    /// The augmented system: balance rows with right-hand side 0, then the
    /// all-ones row with right-hand side 1.
    pub fn augmented(&self) -> Vec<Vec<i64>> {
        let mut rows: Vec<Vec<i64>> = self
            .z
            .iter()
            .map(|r| r.iter().copied().chain(std::iter::once(0)).collect())
            .collect();
        rows.push(vec![1; self.tiles + 1]);
        rows
    }

    /// `z . usage`, one entry per bond.
    pub fn imbalance(&self, usage: &[usize]) -> Vec<i64> {
        self.z
            .iter()
            .map(|row| row.iter().zip(usage).map(|(&z, &r)| z * r as i64).sum())
            .collect()
    }

    pub fn is_balanced(&self, usage: &[usize]) -> bool {
        usage.len() == self.tiles && self.imbalance(usage).iter().all(|&x| x == 0)
    }
}

impl fmt::Display for ConstructionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.augmented() {
            let (rhs, body) = row.split_last().expect("nonempty row");
            let cells: Vec<String> = body.iter().map(i64::to_string).collect();
            writeln!(f, "{} | {}", cells.join(" "), rhs)?;
        }
        Ok(())
    }
}

pub fn build_matrix(pot: &Pot) -> ConstructionMatrix {
    let z = pot
        .bonds()
        .map(|b| pot.tiles().iter().map(|t| t.net(b)).collect())
        .collect();
    ConstructionMatrix {
        z,
        tiles: pot.len(),
    }
}

/// Solution set of the augmented proportion system: `particular + span(nullspace)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSolution {
    pub particular: Vec<BigRational>,
    pub nullspace: Vec<Vec<BigRational>>,
    /// Some solution has every component `>= 0`.
    pub admissible: bool,
}

impl SpectrumSolution {
    pub fn is_unique(&self) -> bool {
        self.nullspace.is_empty()
    }

    /// The unique solution, if the nullspace is trivial.
    pub fn unique(&self) -> Option<&[BigRational]> {
        self.is_unique().then_some(self.particular.as_slice())
    }
}

/// Solves the augmented system exactly. `None` means it is inconsistent:
/// no proportion vector exists and the pot realizes nothing.
pub fn solve(matrix: &ConstructionMatrix) -> Option<SpectrumSolution> {
    let p = matrix.tiles();
    let mut rows: Vec<Vec<BigRational>> = matrix
        .augmented()
        .into_iter()
        .map(|r| r.into_iter().map(rat).collect())
        .collect();
    let pivots = rref(&mut rows, p);
    // a pivot in the augmented column means 0 = 1
    if rows
        .iter()
        .any(|r| r[..p].iter().all(Zero::is_zero) && !r[p].is_zero())
    {
        return None;
    }
    let mut particular = vec![BigRational::zero(); p];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rows[r][p].clone();
    }
    let free: Vec<usize> = (0..p).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); p];
            v[f] = BigRational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -rows[r][f].clone();
            }
            v
        })
        .collect::<Vec<_>>();
    let admissible = if nullspace.is_empty() {
        particular.iter().all(|x| !x.is_negative())
    } else {
        nonnegative_point(matrix).is_some()
    };
    Some(SpectrumSolution {
        particular,
        nullspace,
        admissible,
    })
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Reduced row echelon form over the first `cols` columns; returns pivot columns.
fn rref(rows: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let factor = rows[k][c].clone();
                for j in 0..rows[k].len() {
                    let delta = &factor * &rows[r][j];
                    rows[k][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// A vertex of `{r >= 0 : z r = 0, sum r = 1}`, or `None` if that polytope is
/// empty. Exact phase-one simplex with Bland's rule.
pub fn nonnegative_point(matrix: &ConstructionMatrix) -> Option<Vec<BigRational>> {
    let p = matrix.tiles();
    let aug = matrix.augmented();
    let m = aug.len();
    let width = p + m + 1;
    // columns: p structural, m artificial, rhs
    let mut tab: Vec<Vec<BigRational>> = aug
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut t = vec![BigRational::zero(); width];
            for j in 0..p {
                t[j] = rat(row[j]);
            }
            t[p + i] = BigRational::one();
            t[width - 1] = rat(row[p]);
            t
        })
        .collect();
    let mut basis: Vec<usize> = (p..p + m).collect();
    // reduced costs of minimizing the artificial sum
    let mut cost = vec![BigRational::zero(); width];
    for row in &tab {
        for j in 0..p {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    loop {
        let Some(enter) = (0..p + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][width - 1] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (row, _) = leave.expect("phase-one objective is bounded below");
        let inv = tab[row][enter].recip();
        for x in tab[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != row && !tab[i][enter].is_zero() {
                let factor = tab[i][enter].clone();
                for j in 0..width {
                    let delta = &factor * &tab[row][j];
                    tab[i][j] -= delta;
                }
            }
        }
        let factor = cost[enter].clone();
        for j in 0..width {
            let delta = &factor * &tab[row][j];
            cost[j] -= delta;
        }
        basis[row] = enter;
    }
    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut point = vec![BigRational::zero(); p];
    for (i, &b) in basis.iter().enumerate() {
        if b < p {
            point[b] = tab[i][width - 1].clone();
        }
    }
    Some(point)
}

/// Least common multiple of the denominators of the nonzero entries.
pub fn denominator_lcm(r: &[BigRational]) -> BigInt {
    r.iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinOrder {
    /// Smallest realizable order and a usage vector attaining it.
    Found { order: usize, witness: Vec<usize> },
    /// No nonnegative proportion vector exists.
    Unrealizable,
    /// Realizable, but not at any order up to `cap`; `realizable_at` is an
    /// order known to work.
    BeyondCap { cap: usize, realizable_at: BigInt },
}

impl MinOrder {
    pub fn order(&self) -> Option<usize> {
        match self {
            MinOrder::Found { order, .. } => Some(*order),
            _ => None,
        }
    }
}

pub fn min_order(pot: &Pot, cap: usize) -> MinOrder {
    let matrix = build_matrix(pot);
    let mut search = UsageSearch::new(&matrix);
    for n in 1..=cap {
        if let Some(witness) = search.first(n) {
            return MinOrder::Found { order: n, witness };
        }
    }
    match nonnegative_point(&matrix) {
        None => MinOrder::Unrealizable,
        Some(point) => MinOrder::BeyondCap {
            cap,
            realizable_at: denominator_lcm(&point),
        },
    }
}

/// All nonnegative integer `R` with `sum R = n` and `z . R = 0`, in
/// lexicographic order.
pub fn usage_vectors(pot: &Pot, n: usize) -> Vec<Vec<usize>> {
    let matrix = build_matrix(pot);
    let mut out = Vec::new();
    UsageSearch::new(&matrix).for_each(n, |r| {
        out.push(r.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Whether some balanced usage vector has total in `1..below`.
pub fn realizable_below(pot: &Pot, below: usize) -> Option<Vec<usize>> {
    let matrix = build_matrix(pot);
    let mut search = UsageSearch::new(&matrix);
    (1..below).find_map(|n| search.first(n))
}

/// Depth-first enumeration of balanced usage vectors with interval pruning:
/// once tiles `0..j` are fixed, each bond's running imbalance must be
/// cancellable by spreading the remaining budget over tiles `j..`.
pub struct UsageSearch<'a> {
    matrix: &'a ConstructionMatrix,
    /// `lo[j][i]`, `hi[j][i]`: min / max of `z[i][k]` over `k >= j`.
    lo: Vec<Vec<i64>>,
    hi: Vec<Vec<i64>>,
}

impl<'a> UsageSearch<'a> {
    pub fn new(matrix: &'a ConstructionMatrix) -> Self {
        let (m, p) = (matrix.bonds(), matrix.tiles());
        let mut lo = vec![vec![0i64; m]; p + 1];
        let mut hi = vec![vec![0i64; m]; p + 1];
        for j in (0..p).rev() {
            for i in 0..m {
                let z = matrix.net(i, j);
                lo[j][i] = if j + 1 < p { z.min(lo[j + 1][i]) } else { z };
                hi[j][i] = if j + 1 < p { z.max(hi[j + 1][i]) } else { z };
            }
        }
        UsageSearch { matrix, lo, hi }
    }

    pub fn first(&mut self, n: usize) -> Option<Vec<usize>> {
        let mut found = None;
        self.for_each(n, |r| {
            found = Some(r.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    pub fn for_each<F>(&self, n: usize, mut visit: F)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let p = self.matrix.tiles();
        if p == 0 {
            return;
        }
        let mut usage = vec![0usize; p];
        let mut acc = vec![0i64; self.matrix.bonds()];
        let _ = self.step(0, n, &mut usage, &mut acc, &mut visit);
    }

    fn feasible(&self, j: usize, left: usize, acc: &[i64]) -> bool {
        let s = left as i64;
        acc.iter()
            .enumerate()
            .all(|(i, &a)| a + s * self.lo[j][i] <= 0 && a + s * self.hi[j][i] >= 0)
    }

    fn step<F>(
        &self,
        j: usize,
        left: usize,
        usage: &mut [usize],
        acc: &mut [i64],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let p = usage.len();
        if !self.feasible(j, left, acc) {
            return ControlFlow::Continue(());
        }
        if j == p - 1 {
            usage[j] = left;
            let balanced = acc
                .iter()
                .enumerate()
                .all(|(i, &a)| a + left as i64 * self.matrix.net(i, j) == 0);
            let flow = if balanced { visit(usage) } else { ControlFlow::Continue(()) };
            usage[j] = 0;
            return flow;
        }
        for count in 0..=left {
            usage[j] = count;
            for (i, a) in acc.iter_mut().enumerate() {
                *a += count as i64 * self.matrix.net(i, j);
            }
            let flow = self.step(j + 1, left - count, usage, acc, visit);
            for (i, a) in acc.iter_mut().enumerate() {
                *a -= count as i64 * self.matrix.net(i, j);
            }
            flow?;
        }
        usage[j] = 0;
        ControlFlow::Continue(())
    }
}
