//! The table of wheel minima, rebuilt from the explicit pots and, where
//! affordable, from search.
//!
//! Each row is `n B1 T1 B2 T2 B3 T3`, tab separated. A cell holds a value and
//! how it was obtained: `formula` when the explicit pot for that scenario
//! verifies and has that many bond (or tile) types, `search` when the
//! exhaustive search agrees, `search-pruned` when the search used the pruning
//! rules. Disagreements are written `4 formula/5 search`.

use std::fmt;
use std::str::FromStr;

use crate::assembly::{verify_scenario, Scenario, Verdict};
use crate::multigraph::Multigraph;
use crate::search::{search_minima, PruneFlags, SearchSpec};
use crate::tiles::{wheel_pot_s12, wheel_pot_s3};

pub const HEADER: &str = "n\tB1\tT1\tB2\tT2\tB3\tT3";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReproduceOptions {
    /// Largest n searched at scenarios 1 and 2.
    pub search_s12_max: usize,
    /// Largest n searched exhaustively at scenario 3.
    pub exhaustive_s3_max: usize,
    /// Largest n searched with pruning at scenario 3.
    pub pruned_s3_max: usize,
    /// Node budget for each verification.
    pub budget: u64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            search_s12_max: 9,
            exhaustive_s3_max: 6,
            pruned_s3_max: 8,
            budget: crate::assembly::DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Formula,
    Search,
    SearchPruned,
}

impl Source {
    fn label(self) -> &'static str {
        match self {
            Source::Formula => "formula",
            Source::Search => "search",
            Source::SearchPruned => "search-pruned",
        }
    }
}

/// One table entry: the values obtained per source. `None` means the source
/// did not run or could not decide.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cell {
    pub formula: Option<usize>,
    pub search: Option<(usize, Source)>,
}

impl Cell {
    pub fn value(&self) -> Option<usize> {
        self.formula.or(self.search.map(|(v, _)| v))
    }

    pub fn is_mismatch(&self) -> bool {
        matches!((self.formula, self.search), (Some(f), Some((s, _))) if f != s)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.formula, self.search) {
            (None, None) => write!(f, "? indeterminate"),
            (Some(v), None) => write!(f, "{v} formula"),
            (None, Some((v, s))) => write!(f, "{v} {}", s.label()),
            (Some(a), Some((b, s))) if a == b => write!(f, "{a} formula+{}", s.label()),
            (Some(a), Some((b, s))) => write!(f, "{a} formula/{b} {}", s.label()),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("malformed table cell `{0}`")]
pub struct CellParseError(pub String);

impl FromStr for Cell {
    type Err = CellParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CellParseError(s.to_string());
        if s == "? indeterminate" {
            return Ok(Cell::default());
        }
        let source = |label: &str| match label {
            "search" => Some(Source::Search),
            "search-pruned" => Some(Source::SearchPruned),
            _ => None,
        };
        let mut cell = Cell::default();
        for part in s.split('/') {
            let (value, labels) = part.split_once(' ').ok_or_else(bad)?;
            let value: usize = value.parse().map_err(|_| bad())?;
            for label in labels.split('+') {
                if label == "formula" {
                    cell.formula = Some(value);
                } else {
                    cell.search = Some((value, source(label).ok_or_else(bad)?));
                }
            }
        }
        Ok(cell)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub n: usize,
    /// B1, T1, B2, T2, B3, T3.
    pub cells: [Cell; 6],
}

impl Row {
    pub fn has_mismatch(&self) -> bool {
        self.cells.iter().any(Cell::is_mismatch)
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|c| c.value().is_some())
    }

    pub fn values(&self) -> [Option<usize>; 6] {
        std::array::from_fn(|i| self.cells[i].value())
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)?;
        for c in &self.cells {
            write!(f, "\t{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RowParseError {
    #[error("expected 7 tab-separated fields, found {0}")]
    Fields(usize),
    #[error("bad order `{0}`")]
    Order(String),
    #[error(transparent)]
    Cell(#[from] CellParseError),
}

impl FromStr for Row {
    type Err = RowParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = s.split('\t').collect();
        if fields.len() != 7 {
            return Err(RowParseError::Fields(fields.len()));
        }
        let n = fields[0]
            .parse()
            .map_err(|_| RowParseError::Order(fields[0].to_string()))?;
        let mut cells: [Cell; 6] = Default::default();
        for (cell, text) in cells.iter_mut().zip(&fields[1..]) {
            *cell = text.parse()?;
        }
        Ok(Row { n, cells })
    }
}

/// Builds the row for `W_n` (`n >= 4`).
pub fn reproduce_row(n: usize, opts: &ReproduceOptions) -> Row {
    let target = Multigraph::wheel(n).expect("wheel order at least 4");
    let mut cells: [Cell; 6] = Default::default();
    let s12 = wheel_pot_s12(n).expect("wheel order at least 4");
    let s3 = wheel_pot_s3(n).expect("wheel order at least 4");
    for (i, scenario) in Scenario::all().into_iter().enumerate() {
        let pot = if scenario == Scenario::Three { &s3 } else { &s12 };
        let report = verify_scenario(pot, &target, scenario, opts.budget);
        if report.verdict == Verdict::Pass {
            cells[2 * i].formula = Some(pot.bond_count());
            cells[2 * i + 1].formula = Some(pot.len());
        }
        let (run, source) = match scenario {
            Scenario::One | Scenario::Two if n <= opts.search_s12_max => (true, Source::Search),
            Scenario::Three if n <= opts.exhaustive_s3_max => (true, Source::Search),
            Scenario::Three if n <= opts.pruned_s3_max => (true, Source::SearchPruned),
            _ => (false, Source::Search),
        };
        if !run {
            continue;
        }
        let mut spec = SearchSpec::new(target.clone(), scenario);
        if source == Source::SearchPruned {
            spec = spec.with_prune(PruneFlags::all());
        }
        let result = search_minima(&spec);
        if result.exhaustive {
            cells[2 * i].search = result.min_bonds().map(|b| (b, source));
            cells[2 * i + 1].search = result.min_tiles().map(|t| (t, source));
        }
    }
    Row { n, cells }
}
