//! Bond-edge types, cohesive ends, tiles and pots.
//!
//! Pot text format, one tile per line:
//!
//! ```text
//! # comment
//! t1: a1, a1*, a1*
//! hub: a1, a1, a1, a1, a1, a1
//! ```
//!
//! `a<k>` is an unhatted end of bond type `k`, `a<k>*` its hatted complement.
//! Multiplicity is written by repetition. Bond indices are renumbered on
//! parse in order of first appearance.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A bond-edge letter `a_k`, `k >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BondType(pub u16);

impl BondType {
    pub fn index(self) -> usize {
        usize::from(self.0)
    }
}

impl fmt::Display for BondType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohesiveEnd {
    pub bond: BondType,
    pub hatted: bool,
}

impl CohesiveEnd {
    pub fn plain(bond: u16) -> Self {
        CohesiveEnd {
            bond: BondType(bond),
            hatted: false,
        }
    }

    pub fn hatted(bond: u16) -> Self {
        CohesiveEnd {
            bond: BondType(bond),
            hatted: true,
        }
    }

    pub fn complement(self) -> Self {
        CohesiveEnd {
            hatted: !self.hatted,
            ..self
        }
    }
}

impl fmt::Display for CohesiveEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hatted {
            write!(f, "{}*", self.bond)
        } else {
            write!(f, "{}", self.bond)
        }
    }
}

/// A tile: a multiset of cohesive ends, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    ends: Vec<CohesiveEnd>,
}

impl Tile {
    pub fn new(mut ends: Vec<CohesiveEnd>) -> Self {
        ends.sort_unstable();
        Tile { ends }
    }

    pub fn ends(&self) -> &[CohesiveEnd] {
        &self.ends
    }

    pub fn arms(&self) -> usize {
        self.ends.len()
    }

    pub fn count(&self, end: CohesiveEnd) -> usize {
        self.ends.iter().filter(|&&e| e == end).count()
    }

    /// Unhatted minus hatted ends of `bond`.
    pub fn net(&self, bond: BondType) -> i64 {
        self.ends
            .iter()
            .filter(|e| e.bond == bond)
            .map(|e| if e.hatted { -1 } else { 1 })
            .sum()
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.ends.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PotError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: tile `{name}` has the same ends as tile `{first}`")]
    DuplicateTile {
        line: usize,
        name: String,
        first: String,
    },
    #[error("line {line}: tile name `{name}` is already used")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: tile `{name}` has no ends")]
    EmptyTile { line: usize, name: String },
    #[error("pot has no tiles")]
    EmptyPot,
    #[error("{family} pot needs n >= {min}, got {n}")]
    TooSmall {
        family: &'static str,
        n: usize,
        min: usize,
    },
}

/// An ordered list of distinct tile types with display names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pot {
    names: Vec<String>,
    tiles: Vec<Tile>,
}

impl Pot {
    /// Builds a pot, naming tiles `t1..tp`. Bond indices are normalized.
    pub fn new(tiles: Vec<Tile>) -> Result<Self, PotError> {
        let names = (1..=tiles.len()).map(|i| format!("t{i}")).collect();
        Pot::with_names(names, tiles)
    }

    pub fn with_names(names: Vec<String>, tiles: Vec<Tile>) -> Result<Self, PotError> {
        assert_eq!(names.len(), tiles.len(), "one name per tile");
        if tiles.is_empty() {
            return Err(PotError::EmptyPot);
        }
        for (i, t) in tiles.iter().enumerate() {
            if t.ends.is_empty() {
                return Err(PotError::EmptyTile {
                    line: i + 1,
                    name: names[i].clone(),
                });
            }
            if let Some(j) = tiles[..i].iter().position(|s| s == t) {
                return Err(PotError::DuplicateTile {
                    line: i + 1,
                    name: names[i].clone(),
                    first: names[j].clone(),
                });
            }
            if names[..i].contains(&names[i]) {
                return Err(PotError::DuplicateName {
                    line: i + 1,
                    name: names[i].clone(),
                });
            }
        }
        Ok(Pot { names, tiles }.normalized())
    }

    /// Renumbers bond types by first appearance (tile order, then end order).
    fn normalized(self) -> Pot {
        let mut map: HashMap<BondType, u16> = HashMap::new();
        for t in &self.tiles {
            for e in &t.ends {
                let next = map.len() as u16 + 1;
                map.entry(e.bond).or_insert(next);
            }
        }
        let tiles = self
            .tiles
            .into_iter()
            .map(|t| {
                Tile::new(
                    t.ends
                        .into_iter()
                        .map(|e| CohesiveEnd {
                            bond: BondType(map[&e.bond]),
                            hatted: e.hatted,
                        })
                        .collect(),
                )
            })
            .collect();
        Pot {
            names: self.names,
            tiles,
        }
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Alphabet size `m`: bond indices run over `1..=m`.
    pub fn bond_count(&self) -> usize {
        self.tiles
            .iter()
            .flat_map(|t| t.ends.iter())
            .map(|e| e.bond.index())
            .max()
            .unwrap_or(0)
    }

    pub fn bonds(&self) -> impl Iterator<Item = BondType> {
        (1..=self.bond_count() as u16).map(BondType)
    }

    /// Renders the pot text format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Pot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, tile) in self.names.iter().zip(&self.tiles) {
            writeln!(f, "{name}: {tile}")?;
        }
        Ok(())
    }
}

impl FromStr for Pot {
    type Err = PotError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_pot(text)
    }
}

pub fn parse_pot(text: &str) -> Result<Pot, PotError> {
    let mut names: Vec<String> = Vec::new();
    let mut tiles: Vec<Tile> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let syntax = |column: usize, message: String| PotError::Syntax {
            line,
            column,
            message,
        };
        let colon = content
            .find(':')
            .ok_or_else(|| syntax(1, "expected `name: end, ...`".into()))?;
        let name = content[..colon].trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(syntax(1, format!("invalid tile name `{name}`")));
        }
        if names.iter().any(|n| n == name) {
            return Err(PotError::DuplicateName {
                line,
                name: name.into(),
            });
        }
        let body = &content[colon + 1..];
        let mut ends = Vec::new();
        if !body.trim().is_empty() {
            let mut offset = colon + 1;
            for piece in body.split(',') {
                let column = offset + piece.len() - piece.trim_start().len() + 1;
                ends.push(parse_end(piece.trim()).map_err(|m| syntax(column, m))?);
                offset += piece.len() + 1;
            }
        }
        if ends.is_empty() {
            return Err(PotError::EmptyTile {
                line,
                name: name.into(),
            });
        }
        let tile = Tile::new(ends);
        if let Some(j) = tiles.iter().position(|t| *t == tile) {
            return Err(PotError::DuplicateTile {
                line,
                name: name.into(),
                first: names[j].clone(),
            });
        }
        names.push(name.into());
        tiles.push(tile);
    }
    // first-appearance order follows the text, not the sorted tile
    let mut order: Vec<BondType> = Vec::new();
    for raw in text.lines() {
        let content = raw.split('#').next().unwrap_or("");
        if let Some(colon) = content.find(':') {
            for piece in content[colon + 1..].split(',') {
                if let Ok(e) = parse_end(piece.trim()) {
                    if !order.contains(&e.bond) {
                        order.push(e.bond);
                    }
                }
            }
        }
    }
    let tiles = tiles
        .into_iter()
        .map(|t| {
            Tile::new(
                t.ends
                    .iter()
                    .map(|e| {
                        let k = order.iter().position(|&b| b == e.bond).expect("seen") + 1;
                        CohesiveEnd {
                            bond: BondType(k as u16),
                            hatted: e.hatted,
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    Pot::with_names(names, tiles)
}

fn parse_end(token: &str) -> Result<CohesiveEnd, String> {
    let (body, hatted) = match token.strip_suffix('*') {
        Some(b) => (b, true),
        None => (token, false),
    };
    let digits = body
        .strip_prefix('a')
        .ok_or_else(|| format!("expected `a<index>` or `a<index>*`, found `{token}`"))?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("bad bond index in `{token}`"));
    }
    let index: u16 = digits
        .parse()
        .map_err(|_| format!("bond index out of range in `{token}`"))?;
    if index == 0 {
        return Err(format!("bond indices start at 1, found `{token}`"));
    }
    Ok(CohesiveEnd {
        bond: BondType(index),
        hatted,
    })
}

fn repeat(end: CohesiveEnd, k: usize) -> impl Iterator<Item = CohesiveEnd> {
    std::iter::repeat_n(end, k)
}

/// Two tiles over one bond type: `{a, a*, a*}` for the rim and `{a^(n-1)}`
/// for the hub. Realizes the wheel with the fewest tile and bond types when
/// same-order alternatives are tolerated.
pub fn wheel_pot_s12(n: usize) -> Result<Pot, PotError> {
    if n < 4 {
        return Err(PotError::TooSmall {
            family: "wheel",
            n,
            min: 4,
        });
    }
    let rim = Tile::new(vec![
        CohesiveEnd::plain(1),
        CohesiveEnd::hatted(1),
        CohesiveEnd::hatted(1),
    ]);
    let hub = Tile::new(repeat(CohesiveEnd::plain(1), n - 1).collect());
    Pot::new(vec![rim, hub])
}

/// The `floor(n/2) + 2` tile pot that realizes only the wheel at its minimum
/// order. Bond 1 is carried by the spokes; bonds `2..=floor(n/2)+1` run
/// around the rim from both sides of `t2` and close at the last tile.
pub fn wheel_pot_s3(n: usize) -> Result<Pot, PotError> {
    if n < 4 {
        return Err(PotError::TooSmall {
            family: "wheel",
            n,
            min: 4,
        });
    }
    let half = n / 2;
    let s = |k: usize| CohesiveEnd::hatted(k as u16);
    let p = |k: usize| CohesiveEnd::plain(k as u16);
    let mut tiles = vec![
        Tile::new(repeat(p(1), n - 1).collect()),
        Tile::new(vec![s(1), p(2), p(2)]),
    ];
    for i in 3..=half + 1 {
        tiles.push(Tile::new(vec![s(1), s(i - 1), p(i)]));
    }
    let last = if n % 2 == 0 {
        Tile::new(vec![s(1), s(half), s(half + 1)])
    } else {
        Tile::new(vec![s(1), s(half + 1), s(half + 1)])
    };
    tiles.push(last);
    Pot::new(tiles)
}

/// Cycle counterpart of [`wheel_pot_s3`]: the rim tiles of the
/// `(n + 1)`-wheel pot with the spoke ends removed.
pub fn cycle_pot_s3(n: usize) -> Result<Pot, PotError> {
    if n < 3 {
        return Err(PotError::TooSmall {
            family: "cycle",
            n,
            min: 3,
        });
    }
    let wheel = wheel_pot_s3(n + 1)?;
    let tiles = wheel.tiles[1..]
        .iter()
        .map(|t| {
            Tile::new(
                t.ends
                    .iter()
                    .filter(|e| e.bond != BondType(1))
                    .map(|e| CohesiveEnd {
                        bond: BondType(e.bond.0 - 1),
                        hatted: e.hatted,
                    })
                    .collect(),
            )
        })
        .collect();
    Pot::new(tiles)
}
