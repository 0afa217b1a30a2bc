//! The flexible-tile model of DNA self-assembly.
//!
//! A *pot* is a set of tile types; each tile is a branched junction molecule
//! abstracted to a vertex with half-edges carrying cohesive ends `a_i` or
//! their complements `a_i*`. Complementary ends bond into edges, and a
//! complex is complete when every end is bonded.
//!
//! - [`multigraph`]: target and product graphs, generators, isomorphism.
//! - [`tiles`]: tiles, pots, the pot text format and the wheel/cycle pots.
//! - [`matrix`]: construction matrices, exact spectra, minimum orders.
//! - [`assembly`]: complex enumeration and scenario verification.
//! - [`search`]: exhaustive minimization of tile and bond types.
//! - [`reproduce`]: the wheel minima table.

pub mod assembly;
pub mod matrix;
pub mod multigraph;
pub mod reproduce;
pub mod search;
pub mod tiles;

pub use assembly::{
    enumerate_complexes, realizations_at_order, realizes, verify_scenario, Labeling, LabeledEdge,
    RealizationSet, Scenario, ScenarioReport, Verdict,
};
pub use matrix::{build_matrix, min_order, solve, usage_vectors, ConstructionMatrix, MinOrder, SpectrumSolution};
pub use multigraph::{DegreeStats, Multigraph};
pub use search::{check_bounds, check_hierarchy, search_minima, MinimaResult, SearchSpec};
pub use tiles::{cycle_pot_s3, parse_pot, wheel_pot_s12, wheel_pot_s3, BondType, CohesiveEnd, Pot, Tile};
