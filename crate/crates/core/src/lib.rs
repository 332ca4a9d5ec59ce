//! Cellular-automata shortest-path solvers and the exact oracles they are
//! checked against.
//!
//! * [`wave_ca`]: excitation-wave automaton on weighted oriented lattices.
//! * [`lee_ca`]: the constant-state (14-state) Lee router.
//! * [`graph_ca`]: synchronous graph relaxation with predecessor pointers.
//! * [`dla`]: distributed learning automata on stochastic graphs.
//! * [`physarum`]: slime-mould maze solver, with mazes from [`mazegen`].
//!
//! Shared data types live in [`grid`] and [`graph`]; reference algorithms in
//! [`oracle`]; ASCII/PGM frame rendering in [`frame`].

pub mod dla;
pub mod error;
pub mod frame;
pub mod graph;
pub mod graph_ca;
pub mod grid;
pub mod lee_ca;
pub mod mazegen;
pub mod oracle;
pub mod physarum;
pub mod wave_ca;

pub use error::{Error, Result};
pub use graph::{Graph, LengthDistribution, Metric, PathResult, StochasticGraph};
pub use grid::{parse_maze, CellCoord, Direction, MazeCell, MazeGrid, Neighborhood, Weight, WeightedLattice};
