//! Parity game solving. The symbolic side runs Zielonka's recursive
//! algorithm over the partitioned transition relation of a
//! [`SymbolicParityGame`](spg_builder::SymbolicParityGame); the explicit side
//! parses PGSolver text and solves it over adjacency lists.
//!
//! Both use the min-parity convention: an infinite play is won by Eloise iff
//! the least priority seen infinitely often is even, and a player who cannot
//! move loses.

mod explicit;
mod symbolic;

pub use explicit::{attractor_explicit, solve_explicit, ExplicitGame, ExplicitSets, Vertex};
pub use spg_builder::Player;
pub use symbolic::{attractor, id_vector, totalize, winner, zielonka, Game, WinningSets};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
