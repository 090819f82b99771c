//! Instantiation of a parameterised parity game into a symbolic parity game:
//! state vector layout, transition groups and their dependency matrix,
//! breadth-first exploration into per-group short vector relations, and
//! explicit export.

pub mod container;
pub mod export;
pub mod groups;
pub mod instantiate;
pub mod layout;
pub mod stats;

pub use container::{load_game, save_game};
pub use export::{explicit_edges, export_explicit, ExplicitEdges, DEFAULT_EXPLICIT_CAP};
pub use groups::{dependency_matrix, partition, DependencyMatrix, Strategy, TransitionGroup};
pub use instantiate::{instantiate, local_successors, BuildOptions, Player, SymbolicParityGame, VarInfo};
pub use layout::{layout, Layout, Slot, ValueTable};
pub use stats::{stats, Stats};

use num_bigint::BigUint;
use spg_pbes::Ppg;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("state cap of {cap} exceeded ({reached} vertices reached)")]
    StateCap { cap: u64, reached: BigUint },
    #[error("explicit export cap of {cap} exceeded ({states} vertices)")]
    ExplicitCap { cap: u64, states: BigUint },
    #[error("bad initial instance: {0}")]
    Init(String),
    #[error("bad game container: {0}")]
    Container(String),
}

/// Layout, partition and instantiation in one step.
pub fn build(ppg: &Ppg, strategy: Strategy, opts: BuildOptions) -> Result<SymbolicParityGame, BuildError> {
    let l = layout(ppg);
    let groups = partition(ppg, &l, strategy);
    instantiate(ppg, l, groups, opts)
}
