//! Reduced multi-valued decision diagrams (MDDs) over vectors of non-negative
//! integers, in the list-of-children style: every node carries the slot it
//! decides, one value, a `down` edge to the next slot and a `right` edge to
//! the next larger value at the same slot.
//!
//! A [`NodeStore`] owns all nodes. Nodes are hash-consed, so two sets built in
//! the same store are equal exactly when their root ids are equal.
//! Transition relations ([`GroupRelation`]) are stored over the dependent
//! slots of a group only, with old and new values interleaved.

mod relation;
mod serial;
mod store;

pub use relation::GroupRelation;
pub use serial::SerializedForest;
pub use store::{MddSet, NodeId, NodeStore, SetOp, FALSE, TRUE};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MddError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("malformed serialized forest: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, MddError>;
