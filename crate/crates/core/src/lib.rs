//! Dynamic approximate maximum independent sets of intervals and squares.
//!
//! Intervals are maintained by local search over alternating paths, keeping
//! the independent set k-valid under insertions, deletions, splits and
//! merges. Squares are reduced to intervals through a randomly shifted
//! quadtree whose monochild paths carry one interval structure per quadrant.

pub mod geom_core;
pub mod iqds;
pub mod interval_mis;
pub mod oracle;
pub mod squares_static;
pub mod search_structure;
pub mod squares_iqds;
pub mod chosen_seq;
pub mod path_structure;
pub mod lct;
pub mod quadtree_structure;
pub mod delta;
pub mod cli;

pub use geom_core::{key_between, node_of, quadrant_of, is_centered, CellId, Interval, QuadRoot, Quadrant, RationalKey, Square};
pub use delta::{Delta, Change};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("membership error for id {0}")]
    Membership(u64),
    #[error("square lies outside the root")]
    OutOfRoot,
    #[error("ordering violated: {0}")]
    Ordering(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error("input too large for exhaustive oracle: {0}")]
    SizeLimit(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
