//! Regular rooted trees, their finite automorphism groups, and explicit
//! commutator witnesses for derived-subgroup elements.
//!
//! Elements are stored as portraits: one label per vertex, level by level.
//! See [`tree`] for the action and multiplication conventions.

mod labels;

pub mod error;
pub mod groups;
pub mod oracle;
pub mod signature;
pub mod solver;
pub mod tree;
pub mod wrformat;

pub use error::{Result, WreathError};
pub use groups::{GroupId, GroupKind};
pub use oracle::{LeafPermutation, Parity};
pub use signature::AritySignature;
pub use solver::{solve_bk_derived, solve_cyclic_tower, solve_gk_derived, CommutatorWitness};
pub use tree::{LevelIndexProfile, TreeAut};
pub use wrformat::{parse_element, serialize_element, DocumentError, ParseError};
