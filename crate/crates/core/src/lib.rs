//! Thin subsets of groups at desk scale.
pub mod ballean;
pub mod cardinal;
pub mod coloring;
pub mod constructions;
pub mod error;
pub mod group;
pub mod partition;
pub mod subset;
pub mod thinness;

pub use error::{Error, Result};
pub use group::{Element, Group, GroupSpec, Rank};
