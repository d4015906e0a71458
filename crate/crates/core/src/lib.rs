//! Construction of the graphs Γ^(m) on GF(2)^{2m} and machinery for
//! certifying their regularity and symmetry properties.

pub mod error;
pub mod gf2;
pub mod graphs;

pub use error::{Error, Result};
pub mod cli;
pub mod coherent;
pub mod family;
pub mod groups;
pub mod partitions;
pub mod regularity;
