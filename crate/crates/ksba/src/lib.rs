//! Exact computations for degenerations of K3 double covers branched over
//! eight points on the projective line: GIT and Kirwan stability, the
//! relabeling groups, ADE classification of branch curve germs, intersection
//! lattices, and certified models of the stable limits.

pub mod algebra;
pub mod error;

pub use error::{Error, Result};
pub mod groups;
pub mod stability;
pub mod singularities;
pub mod lattice;
pub mod replacement;
