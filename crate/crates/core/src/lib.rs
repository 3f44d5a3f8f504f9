//! Exact algebra for metaplectic dual groups and their L-groups.
//!
//! Every computation here is exact: integer lattices are handled with
//! arbitrary-precision Smith normal forms, roots of unity are tracked as
//! exponents or Gaussian integers, and every cocycle identity is checked by
//! finite enumeration over explicit models of the Galois group.

pub mod bisector;
pub mod error;
pub mod exactalg;
pub mod localfield;
pub mod metaplectic;
pub mod rootdata;
pub mod torusparams;
pub mod twisthopf;
pub mod unramified;

pub use error::{Error, Result};
