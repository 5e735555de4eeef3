//! Exact computation of residues, exponents and indices of Brauer classes
//! presented as sums of symbol algebras over function-field towers built
//! from finite fields, together with quadratic-form decision procedures and
//! ramification surgery on plane line arrangements.

pub mod error;
pub mod field;
pub mod index;
pub mod random;
pub mod surgery;
pub mod symbol;
pub mod witt;

pub use error::{Error, Result};
pub use field::{FieldElem, FieldTower};
