//! Exact value-lattice models of tame, totally ramified central division
//! algebras over strictly Henselian valued fields.
//!
//! Elements of the field are represented purely by their values in a
//! finitely generated full-rank lattice in Q^m; over a strictly Henselian
//! field with residue characteristic prime to the degrees involved this
//! determines every criterion computed here. The crate decides division,
//! embedding and ramification criteria for symbol algebras and their tensor
//! products, computes index/exponent/value-group invariants of tame Brauer
//! classes through an alternating normal form, constructs the counterexample
//! tower of division algebras level by level, and cross-checks everything
//! against deliberately naive exhaustive oracles.

pub mod error;
pub mod lattice;
pub mod symbols;
pub mod brauer;
pub mod oracle;
pub mod report;
pub mod tower;
mod matrix;
mod serde_int;

pub use error::{Error, Result};
