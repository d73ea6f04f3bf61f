//! Grassmann representation of qubit logic.
//!
//! Qubit cells are treated as fermion modes. States and gates are encoded as
//! elements of a finite Grassmann algebra through fermionic coherent states,
//! and each encoding is checked against a dense matrix oracle:
//!
//! - [`grassmann`]: algebra, parity, derivatives, Berezin integrals, exp/ln
//! - [`fock`]: basis, creation/annihilation matrices, gate matrices
//! - [`symbols`]: coherent states, matrix/covariant/state symbols, convolution
//! - [`fb`]: Fock-Bargmann differential operators
//! - [`gates`]: the gate library
//! - [`composer`]: composite gates (serial, input plugging, operator composition)
//! - [`automaton`]: word evolution by convolution and by discrete path integrals
//! - [`parse`]: circuit and word description files
//! - [`verify`]: invariant suites used by the command-line tool

pub mod automaton;
pub mod composer;
pub mod error;
pub mod fb;
pub mod fock;
pub mod gates;
pub mod grassmann;
pub mod parse;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
pub use grassmann::{GenId, GeneratorPool, Grassmann};
