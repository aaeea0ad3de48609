//! Exact continued-fraction expansions of complex numbers over the five
//! discrete Euclidean subrings of C, with certified interval arithmetic.
//!
//! The crate provides:
//! - exact lattice arithmetic and nearest/range queries ([`rings`]);
//! - quadratic surds as Moebius images of a fixed base root, with exact
//!   equality and certified enclosures ([`algebraic`]);
//! - the expansion engine: choosers, convergents, relative errors, cycle
//!   detection ([`cf`]);
//! - sigma-forms (quadratic and Hermitian), their orbit under the expansion
//!   matrices, and zero-set classification ([`forms`]);
//! - norm representability and circles of badly approximable numbers
//!   ([`diophantine`]);
//! - JSON/CSV artifact types shared with the CLI ([`artifact`]).

pub mod algebraic;
pub mod artifact;
pub mod cf;
pub mod diophantine;
pub mod dyadic;
pub mod error;
pub mod forms;
pub mod interval;
pub mod quadrat;
pub mod rings;

pub use error::{Error, Result};
