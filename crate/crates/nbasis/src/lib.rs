//! Exact arithmetic for deciding when an element of a finite field
//! extension generates a normal basis.
//!
//! The crate builds small field towers, splits Z/n into q-cyclotomic
//! classes, assembles the Gauss period matrix and the orthogonal
//! idempotents of F_q[x]/(x^n - 1), transports polynomials to
//! linearized form, and evaluates a family of independently derived
//! generator criteria against a brute force rank oracle. A census
//! layer sweeps whole fields and aborts loudly on any disagreement.

pub mod error;
pub(crate) mod num;
pub mod field;
pub mod poly;
pub mod cyclotomy;
pub mod matrix;
pub mod idempotent;
pub mod linearized;
pub mod criteria;
pub mod census;

pub use error::{DisagreementReport, Error, Result};
