//! Stabilizer-code codeword pairs that their reduced density matrices cannot
//! tell apart.
//!
//! The symbolic route ([`undetermined`]) decides everything from a single
//! Pauli coset; the dense route ([`dense`]) rebuilds the density matrices and
//! compares partial traces directly. [`protocols`] simulates the secret
//! sharing and bit-commitment demonstrations built on the same property.

pub mod claims;
pub mod codes;
pub mod dense;
pub mod error;
pub mod gf2;
pub mod pauli;
pub mod protocols;
pub mod report;
pub mod stabilizer;
pub mod undetermined;

pub use codes::{catalog, CatalogCode, CodeSpec};
pub use error::{Error, Result};
pub use pauli::PauliOperator;
pub use stabilizer::{Limits, StabilizerGroup};
pub use undetermined::Analysis;
