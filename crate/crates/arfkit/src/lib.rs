//! arfkit: exact-arithmetic tools for three related circles of ideas that
//! carry Cahit Arf's name.
//!
//! - [`quadratic`]: quadratic forms on vector spaces over the two-element
//!   field and their Arf invariant, computed two independent ways (majority
//!   count and symplectic-basis sum).
//! - [`semigroup`]: numerical semigroups, the Arf property, Arf closure,
//!   multiplicity sequences, characters, and the multi-integer Euclidean
//!   ("Jacobian") replay of the multiplicity sequence.
//! - [`branch`]: parametrized space-curve branches over an exact coefficient
//!   field, blow-ups, the value semigroup of the local ring, and the Arf
//!   closure of that ring.
//! - [`ramification`]: lower-numbered ramification filtrations, the Herbrand
//!   transition function, upper numbering, jumps, and the Hasse-Arf
//!   integrality check.
//!
//! Everything is computed in exact arithmetic (arbitrary-precision rationals
//! or small prime fields); there is no floating point anywhere. Nontrivial
//! algorithms are paired with independent brute-force oracles in the test
//! suite.

pub mod branch;
pub mod cli;
pub mod error;
pub mod quadratic;
pub mod ramification;
pub mod scalar;
pub mod semigroup;
pub mod series;

pub use error::{Error, ErrorKind, Result};
pub use scalar::{ExactScalar, Field};
pub use series::{Order, TruncatedSeries};

/// Default truncation order for series pipelines, overridable per call and
/// through `ARFKIT_TRUNCATION`.
pub const DEFAULT_TRUNCATION: u32 = 64;

/// Hard ceiling for precision-guard escalation: truncations double on
/// instability until they would exceed this, then the run fails loudly.
pub const MAX_TRUNCATION: u32 = 512;

/// Default bound on blow-up steps before a branch is reported as
/// non-resolving.
pub const DEFAULT_MAX_STEPS: u32 = 64;
