//! Linear update schemes for sparsely edited messages.
//!
//! A source holds `x` and a receiver holds `A x`. After `x` changes in at
//! most `eps` coordinates, the source sends `H x_new` so the receiver can
//! recompute `A x_new`. The optimal `H` spans a maximally recoverable
//! subcode (MRSC) of the row space of `A`; this crate builds and verifies
//! such codes, the point-to-point and two-receiver broadcast schemes built
//! on them, and the counterexamples that show when fewer symbols cannot work.

pub mod broadcast;
pub mod codes;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod mrsc;
pub mod update;

pub use error::{Error, Result};
pub use gf::{Extension, Field, FieldElement};
pub use linalg::{FieldMatrix, SparseVector, SupportSet};
pub use codes::LinearCode;
