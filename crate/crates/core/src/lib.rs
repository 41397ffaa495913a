//! Linear coding for broadcasting with noisy side information (BNSI).
//!
//! A server broadcasts `n` messages over `F_q` to `m` users. User `i` wants
//! `x_{X_i}` and already holds a copy of it with up to `delta_s` symbol
//! errors. A linear encoder `L` (`n x N`) is valid when every user can
//! recover its demand from `c = xL` and its noisy copy. This crate decides
//! validity, builds syndrome decoders, analyses the structure that governs
//! when coding helps, constructs encoders from error-correcting codes,
//! bounds the optimal codelength and computes it exactly for small
//! instances.

mod conway;
pub mod error;
pub mod field;
pub mod matrix;
pub mod problem;
pub mod sets;
pub mod space;
pub mod structure;
pub mod validity;
pub mod decoder;
pub mod bounds;
pub mod index_coding;
pub mod oracle;
pub mod sim;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldSpec};
pub use matrix::Matrix;
pub use problem::{BnsiProblem, Violation};
pub use sets::IndexSet;
pub use validity::{EncoderMatrix, Verdict};
pub use decoder::ReceiverDecoder;
pub use structure::{DisjointCollection, SearchMode};
pub use bounds::{BoundsReport, Construction, LinearCodeSpec};
pub use index_coding::IndexCodingProblem;
pub use oracle::OracleResult;
pub use sim::SimReport;
