//! Rough-path analysis on the Besov–Nikolskii scale.
//!
//! The crate computes Hölder, `q`-variation, Riesz type, mixed
//! Hölder-variation, Nikolskii, refined Nikolskii and fractional Sobolev norms
//! of sampled paths, inhomogeneous distances between signature-lifted paths,
//! and solves controlled and rough differential equations with Euler schemes.
//! The [`verify`] module turns the embedding inequalities and the local
//! Lipschitz continuity of the Itô–Lyons map into seeded numerical checks.

pub mod error;
pub mod partition;
pub mod path;
pub mod tensor;
pub mod norms;
pub mod distances;
pub mod vector_field;
pub mod rde;
pub mod io;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};
