//! Finite group extensions `1 -> G -> H -> Q -> 1` and their duals.
//!
//! The pipeline is [`groups`] (tables, extensions, catalog), [`reps`]
//! (unitary irreps), [`mackey`] (the Q-action on irreps, intertwiners and
//! the U(1) cocycle), [`morita`] (bimodules and centers) and [`cohft`]
//! (correlators, counting and orthogonality).

pub mod algebra;
pub mod cohft;
pub mod error;
pub mod groups;
pub mod io;
pub mod linalg;
pub mod mackey;
pub mod morita;
pub mod report;
pub mod reps;
pub mod verify;

pub use error::{Error, Result};
