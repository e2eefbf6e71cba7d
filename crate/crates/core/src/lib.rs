//! Analog (continuous-time) Grover search on an `n`-qubit register, with
//! coherence, entanglement and monogamy diagnostics evaluated both from
//! closed-form expressions and from dense full-register numerics.

pub mod analog_search;
pub mod cli;
pub mod coherence;
pub mod entanglement;
pub mod error;
pub mod grover_discrete;
pub mod monogamy;
pub mod qmath;

pub use analog_search::{SearchParams, TwoLevelState};
pub use error::{Error, Result};
pub use qmath::{Bipartition, DensityMatrix, LogBase, StateVector};
