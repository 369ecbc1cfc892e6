//! Numerical laboratory for multipartite monogamy relations of three-qubit
//! pure states.
//!
//! The closed-form reduced concurrences of the GHZ and W classes are checked
//! against Wootters concurrences computed from explicit state vectors, and
//! the source/accessible entanglement formulas are combined with the
//! entanglement of formation into the monogamy scores
//! `M₁ = E_s² − ΣE_ij²` and `M₂ = E_a² − ΣE_ij²`.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod monogamy;
pub mod operational;
pub mod states;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
