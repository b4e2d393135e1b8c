//! Polygamy weights and critical powers for quantum correlation measures on
//! small qubit registers.
//!
//! The crate is layered bottom-up: [`tensor`] (dense complex linear
//! algebra), [`states`] (state families and sampling), [`measures`]
//! (concurrence, tangle, entropy and the decomposition oracles),
//! [`polygamy`] (weights, regimes, critical exponents and the supporting
//! inequalities) and [`multipartite`] (weight chains on four-qubit states).

pub mod error;
pub mod flags;
pub mod measures;
pub mod multipartite;
pub mod polygamy;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
pub use flags::Flag;
