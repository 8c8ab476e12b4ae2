//! Exact simulator and analytics for generalized 1→2 quantum telecloning.
pub mod channel;
pub mod conversion;
pub mod efficiency;
pub mod entanglement;
pub mod error;
pub mod protocol;
pub mod quantum;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
