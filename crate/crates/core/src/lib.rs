//! Factorisation of birational maps between toric Mori fibre spaces into
//! Sarkisov links, via the Mori chamber decomposition of the effective cone.

pub mod chamber;
pub mod demo;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod oracle;
pub mod poly;
pub mod sarkisov;
pub mod slice;
pub mod toric;

pub use error::{Error, Result};
