//! Toric varieties given by fans, their divisor classes and ample models.

pub mod classes;
pub mod fan;
pub mod intersection;
pub mod model;
pub mod variety;

pub use classes::ClassLattice;
pub use fan::Fan;
pub use model::{ContractionKind, Model, ToricContraction};
pub use variety::ToricVariety;
