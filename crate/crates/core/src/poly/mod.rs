//! Exact rational linear algebra and polyhedral geometry.

pub mod affine;
pub mod cone;
pub mod dd;
pub mod intmat;
pub mod linalg;
pub mod polytope;
pub mod rat;

pub use affine::AffineSubspace;
pub use cone::Cone;
pub use polytope::{Halfspace, Polytope};
pub use rat::{QVector, Rat};
