//! Bi-quadratic algebras with PBW basis: exact coefficient arithmetic,
//! rewriting to normal form, PBW-consistency checks, first-order and higher
//! differential calculi built from twist automorphisms, and a smoothness
//! verdict that is either certified, refuted or reported as undetermined.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod freealg;
mod linalg;
pub mod presentation;
pub mod scalar;
pub mod smoothness;

pub use calculus::{Calculus, KForm, Obstruction, TwistFamily, VolumeData};
pub use freealg::{AffineEndo, Algebra, Exponents, FreePoly, NormalPoly, Strategy, Word};
pub use presentation::{AlgebraPresentation, Orientation};
pub use scalar::{Parameter, Scalar};
pub use smoothness::{analyze, SmoothnessVerdict, Status};
