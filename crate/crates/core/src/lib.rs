//! Norm-preserving lines of 2×2 and 3×3 rational matrices, in exact
//! arithmetic.

pub mod analyzer2d;
pub mod analyzer3d;
pub mod cli;
pub mod diophantine;
pub mod direction;
pub mod error;
pub mod form;
pub mod linalg;
pub mod quadint;
pub mod render;
pub mod torus;

pub use direction::{normalize_direction, PrimitiveDirection};
pub use error::{Error, Result};
pub use linalg::{RatMatrix2, RatMatrix3, Rational};
pub use quadint::QuadIntElement;
