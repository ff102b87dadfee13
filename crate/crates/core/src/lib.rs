//! Combinatorics of non-loose Legendrian and transverse `(p, q)`-torus knots
//! in contact `S^1 x S^2`: Farey path pairs, decorations, Euler classes,
//! surgery-diagram homology and the resulting classification census.
//!
//! Everything is generic over an exact integer type (see [`scalar::Int`]);
//! the aliases below fix it to `i64`, and the `Big*` ones to `BigInt`.

pub mod classify;
pub mod decor;
pub mod error;
pub mod euler;
pub mod farey;
pub mod knot;
pub mod paths;
pub mod scalar;
pub mod surgery;

pub use decor::{ConsistencyLevel, Decoration, Sign};
pub use error::{Error, Result};
pub use euler::{Side, TorsionKind};
pub use paths::PathSide;
pub use scalar::Int;
pub use surgery::LutzKind;

use num_bigint::BigInt;

pub type Slope = farey::Slope<i64>;
pub type CFrac = farey::CFrac<i64>;
pub type TorusKnot = knot::TorusKnot<i64>;
pub type BlockSequence = paths::BlockSequence<i64>;
pub type SurgeryDiagram = surgery::SurgeryDiagram<i64>;
pub type Matrix = surgery::Matrix<i64>;
pub type ClassificationReport = classify::ClassificationReport<i64>;

pub type BigSlope = farey::Slope<BigInt>;
pub type BigTorusKnot = knot::TorusKnot<BigInt>;
pub type BigBlockSequence = paths::BlockSequence<BigInt>;
pub type BigMatrix = surgery::Matrix<BigInt>;
