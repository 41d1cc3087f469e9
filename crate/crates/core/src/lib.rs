//! Generic ranks, maximum-rank bounds and explicit rank decompositions with
//! respect to classical projective varieties (Veronese, Segre, Grassmannian
//! and powers of forms).
//!
//! * [`variety`]: cone parameterizations, their Jacobians and the secant map.
//! * [`dimension`]: secant dimensions by stacked tangent spaces, generic ranks.
//! * [`bounds`]: closed-form maximum-rank bounds and the Waring comparison table.
//! * [`binary`]: exact complex and real Waring rank of binary forms.
//! * [`decompose`]: numerical fitting and the two-point split construction.
//! * [`typical`]: sampling of real typical ranks.

pub mod binary;
pub mod bounds;
pub mod combinatorics;
pub mod decompose;
pub mod dimension;
mod error;
pub mod linalg;
pub mod poly;
pub mod rng;
mod scalar;
pub mod typical;
pub mod variety;

pub use error::{Error, Result};
pub use scalar::{ArithmeticMode, Field, Scalar};
pub use variety::{cone_jacobian, cone_point, evaluate, AmbientPoint, ConeParam, Decomposition, Term, VarietySpec};
