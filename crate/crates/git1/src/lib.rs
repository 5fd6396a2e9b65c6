//! Stability of pointed genus-1 curves under the torus action on the moduli
//! of curves with tangent vectors, decided from the combinatorial type.

pub mod chamber;
pub mod curve;
pub mod lp;
pub mod polytope;
pub mod rational;
pub mod smyth;

pub use curve::{canonical_form, enumerate_curves, Curve, CurveError, EnumOptions};
pub use rational::Q;
