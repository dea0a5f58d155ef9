//! Exact computations in Chow rings of matroids: tangent K-classes, Todd
//! classes, Euler characteristics and positivity of divisors.

pub mod chow;
pub mod divisor;
pub mod error;
pub mod identities;
pub mod ktheory;
pub mod linalg;
pub mod lp;
pub mod matroid;
pub mod positivity;
pub mod rational;
pub mod series;

pub use chow::{ChowElement, ChowRing, DivisorClass};
pub use divisor::{parse_divisor, render_divisor};
pub use error::{Error, Result};
pub use matroid::{Flag, Flat, Matroid, MatroidSpec};
pub use rational::Q;
