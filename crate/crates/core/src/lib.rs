//! Exact and floating-point tools for orthogonal polynomials on the unit
//! circle with real reflection parameters, their CMV factors and linear
//! pencils, spectral transformations of three-term recurrences, and the
//! Bannai-Ito / Racah-Wilson families reached through them.

pub mod cmv;
pub mod dressing;
pub mod error;
pub mod families;
pub mod linalg;
pub mod opuc;
pub mod polynomial;
pub mod rational;
pub mod sampling;
pub mod transforms;

pub use error::{Error, Result};
pub use opuc::ReflectionSequence;
pub use polynomial::Polynomial;
pub use rational::{Float, Rational};
