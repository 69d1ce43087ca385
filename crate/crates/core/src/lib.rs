//! Numerical toolkit for short mixed character sums `Σ e(f(n)) χ(n)` and the
//! Burgess-type machinery around them: Dirichlet characters, exact and float
//! phase sums, Vinogradov mean value counts, closed-form bounds, and the
//! amplification pipeline at desk scale.

pub mod bounds;
pub mod error;
pub mod modular;
pub mod numeric;
pub mod pipeline;
pub mod sums;
pub mod verify;
pub mod vinogradov;

pub use bounds::{BoundParams, BoundReport, Exponents, Theorem};
pub use error::{Error, Result};
pub use modular::{DirichletCharacter, PrimeModulus};
pub use pipeline::{CountProfile, Decomposition, GridVertex};
pub use sums::{BurgessPolynomial, Coefficient, PhaseMode, RealPolynomial, SumValue, WeilReport};
pub use vinogradov::TupleAssignment;
