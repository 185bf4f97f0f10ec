//! Exact graded commutative algebra over Z[1/6] with the tools needed to
//! assemble Chow rings of stratified quotient stacks: Chern class calculus,
//! torus localization, invariant subrings, degreewise ideal arithmetic and
//! the gluing of presentations along a closed stratum.

pub mod cherncalc;
pub mod equilocal;
pub mod error;
pub mod exactnum;
pub mod genus3;
pub mod gluecore;
pub mod gradedring;
pub mod idealengine;

pub use error::{Error, Result};
pub use exactnum::Coefficient;
pub use gradedring::{GradedPoly, Monomial, RingMap, RingPresentation, VarTable};
