//! Exact quantum Schubert calculus for IG(2, 2n+1), and a certifier that
//! decides whether requiring nonnegative products by `σ₍₁,₁₎` leaves room
//! for any nontrivial deformation of the Schubert basis.
//!
//! Module map:
//!
//! * [`index`]: the index set of Schubert classes and its grading.
//! * [`algebra`]: exact rationals, polynomials in `q`, class vectors and
//!   affine expressions in deformation unknowns.
//! * [`pieri`]: the two quantum Pieri rules.
//! * [`ring`]: the full multiplication table and its identity suite.
//! * [`deformation`]: deformed bases and the positivity check.
//! * [`certifier`]: constraint generation, Fourier–Motzkin certificates and
//!   the proof replay.
//! * [`verify`]: invariant suites over a built table.
//! * [`expr`]: the class-expression language used by the command line.

pub mod algebra;
pub mod certifier;
pub mod deformation;
pub mod error;
pub mod expr;
pub mod index;
pub mod pieri;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
