//! Structured single-shift QZ for companion-like pencils.
//!
//! A pencil `(A, B)` with `A = V - z w*` upper Hessenberg and `B = U - p q*`
//! upper triangular (`V`, `U` unitary) is stored through O(N) generators.
//! One implicit QZ sweep then costs O(N) and a full eigenvalue computation
//! O(N^2), which makes the solver a fast and backward stable polynomial
//! rootfinder.

pub mod backward_error;
pub mod compression;
pub mod dd;
pub mod dense_reference;
pub mod error;
pub mod experiments;
pub mod families;
pub mod givens;
pub mod mat;
pub mod polyfile;
pub mod qs_core;
pub mod structured_qz;

pub use error::{Error, Result};
pub use givens::GivensRotation;
pub use mat::CMat;
pub use qs_core::{
    build_companion_pencil, PencilGenerators, Polynomial, QuasiseparableGenerators,
    TriangularGenerators,
};
pub use structured_qz::{eigenvalues, EigenResult, Eigenvalue, SolverOptions};

pub type C64 = num_complex::Complex64;
