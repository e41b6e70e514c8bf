//! Exact computer algebra for paragrassmann algebras at roots of unity.
//!
//! The crate builds the single-mode algebra `∂θ = 1 + qθ∂` with `θ^(p+1) = 0`
//! in its (p+1)-dimensional ladder representation, the multimode algebra by
//! tensor products, a normal-ordering engine for the θ/θ̄ subalgebra, the
//! generalized Berezin integral, and three applications: the Z_(p+1) Potts
//! chain, heat kernels of diagonal Hamiltonians, and finite-dimensional
//! representations of GL_q(2).
//!
//! Matrices and polynomials are generic over [`Scalar`]; the aliases below fix
//! the two scalar types used in practice: the exact cyclotomic field and
//! complex floats.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod integration;
pub mod matrix;
pub mod multimode;
pub mod poly;
pub mod potts;
pub mod qarith;
pub mod qgroup;
pub mod report;
pub mod scalar;
pub mod single_mode;

pub use error::{Error, Result};
pub use matrix::OpMatrix;
pub use multimode::{Kind, MultiModeRep, PGAlgebra, PGPolynomial, Symbol};
pub use qarith::{CycloContext, CycloElement, Field};
pub use report::{Check, Report};
pub use scalar::{FieldScalar, Scalar};
pub use single_mode::SingleModeRep;

/// Matrix over the exact cyclotomic field.
pub type ExactMatrix = OpMatrix<CycloElement>;
/// Matrix over complex floats (embedded mode).
pub type ComplexMatrix = OpMatrix<num_complex::Complex64>;
/// Paragrassmann polynomial with exact coefficients.
pub type ExactPolynomial = PGPolynomial<CycloElement>;
/// Paragrassmann polynomial with complex float coefficients.
pub type ComplexPolynomial = PGPolynomial<num_complex::Complex64>;
/// Normal-ordering engine over the exact field.
pub type ExactAlgebra = PGAlgebra<CycloElement>;
/// Normal-ordering engine over complex floats.
pub type ComplexAlgebra = PGAlgebra<num_complex::Complex64>;
/// Exact rationals.
pub type Rational = num_rational::BigRational;
