//! Exact scalars, binary forms and the linear-algebra kernels the solvers
//! are built on. Nothing here rounds: ℚ is arbitrary precision and 𝔽_p is
//! reduced modulo `p` after every operation.

mod form;
mod matrix;
mod scalar;

pub use form::{
    binary_form_divides, canonical_projective, divisibility_constraints, BinaryForm, LinearForm2,
};
pub use matrix::Matrix;
pub use scalar::{parse_rational, rational_to_string, Field, Scalar};
