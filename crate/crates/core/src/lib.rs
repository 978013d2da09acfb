//! Exact computation with logarithmic derivation modules of plane
//! multiarrangements and freeness of central 3-arrangements.
//!
//! * [`exactalg`]: exact scalars over ℚ and 𝔽_p, binary forms, kernels.
//! * [`multiarr2`]: exponents, Δ and homogeneous bases of `D(A,m)`.
//! * [`lattice`]: the multiplicity lattice, its components and peak points.
//! * [`shift`]: the affine connection ∇ and the shift isomorphism `θ ↦ ∇_θ θ0`.
//! * [`arr3`]: intersection lattices, characteristic polynomials, Ziegler
//!   restrictions and freeness decisions for 3-arrangements.
//! * [`document`]: the JSON arrangement file format.

pub mod arr3;
pub mod corpus;
pub mod document;
pub mod error;
pub mod exactalg;
pub mod lattice;
pub mod multiarr2;
pub mod shift;
pub mod suite;

pub use error::{Error, Result};
