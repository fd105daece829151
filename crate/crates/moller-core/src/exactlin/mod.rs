//! Exact rational graded linear algebra: sparse matrices, graded spaces and
//! maps, cochain complexes, cohomology, linear solving with inconsistency
//! certificates, and deformation retracts.

mod complex;
mod graded;
mod matrix;

pub use complex::{
    compose_retracts, renormalize_retract, retract_to_cohomology, solve_linear, CochainComplex,
    DeformationRetract, LinearCertificate, RetractCheck, RetractError,
};
pub use graded::{Degree, GradedMap, GradedVectorSpace};
pub use matrix::{rat, rat_int, Rat, Rref, SolveCertificate, SparseMat};
