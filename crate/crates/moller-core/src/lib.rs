//! Exact rational homological algebra over finite-dimensional graded vector
//! spaces: cochain complexes and deformation retracts, graded-symmetric
//! algebras with Koszul signs, L-infinity style bracket families, truncated
//! Chevalley-Eilenberg differentials, order-by-order obstruction solving and
//! the homological perturbation lemma.
//!
//! All arithmetic is over arbitrary-precision rationals; every identity the
//! library claims (d^2 = 0, retract identities, square-zero differentials,
//! solved towers) is checked exactly, block by block. The crate is
//! `no_std`-compatible (it only needs `alloc`).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod ce;
pub mod exactlin;
pub mod hpt;
pub mod linfty;
pub mod models;
pub mod moller;
pub mod symalg;

pub use exactlin::{
    CochainComplex, DeformationRetract, GradedMap, GradedVectorSpace, Rat, SparseMat,
};
