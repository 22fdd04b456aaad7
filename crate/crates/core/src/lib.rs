//! Galois-orbit invariants of finite groups.
//!
//! Given a finite group as permutation generators, as an exact character
//! table, or as a member of the alternating or classical families, this crate
//! computes the maximal length `f(G)` of a Galois orbit on conjugacy classes
//! and the rank `r_Z(G)` of the free part of the central units of `ZG`.

pub mod altcount;
pub mod arith;
pub mod chartab;
pub mod classtheory;
pub mod cyclotomic;
pub mod fixtures;
pub mod matgroup;
pub mod permgroup;
pub mod screening;
mod bigserde;

pub use classtheory::GaloisReport;
pub use cyclotomic::{CyclotomicNumber, FieldClass};
pub use permgroup::{ClassStructure, GroupSpec, Permutation};
