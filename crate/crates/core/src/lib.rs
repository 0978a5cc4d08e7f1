//! Braided structure of the representation category of a Drinfeld double
//! D(G) for a finite group G: simple objects, modular data (S, T), fusion
//! rules, higher Frobenius-Schur indicators, the group of braid gaugings and
//! all quasitriangular structures, together with numerical verification of
//! the transformation laws relating them.
//!
//! Everything that can be exact is exact: group elements are table ids,
//! characters and bilinear forms are integer exponent data, and roots of
//! unity are rationals mod 1 ([`phase::Phase`]). Floating point enters only
//! through character tables and trace evaluations.

pub mod abelian;
pub mod braid;
pub mod cache;
pub mod catalog;
pub mod double;
pub mod gauging;
pub mod group;
pub mod modular;
pub mod phase;
pub mod rep;
pub mod structure;

pub use abelian::{AbCharacter, AbHom, AbelianStructure, Bicharacter};
pub use catalog::{catalog, GroupData};
pub use group::{FiniteGroup, Subgroup};
pub use structure::StructuredGroup;

/// Default comparison tolerance for floating-point identities.
pub const TOL_COMPARE: f64 = 1e-8;
/// Default tolerance when snapping floats to integers or roots of unity.
pub const TOL_SNAP: f64 = 1e-6;
/// Default seed for the randomized eigen-splitting steps.
pub const DEFAULT_SEED: u64 = 0xD06;
