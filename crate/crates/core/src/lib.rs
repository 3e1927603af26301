//! Exact lattice-level constructions of principally polarized abelian
//! varieties carrying m-minimal curves.
//!
//! Every object is a lattice in a rational vector space, possibly with an
//! integral alternating form; no floating point is used anywhere.
//!
//! * [`intlin`]: Smith/Hermite normal forms, lattices, saturation, kernels.
//! * [`finquot`]: finite quotients `L'/L`, Q/Z pairings, isotropic subgroups.
//! * [`pollat`]: polarized lattices, duals, torsion, isogeny quotients, adjoints.
//! * [`comppair`]: complementary pairs, the endomorphism `j`, Welters construction.
//! * [`covers`]: homology of cyclic unramified covers from voltage ribbon graphs.
//! * [`moduli`]: dimension and genus bookkeeping.

pub mod comppair;
pub mod covers;
pub mod error;
pub mod finquot;
pub mod intlin;
pub mod moduli;
pub mod pollat;
pub mod serial;

pub use error::{Error, Result};
