//! Exact computations around Hopf automorphisms of biproducts `B × H` where
//! `B = k[𝒢]` is the group algebra of a finite abelian group.
//!
//! The crate has two halves. The permutation side works inside `Sym(G)` for a
//! finite abelian group `G` with a fixed automorphism `σ`, and enumerates
//! `Aut_σ(G)`, the pair-defined set `Γ`, and the orbit-symmetric sets
//! `Sym_σ^±`. The algebra side builds the biproduct over a cyclotomic field and
//! checks Hopf maps on explicit bases, so the permutation results can be
//! compared against honest linear algebra.
//!
//! Everything is exact. Field elements live in `ℚ(ζ_M)` with arbitrary
//! precision rationals; there is no floating point anywhere.

pub mod abelian_group;
pub mod characters;
pub mod config;
pub mod constructions;
pub mod cyclotomic;
pub mod error;
pub mod hopf_biproduct;
pub mod perm_search;

pub use error::{Error, Result};
