//! Biproducts `A = B × H` with `B = k[𝒢]`, `H = k[G]`, as explicit
//! structure tables over `ℚ(ζ_M)`, plus Hopf maps between them.

pub mod biproduct;
pub mod linalg;
pub mod maps;
pub mod structure;

pub use biproduct::{Biproduct, BiproductSpec, SpecFlags};
pub use linalg::{LinMap, Tensor, Vector};
pub use maps::{Factors, HopfEndoReport, NbhReport, RTrivialReport, Restriction, YdReport};
pub use structure::{AxiomCheck, AxiomReport, IdempotentBasis, Tables};
