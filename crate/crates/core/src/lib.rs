//! Construction and verification of K_q^r-absorbers.
//!
//! Given a K_q^r-divisible r-graph L, [`assembly::assemble_absorber`] builds an
//! r-graph A with V(L) independent in A together with explicit
//! K_q^r-decompositions of A and of A + L. The pipeline is
//!
//! 1. partite boosters from Cauchy matrices over a prime field ([`booster`]),
//! 2. orthogonal boosters by repeated grafting ([`layering`]),
//! 3. independent hinges composed from two orthogonal boosters ([`hinge`]),
//! 4. an integral clique decomposition of L by exact integer elimination
//!    ([`integral`]),
//! 5. matchings between positive and negative cliques and the final assembly
//!    ([`assembly`]).
//!
//! Everything is deterministic; every intermediate object can be re-checked
//! with the verifiers in [`hypergraph`].

pub mod assembly;
pub mod booster;
pub mod cli;
pub mod error;
pub mod field;
pub mod format;
pub mod hinge;
pub mod hypergraph;
pub mod integral;
pub mod layering;
pub mod math;

pub use error::{Error, Result};
