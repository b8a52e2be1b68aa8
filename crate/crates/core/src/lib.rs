//! A workbench for finite and finitary matroids built around generalised
//! truncations: truncation operators, the almost-spanning preorder and strong
//! equivalence, a verifier and enumerator for base families of generalised
//! truncations, and a finite-depth simulator of the forcing step that grows
//! such families over countable matroids.

pub mod bounds;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod equivalence;
pub mod finitary;
pub mod finite;
pub mod forcing;
pub mod format;
pub mod gentrunc;
pub mod report;
pub mod selftest;
pub mod set;
pub mod template;
pub mod truncation;

pub use error::{Error, Result};
pub use finite::{construct_matroid, FiniteMatroid, MatroidSpec};
pub use set::{Element, ElementSet, Mask, SetFamily};
