//! A workbench for derivability conditions on provability predicates.
//!
//! - [`modal`]: the modal object language, fixed points, tautology checking.
//! - [`conditions`]: condition sets, axiom schemata, subsumption proofs.
//! - [`kernel`]: the Hilbert-style proof checker and proof builder.

pub mod arith;
pub mod conditions;
pub mod derive;
pub mod kernel;
pub mod modal;
pub mod neighborhood;
pub mod saturation;
