//! Grothendieck groups of maximal Cohen-Macaulay module categories over
//! rings of finite representation type, computed from Auslander-Reiten
//! quiver data.
//!
//! The group of such a ring is free abelian on the indecomposables modulo
//! one relation per AR sequence. This crate models that presentation and
//! what happens to it under base change along field extensions:
//!
//! - [`abelian`]: exact arithmetic for finitely presented abelian groups —
//!   Smith normal form, invariant factors, homomorphisms decided by lattice
//!   membership, and finite diagram colimits;
//! - [`quiver`]: the AR-quiver data model, its file format, and the passage
//!   to a presented group;
//! - [`basechange`]: decomposition tables for extension of scalars, the
//!   maps they induce, transfer maps, and finite direct systems with the
//!   canonical map from the colimit to the terminal group;
//! - [`cli`]: the commands behind the `argroth` binary with deterministic
//!   human and JSON reports.

pub mod abelian;
pub mod basechange;
pub mod cli;
pub mod quiver;
