//! Exact arithmetic for finitely presented abelian groups.
//!
//! Everything in this module is immutable after construction and every
//! operation is a pure function, so values can be shared freely across
//! threads.

mod group;
mod matrix;

pub use group::{FPAbelianGroup, GroupDiagram, GroupHom, GroupInvariants};
pub use matrix::{kernel_basis, row_lattice_contains, smith_normal_form, IntMatrix, SnfResult};

/// Errors from presentations, homomorphisms, and diagrams.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("relation matrix has {cols} columns but the group has {generators} generators")]
    RelationWidth { cols: usize, generators: usize },

    #[error(
        "hom matrix is {matrix_rows}x{matrix_cols} but must be \
         {target_generators}x{source_generators} (target x source generators)"
    )]
    HomShape {
        matrix_rows: usize,
        matrix_cols: usize,
        source_generators: usize,
        target_generators: usize,
    },

    #[error("hom is not well-defined: {detail}")]
    IllDefined { detail: String },

    #[error("cannot compose: inner target and outer source presentations differ")]
    ComposeMismatch,

    #[error("diagram arrow {from} -> {to} is invalid: {reason}")]
    BadArrow {
        from: usize,
        to: usize,
        reason: String,
    },

    #[error("diagram is not composition-consistent on the triangle {i} -> {j} -> {k}")]
    InconsistentDiagram { i: usize, j: usize, k: usize },
}
