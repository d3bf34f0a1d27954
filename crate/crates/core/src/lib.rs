//! Equivariant dual complexes of G-varieties.
//!
//! The crate builds the dual complex of a variety with a finite abelian group
//! action for two fully combinatorial input classes, computes its integral
//! homology, and reports the top-degree homology group, which is unchanged
//! under equivariant birational maps.
//!
//! - [`abgroup`]: exact integer matrices, Smith normal form, and finite abelian
//!   subgroups of `(Z/m)^N` stored by generators.
//! - [`quasicomplex`]: simplicial quasicomplexes (cells may share vertex sets)
//!   with star, link, closure and stellar subdivision.
//! - [`homology`]: integral homology through boundary matrices.
//! - [`toric`]: smooth fans, torus subgroups, cone stabilizers and blowups.
//! - [`hypersurface`]: diagonal actions on Fermat-type hypersurfaces and the
//!   linearizability verdict.
//!
//! With the default `parallel` feature, independent per-cone, per-support and
//! per-degree work runs on the rayon global pool. Without it the same code
//! paths run sequentially; results are identical either way.

pub mod abgroup;
pub mod error;
pub mod homology;
pub mod hypersurface;
mod par;
pub mod quasicomplex;
mod serde_int;
pub mod toric;

pub use abgroup::{
    smith_invariants, smith_normal_form, FiniteAbelianSubgroup, GroupJson, IntMatrix, SnfDecomposition,
    TorsionVector,
};
pub use error::{Error, Result};
pub use homology::{
    boundary_matrices, homology, homology_table, reduced_homology, top_invariant,
    ChainComplexData, HomologyGroup,
};
pub use hypersurface::{DiagonalHypersurfaceAction, LinearizabilityReport, Stratum, Verdict};
pub use par::is_parallel;
pub use quasicomplex::{Cell, CellId, QuasiComplex, VertexId};
pub use toric::Fan;
