//! Exact arithmetic for finite abelian groups realized inside `(Z/m)^N`.
//!
//! Every query reduces to integer lattice algebra: a subgroup generated by
//! `g_1, ..., g_k` corresponds to the lattice `L = span(g_i) + m Z^N`, and the
//! group itself is `L / m Z^N`. Smith normal form of a generating matrix of
//! `L` gives both the invariant factors and a membership test.

mod group;
mod matrix;
mod snf;

pub use group::{FiniteAbelianSubgroup, GroupJson, TorsionVector};
pub use matrix::IntMatrix;
pub use snf::{left_kernel, right_kernel, smith_invariants, smith_normal_form, SnfDecomposition};
