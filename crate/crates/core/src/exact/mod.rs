//! Exact integer and rational arithmetic: matrices, Smith normal form,
//! finitely generated abelian groups and rational solving.

mod abelian;
mod matrix;
mod rational;
mod snf;

pub use abelian::{cokernel, from_cyclic_orders, kernel_basis, subquotient, FgAbelianGroup};
pub use matrix::{int_vec, rat_vec, Int, IntMatrix, Matrix, Rat, RatMatrix};
pub use rational::{rat, solve_linear_rational, RatColumnSpace};
pub use snf::{smith_normal_form, SnfDecomposition};

/// True iff the element with normal-form coordinates `v` in `g` has finite order.
pub fn is_torsion(g: &FgAbelianGroup, v: &[Int]) -> crate::error::Result<bool> {
    g.is_torsion(v)
}
