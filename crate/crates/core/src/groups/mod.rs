//! Integer matrices, Smith normal form and finitely generated abelian groups.

mod fgab;
mod matrix;
mod snf;

pub use fgab::{
    integer_kernel, is_exact_at, lattice_basis, solve_integer, DirectSum, ExactnessReport, ExactnessWitness,
    FgAbGroup, GroupHom, Presentation,
};
pub use matrix::{int_vec, IntMatrix};
pub use snf::{smith_normal_form, Snf};
