//! Exact rational and integer linear algebra plus certified classification of
//! polynomial root moduli. Everything here is pure, deterministic and exact;
//! no floating point.

mod matrix;
mod poly;
mod roots;

pub use matrix::{
    coset_reps, hermite_normal_form, independent_subset, intersect_subspaces, rational_kernel,
    solve_membership, CosetTable, IMat, QMat, ZVec,
};
pub use poly::{cauchy_index_line, char_poly, QPoly};
pub use roots::{circle_split, classify_root_moduli, RootModuli};
