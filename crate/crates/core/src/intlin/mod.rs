//! Exact integer and rational linear algebra: normal forms, lattices,
//! saturation, kernels and indices.

mod lattice;
mod matrix;
mod normal_form;

pub use lattice::{abs_det, index, kernel_lattice, saturate, Lattice};
pub use matrix::{frac, int, rat, ratio, Int, IntMatrix, Matrix, Rat, RatMatrix};
pub use normal_form::{hermite_normal_form, integer_kernel, smith_normal_form, Smith};
