//! Dense complex linear algebra and scalar entropy primitives.
//!
//! Matrices are `nalgebra` complex matrices; [`ComplexMatrix`] and
//! [`DensityMatrix`] are the validated wrappers that appear in public
//! signatures. All logarithms are base 2.

mod entropy;
mod matrix;
mod random;
mod state;

pub use entropy::{
    binary_entropy, bosonic_entropy, shannon_bits, trace_distance, von_neumann_entropy, EIG_FLOOR,
};
pub(crate) use entropy::{g2, h2};
pub use matrix::{
    basis_ket, frobenius, hermitian_eig, hermitian_residual, hermitize, inner_re, max_abs_diff,
    projector, real_scalar, tensor, tensor_all, trace, CMat, ComplexMatrix, HermitianEig, C64,
    HERMITIAN_TOL,
};
pub(crate) use matrix::eig_unchecked;
pub use random::{random_density, random_pure, random_unitary};
pub use state::{
    embed_operator, max_entangled_ket, partial_trace, partial_trace_op, partial_transpose,
    partial_transpose_op, DensityMatrix, PSD_TOL, TRACE_TOL,
};
