//! Finite-dimensional C*-algebras as block-diagonal matrix algebras, their
//! Hermitian spectral calculus, commutative contexts and context posets.

mod context;
mod eig;
mod matrix;
mod poset;
pub mod random;

pub use context::{
    bloch_context, bloch_projection, context_from_obs, d_generator, d_generator_mask, diagonal_contexts,
    gelfand_covers, gelfand_frame, pauli_context, set_partitions, young_sequences, Context,
};
pub use eig::{
    eig_range, eigenspaces, herm_eig, jacobi_eigh, pos_part, proj_pos, proj_pos_tol, proj_zero, proj_zero_tol,
    reconstruction_residual,
};
pub use matrix::{c, max_abs, pauli_x, pauli_y, pauli_z, CMat, HermObs, MatrixAlg, Projection, C64};
pub use poset::{context_poset, context_poset_in, meet_contexts, overlap_components, Closure, ContextPoset, MAX_CONTEXTS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CstarError {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not a projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },
    #[error("matrix has entries outside the diagonal blocks of the algebra")]
    NotInAlgebra,
    #[error("({0}) is not on the unit sphere")]
    NotOnSphere(f64),
    #[error("operands live in different algebras")]
    IncompatibleAlgebras,
    #[error("cannot decide the rank of an intersection; ambiguous overlaps {overlaps:?}")]
    DegenerateIntersection { overlaps: Vec<f64> },
    #[error("not in the context: {0}")]
    NotInContext(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("malformed input: {0}")]
    Shape(String),
}
