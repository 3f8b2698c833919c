//! Exact finite order theory: posets, lattices, Boolean algebras, Heyting
//! operations, Alexandrov opens, covering relations and the frames they
//! generate, ideal and distributive-ideal completions.

mod boolean;
mod cover;
mod frame;
mod lattice;
mod poset;
mod sections;

pub use boolean::{full_mask, mask_atoms, mask_label, masks_between, BoolAlg};
pub use cover::{
    free_frame, frame_morphism_from_continuous, validate_cover, ContinuityAxiom, CoverAxiom, CoverCheckOptions,
    CoverRel, CoverReport, CoverViolation, FrameMorphism, FreeFrame,
};
pub use frame::{alx_opens, FrameElems};
pub use lattice::FinLattice;
pub use poset::{set_from, FinPoset, PosetJson};
pub use sections::{BoolFamily, Section};

/// Default cap on materialized carriers.
pub const DEFAULT_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric: {0} <= {1} <= {0}")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("elements {0} and {1} have no meet")]
    NoMeet(usize, usize),
    #[error("elements {0} and {1} have no join")]
    NoJoin(usize, usize),
    #[error("lattice is not distributive: x={0}, y={1}, z={2}")]
    NotDistributive(usize, usize, usize),
    #[error("enumeration exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("closure of ↓{0} is not a fixed point; the cover violates its axioms")]
    ClosureNotIdempotent(usize),
    #[error("map is not continuous ({axiom:?}): {witness}")]
    NotContinuous { axiom: ContinuityAxiom, witness: String },
    #[error("embedding {from} -> {to} is not a Boolean monomorphism (atom {atom})")]
    BadEmbedding { from: usize, to: usize, atom: usize },
    #[error("embeddings along {0} <= {1} <= {2} do not compose")]
    NonCommutingEmbeddings(usize, usize, usize),
}
