//! Exact computations on the Bohrified state space of finite-dimensional
//! quantum systems.
//!
//! Starting from a block-diagonal matrix algebra and a finite family of
//! commutative contexts, the crate builds the Heyting algebra of monotone
//! projection-valued functions on the context poset, daseinises observables
//! into it and pairs states with the resulting propositions. The general
//! lattice machinery underneath (free frames from covering relations,
//! orthomodular lattices and their Boolean blocks, Bruns–Lakser completion)
//! lives in [`order`] and [`oml`].
//!
//! Every quantifier over contexts ranges over the stored family only.

pub mod bohr;
pub mod cstar;
pub mod dasein;
pub mod dot;
pub mod io;
pub mod oml;
pub mod order;
pub mod state;
pub mod tol;

pub use bohr::{BohrError, BohrFrame, BohrOpen};
pub use cstar::{CMat, Closure, Context, ContextPoset, CstarError, HermObs, MatrixAlg, Projection};
pub use dasein::{DaseinError, RatInterval};
pub use oml::{BlockFamily, MonoHeyting, Oml, OmlError};
pub use order::{BoolAlg, BoolFamily, CoverRel, FinLattice, FinPoset, FrameElems, OrderError};
pub use state::{DensityState, KsOutcome, ProjMeasure, QuasiState, StateError, TruthValue};
pub use io::IoError;
