//! Numerical tolerances shared across modules.

/// Hermiticity: `‖a − a*‖` entrywise.
pub const HERM: f64 = 1e-10;
/// Projection, orthogonality and partition-of-unity checks.
pub const PROJ: f64 = 1e-9;
/// Eigenvalues within this distance of a threshold count as not beyond it.
pub const EIG: f64 = 1e-9;
/// Eigenvalues closer than this are merged into one spectral projection.
pub const CLUSTER: f64 = 1e-8;
/// Off-diagonal Frobenius norm at which the Jacobi sweeps stop.
pub const JACOBI: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Overlap norms below this are zero when comparing contexts.
pub const RANK: f64 = 1e-8;
/// Overlaps within this factor above [`RANK`] are ambiguous.
pub const RANK_AMBIGUITY: f64 = 10.0;
/// `ρ(p) = 1` is tested as `ρ(p) ≥ 1 − TRUTH`.
pub const TRUTH: f64 = 1e-9;
/// States: positivity and trace.
pub const STATE: f64 = 1e-9;
