//! States, measures on projections, quasi-states, the state–proposition
//! pairing and the search for noncontextual valuations.

mod cabello;
mod ks;

use std::sync::Arc;

use crate::bohr::BohrError;
use crate::cstar::{
    d_generator_mask, eig_range, overlap_components, CMat, ContextPoset, CstarError, HermObs, MatrixAlg,
    Projection,
};
use crate::dasein::{inner_support_mask, outer_support_mask, DaseinError, RatInterval};
use crate::tol;

pub use cabello::{cabello18, cabello18_contexts, Cabello18};
pub use ks::{ks_search, KsOutcome};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error(transparent)]
    Cstar(#[from] CstarError),
    #[error(transparent)]
    Dasein(#[from] DaseinError),
    #[error(transparent)]
    Bohr(#[from] BohrError),
    #[error("not a density matrix: {0}")]
    NotAState(String),
    #[error("state and observable live in different algebras")]
    AlgebraMismatch,
    #[error("measure is inconsistent: {0}")]
    InconsistentMeasure(String),
    #[error("context has {0} atoms; measure tables are limited to 16")]
    TooManyAtoms(usize),
    #[error("truth value {contexts:?} is not an upper set of the context poset")]
    NotUpperSet { contexts: Vec<String> },
}

/// A density matrix: Hermitian, positive semidefinite, trace one.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    alg: MatrixAlg,
    rho: CMat,
}

impl DensityState {
    pub fn new(alg: MatrixAlg, rho: CMat) -> Result<Self, StateError> {
        let h = HermObs::new(alg.clone(), rho).map_err(|e| StateError::NotAState(e.to_string()))?;
        let (lo, _) = eig_range(h.matrix());
        if lo < -tol::STATE {
            return Err(StateError::NotAState(format!("eigenvalue {lo:.3e} is negative")));
        }
        let t = h.trace();
        if (t - 1.0).abs() > tol::STATE {
            return Err(StateError::NotAState(format!("trace is {t}")));
        }
        Ok(Self { alg, rho: h.matrix().clone() })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector, normalized if needed.
    pub fn pure(alg: MatrixAlg, psi: &[crate::cstar::C64]) -> Result<Self, StateError> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let n = v.norm();
        if n == 0.0 {
            return Err(StateError::NotAState("zero vector".into()));
        }
        let v = v.unscale(n);
        Self::new(alg, &v * v.adjoint())
    }

    pub fn maximally_mixed(alg: MatrixAlg) -> Self {
        let n = alg.total_dim() as f64;
        let rho = alg.identity().unscale(n);
        Self { alg, rho }
    }

    pub fn algebra(&self) -> &MatrixAlg {
        &self.alg
    }

    pub fn matrix(&self) -> &CMat {
        &self.rho
    }

    /// `tr(ρp)`
    pub fn prob(&self, p: &Projection) -> Result<f64, StateError> {
        if p.algebra() != &self.alg {
            return Err(StateError::AlgebraMismatch);
        }
        Ok((&self.rho * p.matrix()).trace().re)
    }
}

/// `tr(ρa)`
pub fn expectation(s: &DensityState, a: &HermObs) -> Result<f64, StateError> {
    if a.algebra() != &s.alg {
        return Err(StateError::AlgebraMismatch);
    }
    let z = (&s.rho * a.matrix()).trace();
    debug_assert!(z.im.abs() <= 1e-9 * (1.0 + z.re.abs()));
    Ok(z.re)
}

/// A finitely additive probability on the projections of every context in
/// a family: `values[i][m]` is the measure of the atom mask `m` of context `i`.
#[derive(Clone, Debug)]
pub struct ProjMeasure {
    poset: Arc<ContextPoset>,
    values: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MeasureReport {
    pub normalization: Vec<String>,
    pub additivity: Vec<String>,
    pub naturality: Vec<String>,
}

impl MeasureReport {
    pub fn passed(&self) -> bool {
        self.normalization.is_empty() && self.additivity.is_empty() && self.naturality.is_empty()
    }

    pub fn violations(&self) -> usize {
        self.normalization.len() + self.additivity.len() + self.naturality.len()
    }
}

impl ProjMeasure {
    pub fn new(poset: Arc<ContextPoset>, values: Vec<Vec<f64>>) -> Result<Self, StateError> {
        if values.len() != poset.len() {
            return Err(StateError::InconsistentMeasure(format!("{} tables for {} contexts", values.len(), poset.len())));
        }
        for (i, t) in values.iter().enumerate() {
            let k = poset.context(i).len();
            if k > 16 {
                return Err(StateError::TooManyAtoms(k));
            }
            if t.len() != 1 << k {
                return Err(StateError::InconsistentMeasure(format!("context {} needs {} values", poset.label(i), 1 << k)));
            }
        }
        Ok(Self { poset, values })
    }

    pub fn poset(&self) -> &Arc<ContextPoset> {
        &self.poset
    }

    pub fn value(&self, i: usize, m: u64) -> f64 {
        self.values[i][m as usize]
    }

    pub fn set(&mut self, i: usize, m: u64, v: f64) {
        self.values[i][m as usize] = v;
    }

    pub fn tables(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Checks `μ(0) = 0`, `μ(1) = 1`, values in `[0, 1]`, additivity on
    /// orthogonal pairs, and agreement on every projection two contexts share.
    pub fn validate(&self, tol: f64) -> Result<MeasureReport, StateError> {
        let mut rep = MeasureReport::default();
        let p = &self.poset;
        for (i, t) in self.values.iter().enumerate() {
            let full = t.len() - 1;
            if t[0].abs() > tol || (t[full] - 1.0).abs() > tol {
                rep.normalization.push(format!("{}: μ(0) = {}, μ(1) = {}", p.label(i), t[0], t[full]));
            }
            if let Some((m, v)) = t.iter().enumerate().find(|(_, &v)| !(-tol..=1.0 + tol).contains(&v)) {
                rep.normalization.push(format!("{}: μ({m:b}) = {v}", p.label(i)));
            }
            for a in 0..=full {
                let rest = full & !a;
                let mut b = rest;
                // every b disjoint from a, including 0
                loop {
                    if a < b || b == 0 {
                        let s = t[a] + t[b];
                        if (t[a | b] - s).abs() > tol {
                            rep.additivity.push(format!("{}: μ({a:b} ∨ {b:b}) ≠ μ({a:b}) + μ({b:b})", p.label(i)));
                        }
                    }
                    if b == 0 {
                        break;
                    }
                    b = (b - 1) & rest;
                }
            }
        }
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                for (mi, mj) in overlap_components(p.context(i), p.context(j))? {
                    let (vi, vj) = (self.value(i, mi), self.value(j, mj));
                    if (vi - vj).abs() > tol {
                        rep.naturality.push(format!(
                            "shared projection {}:{mi:b} = {vi} but {}:{mj:b} = {vj}",
                            p.label(i),
                            p.label(j)
                        ));
                    }
                }
            }
        }
        Ok(rep)
    }
}

/// `p ↦ tr(ρp)` on every projection of every context.
pub fn measure_from_state(s: &DensityState, fam: &Arc<ContextPoset>) -> Result<ProjMeasure, StateError> {
    let mut values = Vec::with_capacity(fam.len());
    for c in fam.contexts() {
        if c.len() > 16 {
            return Err(StateError::TooManyAtoms(c.len()));
        }
        let atoms: Vec<f64> = c.atoms().iter().map(|p| s.prob(p)).collect::<Result<_, _>>()?;
        let table = (0..1usize << c.len())
            .map(|m| (0..c.len()).filter(|&a| m >> a & 1 == 1).map(|a| atoms[a]).sum())
            .collect();
        values.push(table);
    }
    ProjMeasure::new(fam.clone(), values)
}

/// A functional that is linear on each context algebra: atom weights per context.
#[derive(Clone, Debug)]
pub struct QuasiState {
    poset: Arc<ContextPoset>,
    weights: Vec<Vec<f64>>,
}

impl QuasiState {
    pub fn poset(&self) -> &Arc<ContextPoset> {
        &self.poset
    }

    pub fn weights(&self, i: usize) -> &[f64] {
        &self.weights[i]
    }

    /// `ρ_C(Σ λ_i p_i) = Σ λ_i μ(p_i)`
    pub fn eval_coords(&self, i: usize, lambda: &[f64]) -> f64 {
        self.weights[i].iter().zip(lambda).map(|(w, l)| w * l).sum()
    }

    pub fn eval(&self, i: usize, a: &HermObs) -> Result<f64, StateError> {
        let coords = self.poset.context(i).coords_of_obs(a)?;
        Ok(self.eval_coords(i, &coords))
    }

    pub fn eval_mask(&self, i: usize, m: u64) -> f64 {
        (0..self.weights[i].len()).filter(|&a| m >> a & 1 == 1).map(|a| self.weights[i][a]).sum()
    }
}

/// Reads off the per-context linear functionals of a measure after checking
/// that it is a genuine, natural measure.
pub fn quasistate_from_measure(m: &ProjMeasure, tol: f64) -> Result<QuasiState, StateError> {
    let rep = m.validate(tol)?;
    if let Some(v) = rep.naturality.first().or(rep.additivity.first()).or(rep.normalization.first()) {
        return Err(StateError::InconsistentMeasure(v.clone()));
    }
    let weights = (0..m.poset.len())
        .map(|i| (0..m.poset.context(i).len()).map(|a| m.value(i, 1 << a)).collect())
        .collect();
    Ok(QuasiState { poset: m.poset.clone(), weights })
}

/// `μ_I(D_a) = I(support of a⁺)` for `a` in context `i`.
pub fn valuation_from_functional(q: &QuasiState, i: usize, a: &HermObs) -> Result<f64, StateError> {
    let m = d_generator_mask(a, q.poset.context(i))?;
    Ok(q.eval_mask(i, m))
}

/// `I(n·a⁺ ∧ 1)` for `a` in context `i`.
pub fn valuation_sweep(q: &QuasiState, i: usize, a: &HermObs, n: f64) -> Result<f64, StateError> {
    let coords = q.poset.context(i).coords_of_obs(a)?;
    let capped: Vec<f64> = coords.iter().map(|&l| (n * l.max(0.0)).min(1.0)).collect();
    Ok(q.eval_coords(i, &capped))
}

/// Contexts where the state gives probability one to both the inner and
/// the outer daseinisation of `a ∈ (q, r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruthValue {
    pub contexts: Vec<usize>,
    pub labels: Vec<String>,
}

pub fn truth_value(
    s: &DensityState,
    a: &HermObs,
    iv: &RatInterval,
    fam: &ContextPoset,
) -> Result<TruthValue, StateError> {
    truth_value_tol(s, a, iv, fam, tol::EIG, tol::TRUTH)
}

pub fn truth_value_tol(
    s: &DensityState,
    a: &HermObs,
    iv: &RatInterval,
    fam: &ContextPoset,
    tol_eig: f64,
    tol_truth: f64,
) -> Result<TruthValue, StateError> {
    if a.algebra() != &s.alg || fam.algebra() != &s.alg {
        return Err(StateError::AlgebraMismatch);
    }
    let (q, r) = (iv.q_f64(), iv.r_f64());
    let mut contexts = Vec::new();
    for (i, c) in fam.contexts().iter().enumerate() {
        let inner = c.proj_of_mask(inner_support_mask(a, q, c, tol_eig)?);
        let outer = c.proj_of_mask(outer_support_mask(a, r, c, tol_eig)?);
        if s.prob(&inner)? >= 1.0 - tol_truth && s.prob(&outer)? >= 1.0 - tol_truth {
            contexts.push(i);
        }
    }
    let labels: Vec<String> = contexts.iter().map(|&i| fam.label(i).to_string()).collect();
    let set = crate::order::set_from(fam.len(), contexts.iter().copied());
    if !fam.order().is_up_set(&set) {
        return Err(StateError::NotUpperSet { contexts: labels });
    }
    Ok(TruthValue { contexts, labels })
}

/// Largest entrywise deviation between `tr(ρ a)` and the quasi-state on
/// `a = Σ λ_i p_i` for the given coordinates.
pub fn pairing_residual(s: &DensityState, q: &QuasiState, i: usize, lambda: &[f64]) -> Result<f64, StateError> {
    let a = q.poset.context(i).obs_of_coords(lambda);
    Ok((expectation(s, &a)? - q.eval_coords(i, lambda)).abs())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar::{c, context_poset, pauli_context, pauli_x, pauli_z, Closure, Context};

    fn m2() -> MatrixAlg {
        MatrixAlg::full(2)
    }

    fn ket0() -> DensityState {
        DensityState::pure(m2(), &[c(1., 0.), c(0., 0.)]).unwrap()
    }

    fn zx() -> Arc<ContextPoset> {
        Arc::new(context_poset(vec![pauli_context('z'), pauli_context('x')], Closure::Meets).unwrap())
    }

    #[test]
    fn expectations() {
        let sz = HermObs::new(m2(), pauli_z()).unwrap();
        let sx = HermObs::new(m2(), pauli_x()).unwrap();
        assert!((expectation(&ket0(), &sz).unwrap() - 1.0).abs() < 1e-12);
        assert!(expectation(&DensityState::maximally_mixed(m2()), &sz).unwrap().abs() < 1e-12);
        let rho = (m2().identity() + pauli_x().scale(0.6)).scale(0.5);
        let s = DensityState::new(m2(), rho).unwrap();
        assert!((expectation(&s, &sx).unwrap() - 0.6).abs() < 1e-12);
        let bad = m2().identity();
        assert!(matches!(DensityState::new(m2(), bad), Err(StateError::NotAState(_))));
    }

    #[test]
    fn measures() {
        let p = zx();
        let mu = measure_from_state(&ket0(), &p).unwrap();
        let z = p.index_of("C_z").unwrap();
        assert!((mu.value(z, 0b01) - 1.0).abs() < 1e-12 && mu.value(z, 0b10).abs() < 1e-12);
        assert!(mu.validate(1e-9).unwrap().passed());
        let mixed = measure_from_state(&DensityState::maximally_mixed(m2()), &p).unwrap();
        for i in 1..p.len() {
            for a in 0..2 {
                assert!((mixed.value(i, 1 << a) - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn naturality_across_refinements() {
        let alg = MatrixAlg::full(4);
        let coarse = Context::from_partition(&alg, &[vec![0, 1], vec![2, 3]]).unwrap();
        let a = Context::from_partition(&alg, &[vec![0], vec![1], vec![2, 3]]).unwrap();
        let b = Context::from_partition(&alg, &[vec![0, 1], vec![2], vec![3]]).unwrap();
        let p = Arc::new(context_poset(vec![coarse, a, b], Closure::None).unwrap());
        let rho = crate::cstar::random::random_density(&mut rand_chacha::ChaCha8Rng::seed_from_u64(3), 4, 4);
        let s = DensityState::new(alg, rho).unwrap();
        let mu = measure_from_state(&s, &p).unwrap();
        let rep = mu.validate(1e-12).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    use rand::SeedableRng;

    #[test]
    fn quasistates() {
        let p = zx();
        let mu = measure_from_state(&ket0(), &p).unwrap();
        let qs = quasistate_from_measure(&mu, 1e-9).unwrap();
        let sx = HermObs::new(m2(), pauli_x()).unwrap();
        let x = p.index_of("C_x").unwrap();
        assert!((qs.eval(x, &sx).unwrap() - expectation(&ket0(), &sx).unwrap()).abs() < 1e-12);
        let mut broken = mu.clone();
        let z = p.index_of("C_z").unwrap();
        broken.set(z, 0b11, 0.7);
        assert!(matches!(quasistate_from_measure(&broken, 1e-9), Err(StateError::InconsistentMeasure(_))));
    }

    #[test]
    fn uniform_functional_on_one_context() {
        let alg = MatrixAlg::full(3);
        let ctx = Context::from_partition(&alg, &[vec![0], vec![1], vec![2]]).unwrap();
        let p = Arc::new(context_poset(vec![ctx], Closure::None).unwrap());
        let s = DensityState::maximally_mixed(alg.clone());
        let qs = quasistate_from_measure(&measure_from_state(&s, &p).unwrap(), 1e-9).unwrap();
        assert!((qs.eval_coords(1, &[3., 6., 9.]) - 6.0).abs() < 1e-12);
        let a = HermObs::from_real_diag(alg.clone(), &[2., 0.5, -1.]).unwrap();
        assert!((valuation_from_functional(&qs, 1, &a).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((valuation_sweep(&qs, 1, &a, 1e6).unwrap() - 2.0 / 3.0).abs() < 1e-6);
        let neg = HermObs::from_real_diag(alg, &[-2., 0., -1.]).unwrap();
        assert_eq!(valuation_from_functional(&qs, 1, &neg).unwrap(), 0.0);
    }

    #[test]
    fn truth_values() {
        let p = zx();
        let sz = HermObs::new(m2(), pauli_z()).unwrap();
        let iv = RatInterval::parse("1/2", "3/2").unwrap();
        assert_eq!(truth_value(&ket0(), &sz, &iv, &p).unwrap().labels, vec!["C_z"]);
        let mixed = DensityState::maximally_mixed(m2());
        assert!(truth_value(&mixed, &sz, &iv, &p).unwrap().contexts.is_empty());
        let one = HermObs::scalar(m2(), 1.0);
        assert_eq!(truth_value(&mixed, &one, &iv, &p).unwrap().contexts, vec![0, 1, 2]);
    }
}
