//! Daseinisation: per-context inner and outer approximations of the spectral
//! data of a self-adjoint element, and the open they define for an interval.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bohr::{BohrError, BohrOpen};
use crate::cstar::{context_from_obs, eig_range, Context, ContextPoset, CstarError, HermObs, Projection};
use crate::tol;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DaseinError {
    #[error(transparent)]
    Cstar(#[from] CstarError),
    #[error(transparent)]
    Bohr(#[from] BohrError),
    #[error("interval ({0}, {1}) is empty")]
    EmptyInterval(String, String),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("the poset lacks the context generated by {0}")]
    MissingGeneratedContext(String),
}

/// An open interval `(q, r)` with exact rational endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "(String, String)", into = "(String, String)")]
pub struct RatInterval {
    q: Rational64,
    r: Rational64,
}

impl RatInterval {
    pub fn new(q: Rational64, r: Rational64) -> Result<Self, DaseinError> {
        if q >= r {
            return Err(DaseinError::EmptyInterval(q.to_string(), r.to_string()));
        }
        Ok(Self { q, r })
    }

    /// From `"p/q"` or integer strings.
    pub fn parse(q: &str, r: &str) -> Result<Self, DaseinError> {
        Self::new(parse_rational(q)?, parse_rational(r)?)
    }

    pub fn q(&self) -> Rational64 {
        self.q
    }

    pub fn r(&self) -> Rational64 {
        self.r
    }

    pub fn q_f64(&self) -> f64 {
        self.q.to_f64().expect("finite")
    }

    pub fn r_f64(&self) -> f64 {
        self.r.to_f64().expect("finite")
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.q <= other.q && other.r <= self.r
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.q, self.r)
    }
}

impl TryFrom<(String, String)> for RatInterval {
    type Error = DaseinError;
    fn try_from((q, r): (String, String)) -> Result<Self, Self::Error> {
        Self::parse(&q, &r)
    }
}

impl From<RatInterval> for (String, String) {
    fn from(iv: RatInterval) -> Self {
        (iv.q.to_string(), iv.r.to_string())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational64, DaseinError> {
    let t = s.trim();
    Rational64::from_str(t).map_err(|_| DaseinError::Parse(s.to_string()))
}

/// Atoms `p` of `c` with `λ_min(p a p |ran p) > q + tol`.
pub fn inner_support_mask(a: &HermObs, q: f64, c: &Context, tol: f64) -> Result<u64, DaseinError> {
    if a.algebra() != c.algebra() {
        return Err(CstarError::IncompatibleAlgebras.into());
    }
    let mut m = 0;
    for i in 0..c.len() {
        let (lo, _) = eig_range(&a.compress(c.basis(i)));
        if lo > q + tol {
            m |= 1 << i;
        }
    }
    Ok(m)
}

/// Atoms `p` of `c` with `λ_max(p a p |ran p) < r − tol`.
pub fn outer_support_mask(a: &HermObs, r: f64, c: &Context, tol: f64) -> Result<u64, DaseinError> {
    if a.algebra() != c.algebra() {
        return Err(CstarError::IncompatibleAlgebras.into());
    }
    let mut m = 0;
    for i in 0..c.len() {
        let (_, hi) = eig_range(&a.compress(c.basis(i)));
        if hi < r - tol {
            m |= 1 << i;
        }
    }
    Ok(m)
}

/// `⋁{[f − q > 0] | f ∈ C_sa, f ≤ a}`
pub fn inner_support(a: &HermObs, q: f64, c: &Context) -> Result<Projection, DaseinError> {
    Ok(c.proj_of_mask(inner_support_mask(a, q, c, tol::EIG)?))
}

/// `⋁{[r − g > 0] | g ∈ C_sa, a ≤ g}`
pub fn outer_support(a: &HermObs, r: f64, c: &Context) -> Result<Projection, DaseinError> {
    Ok(c.proj_of_mask(outer_support_mask(a, r, c, tol::EIG)?))
}

/// `C ↦ inner_support(a, q, C) ∧ outer_support(a, r, C)`
pub fn dasein_open(a: &HermObs, iv: &RatInterval, poset: &Arc<ContextPoset>) -> Result<BohrOpen, DaseinError> {
    dasein_open_tol(a, iv, poset, tol::EIG)
}

pub fn dasein_open_tol(
    a: &HermObs,
    iv: &RatInterval,
    poset: &Arc<ContextPoset>,
    tol: f64,
) -> Result<BohrOpen, DaseinError> {
    let (q, r) = (iv.q_f64(), iv.r_f64());
    let values = poset
        .contexts()
        .iter()
        .map(|c| Ok(inner_support_mask(a, q, c, tol)? & outer_support_mask(a, r, c, tol)?))
        .collect::<Result<Vec<u64>, DaseinError>>()?;
    Ok(BohrOpen::new(poset.clone(), values)?)
}

/// `lo, lo + step, …` up to `hi`.
pub fn rational_grid(lo: f64, hi: f64, step: Rational64) -> Vec<Rational64> {
    let s = step.to_f64().expect("finite step");
    let start = (lo / s).floor() as i64;
    let end = (hi / s).ceil() as i64;
    (start..=end).map(|k| step * Rational64::from_integer(k)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderReport {
    /// `b − a` is positive semidefinite.
    pub a_leq_b: bool,
    /// Failures of the support inequalities implied by `a ≤ b`.
    pub violations: Vec<String>,
    /// Supports agree at `C*(a)` and `C*(b)` on every grid point.
    pub supports_coincide: bool,
    /// Largest eigenvalue modulus of `a − b`.
    pub distance: f64,
    pub resolution: f64,
}

impl OrderReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && (!self.supports_coincide || self.distance < self.resolution)
    }
}

/// Finite checks of "`a ≤ b` iff their daseinisations are ordered": the
/// forward direction on every stored context and grid point, and the
/// injectivity consequence at the generated contexts.
pub fn dasein_order_check(
    a: &HermObs,
    b: &HermObs,
    poset: &ContextPoset,
    step: Rational64,
) -> Result<OrderReport, DaseinError> {
    let ca = poset.find(&context_from_obs(a)).ok_or_else(|| DaseinError::MissingGeneratedContext("a".into()))?;
    let cb = poset.find(&context_from_obs(b)).ok_or_else(|| DaseinError::MissingGeneratedContext("b".into()))?;
    let diff = b.sub(a)?;
    let (dlo, dhi) = eig_range(diff.matrix());
    let a_leq_b = dlo >= -tol::EIG;
    let (alo, ahi) = eig_range(a.matrix());
    let (blo, bhi) = eig_range(b.matrix());
    let grid = rational_grid(alo.min(blo) - 1.0, ahi.max(bhi) + 1.0, step);
    let t = tol::EIG;
    let mut violations = Vec::new();
    if a_leq_b {
        for (i, c) in poset.contexts().iter().enumerate() {
            for x in &grid {
                let xf = x.to_f64().expect("finite");
                let (ia, ib) = (inner_support_mask(a, xf, c, t)?, inner_support_mask(b, xf, c, t)?);
                if ia & !ib != 0 {
                    violations.push(format!("inner support at {} and q = {x}", poset.label(i)));
                }
                let (oa, ob) = (outer_support_mask(a, xf, c, t)?, outer_support_mask(b, xf, c, t)?);
                if ob & !oa != 0 {
                    violations.push(format!("outer support at {} and r = {x}", poset.label(i)));
                }
            }
        }
    }
    let mut supports_coincide = true;
    'outer: for &i in &[ca, cb] {
        let c = poset.context(i);
        for x in &grid {
            let xf = x.to_f64().expect("finite");
            if inner_support_mask(a, xf, c, t)? != inner_support_mask(b, xf, c, t)?
                || outer_support_mask(a, xf, c, t)? != outer_support_mask(b, xf, c, t)?
            {
                supports_coincide = false;
                break 'outer;
            }
        }
    }
    Ok(OrderReport {
        a_leq_b,
        violations,
        supports_coincide,
        distance: dlo.abs().max(dhi.abs()),
        resolution: step.to_f64().expect("finite") * 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bohr::BohrFrame;
    use crate::cstar::{context_poset, pauli_context, pauli_z, Closure, MatrixAlg};

    fn sz() -> HermObs {
        HermObs::new(MatrixAlg::full(2), pauli_z()).unwrap()
    }

    fn zx() -> Arc<ContextPoset> {
        Arc::new(context_poset(vec![pauli_context('z'), pauli_context('x')], Closure::Meets).unwrap())
    }

    #[test]
    fn sigma_z_supports() {
        let cz = pauli_context('z');
        let triv = Context::trivial(&MatrixAlg::full(2));
        assert_eq!(inner_support_mask(&sz(), 0.5, &cz, tol::EIG).unwrap(), 0b01);
        assert_eq!(inner_support_mask(&sz(), 0.5, &triv, tol::EIG).unwrap(), 0);
        assert_eq!(outer_support_mask(&sz(), 1.5, &cz, tol::EIG).unwrap(), 0b11);
        assert_eq!(outer_support_mask(&sz(), 0.5, &cz, tol::EIG).unwrap(), 0b10);
    }

    #[test]
    fn worked_example() {
        let p = zx();
        let iv = RatInterval::parse("1/2", "3/2").unwrap();
        let g = dasein_open(&sz(), &iv, &p).unwrap();
        assert_eq!(g.values(), &[0, 0b01, 0]);
    }

    #[test]
    fn scalars() {
        let p = zx();
        let f = BohrFrame::new((*p).clone());
        let a = HermObs::scalar(MatrixAlg::full(2), 1.0);
        let inside = dasein_open(&a, &RatInterval::parse("1/2", "2").unwrap(), &p).unwrap();
        assert_eq!(inside.values(), f.top().values());
        let below = dasein_open(&a, &RatInterval::parse("-2", "1/2").unwrap(), &p).unwrap();
        assert_eq!(below.values(), f.bottom().values());
    }

    #[test]
    fn parse_and_reject() {
        assert!(matches!(RatInterval::parse("1", "1"), Err(DaseinError::EmptyInterval(..))));
        assert!(matches!(RatInterval::parse("x", "1"), Err(DaseinError::Parse(_))));
        let iv = RatInterval::parse("-3/6", "2").unwrap();
        assert_eq!(iv.q(), Rational64::new(-1, 2));
        assert_eq!(serde_json::to_string(&iv).unwrap(), r#"["-1/2","2"]"#);
    }

    #[test]
    fn order_check_on_shift() {
        let a = sz();
        let b = a.shift(-1.0);
        let p = context_poset(vec![pauli_context('z'), pauli_context('x')], Closure::Meets).unwrap();
        let rep = dasein_order_check(&a, &b, &p, Rational64::new(1, 16)).unwrap();
        assert!(rep.a_leq_b && rep.passed() && !rep.supports_coincide);
        let same = dasein_order_check(&a, &a, &p, Rational64::new(1, 16)).unwrap();
        assert!(same.supports_coincide && same.passed());
        let missing = context_poset(vec![pauli_context('x')], Closure::Meets).unwrap();
        assert!(matches!(
            dasein_order_check(&a, &a, &missing, Rational64::new(1, 16)),
            Err(DaseinError::MissingGeneratedContext(_))
        ));
    }
}
