//! Finite orthomodular lattices, their Boolean blocks, amalgamation of
//! partial Boolean algebras, the Sasaki hook, and the Heyting algebra of
//! monotone sections over a block family.

mod blocks;
mod fixtures;
mod heyting;

use serde::{Deserialize, Serialize};

use crate::order::{FinLattice, FinPoset, OrderError};

pub use blocks::{amalgamate, blocks, BlockFamily};
pub use fixtures::{example_x, example_x_family, horizontal_sum, oml_from_boolean};
pub use heyting::{inject, mono_heyting, mono_implies, MonoHeyting, DEFAULT_SECTION_CAP};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OmlError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("orthocomplement table has {got} entries for {expected} elements")]
    OrthoShape { expected: usize, got: usize },
    #[error("blocks disagree when glued: {0}")]
    GlueConflict(String),
    #[error("block {0} is not a Boolean subalgebra: {1}")]
    NotBoolean(usize, String),
    #[error("{count_desc} exceeds the cap of {cap}; log2 size lies in [{log2_lower}, {log2_upper}]")]
    CapExceeded { count_desc: String, cap: u128, log2_lower: f64, log2_upper: f64 },
    #[error("input failed orthomodular validation: {0}")]
    Invalid(String),
    #[error("unknown element {0}")]
    UnknownElement(String),
}

/// A finite orthocomplemented lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct Oml {
    lattice: FinLattice,
    ortho: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmlLaw {
    /// `x⊥⊥ = x`
    Involution,
    /// `x ≤ y ⟹ y⊥ ≤ x⊥`
    Antitone,
    /// `x ∧ x⊥ = 0`
    Contradiction,
    /// `x ∨ x⊥ = 1`
    ExcludedMiddle,
    /// `x ≤ y ⟹ x ∨ (x⊥ ∧ y) = y`
    Orthomodular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmlViolation {
    pub law: OmlLaw,
    pub x: usize,
    pub y: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct OmlReport {
    pub violations: Vec<OmlViolation>,
}

impl OmlReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Oml {
    /// Pairs a lattice with an orthocomplement table without checking the laws;
    /// see [`validate_oml`].
    pub fn new(lattice: FinLattice, ortho: Vec<usize>) -> Result<Self, OmlError> {
        if ortho.len() != lattice.len() || ortho.iter().any(|&k| k >= lattice.len()) {
            return Err(OmlError::OrthoShape { expected: lattice.len(), got: ortho.len() });
        }
        Ok(Self { lattice, ortho })
    }

    pub fn lattice(&self) -> &FinLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, x: usize) -> &str {
        self.lattice.poset().label(x)
    }

    pub fn element(&self, label: &str) -> Result<usize, OmlError> {
        self.lattice.poset().index_of(label).ok_or_else(|| OmlError::UnknownElement(label.into()))
    }

    #[inline]
    pub fn ortho(&self, x: usize) -> usize {
        self.ortho[x]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.lattice.leq(x, y)
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.lattice.meet(x, y)
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.lattice.join(x, y)
    }

    pub fn bot(&self) -> usize {
        self.lattice.bot()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    /// `x ⊥ y` iff `x ≤ y⊥`.
    pub fn orthogonal(&self, x: usize, y: usize) -> bool {
        self.leq(x, self.ortho(y))
    }

    /// `x ⇒ y = x⊥ ∨ (x ∧ y)`
    pub fn sasaki_hook(&self, x: usize, y: usize) -> usize {
        self.join(self.ortho(x), self.meet(x, y))
    }

    /// Elements covering the bottom.
    pub fn atoms(&self) -> Vec<usize> {
        let b = self.bot();
        (0..self.len())
            .filter(|&x| x != b && (0..self.len()).all(|z| z == b || z == x || !self.lattice.poset().lt(z, x)))
            .collect()
    }

    pub fn to_json(&self) -> OmlJson {
        let p = self.lattice.to_json();
        OmlJson { elements: p.elements, leq: p.leq, ortho: self.ortho.clone() }
    }

    pub fn from_json(json: &OmlJson) -> Result<Self, OmlError> {
        let pairs: Vec<(usize, usize)> = json.leq.iter().map(|p| (p[0], p[1])).collect();
        let poset = FinPoset::generated_by(json.elements.clone(), &pairs)?;
        Self::new(FinLattice::from_poset(poset)?, json.ortho.clone())
    }
}

/// `{"elements":[...], "leq":[[i,j]...], "ortho":[k_i...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmlJson {
    pub elements: Vec<String>,
    pub leq: Vec<[usize; 2]>,
    pub ortho: Vec<usize>,
}

/// Exhaustive check of the orthocomplement and orthomodular laws.
pub fn validate_oml(o: &Oml) -> OmlReport {
    let n = o.len();
    let mut violations = Vec::new();
    for x in 0..n {
        let xp = o.ortho(x);
        if o.ortho(xp) != x {
            violations.push(OmlViolation { law: OmlLaw::Involution, x, y: None });
        }
        if o.meet(x, xp) != o.bot() {
            violations.push(OmlViolation { law: OmlLaw::Contradiction, x, y: None });
        }
        if o.join(x, xp) != o.top() {
            violations.push(OmlViolation { law: OmlLaw::ExcludedMiddle, x, y: None });
        }
        for y in 0..n {
            if !o.leq(x, y) {
                continue;
            }
            if !o.leq(o.ortho(y), xp) {
                violations.push(OmlViolation { law: OmlLaw::Antitone, x, y: Some(y) });
            }
            if o.join(x, o.meet(xp, y)) != y {
                violations.push(OmlViolation { law: OmlLaw::Orthomodular, x, y: Some(y) });
            }
        }
    }
    OmlReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::BoolAlg;

    #[test]
    fn boolean_algebras_are_orthomodular() {
        for k in 0..=4 {
            assert!(validate_oml(&oml_from_boolean(BoolAlg::new(k))).passed());
        }
    }

    #[test]
    fn example_x_is_orthomodular() {
        let x = example_x();
        assert_eq!(x.len(), 10);
        assert!(validate_oml(&x).passed());
    }

    #[test]
    fn diamond_with_bad_ortho_fails() {
        // M3 with x ↦ y ↦ z ↦ x is not involutive
        let m3 = FinLattice::diamond();
        let o = Oml::new(m3, vec![4, 2, 3, 1, 0]).unwrap();
        let r = validate_oml(&o);
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.law == OmlLaw::Involution && v.x == 1));
    }

    #[test]
    fn benzene_hexagon_is_not_orthomodular() {
        // 0 < a < b⊥ < 1, 0 < b < a⊥ < 1 with a ↔ a⊥, b ↔ b⊥
        let labels = ["0", "a", "B", "b", "A", "1"].map(String::from).to_vec();
        let p = FinPoset::generated_by(labels, &[(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]).unwrap();
        let o = Oml::new(FinLattice::from_poset(p).unwrap(), vec![5, 4, 3, 2, 1, 0]).unwrap();
        let r = validate_oml(&o);
        assert!(r.violations.iter().any(|v| v.law == OmlLaw::Orthomodular));
        assert!(!r.violations.iter().any(|v| v.law == OmlLaw::Involution));
    }

    #[test]
    fn sasaki_hook_examples() {
        let x = example_x();
        let (a, d) = (x.element("a").unwrap(), x.element("d").unwrap());
        for e in 0..x.len() {
            assert_eq!(x.sasaki_hook(e, e), x.top());
        }
        assert_eq!(x.meet(a, d), x.bot());
        assert_eq!(x.sasaki_hook(a, d), x.ortho(a));
        // inside a Boolean algebra it is classical implication
        let b = oml_from_boolean(BoolAlg::new(3));
        for p in 0..8 {
            for q in 0..8 {
                assert_eq!(b.sasaki_hook(p, q), (!p & 7) | q);
            }
        }
    }

    #[test]
    fn sasaki_adjunction_within_blocks() {
        let x = example_x();
        let fam = blocks(&x).unwrap();
        for i in 0..fam.len() {
            let els = fam.block_elements(i);
            for &p in &els {
                for &q in &els {
                    let h = x.sasaki_hook(p, q);
                    for &z in &els {
                        assert_eq!(x.leq(z, h), x.leq(x.meet(z, p), q));
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let x = example_x();
        let back = Oml::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
    }
}
