//! The Bohrified state space of a finite context family: monotone maps
//! `G` with `G(C) ∈ Proj(C)`, ordered pointwise.
//!
//! Every quantifier over contexts ranges over the stored family only, so the
//! frame computed here is that of the truncated context poset.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::cstar::{ContextPoset, Projection};
use crate::order::{mask_label, FinLattice, FinPoset, OrderError, Section};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BohrError {
    #[error("opens belong to different context posets")]
    PosetMismatch,
    #[error("more than {cap} opens; log2 of the count lies in [{log2_lower}, {log2_upper}]")]
    CapExceeded { cap: u128, log2_lower: f64, log2_upper: f64 },
    #[error("context {0} is not in the poset")]
    NotInPoset(String),
    #[error("values do not form an open: {0}")]
    NotAnOpen(String),
}

/// An element of the Bohrified frame: one atom mask per context.
#[derive(Clone)]
pub struct BohrOpen {
    poset: Arc<ContextPoset>,
    values: Section,
}

impl PartialEq for BohrOpen {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.poset, &other.poset) && self.values == other.values
    }
}

impl Eq for BohrOpen {}

impl fmt::Debug for BohrOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, &v) in self.values.iter().enumerate() {
            m.entry(&self.poset.label(i), &mask_label(v));
        }
        m.finish()
    }
}

impl BohrOpen {
    /// Validates the values: each a mask of its context, monotone along refinement.
    pub fn new(poset: Arc<ContextPoset>, values: Section) -> Result<Self, BohrError> {
        if values.len() != poset.len() {
            return Err(BohrError::NotAnOpen(format!("{} values for {} contexts", values.len(), poset.len())));
        }
        if !poset.family().is_section(&values) {
            return Err(BohrError::NotAnOpen("not monotone, or a value outside its context".into()));
        }
        Ok(Self { poset, values })
    }

    fn raw(poset: &Arc<ContextPoset>, values: Section) -> Self {
        debug_assert!(poset.family().is_section(&values));
        Self { poset: poset.clone(), values }
    }

    pub fn poset(&self) -> &Arc<ContextPoset> {
        &self.poset
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> u64 {
        self.values[i]
    }

    pub fn projection(&self, i: usize) -> Projection {
        self.poset.projection(i, self.values[i])
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.poset.family().leq(&self.values, &other.values)
    }

    /// Contexts where the value is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] != 0).collect()
    }
}

fn same(g: &BohrOpen, h: &BohrOpen) -> Result<(), BohrError> {
    if Arc::ptr_eq(&g.poset, &h.poset) {
        Ok(())
    } else {
        Err(BohrError::PosetMismatch)
    }
}

pub fn bohr_meet(g: &BohrOpen, h: &BohrOpen) -> Result<BohrOpen, BohrError> {
    same(g, h)?;
    Ok(BohrOpen::raw(&g.poset, g.poset.family().meet(&g.values, &h.values)))
}

pub fn bohr_join(g: &BohrOpen, h: &BohrOpen) -> Result<BohrOpen, BohrError> {
    same(g, h)?;
    Ok(BohrOpen::raw(&g.poset, g.poset.family().join(&g.values, &h.values)))
}

/// `(g ⟹ h)(C) = ⋁{p ∈ Proj(C) | ∀ D ≥ C. p ≤ ¬g(D) ∨ h(D)}`
pub fn bohr_implies(g: &BohrOpen, h: &BohrOpen) -> Result<BohrOpen, BohrError> {
    same(g, h)?;
    Ok(BohrOpen::raw(&g.poset, g.poset.family().implies(&g.values, &h.values)))
}

pub fn bohr_not(g: &BohrOpen) -> BohrOpen {
    BohrOpen::raw(&g.poset, g.poset.family().not(&g.values))
}

/// `C ↦ p` where `p ∈ Proj(C)`, and `0` elsewhere.
pub fn inject_proj(p: &Projection, poset: &Arc<ContextPoset>) -> BohrOpen {
    let values = poset.contexts().iter().map(|c| c.mask_of_proj(p).unwrap_or(0)).collect();
    BohrOpen::raw(poset, values)
}

/// The open that is the top of `Proj(E)` for `E ⊇ D` and `0` elsewhere: the
/// image of the basic Alexandrov open `↑D`.
pub fn external_basic_open(poset: &Arc<ContextPoset>, d: usize) -> Result<BohrOpen, BohrError> {
    if d >= poset.len() {
        return Err(BohrError::NotInPoset(d.to_string()));
    }
    external_open(poset, poset.order().up_set(d))
}

/// The image of an Alexandrov open (an upper set of contexts).
pub fn external_open(poset: &Arc<ContextPoset>, upset: &FixedBitSet) -> Result<BohrOpen, BohrError> {
    if !poset.order().is_up_set(upset) {
        return Err(BohrError::NotAnOpen("context set is not an upper set".into()));
    }
    let values = (0..poset.len()).map(|i| if upset.contains(i) { poset.context(i).full_mask() } else { 0 }).collect();
    Ok(BohrOpen::raw(poset, values))
}

/// The frame of all opens over a context poset.
#[derive(Clone, Debug)]
pub struct BohrFrame {
    poset: Arc<ContextPoset>,
}

/// Outcome of [`BohrFrame::is_boolean`].
#[derive(Clone, Debug)]
pub struct BooleanCheck {
    pub boolean: bool,
    /// An open with `¬¬g ≠ g`, when one exists.
    pub witness: Option<BohrOpen>,
    pub distributive: bool,
    pub elements: u128,
}

pub fn bohr_frame(poset: Arc<ContextPoset>) -> BohrFrame {
    BohrFrame { poset }
}

impl BohrFrame {
    pub fn new(poset: ContextPoset) -> Self {
        Self { poset: Arc::new(poset) }
    }

    pub fn poset(&self) -> &Arc<ContextPoset> {
        &self.poset
    }

    pub fn top(&self) -> BohrOpen {
        BohrOpen::raw(&self.poset, self.poset.family().top())
    }

    pub fn bottom(&self) -> BohrOpen {
        BohrOpen::raw(&self.poset, self.poset.family().bottom())
    }

    pub fn open(&self, values: Section) -> Result<BohrOpen, BohrError> {
        BohrOpen::new(self.poset.clone(), values)
    }

    /// The open given by context label and atom list, other contexts `0`.
    pub fn open_from_atoms(&self, entries: &[(&str, &[usize])]) -> Result<BohrOpen, BohrError> {
        let mut values = vec![0u64; self.poset.len()];
        for (label, atoms) in entries {
            let i = self.poset.index_of(label).ok_or_else(|| BohrError::NotInPoset(label.to_string()))?;
            for &a in *atoms {
                if a >= self.poset.context(i).len() {
                    return Err(BohrError::NotAnOpen(format!("context {label} has no atom {a}")));
                }
                values[i] |= 1 << a;
            }
        }
        self.open(values)
    }

    fn cap_error(&self, e: OrderError, cap: u128) -> BohrError {
        match e {
            OrderError::CapExceeded { .. } => BohrError::CapExceeded {
                cap,
                log2_lower: self.poset.family().log2_lower_bound(),
                log2_upper: self.poset.family().log2_upper_bound(),
            },
            other => BohrError::NotAnOpen(other.to_string()),
        }
    }

    pub fn count(&self, cap: u128) -> Result<u128, BohrError> {
        self.poset.family().count(cap).map_err(|e| self.cap_error(e, cap))
    }

    pub fn enumerate(&self, cap: u128) -> Result<Vec<BohrOpen>, BohrError> {
        let all = self.poset.family().enumerate(cap).map_err(|e| self.cap_error(e, cap))?;
        Ok(all.into_iter().map(|v| BohrOpen::raw(&self.poset, v)).collect())
    }

    /// Whether `¬¬g = g` for every open, with a witness otherwise, and an
    /// exhaustive distributivity check.
    pub fn is_boolean(&self, cap: u128) -> Result<BooleanCheck, BohrError> {
        let all = self.enumerate(cap)?;
        let witness = all.iter().find(|g| bohr_not(&bohr_not(g)) != **g).cloned();
        let fam = self.poset.family();
        let distributive = all.iter().all(|g| {
            all.iter().all(|h| {
                all.iter().all(|k| {
                    fam.meet(&g.values, &fam.join(&h.values, &k.values))
                        == fam.join(&fam.meet(&g.values, &h.values), &fam.meet(&g.values, &k.values))
                })
            })
        });
        Ok(BooleanCheck { boolean: witness.is_none(), witness, distributive, elements: all.len() as u128 })
    }

    /// Materializes the frame as a lattice, element `i` being the `i`-th
    /// enumerated open.
    pub fn to_lattice(&self, cap: u128) -> Result<(FinLattice, Vec<BohrOpen>), BohrError> {
        let all = self.enumerate(cap)?;
        let labels = (0..all.len()).map(|i| format!("G{i}")).collect();
        let p = FinPoset::from_fn(labels, |i, j| all[i].leq(&all[j])).map_err(|e| BohrError::NotAnOpen(e.to_string()))?;
        let l = FinLattice::from_poset(p).map_err(|e| BohrError::NotAnOpen(e.to_string()))?;
        Ok((l, all))
    }
}

/// `is_boolean_frame(f)` with the default cap.
pub fn is_boolean_frame(f: &BohrFrame) -> Result<BooleanCheck, BohrError> {
    f.is_boolean(crate::oml::DEFAULT_SECTION_CAP)
}
