use super::{BlockFamily, OmlError};
use crate::order::{mask_label, BoolFamily, OrderError, Section};

pub const DEFAULT_SECTION_CAP: u128 = 1 << 22;

/// The Heyting algebra of monotone sections of a block family.
#[derive(Clone, Debug)]
pub struct MonoHeyting {
    blocks: BlockFamily,
}

pub fn mono_heyting(b: &BlockFamily) -> MonoHeyting {
    MonoHeyting { blocks: b.clone() }
}

/// `(g ⟹ k)(i) = ⋁{x ∈ B_i | ∀ j ≥ i. x ≤ g(j) ⟹ k(j)}`
pub fn mono_implies(h: &MonoHeyting, g: &[u64], k: &[u64]) -> Section {
    h.family().implies(g, k)
}

/// The canonical injection: `D(x)(i) = x` if `x ∈ B_i`, else `0`.
pub fn inject(b: &BlockFamily, x: usize) -> Section {
    (0..b.len()).map(|i| b.mask_of(i, x).unwrap_or(0)).collect()
}

impl MonoHeyting {
    pub fn blocks(&self) -> &BlockFamily {
        &self.blocks
    }

    pub fn family(&self) -> &BoolFamily {
        self.blocks.family()
    }

    pub fn top(&self) -> Section {
        self.family().top()
    }

    pub fn bottom(&self) -> Section {
        self.family().bottom()
    }

    pub fn contains(&self, s: &[u64]) -> bool {
        self.family().is_section(s)
    }

    pub fn leq(&self, s: &[u64], t: &[u64]) -> bool {
        self.family().leq(s, t)
    }

    pub fn meet(&self, s: &[u64], t: &[u64]) -> Section {
        self.family().meet(s, t)
    }

    pub fn join(&self, s: &[u64], t: &[u64]) -> Section {
        self.family().join(s, t)
    }

    pub fn implies(&self, g: &[u64], k: &[u64]) -> Section {
        mono_implies(self, g, k)
    }

    pub fn not(&self, g: &[u64]) -> Section {
        self.family().not(g)
    }

    pub fn inject(&self, x: usize) -> Section {
        inject(&self.blocks, x)
    }

    pub fn count(&self, cap: u128) -> Result<u128, OmlError> {
        self.family().count(cap).map_err(|e| self.cap_error(e, cap))
    }

    pub fn enumerate(&self, cap: u128) -> Result<Vec<Section>, OmlError> {
        self.family().enumerate(cap).map_err(|e| self.cap_error(e, cap))
    }

    fn cap_error(&self, e: OrderError, cap: u128) -> OmlError {
        match e {
            OrderError::CapExceeded { .. } => OmlError::CapExceeded {
                count_desc: "monotone sections".into(),
                cap,
                log2_lower: self.family().log2_lower_bound(),
                log2_upper: self.family().log2_upper_bound(),
            },
            other => OmlError::Order(other),
        }
    }

    /// Section values rendered with amalgam element names.
    pub fn describe(&self, s: &[u64]) -> Vec<(String, String)> {
        let idx = self.blocks.index();
        s.iter()
            .enumerate()
            .map(|(i, &m)| {
                let e = self.blocks.element(i, m);
                let name = self.blocks.labels().get(e).cloned().unwrap_or_else(|| mask_label(m));
                (idx.label(i).to_string(), name)
            })
            .collect()
    }
}
