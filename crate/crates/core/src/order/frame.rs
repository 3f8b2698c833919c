use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::lattice::FinLattice;
use super::poset::FinPoset;
use super::OrderError;

/// A finite frame realized as a family of subsets of a base set, ordered by
/// inclusion and closed under intersections.
///
/// Meets are intersections; the join of two members is the least member
/// containing their union. The carrier is kept sorted by size and then by
/// contents, which fixes a deterministic element order.
#[derive(Clone, Debug)]
pub struct FrameElems {
    base_size: usize,
    carrier: Vec<FixedBitSet>,
    index: HashMap<FixedBitSet, usize>,
}

impl FrameElems {
    pub fn new(base_size: usize, mut carrier: Vec<FixedBitSet>) -> Self {
        carrier.sort_by(|a, b| a.count_ones(..).cmp(&b.count_ones(..)).then_with(|| a.ones().cmp(b.ones())));
        carrier.dedup();
        let index = carrier.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { base_size, carrier, index }
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn elements(&self) -> &[FixedBitSet] {
        &self.carrier
    }

    pub fn get(&self, i: usize) -> &FixedBitSet {
        &self.carrier[i]
    }

    pub fn index_of(&self, s: &FixedBitSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.carrier[i].is_subset(&self.carrier[j])
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.carrier.len() - 1
    }

    /// Least member containing `s`.
    pub fn hull(&self, s: &FixedBitSet) -> Option<usize> {
        let mut acc: Option<FixedBitSet> = None;
        for w in self.carrier.iter().filter(|w| s.is_subset(w)) {
            match acc.as_mut() {
                None => acc = Some(w.clone()),
                Some(a) => a.intersect_with(w),
            }
        }
        acc.and_then(|a| self.index_of(&a))
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let mut s = self.carrier[i].clone();
        s.intersect_with(&self.carrier[j]);
        self.index_of(&s).expect("carrier closed under intersection")
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        let mut s = self.carrier[i].clone();
        s.union_with(&self.carrier[j]);
        self.hull(&s).expect("carrier has a top")
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        let mut s = FixedBitSet::with_capacity(self.base_size);
        for i in items {
            s.union_with(&self.carrier[i]);
        }
        self.hull(&s).expect("carrier has a top")
    }

    /// Relative pseudocomplement: the largest member `w` with `w ∧ y ≤ z`.
    pub fn implies(&self, y: usize, z: usize) -> usize {
        let cands = (0..self.len()).filter(|&w| self.leq(self.meet(w, y), z));
        self.join_all(cands)
    }

    /// Checks closure under intersections and that a top and bottom exist.
    pub fn check_closure_system(&self) -> Result<(), OrderError> {
        if self.carrier.is_empty() {
            return Err(OrderError::Shape("empty carrier".into()));
        }
        for i in 0..self.len() {
            for j in 0..self.len() {
                let mut s = self.carrier[i].clone();
                s.intersect_with(&self.carrier[j]);
                if self.index_of(&s).is_none() {
                    return Err(OrderError::Shape(format!("members {i} and {j} meet outside the carrier")));
                }
            }
        }
        let top = &self.carrier[self.top()];
        if !self.carrier.iter().all(|s| s.is_subset(top)) {
            return Err(OrderError::Shape("no greatest member".into()));
        }
        Ok(())
    }

    /// Materializes meet and join tables.
    pub fn to_lattice(&self) -> FinLattice {
        let labels = self
            .carrier
            .iter()
            .map(|s| format!("{{{}}}", s.ones().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let p = FinPoset::from_fn(labels, |i, j| self.leq(i, j)).expect("inclusion order");
        FinLattice::from_poset(p).expect("a closure system is a complete lattice")
    }
}

/// The Alexandrov frame of `p`: all upper sets, ordered by inclusion.
pub fn alx_opens(p: &FinPoset, cap: usize) -> Result<FrameElems, OrderError> {
    Ok(FrameElems::new(p.len(), p.up_sets(cap)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::BoolAlg;

    #[test]
    fn alexandrov_counts() {
        assert_eq!(alx_opens(&FinPoset::chain(2), 100).unwrap().len(), 3);
        assert_eq!(alx_opens(&FinPoset::antichain(2), 100).unwrap().len(), 4);
        // {0 below a,b,c,d}
        let p = FinPoset::generated_by(
            ["0", "a", "b", "c", "d"].map(String::from).to_vec(),
            &[(0, 1), (0, 2), (0, 3), (0, 4)],
        )
        .unwrap();
        let f = alx_opens(&p, 100).unwrap();
        assert_eq!(f.len(), 17);
        assert!(f.to_lattice().is_distributive());
    }

    #[test]
    fn frame_implication_matches_lattice_implication() {
        let p = FinPoset::generated_by(
            ["0", "a", "b", "c", "d"].map(String::from).to_vec(),
            &[(0, 1), (0, 2), (0, 3), (0, 4)],
        )
        .unwrap();
        let f = alx_opens(&p, 100).unwrap();
        let l = f.to_lattice();
        for y in 0..f.len() {
            for z in 0..f.len() {
                assert_eq!(f.implies(y, z), l.heyting_implies(y, z).unwrap());
            }
        }
    }

    #[test]
    fn boolean_downsets_frame() {
        let b = BoolAlg::new(2).to_lattice();
        let f = FrameElems::new(4, b.poset().down_sets(100).unwrap());
        f.check_closure_system().unwrap();
        assert_eq!(f.len(), 6);
    }
}
