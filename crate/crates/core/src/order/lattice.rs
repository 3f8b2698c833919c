use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use super::frame::FrameElems;
use super::poset::{numbered, set_from, FinPoset, PosetJson};
use super::OrderError;

/// A finite lattice with materialized meet and join tables.
#[derive(Debug)]
pub struct FinLattice {
    poset: FinPoset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bot: usize,
    top: usize,
    distributivity: OnceLock<Option<(usize, usize, usize)>>,
}

impl Clone for FinLattice {
    fn clone(&self) -> Self {
        Self {
            poset: self.poset.clone(),
            meet: self.meet.clone(),
            join: self.join.clone(),
            bot: self.bot,
            top: self.top,
            distributivity: self.distributivity.clone(),
        }
    }
}

impl PartialEq for FinLattice {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset
    }
}

impl FinLattice {
    /// Computes meets and joins from the order; fails if some pair lacks one.
    pub fn from_poset(poset: FinPoset) -> Result<Self, OrderError> {
        let n = poset.len();
        if n == 0 {
            return Err(OrderError::Shape("a lattice needs at least one element".into()));
        }
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let mut lower = poset.down_set(x).clone();
                lower.intersect_with(poset.down_set(y));
                let glb = lower
                    .ones()
                    .find(|&c| lower.is_subset(poset.down_set(c)))
                    .ok_or(OrderError::NoMeet(x, y))?;
                let mut upper = poset.up_set(x).clone();
                upper.intersect_with(poset.up_set(y));
                let lub = upper
                    .ones()
                    .find(|&c| upper.is_subset(poset.up_set(c)))
                    .ok_or(OrderError::NoJoin(x, y))?;
                meet[x * n + y] = glb;
                meet[y * n + x] = glb;
                join[x * n + y] = lub;
                join[y * n + x] = lub;
            }
        }
        let bot = (0..n).find(|&b| poset.up_set(b).count_ones(..) == n).ok_or(OrderError::NoMeet(0, 0))?;
        let top = (0..n).find(|&t| poset.down_set(t).count_ones(..) == n).ok_or(OrderError::NoJoin(0, 0))?;
        Ok(Self { poset, meet, join, bot, top, distributivity: OnceLock::new() })
    }

    pub fn chain(n: usize) -> Self {
        Self::from_poset(FinPoset::chain(n)).expect("chains are lattices")
    }

    /// The diamond `M3`: bottom, three pairwise incomparable atoms, top.
    pub fn diamond() -> Self {
        let labels = ["0", "x", "y", "z", "1"].map(String::from).to_vec();
        let p = FinPoset::generated_by(labels, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        Self::from_poset(p).unwrap()
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bot, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// First triple violating `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`, if any.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        *self.distributivity.get_or_init(|| {
            let n = self.len();
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let lhs = self.meet(x, self.join(y, z));
                        let rhs = self.join(self.meet(x, y), self.meet(x, z));
                        if lhs != rhs {
                            return Some((x, y, z));
                        }
                    }
                }
            }
            None
        })
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    /// `y ⟹ z = ⋁{x | x ∧ y ≤ z}`, defined only on distributive lattices.
    pub fn heyting_implies(&self, y: usize, z: usize) -> Result<usize, OrderError> {
        if let Some(w) = self.distributivity_witness() {
            return Err(OrderError::NotDistributive(w.0, w.1, w.2));
        }
        Ok(self.join_all((0..self.len()).filter(|&x| self.leq(self.meet(x, y), z))))
    }

    pub fn heyting_not(&self, y: usize) -> Result<usize, OrderError> {
        self.heyting_implies(y, self.bot)
    }

    /// `x ≪ y`: some `z` has `z ∧ x = 0` and `z ∨ y = 1`.
    pub fn well_inside(&self, x: usize, y: usize) -> bool {
        (0..self.len()).any(|z| self.meet(z, x) == self.bot && self.join(z, y) == self.top)
    }

    /// Nonempty downsets closed under binary joins. In a finite lattice these
    /// are exactly the principal ideals, returned in element order.
    pub fn ideals(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut out: Vec<FixedBitSet> = Vec::new();
        // every ideal I equals ↓(⋁I); check closure to stay honest
        for x in 0..n {
            let d = self.poset.down_set(x).clone();
            debug_assert!(d.ones().all(|a| d.ones().all(|b| d.contains(self.join(a, b)))));
            out.push(d);
        }
        out
    }

    /// The lattice of ideals ordered by inclusion.
    pub fn ideal_lattice(&self) -> FinLattice {
        let ideals = self.ideals();
        let labels = (0..ideals.len()).map(|i| format!("↓{}", self.poset.label(i))).collect();
        let p = FinPoset::from_fn(labels, |a, b| ideals[a].is_subset(&ideals[b])).expect("inclusion order");
        FinLattice::from_poset(p).expect("ideals of a finite lattice form a lattice")
    }

    /// Ideals `I` such that `x ∈ I` whenever every `y ≪ x` lies in `I`.
    pub fn regular_ideals(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        self.ideals()
            .into_iter()
            .filter(|ideal| {
                (0..n).all(|x| {
                    let approximated = (0..n).filter(|&y| self.well_inside(y, x)).all(|y| ideal.contains(y));
                    !approximated || ideal.contains(x)
                })
            })
            .collect()
    }

    /// Whether `(⋁s) ∧ x = ⋁{m ∧ x | m ∈ s}` for every `x`.
    pub fn is_distributive_subset(&self, s: &FixedBitSet) -> bool {
        let sup = self.join_all(s.ones());
        (0..self.len()).all(|x| self.meet(sup, x) == self.join_all(s.ones().map(|m| self.meet(m, x))))
    }

    /// The Bruns–Lakser completion: downsets closed under every distributive
    /// join (including the empty one, so each contains the bottom).
    pub fn distributive_ideals(&self, cap: usize) -> Result<FrameElems, OrderError> {
        let downsets = self.poset.down_sets(cap)?;
        // S ⊆ D has a distributive join iff ↓S does, with the same join,
        // so it suffices to range over distributive downsets.
        let generators: Vec<(FixedBitSet, usize)> = downsets
            .iter()
            .filter(|s| self.is_distributive_subset(s))
            .map(|s| (s.clone(), self.join_all(s.ones())))
            .collect();
        let carrier: Vec<FixedBitSet> = downsets
            .into_iter()
            .filter(|d| generators.iter().all(|(s, j)| !s.is_subset(d) || d.contains(*j)))
            .collect();
        Ok(FrameElems::new(self.len(), carrier))
    }

    pub fn to_json(&self) -> PosetJson {
        self.poset.to_json()
    }

    pub fn from_json(json: &PosetJson) -> Result<Self, OrderError> {
        Self::from_poset(FinPoset::from_json(json)?)
    }

    /// Relabelled copy with labels `0..n`; mostly for tests.
    pub fn anonymous(&self) -> Self {
        let p = FinPoset::from_fn(numbered(self.len()), |a, b| self.leq(a, b)).unwrap();
        Self::from_poset(p).unwrap()
    }

    /// `↓{items}` as a bitset.
    pub fn down_of(&self, items: impl IntoIterator<Item = usize>) -> FixedBitSet {
        self.poset.down_closure(&set_from(self.len(), items))
    }
}
