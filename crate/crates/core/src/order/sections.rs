//! Monotone sections of a poset-indexed family of finite Boolean algebras.
//!
//! Given an index poset `I` and Boolean algebras `B_i` with injective
//! homomorphisms `B_i → B_j` whenever `i ≤ j`, a section picks `f(i) ∈ B_i`
//! for every `i` such that `f(i) ≤ f(j)` after embedding. Sections ordered
//! pointwise form a finite Heyting algebra. Both the orthomodular block
//! construction and the Bohrified state space are instances.

use super::boolean::{full_mask, masks_between, BoolAlg};
use super::poset::FinPoset;
use super::OrderError;

/// One value per index, as an atom mask of that index's Boolean algebra.
pub type Section = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolFamily {
    index: FinPoset,
    atoms: Vec<usize>,
    /// `embed[i][j]`, for `i ≤ j`: image in `B_j` of each atom of `B_i`.
    embed: Vec<Vec<Option<Vec<u64>>>>,
    order: Vec<usize>,
}

impl BoolFamily {
    /// `atom_image(i, j, a)` gives the image in `B_j` of atom `a` of `B_i`;
    /// it is only consulted for `i ≤ j`.
    pub fn new(
        index: FinPoset,
        atoms: Vec<usize>,
        atom_image: impl Fn(usize, usize, usize) -> u64,
    ) -> Result<Self, OrderError> {
        let n = index.len();
        if atoms.len() != n {
            return Err(OrderError::Shape(format!("{} atom counts for {n} indices", atoms.len())));
        }
        if let Some(i) = atoms.iter().position(|&k| k == 0 || k > 64) {
            return Err(OrderError::Shape(format!("index {i}: block must have 1..=64 atoms")));
        }
        let mut embed = vec![vec![None; n]; n];
        for i in 0..n {
            for j in index.up_set(i).ones() {
                let imgs: Vec<u64> = (0..atoms[i]).map(|a| atom_image(i, j, a)).collect();
                let top_j = full_mask(atoms[j]);
                let mut union = 0u64;
                for (a, &m) in imgs.iter().enumerate() {
                    if m == 0 || m & !top_j != 0 || m & union != 0 {
                        return Err(OrderError::BadEmbedding { from: i, to: j, atom: a });
                    }
                    union |= m;
                }
                if union != top_j {
                    return Err(OrderError::BadEmbedding { from: i, to: j, atom: atoms[i] });
                }
                if i == j && imgs.iter().enumerate().any(|(a, &m)| m != 1 << a) {
                    return Err(OrderError::BadEmbedding { from: i, to: i, atom: 0 });
                }
                embed[i][j] = Some(imgs);
            }
        }
        let order = index.linear_extension();
        let fam = Self { index, atoms, embed, order };
        // embeddings must compose along i ≤ j ≤ k
        for i in 0..n {
            for j in fam.index.up_set(i).ones() {
                for k in fam.index.up_set(j).ones() {
                    for a in 0..fam.atoms[i] {
                        let direct = fam.embed(i, k, 1 << a);
                        let via = fam.embed(j, k, fam.embed(i, j, 1 << a));
                        if direct != via {
                            return Err(OrderError::NonCommutingEmbeddings(i, j, k));
                        }
                    }
                }
            }
        }
        Ok(fam)
    }

    pub fn index(&self) -> &FinPoset {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self, i: usize) -> usize {
        self.atoms[i]
    }

    pub fn block(&self, i: usize) -> BoolAlg {
        BoolAlg::new(self.atoms[i])
    }

    /// Image in `B_j` of `x ∈ B_i`; requires `i ≤ j`.
    #[inline]
    pub fn embed(&self, i: usize, j: usize, x: u64) -> u64 {
        let imgs = self.embed[i][j].as_ref().expect("embed requires i <= j");
        let mut out = 0;
        let mut rest = x;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            out |= imgs[a];
            rest &= rest - 1;
        }
        out
    }

    pub fn bottom(&self) -> Section {
        vec![0; self.len()]
    }

    pub fn top(&self) -> Section {
        self.atoms.iter().map(|&k| full_mask(k)).collect()
    }

    pub fn is_section(&self, s: &[u64]) -> bool {
        s.len() == self.len()
            && (0..self.len()).all(|i| s[i] & !full_mask(self.atoms[i]) == 0)
            && (0..self.len()).all(|i| {
                self.index.up_set(i).ones().all(|j| {
                    let e = self.embed(i, j, s[i]);
                    e & !s[j] == 0
                })
            })
    }

    pub fn leq(&self, s: &[u64], t: &[u64]) -> bool {
        s.iter().zip(t).all(|(a, b)| a & !b == 0)
    }

    pub fn meet(&self, s: &[u64], t: &[u64]) -> Section {
        s.iter().zip(t).map(|(a, b)| a & b).collect()
    }

    pub fn join(&self, s: &[u64], t: &[u64]) -> Section {
        s.iter().zip(t).map(|(a, b)| a | b).collect()
    }

    /// `(g ⟹ h)(i) = ⋁{x ∈ B_i | ∀ j ≥ i. x ≤ g(j) ⟹ h(j)}`.
    ///
    /// Since `B_i` is atomic, the join ranges over the atoms of `B_i` whose
    /// image lies below the classical implication at every `j ≥ i`.
    pub fn implies(&self, g: &[u64], h: &[u64]) -> Section {
        (0..self.len())
            .map(|i| {
                (0..self.atoms[i]).filter(|&a| {
                    self.index.up_set(i).ones().all(|j| {
                        let imp = self.block(j).implies(g[j], h[j]);
                        self.embed(i, j, 1 << a) & !imp == 0
                    })
                })
                .fold(0u64, |m, a| m | 1 << a)
            })
            .collect()
    }

    pub fn not(&self, g: &[u64]) -> Section {
        self.implies(g, &self.bottom())
    }

    /// `x` at every `j ≥ i` (embedded) and `0` elsewhere.
    pub fn principal(&self, i: usize, x: u64) -> Section {
        (0..self.len()).map(|j| if self.index.leq(i, j) { self.embed(i, j, x) } else { 0 }).collect()
    }

    /// `log2` of the product of block sizes, an upper bound on the carrier.
    pub fn log2_upper_bound(&self) -> f64 {
        self.atoms.iter().sum::<usize>() as f64
    }

    /// A certified lower bound on the carrier size, as `log2`: sections that
    /// vanish off the maximal indices are free there, so the product of the
    /// maximal blocks' sizes is attained.
    pub fn log2_lower_bound(&self) -> f64 {
        self.index.maximal_elements().iter().map(|&i| self.atoms[i]).sum::<usize>() as f64
    }

    /// Visits every section in lexicographic order along a linear extension.
    /// Fails once more than `cap` sections have been produced.
    pub fn for_each(&self, cap: u128, mut visit: impl FnMut(&[u64])) -> Result<u128, OrderError> {
        let mut cur = self.bottom();
        let mut count = 0u128;
        self.rec(0, &mut cur, &mut count, cap, &mut visit)?;
        Ok(count)
    }

    fn rec(
        &self,
        pos: usize,
        cur: &mut Section,
        count: &mut u128,
        cap: u128,
        visit: &mut impl FnMut(&[u64]),
    ) -> Result<(), OrderError> {
        if pos == self.order.len() {
            *count += 1;
            if *count > cap {
                return Err(OrderError::CapExceeded { cap: cap.min(usize::MAX as u128) as usize });
            }
            visit(cur);
            return Ok(());
        }
        let i = self.order[pos];
        let lower = self
            .index
            .down_set(i)
            .ones()
            .filter(|&k| k != i)
            .fold(0u64, |m, k| m | self.embed(k, i, cur[k]));
        for x in masks_between(lower, full_mask(self.atoms[i])) {
            cur[i] = x;
            self.rec(pos + 1, cur, count, cap, visit)?;
        }
        cur[i] = 0;
        Ok(())
    }

    pub fn count(&self, cap: u128) -> Result<u128, OrderError> {
        self.for_each(cap, |_| {})
    }

    pub fn enumerate(&self, cap: u128) -> Result<Vec<Section>, OrderError> {
        let mut out = Vec::new();
        self.for_each(cap, |s| out.push(s.to_vec()))?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_2_in_4() -> BoolFamily {
        // 2 ⊆ 4: one atom below, two above; the atom maps to both
        BoolFamily::new(FinPoset::chain(2), vec![1, 2], |i, j, a| if i == j { 1 << a } else { 0b11 }).unwrap()
    }

    #[test]
    fn two_in_four_has_five_sections() {
        let f = chain_2_in_4();
        let all = f.enumerate(1000).unwrap();
        assert_eq!(all.len(), 5);
        // f(0)=0 leaves 4 choices above, f(0)=1 forces the top
        assert!(all.iter().all(|s| f.is_section(s)));
    }

    #[test]
    fn rejects_bad_embeddings() {
        let bad = BoolFamily::new(FinPoset::chain(2), vec![1, 2], |i, j, a| if i == j { 1 << a } else { 0b01 });
        assert!(matches!(bad, Err(OrderError::BadEmbedding { .. })));
    }

    #[test]
    fn implication_adjunction_on_small_family() {
        let f = chain_2_in_4();
        let all = f.enumerate(1000).unwrap();
        for g in &all {
            for h in &all {
                let imp = f.implies(g, h);
                assert!(f.is_section(&imp));
                for x in &all {
                    assert_eq!(f.leq(x, &imp), f.leq(&f.meet(x, g), h));
                }
            }
        }
    }

    #[test]
    fn cap_is_reported() {
        let f = BoolFamily::new(FinPoset::antichain(3), vec![4, 4, 4], |_, _, a| 1 << a).unwrap();
        assert_eq!(f.count(1 << 20).unwrap(), 1 << 12);
        assert!(matches!(f.count(100), Err(OrderError::CapExceeded { cap: 100 })));
        assert_eq!(f.log2_lower_bound(), 12.0);
    }
}
