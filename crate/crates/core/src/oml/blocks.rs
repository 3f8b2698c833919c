use std::collections::BTreeSet;

use super::{Oml, OmlError};
use crate::order::{full_mask, BoolFamily, FinLattice, FinPoset};

/// A partial Boolean algebra: Boolean algebras indexed by a poset, sharing
/// elements of a common amalgam, with `B_i ⊆ B_j` whenever `i ≤ j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFamily {
    family: BoolFamily,
    labels: Vec<String>,
    /// Per block, the amalgam element of every atom mask.
    tables: Vec<Vec<usize>>,
}

impl BlockFamily {
    /// `tables[i][m]` is the amalgam element (an index into `labels`) of the
    /// element of block `i` with atom mask `m`; each table has `2^k` entries.
    /// Embeddings are recovered from shared element identities.
    pub fn from_tables(index: FinPoset, labels: Vec<String>, tables: Vec<Vec<usize>>) -> Result<Self, OmlError> {
        let mut atoms = Vec::with_capacity(tables.len());
        for (i, t) in tables.iter().enumerate() {
            if !t.len().is_power_of_two() || t.len() < 2 {
                return Err(OmlError::NotBoolean(i, format!("{} elements is not 2^k with k ≥ 1", t.len())));
            }
            if t.iter().any(|&e| e >= labels.len()) {
                return Err(OmlError::NotBoolean(i, "element out of range".into()));
            }
            let distinct: BTreeSet<usize> = t.iter().copied().collect();
            if distinct.len() != t.len() {
                return Err(OmlError::NotBoolean(i, "repeated element".into()));
            }
            atoms.push(t.len().trailing_zeros() as usize);
        }
        let bottom = tables.first().map(|t| t[0]);
        let top = tables.first().map(|t| t[t.len() - 1]);
        for (i, t) in tables.iter().enumerate() {
            if Some(t[0]) != bottom || Some(t[t.len() - 1]) != top {
                return Err(OmlError::GlueConflict(format!("block {i} has a different bottom or top")));
            }
        }
        let position = |j: usize, e: usize| tables[j].iter().position(|&x| x == e);
        for i in 0..index.len() {
            for j in index.up_set(i).ones() {
                if let Some(&e) = tables[i].iter().find(|&&e| position(j, e).is_none()) {
                    return Err(OmlError::GlueConflict(format!(
                        "block {i} <= block {j} but element {} is missing from block {j}",
                        labels[e]
                    )));
                }
            }
        }
        let family = BoolFamily::new(index, atoms, |i, j, a| position(j, tables[i][1 << a]).unwrap() as u64)?;
        Ok(Self { family, labels, tables })
    }

    pub fn family(&self) -> &BoolFamily {
        &self.family
    }

    pub fn index(&self) -> &FinPoset {
        self.family.index()
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Amalgam element of mask `m` in block `i`.
    pub fn element(&self, i: usize, m: u64) -> usize {
        self.tables[i][m as usize]
    }

    /// Mask of amalgam element `e` in block `i`, if it belongs there.
    pub fn mask_of(&self, i: usize, e: usize) -> Option<u64> {
        self.tables[i].iter().position(|&x| x == e).map(|m| m as u64)
    }

    pub fn block_elements(&self, i: usize) -> Vec<usize> {
        self.tables[i].clone()
    }

    /// Every amalgam element that occurs in some block, ascending.
    pub fn amalgam_elements(&self) -> Vec<usize> {
        let all: BTreeSet<usize> = self.tables.iter().flatten().copied().collect();
        all.into_iter().collect()
    }
}

fn maximal_cliques(n: usize, adj: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    fn bron_kerbosch(
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        adj: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        let mut p = p;
        let mut x = x;
        while let Some(&v) = p.first() {
            r.push(v);
            let np = p.iter().copied().filter(|&u| u != v && adj(u, v)).collect();
            let nx = x.iter().copied().filter(|&u| adj(u, v)).collect();
            bron_kerbosch(r, np, nx, adj, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    bron_kerbosch(&mut Vec::new(), (0..n).collect(), Vec::new(), adj, &mut out);
    out
}

/// Maximal Boolean subalgebras of a finite orthomodular lattice.
///
/// Each block is generated by a maximal set of pairwise orthogonal atoms.
/// Blocks equal as element sets are identified. When more than one block
/// exists, the two-element algebra `{0, 1}` is added as a shared bottom index
/// and the index poset is inclusion of blocks.
pub fn blocks(o: &Oml) -> Result<BlockFamily, OmlError> {
    let report = super::validate_oml(o);
    if !report.passed() {
        return Err(OmlError::Invalid(format!("{:?}", report.violations[0])));
    }
    let atoms = o.atoms();
    let cliques = maximal_cliques(atoms.len(), &|u, v| o.orthogonal(atoms[u], atoms[v]));
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for clique in cliques {
        let mut members: Vec<usize> = clique.iter().map(|&c| atoms[c]).collect();
        members.sort_unstable();
        let k = members.len();
        if k > 20 {
            return Err(OmlError::NotBoolean(tables.len(), format!("{k} orthogonal atoms is too many to materialize")));
        }
        let table: Vec<usize> = (0..1u64 << k)
            .map(|m| o.lattice().join_all((0..k).filter(|&a| m >> a & 1 == 1).map(|a| members[a])))
            .collect();
        if table[table.len() - 1] != o.top() {
            return Err(OmlError::NotBoolean(tables.len(), "maximal orthogonal atoms do not join to 1".into()));
        }
        let mut key = table.clone();
        key.sort_unstable();
        if seen.insert(key) {
            tables.push(table);
        }
    }
    if tables.len() > 1 {
        tables.insert(0, vec![o.bot(), o.top()]);
    }
    let sets: Vec<BTreeSet<usize>> = tables.iter().map(|t| t.iter().copied().collect()).collect();
    let labels: Vec<String> = (0..tables.len()).map(|i| format!("B{i}")).collect();
    let index = FinPoset::from_fn(labels, |i, j| sets[i].is_subset(&sets[j]))?;
    let element_labels = o.lattice().poset().labels().to_vec();
    BlockFamily::from_tables(index, element_labels, tables)
}

/// Glues the blocks of a partial Boolean algebra into one orthocomplemented
/// lattice on the union of their elements.
pub fn amalgamate(b: &BlockFamily) -> Result<Oml, OmlError> {
    let elems = b.amalgam_elements();
    let local = |e: usize| elems.binary_search(&e).expect("amalgam element");
    let n = elems.len();
    let mut pairs = Vec::new();
    let mut ortho: Vec<Option<usize>> = vec![None; n];
    for i in 0..b.len() {
        let top = full_mask(b.family().atoms(i));
        for m in 0..=top {
            let e = local(b.element(i, m));
            let c = local(b.element(i, !m & top));
            match ortho[e] {
                None => ortho[e] = Some(c),
                Some(prev) if prev != c => {
                    return Err(OmlError::GlueConflict(format!(
                        "complement of {} differs between blocks",
                        b.labels()[elems[e]]
                    )))
                }
                _ => {}
            }
            for m2 in 0..=top {
                if m & !m2 == 0 {
                    pairs.push((e, local(b.element(i, m2))));
                }
            }
        }
    }
    let labels: Vec<String> = elems.iter().map(|&e| b.labels()[e].clone()).collect();
    let poset = FinPoset::generated_by(labels, &pairs).map_err(|e| OmlError::GlueConflict(e.to_string()))?;
    // gluing must not create order relations inside a block that the block lacks
    for i in 0..b.len() {
        let top = full_mask(b.family().atoms(i));
        for m in 0..=top {
            for m2 in 0..=top {
                let (x, y) = (local(b.element(i, m)), local(b.element(i, m2)));
                if poset.leq(x, y) != (m & !m2 == 0) {
                    return Err(OmlError::GlueConflict(format!(
                        "order between {} and {} differs from block {i}",
                        poset.label(x),
                        poset.label(y)
                    )));
                }
            }
        }
    }
    let lattice = FinLattice::from_poset(poset).map_err(|e| OmlError::GlueConflict(e.to_string()))?;
    let ortho = ortho.into_iter().map(|o| o.expect("every element lies in a block")).collect();
    Oml::new(lattice, ortho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oml::{example_x, horizontal_sum, oml_from_boolean, validate_oml};
    use crate::order::BoolAlg;

    fn same_oml(a: &Oml, b: &Oml) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let map: Vec<usize> = (0..a.len()).map(|x| b.element(a.label(x)).unwrap()).collect();
        (0..a.len()).all(|x| {
            map[a.ortho(x)] == b.ortho(map[x]) && (0..a.len()).all(|y| a.leq(x, y) == b.leq(map[x], map[y]))
        })
    }

    #[test]
    fn boolean_algebra_is_one_block() {
        let b = oml_from_boolean(BoolAlg::new(3));
        let fam = blocks(&b).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.block_elements(0).len(), 8);
        assert!(same_oml(&amalgamate(&fam).unwrap(), &b));
    }

    #[test]
    fn example_x_blocks() {
        // the atoms a, b, c are pairwise orthogonal, so they generate one
        // eight-element block; d generates the other
        let x = example_x();
        let fam = blocks(&x).unwrap();
        assert_eq!(fam.len(), 3);
        let sizes: Vec<usize> = (0..3).map(|i| fam.block_elements(i).len()).collect();
        assert_eq!(sizes, vec![2, 8, 4]);
        assert_eq!(fam.index().minimal_elements(), vec![0]);
        assert_eq!(fam.index().maximal_elements(), vec![1, 2]);
        assert!(same_oml(&amalgamate(&fam).unwrap(), &x));
    }

    #[test]
    fn horizontal_sum_round_trip() {
        let h = horizontal_sum(&[2, 2]);
        assert!(validate_oml(&h).passed());
        let fam = blocks(&h).unwrap();
        assert_eq!(fam.len(), 3);
        let glued = amalgamate(&fam).unwrap();
        assert!(same_oml(&glued, &h));
        assert_eq!(glued.len(), 6);
    }

    #[test]
    fn two_blocks_sharing_bottom_and_top_glue_to_horizontal_sum() {
        // {0,p,p',1} and {0,q,q',1}
        let labels = ["0", "p", "p'", "q", "q'", "1"].map(String::from).to_vec();
        let tables = vec![vec![0, 5], vec![0, 1, 2, 5], vec![0, 3, 4, 5]];
        let idx = FinPoset::generated_by(["B0", "Bp", "Bq"].map(String::from).to_vec(), &[(0, 1), (0, 2)]).unwrap();
        let fam = BlockFamily::from_tables(idx, labels, tables).unwrap();
        let glued = amalgamate(&fam).unwrap();
        assert!(validate_oml(&glued).passed());
        assert_eq!(glued.len(), 6);
        let (p, q) = (glued.element("p").unwrap(), glued.element("q").unwrap());
        assert_eq!(glued.join(p, q), glued.top());
        assert_eq!(glued.meet(p, q), glued.bot());
    }

    #[test]
    fn conflicting_complements_are_rejected() {
        // p's complement is p' in one block and q in the other
        let labels = ["0", "p", "p'", "q", "1"].map(String::from).to_vec();
        let tables = vec![vec![0, 1, 2, 4], vec![0, 1, 3, 4]];
        let idx = FinPoset::antichain(2);
        let fam = BlockFamily::from_tables(idx, labels, tables).unwrap();
        assert!(matches!(amalgamate(&fam), Err(OmlError::GlueConflict(_))));
    }
}
