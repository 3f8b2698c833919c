use super::{BlockFamily, Oml};
use crate::order::{full_mask, mask_label, BoolAlg, FinLattice, FinPoset};

const X_LABELS: [&str; 10] = ["0", "a", "b", "c", "d", "a'", "b'", "c'", "d'", "1"];

/// The ten-element orthomodular lattice `X`.
///
/// Element order: `0, a, b, c, d, a', b', c', d', 1`, where `x'` is the
/// orthocomplement of `x`. The atoms `a, b, c` are pairwise orthogonal
/// (`a ≤ b', c'` and so on); `d` and `d'` compare only with `0` and `1`.
pub fn example_x() -> Oml {
    let labels = X_LABELS.map(String::from).to_vec();
    let mut pairs = vec![(1, 6), (1, 7), (2, 5), (2, 7), (3, 5), (3, 6)];
    for i in 1..9 {
        pairs.push((0, i));
        pairs.push((i, 9));
    }
    let p = FinPoset::generated_by(labels, &pairs).expect("example X order");
    let l = FinLattice::from_poset(p).expect("example X is a lattice");
    Oml::new(l, vec![9, 5, 6, 7, 8, 1, 2, 3, 4, 0]).expect("example X ortho")
}

/// The block family over `I = {0 < a, b, c, d}` with `B_0 = {0, 1}` and
/// `B_i = {0, i, i', 1}`, sharing element names with [`example_x`].
pub fn example_x_family() -> BlockFamily {
    let labels = X_LABELS.map(String::from).to_vec();
    let index = FinPoset::generated_by(
        ["0", "a", "b", "c", "d"].map(String::from).to_vec(),
        &[(0, 1), (0, 2), (0, 3), (0, 4)],
    )
    .expect("star poset");
    let mut tables = vec![vec![0, 9]];
    for i in 1..=4 {
        tables.push(vec![0, i, i + 4, 9]);
    }
    BlockFamily::from_tables(index, labels, tables).expect("example X family")
}

/// Boolean algebras with the given atom counts glued along `{0, 1}`.
///
/// Element `m` of summand `s` is labelled `s:{..}` by its atom mask.
pub fn horizontal_sum(atoms: &[usize]) -> Oml {
    let mut labels = vec!["0".to_string()];
    let mut pairs = Vec::new();
    let mut ortho_of: Vec<(usize, u64)> = Vec::new();
    let mut offsets = Vec::new();
    for (s, &k) in atoms.iter().enumerate() {
        assert!((1..=16).contains(&k), "summands need 1..=16 atoms");
        offsets.push(labels.len());
        for m in 1..full_mask(k) {
            labels.push(format!("{s}:{}", mask_label(m)));
            ortho_of.push((s, m));
        }
    }
    let top = labels.len();
    labels.push("1".to_string());
    let id = |s: usize, m: u64| -> usize {
        let f = full_mask(atoms[s]);
        if m == 0 {
            0
        } else if m == f {
            top
        } else {
            offsets[s] + m as usize - 1
        }
    };
    for (s, &k) in atoms.iter().enumerate() {
        let f = full_mask(k);
        for m in 0..=f {
            for m2 in 0..=f {
                if m & !m2 == 0 {
                    pairs.push((id(s, m), id(s, m2)));
                }
            }
        }
    }
    let mut ortho = vec![0; labels.len()];
    ortho[0] = top;
    ortho[top] = 0;
    for (s, m) in ortho_of {
        ortho[id(s, m)] = id(s, !m & full_mask(atoms[s]));
    }
    let p = FinPoset::generated_by(labels, &pairs).expect("horizontal sum order");
    Oml::new(FinLattice::from_poset(p).expect("horizontal sum is a lattice"), ortho).expect("ortho table")
}

/// A Boolean algebra as an orthomodular lattice; element `m` is the atom mask `m`.
pub fn oml_from_boolean(b: BoolAlg) -> Oml {
    let top = b.top();
    let ortho = (0..=top).map(|m| (!m & top) as usize).collect();
    Oml::new(b.to_lattice(), ortho).expect("complement table")
}
