use super::lattice::FinLattice;
use super::poset::FinPoset;

/// The finite Boolean algebra of all subsets of `atom_count` atoms.
///
/// Elements are bitmasks over the atoms, so every lattice operation is a
/// single machine instruction. At most 64 atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoolAlg {
    atom_count: usize,
}

impl BoolAlg {
    pub fn new(atom_count: usize) -> Self {
        assert!(atom_count <= 64, "at most 64 atoms");
        Self { atom_count }
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn size(&self) -> u128 {
        1u128 << self.atom_count
    }

    #[inline]
    pub fn top(&self) -> u64 {
        full_mask(self.atom_count)
    }

    #[inline]
    pub fn bot(&self) -> u64 {
        0
    }

    #[inline]
    pub fn not(&self, x: u64) -> u64 {
        !x & self.top()
    }

    #[inline]
    pub fn implies(&self, x: u64, y: u64) -> u64 {
        self.not(x) | y
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        x & !self.top() == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        assert!(self.atom_count < 64);
        0..(1u64 << self.atom_count)
    }

    /// Materializes the algebra as a [`FinLattice`] whose element `i` is the mask `i`.
    pub fn to_lattice(&self) -> FinLattice {
        assert!(self.atom_count <= 16, "refusing to materialize more than 2^16 elements");
        let n = 1usize << self.atom_count;
        let labels = (0..n).map(|m| mask_label(m as u64)).collect();
        let p = FinPoset::from_fn(labels, |a, b| a & !b == 0).expect("subset order");
        FinLattice::from_poset(p).expect("powerset lattice")
    }
}

#[inline]
pub fn full_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

pub fn mask_label(m: u64) -> String {
    let items: Vec<String> = (0..64).filter(|i| m >> i & 1 == 1).map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

pub fn mask_atoms(m: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| m >> i & 1 == 1)
}

/// Every superset of `lower` inside `upper`, in increasing numeric order.
pub fn masks_between(lower: u64, upper: u64) -> impl Iterator<Item = u64> {
    debug_assert_eq!(lower & !upper, 0);
    let free = upper & !lower;
    let mut sub: u64 = 0;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = lower | sub;
        // next submask of `free` in increasing order
        if sub == free {
            done = true;
        } else {
            sub = (sub.wrapping_sub(free)) & free;
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_laws() {
        let b = BoolAlg::new(5);
        for x in b.elements() {
            assert_eq!(x & b.not(x), 0);
            assert_eq!(x | b.not(x), b.top());
            assert_eq!(b.not(b.not(x)), x);
        }
    }

    #[test]
    fn masks_between_enumerates_interval() {
        let v: Vec<u64> = masks_between(0b0001, 0b1011).collect();
        assert_eq!(v, vec![0b0001, 0b0011, 0b1001, 0b1011]);
        assert_eq!(masks_between(0, 0).count(), 1);
        assert_eq!(masks_between(0, 0b111).count(), 8);
    }
}
