use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::OrderError;

/// A finite partially ordered set on the indices `0..len`.
///
/// The order is stored as a dense matrix of truth values, one bitset row per
/// element: `up[i]` holds every `j` with `i <= j`, `down[i]` every `j <= i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPoset {
    labels: Vec<String>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl FinPoset {
    /// Builds a poset from a full relation and checks the partial-order laws.
    pub fn from_relation(labels: Vec<String>, leq: &[Vec<bool>]) -> Result<Self, OrderError> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(OrderError::Shape(format!("relation must be {n}x{n}")));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(OrderError::NotReflexive(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(OrderError::NotAntisymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !leq[i][j] {
                    continue;
                }
                for k in 0..n {
                    if leq[j][k] && !leq[i][k] {
                        return Err(OrderError::NotTransitive(i, j, k));
                    }
                }
            }
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                if leq[i][j] {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }
        Ok(Self { labels, up, down })
    }

    /// Builds the reflexive-transitive closure of `pairs` and checks antisymmetry.
    pub fn generated_by(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let n = labels.len();
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(OrderError::Shape(format!("pair ({i},{j}) out of range for {n} elements")));
            }
            rel[i][j] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_relation(labels, &rel)
    }

    pub fn from_fn(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self, OrderError> {
        let n = labels.len();
        let rel: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| leq(i, j)).collect()).collect();
        Self::from_relation(labels, &rel)
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_fn(numbered(n), |i, j| i == j).expect("discrete order")
    }

    pub fn chain(n: usize) -> Self {
        Self::from_fn(numbered(n), |i, j| i <= j).expect("total order")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// `{ j | i <= j }`
    pub fn up_set(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    /// `{ j | j <= i }`
    pub fn down_set(&self, i: usize) -> &FixedBitSet {
        &self.down[i]
    }

    /// Smallest downset containing `s`.
    pub fn down_closure(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for i in s.ones() {
            out.union_with(&self.down[i]);
        }
        out
    }

    pub fn up_closure(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for i in s.ones() {
            out.union_with(&self.up[i]);
        }
        out
    }

    pub fn is_down_set(&self, s: &FixedBitSet) -> bool {
        s.ones().all(|i| self.down[i].is_subset(s))
    }

    pub fn is_up_set(&self, s: &FixedBitSet) -> bool {
        s.ones().all(|i| self.up[i].is_subset(s))
    }

    /// Covering pairs `(i, j)` with `i < j` and nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in self.up[i].ones() {
                if j == i {
                    continue;
                }
                let between = self.up[i].ones().any(|k| k != i && k != j && self.lt(k, j));
                if !between {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// A linear extension: every element appears after all elements below it.
    /// Ties are broken by index, so the result is deterministic.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = FixedBitSet::with_capacity(n);
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let next = (0..n)
                .find(|&i| !placed.contains(i) && self.down[i].ones().all(|j| j == i || placed.contains(j)))
                .expect("finite poset has a minimal unplaced element");
            placed.insert(next);
            order.push(next);
        }
        order
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].count_ones(..) == 1).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].count_ones(..) == 1).collect()
    }

    /// The opposite order.
    pub fn dual(&self) -> Self {
        Self { labels: self.labels.clone(), up: self.down.clone(), down: self.up.clone() }
    }

    /// Restriction to the elements of `keep`, relabelled `0..keep.len()` in order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        Self::from_fn(labels, |a, b| self.leq(keep[a], keep[b])).expect("restriction of a partial order")
    }

    /// Enumerates all downsets, calling `visit` on each. Stops early and
    /// returns `Err(cap)` once more than `cap` downsets have been seen.
    pub fn for_each_down_set(&self, cap: usize, mut visit: impl FnMut(&FixedBitSet)) -> Result<usize, usize> {
        let order = self.linear_extension();
        let mut current = FixedBitSet::with_capacity(self.len());
        let mut count = 0usize;
        self.down_sets_rec(&order, 0, &mut current, &mut count, cap, &mut visit)?;
        Ok(count)
    }

    fn down_sets_rec(
        &self,
        order: &[usize],
        pos: usize,
        current: &mut FixedBitSet,
        count: &mut usize,
        cap: usize,
        visit: &mut impl FnMut(&FixedBitSet),
    ) -> Result<(), usize> {
        if pos == order.len() {
            *count += 1;
            if *count > cap {
                return Err(cap);
            }
            visit(current);
            return Ok(());
        }
        let x = order[pos];
        self.down_sets_rec(order, pos + 1, current, count, cap, visit)?;
        // every strict lower bound precedes x in the linear extension
        if self.down[x].ones().all(|y| y == x || current.contains(y)) {
            current.insert(x);
            self.down_sets_rec(order, pos + 1, current, count, cap, visit)?;
            current.set(x, false);
        }
        Ok(())
    }

    pub fn down_sets(&self, cap: usize) -> Result<Vec<FixedBitSet>, OrderError> {
        let mut out = Vec::new();
        self.for_each_down_set(cap, |s| out.push(s.clone())).map_err(|cap| OrderError::CapExceeded { cap })?;
        Ok(out)
    }

    pub fn up_sets(&self, cap: usize) -> Result<Vec<FixedBitSet>, OrderError> {
        let mut out = Vec::new();
        self.dual()
            .for_each_down_set(cap, |s| out.push(s.clone()))
            .map_err(|cap| OrderError::CapExceeded { cap })?;
        Ok(out)
    }

    pub fn to_json(&self) -> PosetJson {
        let n = self.len();
        let leq = (0..n).flat_map(|i| self.up[i].ones().map(move |j| [i, j])).collect();
        PosetJson { elements: self.labels.clone(), leq }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self, OrderError> {
        let pairs: Vec<(usize, usize)> = json.leq.iter().map(|p| (p[0], p[1])).collect();
        Self::generated_by(json.elements.clone(), &pairs)
    }
}

/// `{"elements":[labels], "leq":[[i,j],...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub leq: Vec<[usize; 2]>,
}

pub(crate) fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub fn set_from(n: usize, items: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for i in items {
        s.insert(i);
    }
    s
}
