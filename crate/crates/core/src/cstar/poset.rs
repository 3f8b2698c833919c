use serde::{Deserialize, Serialize};

use super::matrix::{max_abs, Projection};
use super::{Context, CstarError, MatrixAlg};
use crate::order::{BoolFamily, FinPoset};
use crate::tol;

/// How a user-supplied family of contexts is completed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    /// The given contexts plus the trivial one.
    None,
    /// Additionally closed under pairwise intersection.
    #[default]
    Meets,
}

/// Bound on the number of contexts produced by meet closure.
pub const MAX_CONTEXTS: usize = 4096;

/// A finite family of contexts ordered by refinement, with the trivial
/// context `ℂ·1` at index 0.
#[derive(Clone, Debug)]
pub struct ContextPoset {
    alg: MatrixAlg,
    contexts: Vec<Context>,
    family: BoolFamily,
}

impl ContextPoset {
    pub fn algebra(&self) -> &MatrixAlg {
        &self.alg
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn context(&self, i: usize) -> &Context {
        &self.contexts[i]
    }

    pub fn order(&self) -> &FinPoset {
        self.family.index()
    }

    /// The poset-indexed Boolean algebras `Proj(C)` with refinement embeddings.
    pub fn family(&self) -> &BoolFamily {
        &self.family
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order().leq(i, j)
    }

    pub fn label(&self, i: usize) -> &str {
        self.order().label(i)
    }

    pub fn labels(&self) -> &[String] {
        self.order().labels()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.order().index_of(label)
    }

    /// Index of a context equal to `c` as a set of atoms.
    pub fn find(&self, c: &Context) -> Option<usize> {
        self.contexts.iter().position(|d| d.same_atoms(c))
    }

    /// Image in context `j` of the projection with atom mask `m` in context `i ≤ j`.
    pub fn embed(&self, i: usize, j: usize, m: u64) -> u64 {
        self.family.embed(i, j, m)
    }

    pub fn projection(&self, i: usize, m: u64) -> Projection {
        self.contexts[i].proj_of_mask(m)
    }
}

/// Builds the context poset of a family: prepends `ℂ·1`, applies the
/// closure policy, drops contexts equal as atom sets and orders the rest by
/// refinement.
pub fn context_poset(cs: Vec<Context>, closure: Closure) -> Result<ContextPoset, CstarError> {
    let alg = match cs.first() {
        Some(c) => c.algebra().clone(),
        None => return Err(CstarError::InvalidContext("empty context family".into())),
    };
    context_poset_in(&alg, cs, closure)
}

/// As [`context_poset`], with the algebra given explicitly so that an empty
/// family yields the one-point poset.
pub fn context_poset_in(alg: &MatrixAlg, cs: Vec<Context>, closure: Closure) -> Result<ContextPoset, CstarError> {
    if cs.iter().any(|c| c.algebra() != alg) {
        return Err(CstarError::IncompatibleAlgebras);
    }
    let mut contexts: Vec<Context> = vec![Context::trivial(alg)];
    for c in cs {
        if !contexts.iter().any(|d| d.same_atoms(&c)) {
            contexts.push(c);
        }
    }
    if closure == Closure::Meets {
        let mut done = 1;
        while done < contexts.len() {
            let n = contexts.len();
            for i in 1..n {
                for j in done.max(i + 1)..n {
                    let m = meet_contexts(&contexts[i], &contexts[j])?;
                    if !contexts.iter().any(|d| d.same_atoms(&m)) {
                        if contexts.len() >= MAX_CONTEXTS {
                            return Err(CstarError::InvalidContext(format!(
                                "meet closure exceeds {MAX_CONTEXTS} contexts"
                            )));
                        }
                        contexts.push(m);
                    }
                }
            }
            done = n;
        }
    }
    let n = contexts.len();
    // refinement maps, for i ≤ j: image in j of each atom of i
    let refine: Vec<Vec<Option<Vec<u64>>>> =
        (0..n).map(|i| (0..n).map(|j| contexts[j].refinement_of(&contexts[i])).collect()).collect();
    let labels = unique_labels(&contexts);
    let leq: Vec<Vec<bool>> = refine.iter().map(|row| row.iter().map(Option::is_some).collect()).collect();
    let index = FinPoset::from_relation(labels, &leq).map_err(|e| CstarError::InvalidContext(e.to_string()))?;
    let atoms = contexts.iter().map(Context::len).collect();
    let family = BoolFamily::new(index, atoms, |i, j, a| refine[i][j].as_ref().expect("i <= j")[a])
        .map_err(|e| CstarError::InvalidContext(e.to_string()))?;
    Ok(ContextPoset { alg: alg.clone(), contexts, family })
}

fn unique_labels(contexts: &[Context]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(contexts.len());
    for (i, c) in contexts.iter().enumerate() {
        let base = c.name().map(str::to_string).unwrap_or_else(|| format!("C{i}"));
        let label = if out.contains(&base) { format!("{base}#{i}") } else { base };
        out.push(label);
    }
    out
}

/// Atom masks `(of c, of d)` of the minimal projections shared by both
/// contexts, found as connected components of the nonzero-overlap graph.
pub fn overlap_components(c: &Context, d: &Context) -> Result<Vec<(u64, u64)>, CstarError> {
    if c.algebra() != d.algebra() {
        return Err(CstarError::IncompatibleAlgebras);
    }
    let (k, l) = (c.len(), d.len());
    let mut parent: Vec<usize> = (0..k + l).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut ambiguous = Vec::new();
    for i in 0..k {
        for j in 0..l {
            let overlap = (c.atom(i).matrix() * d.atom(j).matrix()).norm();
            if overlap > tol::RANK * tol::RANK_AMBIGUITY {
                let (a, b) = (find(&mut parent, i), find(&mut parent, k + j));
                parent[a] = b;
            } else if overlap > tol::RANK {
                ambiguous.push(overlap);
            }
        }
    }
    if !ambiguous.is_empty() {
        return Err(CstarError::DegenerateIntersection { overlaps: ambiguous });
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut members: Vec<(u64, u64)> = Vec::new();
    for x in 0..k + l {
        let r = find(&mut parent, x);
        let slot = match roots.iter().position(|&y| y == r) {
            Some(s) => s,
            None => {
                roots.push(r);
                members.push((0, 0));
                roots.len() - 1
            }
        };
        if x < k {
            members[slot].0 |= 1 << x;
        } else {
            members[slot].1 |= 1 << (x - k);
        }
    }
    Ok(members)
}

/// The context of `C ∩ D`.
///
/// A projection lies in both algebras iff it is a sum of atoms of each, so
/// the atoms of the intersection are the connected components of the graph
/// linking `p_i` and `q_j` whenever `p_i q_j ≠ 0`. Overlap norms too close
/// to the zero threshold to decide are reported rather than guessed.
pub fn meet_contexts(c: &Context, d: &Context) -> Result<Context, CstarError> {
    let members = overlap_components(c, d)?;
    let mut atoms = Vec::with_capacity(members.len());
    for (mc, md) in members {
        let p = c.proj_of_mask(mc);
        let q = d.proj_of_mask(md);
        let gap = max_abs(&(p.matrix() - q.matrix()));
        if gap > tol::RANK * tol::RANK_AMBIGUITY {
            return Err(CstarError::DegenerateIntersection { overlaps: vec![gap] });
        }
        atoms.push(p);
    }
    let ctx = Context::new(c.algebra().clone(), atoms)?;
    let inherit = [c, d].into_iter().find(|x| ctx.same_atoms(x)).and_then(|x| x.name()).map(str::to_string);
    Ok(match (ctx.len(), inherit) {
        (1, _) => ctx.named("ℂ"),
        (_, Some(n)) => ctx.named(n),
        _ => ctx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar::context::{diagonal_contexts, pauli_context, set_partitions};

    #[test]
    fn chain_and_flat() {
        let cz = pauli_context('z');
        let p = context_poset(vec![cz.clone()], Closure::Meets).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.leq(0, 1) && !p.leq(1, 0));
        let p = context_poset(vec![cz, pauli_context('x')], Closure::Meets).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.leq(0, 1) && p.leq(0, 2) && !p.leq(1, 2) && !p.leq(2, 1));
        assert_eq!(p.labels(), &["ℂ", "C_z", "C_x"]);
    }

    #[test]
    fn diagonal_partitions_of_three() {
        let p = context_poset(diagonal_contexts(3), Closure::Meets).unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p.order().minimal_elements(), vec![0]);
        assert_eq!(p.order().maximal_elements().len(), 1);
        let middle = (0..5).filter(|&i| p.context(i).len() == 2).count();
        assert_eq!(middle, 3);
    }

    #[test]
    fn meets() {
        let cz = pauli_context('z');
        assert!(meet_contexts(&cz, &cz).unwrap().same_atoms(&cz));
        assert_eq!(meet_contexts(&cz, &pauli_context('x')).unwrap().len(), 1);
    }

    fn partition_meet(n: usize, a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
        // coarsest common coarsening: join blocks that share an element
        let mut label: Vec<usize> = (0..n).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for part in a.iter().chain(b) {
                let m = part.iter().map(|&i| label[i]).min().unwrap();
                for &i in part {
                    if label[i] != m {
                        let old = label[i];
                        for l in label.iter_mut() {
                            if *l == old {
                                *l = m;
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        let mut roots: Vec<usize> = label.clone();
        roots.sort();
        roots.dedup();
        roots.iter().map(|&r| (0..n).filter(|&i| label[i] == r).collect()).collect()
    }

    #[test]
    fn meet_of_partitions_is_coarsest_common_coarsening() {
        let n = 4;
        let alg = MatrixAlg::full(n);
        let parts = set_partitions(n);
        for a in &parts {
            for b in &parts {
                let m = meet_contexts(&Context::from_partition(&alg, a).unwrap(), &Context::from_partition(&alg, b).unwrap())
                    .unwrap();
                let expect = Context::from_partition(&alg, &partition_meet(n, a, b)).unwrap();
                assert!(m.same_atoms(&expect));
            }
        }
    }

    #[test]
    fn closure_none_keeps_family() {
        let alg = MatrixAlg::full(3);
        let a = Context::from_partition(&alg, &[vec![0, 1], vec![2]]).unwrap();
        let b = Context::from_partition(&alg, &[vec![0], vec![1, 2]]).unwrap();
        let none = context_poset(vec![a.clone(), b.clone()], Closure::None).unwrap();
        assert_eq!(none.len(), 3);
        let meets = context_poset(vec![a, b], Closure::Meets).unwrap();
        assert_eq!(meets.len(), 3);
        let c = Context::from_partition(&alg, &[vec![0], vec![1], vec![2]]).unwrap();
        let d = Context::from_partition(&alg, &[vec![0, 2], vec![1]]).unwrap();
        let e = Context::from_partition(&alg, &[vec![0], vec![1, 2]]).unwrap();
        // {0}{12} ∩ {02}{1} is trivial; the fine context is above both
        let p = context_poset(vec![c, d, e], Closure::Meets).unwrap();
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn incompatible_algebras() {
        let a = Context::trivial(&MatrixAlg::full(2));
        let b = Context::trivial(&MatrixAlg::full(3));
        assert!(matches!(context_poset(vec![a, b], Closure::None), Err(CstarError::IncompatibleAlgebras)));
    }
}
