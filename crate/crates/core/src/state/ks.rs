//! Backtracking search for a choice of one atom per context that agrees on
//! every shared projection.

use crate::cstar::{overlap_components, Context};

use super::StateError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KsOutcome {
    /// `choice[i]` is the atom of context `i` valued 1.
    Valuation { choice: Vec<usize>, nodes: u64 },
    NoValuation { nodes: u64 },
}

impl KsOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            KsOutcome::Valuation { nodes, .. } | KsOutcome::NoValuation { nodes } => *nodes,
        }
    }

    pub fn is_valuation(&self) -> bool {
        matches!(self, KsOutcome::Valuation { .. })
    }
}

/// Atoms `a` of `c` and `b` of `d` are compatible when they fall in the same
/// overlap component; pairs with a single component impose nothing.
fn compat(c: &Context, d: &Context) -> Result<Option<Vec<Vec<bool>>>, StateError> {
    let comps = overlap_components(c, d)?;
    if comps.len() < 2 {
        return Ok(None);
    }
    let mut t = vec![vec![false; d.len()]; c.len()];
    for (mc, md) in comps {
        for a in (0..c.len()).filter(|a| mc >> a & 1 == 1) {
            for b in (0..d.len()).filter(|b| md >> b & 1 == 1) {
                t[a][b] = true;
            }
        }
    }
    Ok(Some(t))
}

pub fn ks_search(contexts: &[Context]) -> Result<KsOutcome, StateError> {
    let n = contexts.len();
    let mut table = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if let Some(t) = compat(&contexts[i], &contexts[j])? {
                let tt: Vec<Vec<bool>> =
                    (0..contexts[j].len()).map(|b| (0..contexts[i].len()).map(|a| t[a][b]).collect()).collect();
                table[i][j] = Some(t);
                table[j][i] = Some(tt);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(table[i].iter().filter(|t| t.is_some()).count()), i));

    let mut choice: Vec<Option<usize>> = vec![None; n];
    let mut nodes = 0u64;
    fn go(
        depth: usize,
        order: &[usize],
        contexts: &[Context],
        table: &[Vec<Option<Vec<Vec<bool>>>>],
        choice: &mut Vec<Option<usize>>,
        nodes: &mut u64,
    ) -> bool {
        let Some(&i) = order.get(depth) else { return true };
        for a in 0..contexts[i].len() {
            *nodes += 1;
            let ok = order[..depth].iter().all(|&j| match (&table[i][j], choice[j]) {
                (Some(t), Some(b)) => t[a][b],
                _ => true,
            });
            if ok {
                choice[i] = Some(a);
                if go(depth + 1, order, contexts, table, choice, nodes) {
                    return true;
                }
                choice[i] = None;
            }
        }
        false
    }
    Ok(if go(0, &order, contexts, &table, &mut choice, &mut nodes) {
        KsOutcome::Valuation { choice: choice.into_iter().map(|a| a.expect("assigned")).collect(), nodes }
    } else {
        KsOutcome::NoValuation { nodes }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar::{diagonal_contexts, pauli_context};
    use crate::state::cabello18_contexts;

    #[test]
    fn cabello_has_no_valuation() {
        let out = ks_search(&cabello18_contexts().unwrap()).unwrap();
        assert!(!out.is_valuation());
        assert!(out.nodes() > 0);
    }

    #[test]
    fn commuting_families_have_valuations() {
        let cs = diagonal_contexts(3);
        let KsOutcome::Valuation { choice, .. } = ks_search(&cs).unwrap() else { panic!() };
        // the chosen atoms all contain one common basis vector
        let v = (0..3)
            .find(|&e| {
                cs.iter().zip(&choice).all(|(c, &a)| c.atom(a).matrix()[(e, e)].re > 0.5)
            });
        assert!(v.is_some());
    }

    #[test]
    fn qubit_contexts_are_unconstrained() {
        let cs = vec![pauli_context('z'), pauli_context('x'), pauli_context('y')];
        assert_eq!(ks_search(&cs).unwrap(), KsOutcome::Valuation { choice: vec![0, 0, 0], nodes: 3 });
    }

    #[test]
    fn dropping_one_basis_admits_a_valuation() {
        let mut cs = cabello18_contexts().unwrap();
        cs.pop();
        assert!(ks_search(&cs).unwrap().is_valuation());
    }
}
