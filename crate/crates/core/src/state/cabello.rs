//! The 18-ray, 9-basis configuration in four dimensions.

use nalgebra::DMatrix;
use serde::Deserialize;

use super::StateError;
use crate::cstar::{c, Context, CstarError, MatrixAlg, Projection};

const RAW: &str = include_str!("../../data/cabello18.json");

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct Cabello18 {
    pub rays: Vec<[i32; 4]>,
    pub bases: Vec<[usize; 4]>,
}

impl Cabello18 {
    /// Bases are orthogonal, and every ray occurs in exactly two of them.
    pub fn validate(&self) -> Result<(), StateError> {
        let bad = |s: String| StateError::Cstar(CstarError::InvalidContext(s));
        let dot = |a: &[i32; 4], b: &[i32; 4]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i32>();
        let mut seen = vec![0usize; self.rays.len()];
        for (bi, b) in self.bases.iter().enumerate() {
            for (x, &i) in b.iter().enumerate() {
                let ri = self.rays.get(i).ok_or_else(|| bad(format!("basis {bi} names ray {i}")))?;
                if dot(ri, ri) == 0 {
                    return Err(bad(format!("ray {i} is zero")));
                }
                seen[i] += 1;
                for &j in &b[x + 1..] {
                    if dot(ri, &self.rays[j]) != 0 {
                        return Err(bad(format!("rays {i} and {j} in basis {bi} are not orthogonal")));
                    }
                }
            }
        }
        if let Some(i) = seen.iter().position(|&n| n != 2) {
            return Err(bad(format!("ray {i} occurs in {} bases", seen[i])));
        }
        Ok(())
    }

    pub fn contexts(&self) -> Result<Vec<Context>, StateError> {
        let alg = MatrixAlg::full(4);
        self.bases
            .iter()
            .enumerate()
            .map(|(bi, b)| {
                let atoms = b
                    .iter()
                    .map(|&i| {
                        let r = &self.rays[i];
                        let n2: i32 = r.iter().map(|x| x * x).sum();
                        let m = DMatrix::from_fn(4, 4, |a, b| c((r[a] * r[b]) as f64 / n2 as f64, 0.0));
                        Projection::new(alg.clone(), m)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Context::new(alg.clone(), atoms)?.named(format!("B{bi}")))
            })
            .collect()
    }
}

pub fn cabello18() -> Result<Cabello18, StateError> {
    let k: Cabello18 = serde_json::from_str(RAW).map_err(|e| CstarError::InvalidContext(e.to_string()))?;
    k.validate()?;
    Ok(k)
}

pub fn cabello18_contexts() -> Result<Vec<Context>, StateError> {
    cabello18()?.contexts()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_is_valid() {
        let k = cabello18().unwrap();
        assert_eq!((k.rays.len(), k.bases.len()), (18, 9));
        let cs = k.contexts().unwrap();
        assert!(cs.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn rejects_broken_fixture() {
        let mut k = cabello18().unwrap();
        k.bases[0][1] = 4;
        assert!(k.validate().is_err());
    }
}
