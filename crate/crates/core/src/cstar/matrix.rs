use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use super::CstarError;
use crate::tol;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// `⊕_i M_{n_i}(ℂ)`, realized as block-diagonal matrices of size `Σ n_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatrixAlg {
    blocks: Vec<usize>,
}

impl MatrixAlg {
    pub fn new(blocks: Vec<usize>) -> Result<Self, CstarError> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(CstarError::Shape(format!("block dimensions {blocks:?} must be nonempty and positive")));
        }
        Ok(Self { blocks })
    }

    /// `M_n(ℂ)`
    pub fn full(n: usize) -> Self {
        Self::new(vec![n]).expect("n >= 1")
    }

    /// `ℂ^n`, the diagonal matrices.
    pub fn diagonal(n: usize) -> Self {
        Self::new(vec![1; n]).expect("n >= 1")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.blocks
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    fn block_ids(&self) -> Vec<usize> {
        self.blocks.iter().enumerate().flat_map(|(b, &n)| std::iter::repeat_n(b, n)).collect()
    }

    /// Whether `m` has the right size and vanishes (within `tol`) off the blocks.
    pub fn contains(&self, m: &CMat, tol: f64) -> bool {
        let n = self.total_dim();
        if m.nrows() != n || m.ncols() != n {
            return false;
        }
        let ids = self.block_ids();
        (0..n).all(|i| (0..n).all(|j| ids[i] == ids[j] || m[(i, j)].norm() <= tol))
    }

    pub fn identity(&self) -> CMat {
        CMat::identity(self.total_dim(), self.total_dim())
    }

    pub fn zero(&self) -> CMat {
        CMat::zeros(self.total_dim(), self.total_dim())
    }

    fn check(&self, m: &CMat) -> Result<(), CstarError> {
        let n = self.total_dim();
        if m.nrows() != n || m.ncols() != n {
            return Err(CstarError::Shape(format!("{}x{} matrix in an algebra of dimension {n}", m.nrows(), m.ncols())));
        }
        if !self.contains(m, tol::HERM) {
            return Err(CstarError::NotInAlgebra);
        }
        Ok(())
    }
}

/// A self-adjoint element of a [`MatrixAlg`].
#[derive(Clone, Debug, PartialEq)]
pub struct HermObs {
    alg: MatrixAlg,
    m: CMat,
}

impl HermObs {
    /// Accepts `m` when `‖m − m*‖ ≤ 1e-10` entrywise and stores its Hermitian part.
    pub fn new(alg: MatrixAlg, m: CMat) -> Result<Self, CstarError> {
        alg.check(&m)?;
        let residual = max_abs(&(&m - m.adjoint()));
        if residual > tol::HERM {
            return Err(CstarError::NotHermitian { residual });
        }
        let m = (&m + m.adjoint()).scale(0.5);
        Ok(Self { alg, m })
    }

    pub fn from_real_diag(alg: MatrixAlg, diag: &[f64]) -> Result<Self, CstarError> {
        let d = nalgebra::DVector::from_iterator(diag.len(), diag.iter().map(|&x| c(x, 0.)));
        Self::new(alg, CMat::from_diagonal(&d))
    }

    pub fn scalar(alg: MatrixAlg, lambda: f64) -> Self {
        let m = alg.identity().scale(lambda);
        Self { alg, m }
    }

    pub fn algebra(&self) -> &MatrixAlg {
        &self.alg
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    fn same(&self, other: &Self) -> Result<(), CstarError> {
        if self.alg != other.alg {
            return Err(CstarError::IncompatibleAlgebras);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CstarError> {
        self.same(other)?;
        Ok(Self { alg: self.alg.clone(), m: &self.m + &other.m })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CstarError> {
        self.same(other)?;
        Ok(Self { alg: self.alg.clone(), m: &self.m - &other.m })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { alg: self.alg.clone(), m: self.m.scale(s) }
    }

    /// `a − λ·1`
    pub fn shift(&self, lambda: f64) -> Self {
        Self { alg: self.alg.clone(), m: &self.m - self.alg.identity().scale(lambda) }
    }

    /// The Hermitian product of commuting elements; fails when `ab ≠ ba`.
    pub fn commuting_product(&self, other: &Self) -> Result<Self, CstarError> {
        self.same(other)?;
        let ab = &self.m * &other.m;
        let residual = max_abs(&(&ab - &other.m * &self.m));
        if residual > tol::PROJ {
            return Err(CstarError::NotHermitian { residual });
        }
        Self::new(self.alg.clone(), ab)
    }

    /// `V* a V` for a matrix `V` with orthonormal columns.
    pub fn compress(&self, v: &CMat) -> CMat {
        v.adjoint() * &self.m * v
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }
}

/// A self-adjoint idempotent.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    alg: MatrixAlg,
    m: CMat,
}

impl Projection {
    pub fn new(alg: MatrixAlg, m: CMat) -> Result<Self, CstarError> {
        alg.check(&m)?;
        let herm = max_abs(&(&m - m.adjoint()));
        let idem = max_abs(&(&m * &m - &m));
        let residual = herm.max(idem);
        if residual > tol::PROJ {
            return Err(CstarError::NotProjection { residual });
        }
        Ok(Self { alg, m })
    }

    pub(crate) fn new_unchecked(alg: MatrixAlg, m: CMat) -> Self {
        Self { alg, m }
    }

    /// The projection onto the span of orthonormal columns `v`.
    pub fn onto(alg: &MatrixAlg, v: &CMat) -> Result<Self, CstarError> {
        Self::new(alg.clone(), v * v.adjoint())
    }

    pub fn zero(alg: &MatrixAlg) -> Self {
        Self { alg: alg.clone(), m: alg.zero() }
    }

    pub fn identity(alg: &MatrixAlg) -> Self {
        Self { alg: alg.clone(), m: alg.identity() }
    }

    pub fn algebra(&self) -> &MatrixAlg {
        &self.alg
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn rank(&self) -> usize {
        self.m.trace().re.round() as usize
    }

    pub fn is_zero(&self) -> bool {
        max_abs(&self.m) <= tol::PROJ
    }

    /// `p ≤ q` iff `qp = p`.
    pub fn leq(&self, q: &Projection) -> bool {
        max_abs(&(&q.m * &self.m - &self.m)) <= tol::PROJ
    }

    pub fn approx_eq(&self, q: &Projection) -> bool {
        max_abs(&(&self.m - &q.m)) <= tol::PROJ
    }

    pub fn orthogonal(&self, q: &Projection) -> bool {
        max_abs(&(&self.m * &q.m)) <= tol::PROJ
    }

    pub fn complement(&self) -> Self {
        Self { alg: self.alg.clone(), m: self.alg.identity() - &self.m }
    }

    /// Sum of mutually orthogonal projections.
    pub fn orthogonal_sum<'a>(alg: &MatrixAlg, ps: impl IntoIterator<Item = &'a Projection>) -> Self {
        let mut m = alg.zero();
        for p in ps {
            m += &p.m;
        }
        Self { alg: alg.clone(), m }
    }

    pub fn as_obs(&self) -> HermObs {
        HermObs { alg: self.alg.clone(), m: self.m.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian_and_off_block() {
        let alg = MatrixAlg::full(2);
        let m = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(HermObs::new(alg, m), Err(CstarError::NotHermitian { .. })));
        let diag = MatrixAlg::diagonal(2);
        assert!(matches!(HermObs::new(diag, pauli_x()), Err(CstarError::NotInAlgebra)));
    }

    #[test]
    fn projection_order() {
        let alg = MatrixAlg::full(2);
        let e0 = Projection::new(alg.clone(), HermObs::from_real_diag(alg.clone(), &[1., 0.]).unwrap().matrix().clone())
            .unwrap();
        let one = Projection::identity(&alg);
        assert!(e0.leq(&one));
        assert!(!one.leq(&e0));
        assert!(e0.orthogonal(&e0.complement()));
        assert_eq!(e0.rank(), 1);
    }
}
