//! Seeded random matrices for tests, benches and the randomized suites.

use rand::Rng;

use super::matrix::{c, CMat, HermObs, Projection};
use super::{Context, MatrixAlg};

pub fn random_complex_matrix<R: Rng>(rng: &mut R, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// A Hermitian element of `M_n` with entries of order one.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> HermObs {
    let m = random_complex_matrix(rng, n);
    HermObs::new(MatrixAlg::full(n), (&m + m.adjoint()).scale(0.5)).expect("hermitian by construction")
}

/// A unitary from the QR decomposition of a random matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    loop {
        let m = random_complex_matrix(rng, n);
        let qr = m.qr();
        let r = qr.r();
        if (0..n).all(|i| r[(i, i)].norm() > 1e-6) {
            return qr.q();
        }
    }
}

/// A context of `M_n` with `k` atoms: a random orthonormal basis cut into
/// `k` consecutive nonempty groups.
pub fn random_context<R: Rng>(rng: &mut R, n: usize, k: usize) -> Context {
    assert!((1..=n).contains(&k));
    let u = random_unitary(rng, n);
    let mut cuts: Vec<usize> = (1..n).collect();
    while cuts.len() > k - 1 {
        let i = rng.random_range(0..cuts.len());
        cuts.remove(i);
    }
    cuts.push(n);
    let alg = MatrixAlg::full(n);
    let mut start = 0;
    let atoms = cuts
        .into_iter()
        .map(|end| {
            let v = u.columns(start, end - start).into_owned();
            start = end;
            Projection::onto(&alg, &v).expect("orthonormal columns")
        })
        .collect();
    Context::new(alg, atoms).expect("partition of unity")
}

/// A context that refines `c` by splitting each atom's range with a random
/// unitary and grouping the pieces at random.
pub fn random_refinement<R: Rng>(rng: &mut R, ctx: &Context) -> Context {
    let alg = ctx.algebra().clone();
    let mut atoms = Vec::new();
    for i in 0..ctx.len() {
        let basis = ctx.basis(i);
        let r = basis.ncols();
        let u = random_unitary(rng, r);
        let rotated = basis * u;
        let mut start = 0;
        while start < r {
            let len = rng.random_range(1..=r - start);
            let v = rotated.columns(start, len).into_owned();
            atoms.push(Projection::onto(&alg, &v).expect("orthonormal columns"));
            start += len;
        }
    }
    Context::new(alg, atoms).expect("refinement is a partition of unity")
}

/// A density matrix `m m* / tr(m m*)`, optionally of reduced rank.
pub fn random_density<R: Rng>(rng: &mut R, n: usize, rank: usize) -> CMat {
    let m = CMat::from_fn(n, rank.max(1), |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let rho = &m * m.adjoint();
    let t = rho.trace().re;
    rho.unscale(t)
}
