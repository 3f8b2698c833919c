use super::matrix::{max_abs, C64, CMat, HermObs, Projection};
use crate::tol;

/// Eigenvalues (ascending) and a unitary whose columns are matching
/// eigenvectors, by cyclic complex Jacobi rotations.
pub fn jacobi_eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    let mut a = a.clone();
    let mut v = CMat::identity(n, n);
    let scale = a.norm().max(1.0);
    for _ in 0..tol::JACOBI_MAX_SWEEPS {
        if off_norm(&a) < tol::JACOBI * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let vals = order.iter().map(|&i| diag[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, k| v[(r, order[k])]);
    (vals, vecs)
}

fn off_norm(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let e = apq / b;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * b);
    let t = if tau >= 0.0 { 1.0 } else { -1.0 } / (tau.abs() + (1.0 + tau * tau).sqrt());
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    // U = [[c, s], [-s·ē, c·ē]]
    let u00 = C64::new(cs, 0.0);
    let u01 = C64::new(sn, 0.0);
    let u10 = -e.conj() * sn;
    let u11 = e.conj() * cs;
    let n = a.nrows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * u00 + akq * u10;
        a[(k, q)] = akp * u01 + akq * u11;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = u00.conj() * apk + u10.conj() * aqk;
        a[(q, k)] = u01.conj() * apk + u11.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * u00 + vkq * u10;
        v[(k, q)] = vkp * u01 + vkq * u11;
    }
}

/// Distinct eigenvalues (ascending, clustered within `1e-8`) with an
/// orthonormal basis of each eigenspace.
pub fn eigenspaces(a: &HermObs) -> Vec<(f64, CMat)> {
    let (vals, vecs) = jacobi_eigh(a.matrix());
    let n = vals.len();
    let mut out: Vec<(f64, CMat)> = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || vals[k] - vals[k - 1] > tol::CLUSTER {
            let cols = vecs.columns(start, k - start).into_owned();
            let mean = vals[start..k].iter().sum::<f64>() / (k - start) as f64;
            out.push((mean, cols));
            start = k;
        }
    }
    out
}

/// Spectral decomposition `a = Σ λ_i P_i` with ascending `λ_i`.
pub fn herm_eig(a: &HermObs) -> Vec<(f64, Projection)> {
    eigenspaces(a)
        .into_iter()
        .map(|(l, v)| (l, Projection::new_unchecked(a.algebra().clone(), &v * v.adjoint())))
        .collect()
}

fn spectral_sum(a: &HermObs, keep: impl Fn(f64) -> bool) -> Projection {
    let mut m = a.algebra().zero();
    for (l, v) in eigenspaces(a) {
        if keep(l) {
            m += &v * v.adjoint();
        }
    }
    Projection::new_unchecked(a.algebra().clone(), m)
}

/// `[a > 0]`: the spectral projection for eigenvalues above `tol`.
pub fn proj_pos_tol(a: &HermObs, tol: f64) -> Projection {
    spectral_sum(a, |l| l > tol)
}

pub fn proj_pos(a: &HermObs) -> Projection {
    proj_pos_tol(a, tol::EIG)
}

/// `[a = 0]`: the kernel projection.
pub fn proj_zero_tol(a: &HermObs, tol: f64) -> Projection {
    spectral_sum(a, |l| l.abs() <= tol)
}

pub fn proj_zero(a: &HermObs) -> Projection {
    proj_zero_tol(a, tol::EIG)
}

/// `a⁺`, the positive part.
pub fn pos_part(a: &HermObs) -> CMat {
    let mut m = a.algebra().zero();
    for (l, v) in eigenspaces(a) {
        if l > 0.0 {
            m += (&v * v.adjoint()).scale(l);
        }
    }
    m
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn eig_range(m: &CMat) -> (f64, f64) {
    let (vals, _) = jacobi_eigh(m);
    (vals[0], vals[vals.len() - 1])
}

/// `‖Σ λ_i P_i − a‖` entrywise.
pub fn reconstruction_residual(a: &HermObs) -> f64 {
    let mut m = a.algebra().zero();
    for (l, p) in herm_eig(a) {
        m += p.matrix().scale(l);
    }
    max_abs(&(m - a.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar::matrix::{pauli_x, pauli_z};
    use crate::cstar::random::random_hermitian;
    use crate::cstar::MatrixAlg;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diag_pm_one() {
        let a = HermObs::new(MatrixAlg::full(2), pauli_z()).unwrap();
        let eig = herm_eig(&a);
        assert_eq!(eig.len(), 2);
        assert!((eig[0].0 + 1.0).abs() < 1e-12 && (eig[1].0 - 1.0).abs() < 1e-12);
        assert!((eig[0].1.matrix()[(1, 1)].re - 1.0).abs() < 1e-12);
        assert!((eig[1].1.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        let pos = proj_pos(&a);
        assert!((pos.matrix()[(0, 0)].re - 1.0).abs() < 1e-12 && pos.matrix()[(1, 1)].norm() < 1e-12);
    }

    #[test]
    fn identity_is_one_eigenspace() {
        let a = HermObs::scalar(MatrixAlg::full(3), 1.0);
        let eig = herm_eig(&a);
        assert_eq!(eig.len(), 1);
        assert_eq!(eig[0].1.rank(), 3);
        assert!(proj_zero(&a).is_zero());
        let z = HermObs::scalar(MatrixAlg::full(3), 0.0);
        assert!(proj_zero(&z).approx_eq(&Projection::identity(z.algebra())));
    }

    #[test]
    fn kernel_of_diag_0_3() {
        let alg = MatrixAlg::full(2);
        let a = HermObs::from_real_diag(alg.clone(), &[0., 3.]).unwrap();
        let k = proj_zero(&a);
        assert!((k.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(max_abs(&(a.matrix() * k.matrix())) < 1e-8);
        let b = HermObs::from_real_diag(alg, &[1., 0.]).unwrap();
        assert!(max_abs(&(b.matrix() * k.matrix() - b.matrix())) < 1e-8);
    }

    #[test]
    fn sigma_x_eigenvectors() {
        let a = HermObs::new(MatrixAlg::full(2), pauli_x()).unwrap();
        let p = proj_pos(&a);
        for z in p.matrix().iter() {
            assert!((z.re - 0.5).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6 {
            for _ in 0..50 {
                let a = random_hermitian(&mut rng, n);
                assert!(reconstruction_residual(&a) < 1e-8);
                let eig = herm_eig(&a);
                let total: f64 = eig.iter().map(|(_, p)| p.rank() as f64).sum();
                assert_eq!(total as usize, n);
                for w in eig.windows(2) {
                    assert!(w[0].0 < w[1].0);
                }
            }
        }
    }

    #[test]
    fn degenerate_spectrum_clusters() {
        let alg = MatrixAlg::full(3);
        let a = HermObs::from_real_diag(alg, &[2., 2., -1.]).unwrap();
        let eig = herm_eig(&a);
        assert_eq!(eig.len(), 2);
        assert_eq!(eig[1].1.rank(), 2);
    }
}
