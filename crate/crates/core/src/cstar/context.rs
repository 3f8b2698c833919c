use super::eig::{eigenspaces, herm_eig};
use super::matrix::{c, max_abs, CMat, HermObs, Projection};
use super::{CstarError, MatrixAlg};
use crate::order::{full_mask, BoolAlg, FrameElems};
use crate::tol;

/// A commutative subalgebra, given by its minimal projections: mutually
/// orthogonal, nonzero, summing to the identity.
#[derive(Clone, Debug)]
pub struct Context {
    alg: MatrixAlg,
    atoms: Vec<Projection>,
    bases: Vec<CMat>,
    name: Option<String>,
}

impl Context {
    pub fn new(alg: MatrixAlg, atoms: Vec<Projection>) -> Result<Self, CstarError> {
        if atoms.is_empty() || atoms.len() > 64 {
            return Err(CstarError::InvalidContext(format!("{} atoms; need 1..=64", atoms.len())));
        }
        let mut sum = alg.zero();
        for (i, p) in atoms.iter().enumerate() {
            if p.algebra() != &alg {
                return Err(CstarError::IncompatibleAlgebras);
            }
            if p.is_zero() {
                return Err(CstarError::InvalidContext(format!("atom {i} is zero")));
            }
            for (j, q) in atoms.iter().enumerate().skip(i + 1) {
                if !p.orthogonal(q) {
                    return Err(CstarError::InvalidContext(format!("atoms {i} and {j} are not orthogonal")));
                }
            }
            sum += p.matrix();
        }
        if max_abs(&(sum - alg.identity())) > tol::PROJ {
            return Err(CstarError::InvalidContext("atoms do not sum to the identity".into()));
        }
        let bases = atoms
            .iter()
            .map(|p| {
                let spaces = eigenspaces(&p.as_obs());
                let mut cols: Vec<CMat> = Vec::new();
                for (l, v) in spaces {
                    if l > 0.5 {
                        cols.push(v);
                    }
                }
                let r: usize = cols.iter().map(|v| v.ncols()).sum();
                let mut out = CMat::zeros(alg.total_dim(), r);
                let mut k = 0;
                for v in cols {
                    out.columns_mut(k, v.ncols()).copy_from(&v);
                    k += v.ncols();
                }
                out
            })
            .collect();
        Ok(Self { alg, atoms, bases, name: None })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// `ℂ·1`
    pub fn trivial(alg: &MatrixAlg) -> Self {
        Self::new(alg.clone(), vec![Projection::identity(alg)]).expect("identity").named("ℂ")
    }

    /// Coordinate projections grouped by a set partition of `0..dim`.
    pub fn from_partition(alg: &MatrixAlg, parts: &[Vec<usize>]) -> Result<Self, CstarError> {
        let n = alg.total_dim();
        let mut seen = vec![false; n];
        let mut atoms = Vec::new();
        for part in parts {
            let mut m = alg.zero();
            for &i in part {
                if i >= n || seen[i] {
                    return Err(CstarError::InvalidContext(format!("index {i} is out of range or repeated")));
                }
                seen[i] = true;
                m[(i, i)] = c(1.0, 0.0);
            }
            atoms.push(Projection::new(alg.clone(), m)?);
        }
        if seen.iter().any(|s| !s) {
            return Err(CstarError::InvalidContext("partition does not cover every index".into()));
        }
        Ok(Self::new(alg.clone(), atoms)?.named(partition_name(parts)))
    }

    pub fn algebra(&self) -> &MatrixAlg {
        &self.alg
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn atoms(&self) -> &[Projection] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Projection {
        &self.atoms[i]
    }

    /// Orthonormal basis of the range of atom `i`, as columns.
    pub fn basis(&self, i: usize) -> &CMat {
        &self.bases[i]
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn bool_alg(&self) -> BoolAlg {
        BoolAlg::new(self.len())
    }

    pub fn full_mask(&self) -> u64 {
        full_mask(self.len())
    }

    /// The projection `Σ_{i ∈ m} p_i`.
    pub fn proj_of_mask(&self, m: u64) -> Projection {
        Projection::orthogonal_sum(&self.alg, (0..self.len()).filter(|&i| m >> i & 1 == 1).map(|i| &self.atoms[i]))
    }

    /// Atom coordinates of a projection of this context.
    pub fn mask_of_proj(&self, p: &Projection) -> Result<u64, CstarError> {
        let mut m = 0u64;
        for (i, a) in self.atoms.iter().enumerate() {
            if a.leq(p) {
                m |= 1 << i;
            } else if !a.orthogonal(p) {
                return Err(CstarError::NotInContext(format!("projection neither contains nor avoids atom {i}")));
            }
        }
        if !self.proj_of_mask(m).approx_eq(p) {
            return Err(CstarError::NotInContext("projection is not a sum of atoms".into()));
        }
        Ok(m)
    }

    /// Coordinates `λ_i` with `a = Σ λ_i p_i`.
    pub fn coords_of_obs(&self, a: &HermObs) -> Result<Vec<f64>, CstarError> {
        if a.algebra() != &self.alg {
            return Err(CstarError::IncompatibleAlgebras);
        }
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let ap = a.matrix() * p.matrix();
                let lambda = ap.trace().re / p.rank() as f64;
                if max_abs(&(&ap - p.matrix().scale(lambda))) > tol::PROJ.max(tol::PROJ * lambda.abs()) * 10.0
                    || max_abs(&(p.matrix() * a.matrix() - &ap)) > tol::PROJ * 10.0
                {
                    return Err(CstarError::NotInContext(format!("observable is not constant on atom {i}")));
                }
                Ok(lambda)
            })
            .collect()
    }

    pub fn contains_obs(&self, a: &HermObs) -> bool {
        self.coords_of_obs(a).is_ok()
    }

    pub fn obs_of_coords(&self, lambda: &[f64]) -> HermObs {
        let mut m = self.alg.zero();
        for (p, &l) in self.atoms.iter().zip(lambda) {
            m += p.matrix().scale(l);
        }
        HermObs::new(self.alg.clone(), m).expect("real combination of projections")
    }

    /// When `self` refines `coarse`, the mask of fine atoms under each coarse atom.
    pub fn refinement_of(&self, coarse: &Context) -> Option<Vec<u64>> {
        if self.alg != coarse.alg {
            return None;
        }
        let mut images = vec![0u64; coarse.len()];
        for (j, q) in self.atoms.iter().enumerate() {
            let i = coarse.atoms.iter().position(|p| q.leq(p))?;
            images[i] |= 1 << j;
        }
        images.iter().all(|&m| m != 0).then_some(images)
    }

    /// Equal as sets of atoms.
    pub fn same_atoms(&self, other: &Context) -> bool {
        self.len() == other.len() && self.atoms.iter().all(|p| other.atoms.iter().any(|q| p.approx_eq(q)))
    }
}

fn partition_name(parts: &[Vec<usize>]) -> String {
    parts
        .iter()
        .map(|p| format!("{{{}}}", p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
        .collect()
}

/// The context generated by `a` and `1`: the spectral projections of `a`.
pub fn context_from_obs(a: &HermObs) -> Context {
    let atoms = herm_eig(a).into_iter().map(|(_, p)| p).collect();
    Context::new(a.algebra().clone(), atoms).expect("spectral projections form a partition of unity")
}

/// `p(x,y,z) = ½ [[1+x, y+iz], [y−iz, 1−x]]`
pub fn bloch_projection(x: f64, y: f64, z: f64) -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0 + x, 0.0), c(y, z), c(y, -z), c(1.0 - x, 0.0)]).scale(0.5)
}

/// The two-atom context `{p(x,y,z), p(−x,−y,−z)}` of `M_2`.
pub fn bloch_context(x: f64, y: f64, z: f64) -> Result<Context, CstarError> {
    let r2 = x * x + y * y + z * z;
    if (r2 - 1.0).abs() > 1e-9 {
        return Err(CstarError::NotOnSphere(r2.sqrt()));
    }
    let r = r2.sqrt();
    let (x, y, z) = (x / r, y / r, z / r);
    let alg = MatrixAlg::full(2);
    let p = Projection::new(alg.clone(), bloch_projection(x, y, z))?;
    let q = Projection::new(alg.clone(), bloch_projection(-x, -y, -z))?;
    Context::new(alg, vec![p, q])
}

/// The context of `σ_z`, `σ_x` or `σ_y` in `M_2`, named `C_z` and so on.
pub fn pauli_context(axis: char) -> Context {
    let (x, y, z) = match axis {
        'z' => (1.0, 0.0, 0.0),
        'x' => (0.0, 1.0, 0.0),
        'y' => (0.0, 0.0, -1.0),
        _ => panic!("axis must be x, y or z"),
    };
    let ctx = bloch_context(x, y, z).expect("unit vector");
    ctx.named(format!("C_{axis}"))
}

/// All set partitions of `0..n`, as restricted growth strings in
/// lexicographic order.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, rgs: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
            let mut parts = vec![Vec::new(); blocks];
            for (k, &b) in rgs.iter().enumerate() {
                parts[b].push(k);
            }
            out.push(parts);
            return;
        }
        let limit = if i == 0 { 0 } else { max + 1 };
        for b in 0..=limit {
            rgs.push(b);
            rec(i + 1, n, rgs, max.max(b), out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// One context of `M_n` per set partition of the coordinates.
pub fn diagonal_contexts(n: usize) -> Vec<Context> {
    let alg = MatrixAlg::full(n);
    set_partitions(n).iter().map(|p| Context::from_partition(&alg, p).expect("partition")).collect()
}

/// `Y(k,n)`: sequences `0 < i_1 < … < i_k = n` whose gaps never grow,
/// in lexicographic order.
pub fn young_sequences(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, n: usize, prev: usize, gap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            if prev == n {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = k - cur.len();
        for next in prev + 1..=n {
            let g = next - prev;
            if g > gap {
                break;
            }
            // the last entry must land on n; the rest must leave room
            if (remaining == 1) != (next == n) {
                continue;
            }
            cur.push(next);
            rec(k, n, next, g, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k >= 1 && k <= n {
        rec(k, n, 0, usize::MAX, &mut Vec::new(), &mut out);
    }
    out
}

/// `D_a` in the lattice of the context: the atoms on which `a` is positive.
pub fn d_generator_mask(a: &HermObs, ctx: &Context) -> Result<u64, CstarError> {
    let coords = ctx.coords_of_obs(a)?;
    Ok(coords.iter().enumerate().filter(|(_, &l)| l > tol::EIG).fold(0, |m, (i, _)| m | 1 << i))
}

pub fn d_generator(a: &HermObs, ctx: &Context) -> Result<Projection, CstarError> {
    Ok(ctx.proj_of_mask(d_generator_mask(a, ctx)?))
}

/// The frame of ideals of `Proj(C) = 2^atoms`; element `m` of the Boolean
/// algebra corresponds to the principal ideal `↓m`.
pub fn gelfand_frame(ctx: &Context) -> Result<FrameElems, CstarError> {
    if ctx.len() > 12 {
        return Err(CstarError::Shape(format!("{} atoms is too many to materialize the ideal frame", ctx.len())));
    }
    let l = ctx.bool_alg().to_lattice();
    Ok(FrameElems::new(l.len(), l.ideals()))
}

/// `D_p ◁ U` iff `p ≤ ⋁U`, for projections given as atom masks.
pub fn gelfand_covers(p: u64, u: &[u64]) -> bool {
    let join = u.iter().fold(0, |a, &b| a | b);
    p & !join == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar::matrix::{pauli_x, pauli_z};

    fn close(a: &CMat, b: &CMat) -> bool {
        max_abs(&(a - b)) < 1e-12
    }

    #[test]
    fn context_of_sigma_z_and_identity() {
        let alg = MatrixAlg::full(2);
        let cz = context_from_obs(&HermObs::new(alg.clone(), pauli_z()).unwrap());
        assert!(cz.same_atoms(&pauli_context('z')));
        let one = context_from_obs(&HermObs::scalar(alg.clone(), 1.0));
        assert!(one.same_atoms(&Context::trivial(&alg)));
        let cx = context_from_obs(&HermObs::new(alg, pauli_x()).unwrap());
        assert!(cx.same_atoms(&pauli_context('x')));
    }

    #[test]
    fn bloch_formula() {
        let half = |a: f64, b: f64, d: f64, e: f64| CMat::from_row_slice(2, 2, &[c(a, 0.), c(b, 0.), c(d, 0.), c(e, 0.)]);
        let e = bloch_context(1., 0., 0.).unwrap();
        assert!(close(e.atom(0).matrix(), &half(1., 0., 0., 0.)));
        assert!(close(e.atom(1).matrix(), &half(0., 0., 0., 1.)));
        let f = bloch_context(0., 1., 0.).unwrap();
        assert!(close(f.atom(0).matrix(), &half(0.5, 0.5, 0.5, 0.5)));
        assert!(close(f.atom(1).matrix(), &half(0.5, -0.5, -0.5, 0.5)));
        assert!(bloch_context(0., 0., 1.).unwrap().same_atoms(&bloch_context(0., 0., -1.).unwrap()));
        assert!(matches!(bloch_context(1., 1., 0.), Err(CstarError::NotOnSphere(_))));
    }

    #[test]
    fn bell_numbers() {
        assert_eq!(diagonal_contexts(1).len(), 1);
        assert_eq!(diagonal_contexts(3).len(), 5);
        assert_eq!(diagonal_contexts(4).len(), 15);
        assert_eq!(set_partitions(5).len(), 52);
    }

    #[test]
    fn young() {
        for n in 1..=10 {
            assert_eq!(young_sequences(1, n), vec![vec![n]]);
        }
        assert_eq!(young_sequences(2, 2), vec![vec![1, 2]]);
        assert_eq!(young_sequences(2, 4), vec![vec![2, 4], vec![3, 4]]);
        for n in 1..=9 {
            for k in 1..=n {
                let brute = brute_young(k, n);
                assert_eq!(young_sequences(k, n), brute, "k={k} n={n}");
            }
        }
    }

    fn brute_young(k: usize, n: usize) -> Vec<Vec<usize>> {
        // all strictly increasing k-sequences in 1..=n ending at n, filtered
        let mut out = Vec::new();
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != k || mask >> (n - 1) & 1 == 0 {
                continue;
            }
            let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let mut prev = 0;
            let mut gap = usize::MAX;
            let mut ok = true;
            for &x in &s {
                if x - prev > gap {
                    ok = false;
                }
                gap = x - prev;
                prev = x;
            }
            if ok {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn refinement_and_coordinates() {
        let alg = MatrixAlg::full(3);
        let coarse = Context::from_partition(&alg, &[vec![0, 1], vec![2]]).unwrap();
        let fine = Context::from_partition(&alg, &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(fine.refinement_of(&coarse), Some(vec![0b011, 0b100]));
        assert_eq!(coarse.refinement_of(&fine), None);
        let a = HermObs::from_real_diag(alg, &[2., 2., -1.]).unwrap();
        assert_eq!(coarse.coords_of_obs(&a).unwrap(), vec![2., -1.]);
        assert_eq!(d_generator_mask(&a, &coarse).unwrap(), 0b01);
        assert_eq!(d_generator_mask(&a.scale(-1.0), &coarse).unwrap(), 0b10);
        let b = HermObs::from_real_diag(MatrixAlg::full(3), &[1., 2., 3.]).unwrap();
        assert!(matches!(coarse.coords_of_obs(&b), Err(CstarError::NotInContext(_))));
    }

    #[test]
    fn gelfand() {
        let alg = MatrixAlg::full(3);
        let fine = Context::from_partition(&alg, &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(gelfand_frame(&fine).unwrap().len(), 8);
        assert_eq!(gelfand_frame(&Context::trivial(&alg)).unwrap().len(), 2);
        assert!(gelfand_covers(0b011, &[0b001, 0b010]));
        assert!(!gelfand_covers(0b001, &[0b010]));
    }
}
