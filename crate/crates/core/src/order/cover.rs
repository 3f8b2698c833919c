use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::frame::FrameElems;
use super::lattice::FinLattice;
use super::OrderError;

type CoverFn = dyn Fn(&FinLattice, usize, &FixedBitSet) -> bool + Send + Sync;

/// A covering relation `x ◁ U` on a finite meet-semilattice.
#[derive(Clone)]
pub struct CoverRel {
    base: Arc<FinLattice>,
    name: String,
    pred: Arc<CoverFn>,
}

impl fmt::Debug for CoverRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoverRel").field("name", &self.name).field("base_len", &self.base.len()).finish()
    }
}

impl CoverRel {
    pub fn new(
        base: Arc<FinLattice>,
        name: impl Into<String>,
        pred: impl Fn(&FinLattice, usize, &FixedBitSet) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self { base, name: name.into(), pred: Arc::new(pred) }
    }

    /// `x ◁ U` iff `x ∈ ↓U`.
    pub fn trivial(base: Arc<FinLattice>) -> Self {
        Self::new(base, "trivial", |l, x, u| u.ones().any(|y| l.leq(x, y)))
    }

    /// `x ◁ U` iff `x ≤ ⋁U`.
    pub fn join_cover(base: Arc<FinLattice>) -> Self {
        Self::new(base, "join", |l, x, u| l.leq(x, l.join_all(u.ones())))
    }

    pub fn base(&self) -> &FinLattice {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FinLattice> {
        &self.base
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn covers(&self, x: usize, u: &FixedBitSet) -> bool {
        (self.pred)(&self.base, x, u)
    }

    /// `V ◁ W`: every member of `V` is covered by `W`.
    pub fn covers_all(&self, v: &FixedBitSet, w: &FixedBitSet) -> bool {
        v.ones().all(|x| self.covers(x, w))
    }

    /// `Ū = {x | x ◁ U}`, iterated until stable.
    pub fn closure(&self, u: &FixedBitSet) -> FixedBitSet {
        let n = self.base.len();
        let mut cur = u.clone();
        loop {
            let mut next = FixedBitSet::with_capacity(n);
            for x in 0..n {
                if self.covers(x, &cur) {
                    next.insert(x);
                }
            }
            next.union_with(&cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn is_closed(&self, u: &FixedBitSet) -> bool {
        (0..self.base.len()).all(|x| u.contains(x) || !self.covers(x, u))
    }

    /// `U ∧ V = {u ∧ v | u ∈ U, v ∈ V}`
    pub fn meet_sets(&self, u: &FixedBitSet, v: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.base.len());
        for a in u.ones() {
            for b in v.ones() {
                out.insert(self.base.meet(a, b));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverAxiom {
    /// `x ∈ U ⟹ x ◁ U`
    Reflexivity,
    /// `x ◁ U, U ◁ V ⟹ x ◁ V`
    Transitivity,
    /// `x ◁ U ⟹ x ∧ y ◁ U`
    MeetStability,
    /// `x ∈ U, x ∈ V ⟹ x ◁ U ∧ V`
    Localization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverViolation {
    pub axiom: CoverAxiom,
    pub x: usize,
    pub y: Option<usize>,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub exhaustive: bool,
    pub subsets_checked: usize,
    pub violations: Vec<CoverViolation>,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CoverCheckOptions {
    /// Enumerate all subsets when the base has at most this many elements.
    pub exhaustive_max: usize,
    /// Pairs `(U, V)` for localization are exhaustive up to this size.
    pub pair_exhaustive_max: usize,
    /// Random subsets drawn otherwise.
    pub samples: usize,
    pub seed: u64,
    /// Stop after collecting this many violations.
    pub max_violations: usize,
}

impl Default for CoverCheckOptions {
    fn default() -> Self {
        Self { exhaustive_max: 12, pair_exhaustive_max: 8, samples: 2048, seed: 0, max_violations: 16 }
    }
}

fn mask_to_set(n: usize, m: u64) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for i in 0..n {
        if m >> i & 1 == 1 {
            s.insert(i);
        }
    }
    s
}

fn set_to_mask(s: &FixedBitSet) -> u64 {
    s.ones().fold(0, |m, i| m | 1 << i)
}

fn random_set(rng: &mut ChaCha8Rng, n: usize, within: Option<&FixedBitSet>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    let density: f64 = rng.random_range(0.05..0.6);
    for i in 0..n {
        if within.is_none_or(|w| w.contains(i)) && rng.random_bool(density) {
            s.insert(i);
        }
    }
    s
}

/// Checks the four covering axioms, exhaustively on small bases and by
/// random subsets otherwise.
pub fn validate_cover(c: &CoverRel, opts: &CoverCheckOptions) -> CoverReport {
    let n = c.base().len();
    if n <= opts.exhaustive_max && n < 64 {
        validate_exhaustive(c, opts)
    } else {
        validate_sampled(c, opts)
    }
}

fn validate_exhaustive(c: &CoverRel, opts: &CoverCheckOptions) -> CoverReport {
    let l = c.base();
    let n = l.len();
    let total = 1usize << n;
    let sets: Vec<FixedBitSet> = (0..total as u64).map(|m| mask_to_set(n, m)).collect();
    let cov: Vec<u64> = sets.iter().map(|u| (0..n).filter(|&x| c.covers(x, u)).fold(0, |m, x| m | 1 << x)).collect();
    let mut violations = Vec::new();
    let full = |v: &Vec<CoverViolation>| v.len() >= opts.max_violations;
    let members = |m: u64| (0..n).filter(move |i| m >> i & 1 == 1).collect::<Vec<_>>();

    for (um, &cu) in cov.iter().enumerate() {
        let um = um as u64;
        // (a)
        if um & !cu != 0 && !full(&violations) {
            let x = (um & !cu).trailing_zeros() as usize;
            violations.push(CoverViolation { axiom: CoverAxiom::Reflexivity, x, y: None, u: members(um), v: vec![] });
        }
        // (c)
        for x in (0..n).filter(|x| cu >> x & 1 == 1) {
            for y in 0..n {
                let xy = l.meet(x, y);
                if cu >> xy & 1 == 0 && !full(&violations) {
                    violations.push(CoverViolation {
                        axiom: CoverAxiom::MeetStability,
                        x,
                        y: Some(y),
                        u: members(um),
                        v: vec![],
                    });
                }
            }
        }
    }
    // (b): for every V, each U ⊆ cov(V) must have cov(U) ⊆ cov(V)
    for (vm, &cv) in cov.iter().enumerate() {
        let mut sub = cv;
        loop {
            let cu = cov[sub as usize];
            if cu & !cv != 0 && !full(&violations) {
                let x = (cu & !cv).trailing_zeros() as usize;
                violations.push(CoverViolation {
                    axiom: CoverAxiom::Transitivity,
                    x,
                    y: None,
                    u: members(sub),
                    v: members(vm as u64),
                });
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & cv;
        }
    }
    // (d)
    let pair_sets: Vec<u64> = if n <= opts.pair_exhaustive_max {
        (0..total as u64).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.samples.min(total)).map(|_| rng.random_range(0..total as u64)).collect()
    };
    for &um in &pair_sets {
        for &vm in &pair_sets {
            let common = um & vm;
            if common == 0 {
                continue;
            }
            let uv = set_to_mask(&c.meet_sets(&sets[um as usize], &sets[vm as usize]));
            let cuv = cov[uv as usize];
            if common & !cuv != 0 && !full(&violations) {
                violations.push(CoverViolation {
                    axiom: CoverAxiom::Localization,
                    x: (common & !cuv).trailing_zeros() as usize,
                    y: None,
                    u: members(um),
                    v: members(vm),
                });
            }
        }
    }
    CoverReport { exhaustive: true, subsets_checked: total, violations }
}

fn validate_sampled(c: &CoverRel, opts: &CoverCheckOptions) -> CoverReport {
    let l = c.base();
    let n = l.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut violations = Vec::new();
    let push = |v: &mut Vec<CoverViolation>, viol: CoverViolation| {
        if v.len() < opts.max_violations {
            v.push(viol);
        }
    };
    for _ in 0..opts.samples {
        let u = random_set(&mut rng, n, None);
        let v = random_set(&mut rng, n, None);
        let cu: Vec<usize> = (0..n).filter(|&x| c.covers(x, &u)).collect();
        let list = |s: &FixedBitSet| s.ones().collect::<Vec<_>>();
        if let Some(x) = u.ones().find(|&x| !cu.contains(&x)) {
            push(&mut violations, CoverViolation { axiom: CoverAxiom::Reflexivity, x, y: None, u: list(&u), v: vec![] });
        }
        for &x in &cu {
            let y = rng.random_range(0..n);
            if !c.covers(l.meet(x, y), &u) {
                push(&mut violations, CoverViolation {
                    axiom: CoverAxiom::MeetStability,
                    x,
                    y: Some(y),
                    u: list(&u),
                    v: vec![],
                });
            }
        }
        // transitivity against a subset of the cover of v
        let mut cv = FixedBitSet::with_capacity(n);
        for x in 0..n {
            if c.covers(x, &v) {
                cv.insert(x);
            }
        }
        let w = random_set(&mut rng, n, Some(&cv));
        if let Some(x) = (0..n).find(|&x| c.covers(x, &w) && !cv.contains(x)) {
            push(&mut violations, CoverViolation {
                axiom: CoverAxiom::Transitivity,
                x,
                y: None,
                u: list(&w),
                v: list(&v),
            });
        }
        let mut common = u.clone();
        common.intersect_with(&v);
        let uv = c.meet_sets(&u, &v);
        if let Some(x) = common.ones().find(|&x| !c.covers(x, &uv)) {
            push(&mut violations, CoverViolation { axiom: CoverAxiom::Localization, x, y: None, u: list(&u), v: list(&v) });
        }
    }
    CoverReport { exhaustive: false, subsets_checked: opts.samples, violations }
}

/// The frame of closed downsets of a covering relation, together with the
/// canonical map `i(x) = closure(↓x)`.
#[derive(Clone, Debug)]
pub struct FreeFrame {
    cover: CoverRel,
    frame: FrameElems,
    inclusion: Vec<usize>,
}

impl FreeFrame {
    pub fn cover(&self) -> &CoverRel {
        &self.cover
    }

    pub fn frame(&self) -> &FrameElems {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    /// Index in the frame of `i(x)`.
    pub fn include(&self, x: usize) -> usize {
        self.inclusion[x]
    }

    /// Index of the closure of an arbitrary subset of the base.
    pub fn close(&self, s: &FixedBitSet) -> usize {
        let c = self.cover.closure(s);
        self.frame.index_of(&c).expect("closure lands in the carrier")
    }
}

/// Builds `F(L, ◁)`: all downsets `U` with `x ◁ U ⟹ x ∈ U`. The cover is
/// assumed to satisfy the axioms (see [`validate_cover`]).
pub fn free_frame(c: &CoverRel, cap: usize) -> Result<FreeFrame, OrderError> {
    let l = c.base();
    let mut carrier = Vec::new();
    l.poset()
        .for_each_down_set(cap, |d| {
            if c.is_closed(d) {
                carrier.push(d.clone());
            }
        })
        .map_err(|cap| OrderError::CapExceeded { cap })?;
    let frame = FrameElems::new(l.len(), carrier);
    let inclusion = (0..l.len())
        .map(|x| {
            let closed = c.closure(l.poset().down_set(x));
            frame.index_of(&closed).ok_or(OrderError::ClosureNotIdempotent(x))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FreeFrame { cover: c.clone(), frame, inclusion })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContinuityAxiom {
    /// `f*(L)` covers the whole target
    Surjective,
    /// `f*(x) ∧ f*(y) ◀ f*(x ∧ y)`
    Meets,
    /// `x ◁ U ⟹ f*(x) ◀ f*(U)`
    Covers,
}

/// The frame map `U ↦ closure(f*(U))` induced by a continuous map.
#[derive(Clone, Debug)]
pub struct FrameMorphism {
    pub src: FreeFrame,
    pub dst: FreeFrame,
    pub map: Vec<usize>,
}

impl FrameMorphism {
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Checks top, bottom, binary meets and binary joins, which on a finite
    /// carrier covers all finite meets and all joins.
    pub fn check_laws(&self) -> Result<(), String> {
        let (s, d) = (self.src.frame(), self.dst.frame());
        if self.map[s.top()] != d.top() {
            return Err("top not preserved".into());
        }
        if self.map[s.bottom()] != d.bottom() {
            return Err("bottom not preserved".into());
        }
        for i in 0..s.len() {
            for j in 0..s.len() {
                if self.map[s.meet(i, j)] != d.meet(self.map[i], self.map[j]) {
                    return Err(format!("meet of {i},{j} not preserved"));
                }
                if self.map[s.join(i, j)] != d.join(self.map[i], self.map[j]) {
                    return Err(format!("join of {i},{j} not preserved"));
                }
            }
        }
        Ok(())
    }
}

fn image(f_star: &[FixedBitSet], m: usize, u: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(m);
    for x in u.ones() {
        out.union_with(&f_star[x]);
    }
    out
}

/// Checks that `f_star: L → P(M)` is a continuous map `(M, ◀) → (L, ◁)` and
/// returns the induced frame morphism `F(L, ◁) → F(M, ◀)`.
pub fn frame_morphism_from_continuous(
    f_star: &[FixedBitSet],
    src: &CoverRel,
    dst: &CoverRel,
    opts: &CoverCheckOptions,
    cap: usize,
) -> Result<FrameMorphism, OrderError> {
    let l = src.base();
    let m = dst.base();
    let (nl, nm) = (l.len(), m.len());
    if f_star.len() != nl {
        return Err(OrderError::Shape(format!("f* has {} entries, base has {nl}", f_star.len())));
    }
    let all_l = crate::order::poset::set_from(nl, 0..nl);
    let img_all = image(f_star, nm, &all_l);
    if let Some(y) = (0..nm).find(|&y| !dst.covers(y, &img_all)) {
        return Err(OrderError::NotContinuous { axiom: ContinuityAxiom::Surjective, witness: format!("target element {y}") });
    }
    for x in 0..nl {
        for y in 0..nl {
            let lhs = dst.meet_sets(&f_star[x], &f_star[y]);
            if !dst.covers_all(&lhs, &f_star[l.meet(x, y)]) {
                return Err(OrderError::NotContinuous { axiom: ContinuityAxiom::Meets, witness: format!("x={x}, y={y}") });
            }
        }
    }
    let check_cover = |u: &FixedBitSet| -> Result<(), OrderError> {
        let iu = image(f_star, nm, u);
        for x in 0..nl {
            if src.covers(x, u) && !dst.covers_all(&f_star[x], &iu) {
                let members: Vec<usize> = u.ones().collect();
                return Err(OrderError::NotContinuous {
                    axiom: ContinuityAxiom::Covers,
                    witness: format!("x={x}, U={members:?}"),
                });
            }
        }
        Ok(())
    };
    if nl <= opts.exhaustive_max && nl < 64 {
        for um in 0..(1u64 << nl) {
            check_cover(&mask_to_set(nl, um))?;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.samples {
            check_cover(&random_set(&mut rng, nl, None))?;
        }
    }
    let src_frame = free_frame(src, cap)?;
    let dst_frame = free_frame(dst, cap)?;
    let map = src_frame
        .frame()
        .elements()
        .iter()
        .map(|u| dst_frame.close(&image(f_star, nm, u)))
        .collect();
    Ok(FrameMorphism { src: src_frame, dst: dst_frame, map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::poset::set_from;
    use crate::order::BoolAlg;

    fn b(k: usize) -> Arc<FinLattice> {
        Arc::new(BoolAlg::new(k).to_lattice())
    }

    #[test]
    fn standard_covers_pass() {
        let opts = CoverCheckOptions::default();
        assert!(validate_cover(&CoverRel::trivial(b(2)), &opts).passed());
        assert!(validate_cover(&CoverRel::join_cover(b(2)), &opts).passed());
        assert!(validate_cover(&CoverRel::join_cover(Arc::new(FinLattice::diamond())), &opts).passed());
        assert!(validate_cover(&CoverRel::join_cover(Arc::new(FinLattice::chain(4))), &opts).passed());
    }

    #[test]
    fn broken_meet_stability_is_reported() {
        // x ◁ U iff x ∈ U: reflexive and transitive but not stable under meets
        let c = CoverRel::new(b(2), "membership", |_, x, u| u.contains(x));
        let r = validate_cover(&c, &CoverCheckOptions::default());
        assert!(!r.passed());
        let v = r.violations.iter().find(|v| v.axiom == CoverAxiom::MeetStability).unwrap();
        let l = c.base();
        let u = set_from(l.len(), v.u.iter().copied());
        assert!(c.covers(v.x, &u));
        assert!(!c.covers(l.meet(v.x, v.y.unwrap()), &u));
    }

    #[test]
    fn sampled_mode_catches_reflexivity_failure() {
        let big = Arc::new(FinLattice::chain(20));
        let c = CoverRel::new(big, "never", |_, _, _| false);
        let r = validate_cover(&c, &CoverCheckOptions::default());
        assert!(!r.exhaustive);
        assert!(r.violations.iter().any(|v| v.axiom == CoverAxiom::Reflexivity));
        let ok = CoverRel::join_cover(Arc::new(FinLattice::chain(20)));
        assert!(validate_cover(&ok, &CoverCheckOptions::default()).passed());
    }

    #[test]
    fn trivial_cover_gives_all_downsets() {
        let l = b(2);
        let f = free_frame(&CoverRel::trivial(l.clone()), 1 << 20).unwrap();
        assert_eq!(f.len(), l.poset().down_sets(1 << 20).unwrap().len());
    }

    #[test]
    fn closure_operator_laws() {
        let c = CoverRel::join_cover(b(3));
        let n = 8;
        for um in 0..(1u64 << n) {
            let u = mask_to_set(n, um);
            let cu = c.closure(&u);
            assert!(u.is_subset(&cu));
            assert_eq!(c.closure(&cu), cu);
            for vm in 0..(1u64 << n) {
                if um & !vm == 0 {
                    assert!(cu.is_subset(&c.closure(&mask_to_set(n, vm))));
                }
            }
        }
    }

    #[test]
    fn identity_continuous_map() {
        let c = CoverRel::join_cover(b(2));
        let f: Vec<FixedBitSet> = (0..4).map(|x| set_from(4, [x])).collect();
        let m = frame_morphism_from_continuous(&f, &c, &c, &CoverCheckOptions::default(), 1 << 20).unwrap();
        m.check_laws().unwrap();
        for i in 0..m.src.len() {
            assert_eq!(m.apply(i), i);
        }
    }

    #[test]
    fn constant_to_top_map() {
        // L a 3-chain, M = {0 < 1}; nonzero elements go to {1}
        let l = Arc::new(FinLattice::chain(3));
        let two = Arc::new(FinLattice::chain(2));
        let src = CoverRel::join_cover(l);
        let dst = CoverRel::join_cover(two);
        let f: Vec<FixedBitSet> = (0..3).map(|x| if x == 0 { set_from(2, []) } else { set_from(2, [1]) }).collect();
        let m = frame_morphism_from_continuous(&f, &src, &dst, &CoverCheckOptions::default(), 1 << 20).unwrap();
        m.check_laws().unwrap();
        let (s, d) = (m.src.frame(), m.dst.frame());
        for i in 0..s.len() {
            let expected = if i == s.bottom() { d.bottom() } else { d.top() };
            assert_eq!(m.apply(i), expected);
        }
    }

    #[test]
    fn non_continuous_map_is_rejected() {
        let src = CoverRel::join_cover(b(2));
        let dst = CoverRel::join_cover(Arc::new(FinLattice::chain(2)));
        // everything to {1}, including bottom: violates the cover condition at x = 0, U = ∅
        let f: Vec<FixedBitSet> = (0..4).map(|_| set_from(2, [1])).collect();
        let err = frame_morphism_from_continuous(&f, &src, &dst, &CoverCheckOptions::default(), 1 << 20).unwrap_err();
        assert!(matches!(err, OrderError::NotContinuous { .. }));
    }
}
