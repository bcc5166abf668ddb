//! Computational shadows of the duality between formulas and evaluation
//! families: root-label membership, the principal families generated by one
//! evaluation under `<=_n`, Heyting operations on membership predicates, the
//! evaluation morphism into downset algebras, and a bounded check of the
//! normal-form equation expressing `<=_{n+1}` through depth-`n` data.
//!
//! Families are represented intensionally by a membership procedure plus a
//! declared b-index; an optional generator list gives the finite-union form.

use std::sync::Arc;

use crate::evaluation::{equiv_n, leq_n, Evaluation, TypeStore};
use crate::poset::{LabelPoset, PosetError, RootedPoset};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualityError {
    #[error("label set {0:#x} is not downward closed")]
    NotDownwardClosed(u128),
    #[error("label posets differ")]
    LabelMismatch,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

type Membership = Arc<dyn Fn(&Evaluation) -> bool + Send + Sync>;

/// A family of evaluations over a fixed label poset, closed under restriction
/// and under `~_n` for the declared b-index `n`. Membership is a decision
/// procedure; the family itself is infinite.
#[derive(Clone)]
pub struct Subpresheaf {
    labels: Arc<LabelPoset>,
    b_index: u32,
    membership: Membership,
    generators: Option<Vec<Evaluation>>,
}

impl Subpresheaf {
    pub fn labels(&self) -> &Arc<LabelPoset> {
        &self.labels
    }

    pub fn b_index(&self) -> u32 {
        self.b_index
    }

    pub fn generators(&self) -> Option<&[Evaluation]> {
        self.generators.as_deref()
    }

    pub fn contains(&self, u: &Evaluation) -> bool {
        (self.membership)(u)
    }

    /// The family of evaluations whose root label lies in the downward-closed
    /// label set `d`; b-index 0.
    pub fn iota(labels: Arc<LabelPoset>, d: u128) -> Result<Subpresheaf, DualityError> {
        if !labels.is_downward_closed(d) {
            return Err(DualityError::NotDownwardClosed(d));
        }
        Ok(Subpresheaf {
            labels,
            b_index: 0,
            membership: Arc::new(move |u| d & (1 << u.root_label()) != 0),
            generators: None,
        })
    }

    pub fn everything(labels: Arc<LabelPoset>) -> Subpresheaf {
        let full = if labels.len() == 128 {
            !0
        } else {
            (1u128 << labels.len()) - 1
        };
        Subpresheaf::iota(labels, full).expect("full set is downward closed")
    }

    pub fn empty(labels: Arc<LabelPoset>) -> Subpresheaf {
        Subpresheaf::iota(labels, 0).expect("empty set is downward closed")
    }

    /// The least family with b-index `n` containing `u`: all `v <=_n u`.
    pub fn down_n(store: Arc<TypeStore>, u: Evaluation, n: u32) -> Subpresheaf {
        let labels = u.labels().clone();
        let gen = u.clone();
        Subpresheaf {
            labels,
            b_index: n,
            membership: Arc::new(move |v| leq_n(&store, v, &gen, n)),
            generators: Some(vec![u]),
        }
    }

    /// Finite union of principal families: membership is `exists i. v <=_n u_i`.
    pub fn from_generators(
        store: Arc<TypeStore>,
        n: u32,
        gens: Vec<Evaluation>,
    ) -> Result<Subpresheaf, DualityError> {
        let labels = match gens.first() {
            Some(g) => g.labels().clone(),
            None => return Err(DualityError::LabelMismatch),
        };
        if gens.iter().any(|g| g.labels() != &labels) {
            return Err(DualityError::LabelMismatch);
        }
        let closure_gens = gens.clone();
        Ok(Subpresheaf {
            labels,
            b_index: n,
            membership: Arc::new(move |v| closure_gens.iter().any(|g| leq_n(&store, v, g, n))),
            generators: Some(gens),
        })
    }

    pub fn union(&self, other: &Subpresheaf) -> Result<Subpresheaf, DualityError> {
        if self.labels != other.labels {
            return Err(DualityError::LabelMismatch);
        }
        let (a, b) = (self.membership.clone(), other.membership.clone());
        let generators = match (&self.generators, &other.generators) {
            (Some(x), Some(y)) if self.b_index == other.b_index => {
                Some(x.iter().chain(y).cloned().collect())
            }
            _ => None,
        };
        Ok(Subpresheaf {
            labels: self.labels.clone(),
            b_index: self.b_index.max(other.b_index),
            membership: Arc::new(move |u| a(u) || b(u)),
            generators,
        })
    }

    pub fn intersection(&self, other: &Subpresheaf) -> Result<Subpresheaf, DualityError> {
        if self.labels != other.labels {
            return Err(DualityError::LabelMismatch);
        }
        let (a, b) = (self.membership.clone(), other.membership.clone());
        Ok(Subpresheaf {
            labels: self.labels.clone(),
            b_index: self.b_index.max(other.b_index),
            membership: Arc::new(move |u| a(u) && b(u)),
            generators: None,
        })
    }
}

/// Heyting implication of families: `u` belongs iff every restriction of `u`
/// in `s` also lies in `t`. The b-index grows by one.
pub fn heyting_implies(s: &Subpresheaf, t: &Subpresheaf) -> Result<Subpresheaf, DualityError> {
    if s.labels != t.labels {
        return Err(DualityError::LabelMismatch);
    }
    let (ms, mt) = (s.membership.clone(), t.membership.clone());
    Ok(Subpresheaf {
        labels: s.labels.clone(),
        b_index: s.b_index.max(t.b_index) + 1,
        membership: Arc::new(move |u| {
            u.poset().points().all(|p| {
                let up = u.restrict(p);
                !ms(&up) || mt(&up)
            })
        }),
        generators: None,
    })
}

/// Does `u`'s root label lie in the downward-closed label set `d`?
pub fn iota_member(
    labels: &LabelPoset,
    d: u128,
    u: &Evaluation,
) -> Result<bool, DualityError> {
    if !labels.is_downward_closed(d) {
        return Err(DualityError::NotDownwardClosed(d));
    }
    Ok(d & (1 << u.root_label()) != 0)
}

/// `v <=_n u` (membership in the principal family of `u`).
pub fn down_n_member(store: &TypeStore, u: &Evaluation, n: u32, v: &Evaluation) -> bool {
    leq_n(store, v, u, n)
}

/// The evaluation morphism: for an order-preserving `f : M -> L` (given as an
/// evaluation) and a family `X`, the set `{ p in M : f_p in X }`, which is a
/// downset of `M` by restriction-closure of `X`.
pub fn ev_map(x: &Subpresheaf, f: &Evaluation) -> u128 {
    let mut mask = 0u128;
    for p in f.poset().points() {
        if x.contains(&f.restrict(p)) {
            mask |= 1 << p;
        }
    }
    debug_assert!(
        {
            let poset = f.poset();
            let mut ok = true;
            let mut rem = mask;
            while rem != 0 {
                let p = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                ok &= poset.below_mask(p) & !mask == 0;
            }
            ok
        },
        "ev image must be downward closed"
    );
    mask
}

/// Heyting implication in the downset algebra of a rooted poset.
pub fn downset_implies(poset: &RootedPoset, d1: u128, d2: u128) -> u128 {
    let bad = d1 & !d2;
    let mut m = 0u128;
    for p in poset.points() {
        if poset.below_mask(p) & bad == 0 {
            m |= 1 << p;
        }
    }
    m
}

/// Outcome of the bounded normal-form verification: for each pool element,
/// whether membership in `<=_{n+1} u` matched the right-hand side computed
/// from depth-`n` data over the representative universe. The verdict is
/// conditional on the universe containing enough `~_n` representatives.
#[derive(Debug, Clone)]
pub struct NformReport {
    pub pool_size: usize,
    pub mismatches: Vec<usize>,
}

impl NformReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Check `z <=_{n+1} u` against the intersection, over universe
/// representatives `v` inequivalent to every restriction of `u`, of the
/// families "below-`v` implies below-some-`w`-incomparable-to-`v`", for every
/// `z` in `pool`.
pub fn check_nform(
    store: &TypeStore,
    u: &Evaluation,
    n: u32,
    universe: &[Evaluation],
    pool: &[Evaluation],
) -> NformReport {
    // Universe members not ~_n-equivalent to any restriction of u.
    let u_restrictions: Vec<Evaluation> = u.poset().points().map(|p| u.restrict(p)).collect();
    let outside: Vec<&Evaluation> = universe
        .iter()
        .filter(|v| !u_restrictions.iter().any(|up| equiv_n(store, v, up, n)))
        .collect();
    let mut mismatches = Vec::new();
    for (zi, z) in pool.iter().enumerate() {
        let lhs = leq_n(store, z, u, n + 1);
        let rhs = outside.iter().all(|v| {
            // z in (down_n v -> union over w with not (v <=_n w) of down_n w)
            z.poset().points().all(|p| {
                let zp = z.restrict(p);
                if !leq_n(store, &zp, v, n) {
                    return true;
                }
                universe
                    .iter()
                    .any(|w| !leq_n(store, v, w, n) && leq_n(store, &zp, w, n))
            })
        });
        if lhs != rhs {
            mismatches.push(zi);
        }
    }
    NformReport {
        pool_size: pool.len(),
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::reduced_trees;
    use crate::poset::rooted_posets_up_to;

    fn two_evals_up_to(points: usize) -> (Arc<LabelPoset>, Vec<Evaluation>) {
        let two = Arc::new(LabelPoset::two());
        let mut out = Vec::new();
        for p in rooted_posets_up_to(points) {
            for d in p.downsets() {
                let map: Vec<usize> = p
                    .points()
                    .map(|q| if d & (1 << q) != 0 { 1 } else { 0 })
                    .collect();
                out.push(Evaluation::new(p.clone(), two.clone(), map).unwrap());
            }
        }
        (two, out)
    }

    #[test]
    fn iota_examples() {
        let (two, evals) = two_evals_up_to(3);
        let full = Subpresheaf::everything(two.clone());
        let empty = Subpresheaf::empty(two.clone());
        for e in &evals {
            assert!(full.contains(e));
            assert!(!empty.contains(e));
        }
        // d = {1} is not downward closed in TWO (1 <= 0 means below(1) = {1},
        // below(0) = {0,1}; the set {1} IS downward closed; {0} is not).
        assert!(Subpresheaf::iota(two.clone(), 0b10).is_ok());
        assert!(matches!(
            Subpresheaf::iota(two.clone(), 0b01),
            Err(DualityError::NotDownwardClosed(_))
        ));
        // u with root label 0 is not in iota({1})
        let i1 = Subpresheaf::iota(two.clone(), 0b10).unwrap();
        for e in &evals {
            assert_eq!(i1.contains(e), e.root_label() == 1);
        }
    }

    #[test]
    fn down_n_member_examples() {
        let store = Arc::new(TypeStore::new());
        let (_, evals) = two_evals_up_to(3);
        for e in &evals {
            assert!(down_n_member(&store, e, 1, e));
            assert!(down_n_member(&store, e, 2, e));
        }
    }

    #[test]
    fn constructed_families_are_restriction_and_equiv_closed() {
        let store = Arc::new(TypeStore::new());
        let (two, evals) = two_evals_up_to(3);
        let mut families: Vec<Subpresheaf> = Vec::new();
        for (i, g) in evals.iter().enumerate().step_by(3) {
            let n = (i % 3) as u32;
            families.push(Subpresheaf::down_n(store.clone(), g.clone(), n));
        }
        families.push(Subpresheaf::everything(two.clone()));
        let d0 = Subpresheaf::down_n(store.clone(), evals[0].clone(), 1);
        let d1 = Subpresheaf::down_n(store.clone(), evals[4].clone(), 1);
        families.push(d0.union(&d1).unwrap());
        families.push(d0.intersection(&d1).unwrap());
        families.push(heyting_implies(&d0, &d1).unwrap());

        for fam in &families {
            for e in &evals {
                if fam.contains(e) {
                    // restriction closure
                    for p in e.poset().points() {
                        assert!(fam.contains(&e.restrict(p)));
                    }
                    // ~_n closure at the declared b-index
                    for other in &evals {
                        if equiv_n(&store, e, other, fam.b_index()) {
                            assert!(fam.contains(other));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn heyting_implies_examples() {
        let store = Arc::new(TypeStore::new());
        let (two, evals) = two_evals_up_to(3);
        let s = Subpresheaf::down_n(store.clone(), evals[1].clone(), 1);
        let s_implies_s = heyting_implies(&s, &s).unwrap();
        let empty = Subpresheaf::empty(two.clone());
        let anything = heyting_implies(&empty, &s).unwrap();
        for e in &evals {
            assert!(s_implies_s.contains(e));
            assert!(anything.contains(e));
        }

        // (down_0 of constant-1) -> empty: exactly the evaluations never
        // touching label 1. Brute-force cross-check on all <= 3 point
        // evaluations.
        let single1 = {
            let p = Arc::new(crate::poset::RootedPoset::single());
            Evaluation::new(p, two.clone(), vec![1]).unwrap()
        };
        let ones = Subpresheaf::down_n(store.clone(), single1, 0);
        let none = heyting_implies(&ones, &empty).unwrap();
        for e in &evals {
            let touches_one = e.poset().points().any(|p| e.label_of(p) == 1);
            assert_eq!(none.contains(e), !touches_one);
        }
    }

    #[test]
    fn ev_map_commuting_triangle() {
        let store = Arc::new(TypeStore::new());
        let _ = store;
        let (two, evals) = two_evals_up_to(3);
        for f in &evals {
            for d in [0b00u128, 0b10, 0b11] {
                let x = Subpresheaf::iota(two.clone(), d).unwrap();
                let lhs = ev_map(&x, f);
                // D(f)(d) = { p : f(p) in d }
                let mut rhs = 0u128;
                for p in f.poset().points() {
                    if d & (1 << f.label_of(p)) != 0 {
                        rhs |= 1 << p;
                    }
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ev_map_is_heyting_morphism_on_fixtures() {
        let store = Arc::new(TypeStore::new());
        let (two, evals) = two_evals_up_to(3);
        let g0 = evals[1].clone();
        let g1 = evals[2].clone();
        let s = Subpresheaf::down_n(store.clone(), g0, 1);
        let t = Subpresheaf::down_n(store.clone(), g1, 1);
        let everything = Subpresheaf::everything(two.clone());
        let empty = Subpresheaf::empty(two.clone());
        for f in &evals {
            let poset = f.poset();
            let full = poset.full_mask();
            assert_eq!(ev_map(&everything, f), full);
            assert_eq!(ev_map(&empty, f), 0);
            assert_eq!(
                ev_map(&s.union(&t).unwrap(), f),
                ev_map(&s, f) | ev_map(&t, f)
            );
            assert_eq!(
                ev_map(&s.intersection(&t).unwrap(), f),
                ev_map(&s, f) & ev_map(&t, f)
            );
            assert_eq!(
                ev_map(&heyting_implies(&s, &t).unwrap(), f),
                downset_implies(poset, ev_map(&s, f), ev_map(&t, f))
            );
        }
    }

    #[test]
    fn finite_union_representation_is_definitional() {
        let store = Arc::new(TypeStore::new());
        let (_, evals) = two_evals_up_to(3);
        let gens = vec![evals[0].clone(), evals[5].clone()];
        let fam = Subpresheaf::from_generators(store.clone(), 1, gens.clone()).unwrap();
        for e in &evals {
            let expect = gens.iter().any(|g| leq_n(&store, e, g, 1));
            assert_eq!(fam.contains(e), expect);
        }
    }

    #[test]
    fn nform_trivial_on_one_point_labels() {
        let store = TypeStore::new();
        let one = Arc::new(LabelPoset::one());
        let mut pool = Vec::new();
        for p in rooted_posets_up_to(3) {
            pool.push(Evaluation::new(p.clone(), one.clone(), vec![0; p.len()]).unwrap());
        }
        let universe = pool.clone();
        for u in &pool {
            let report = check_nform(&store, u, 0, &universe, &pool);
            assert!(report.ok());
        }
    }

    #[test]
    fn nform_two_small() {
        let store = TypeStore::new();
        let (two, pool) = two_evals_up_to(3);
        let mut universe = pool.clone();
        universe.extend(reduced_trees(&store, &two, 1, 5).unwrap());
        for u in &pool {
            let report = check_nform(&store, u, 0, &universe, &pool);
            assert!(report.ok(), "mismatches for u: {:?}", report.mismatches);
        }
    }
}
