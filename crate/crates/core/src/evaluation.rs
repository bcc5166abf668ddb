//! L-evaluations, Kripke forcing, bounded-bisimulation equivalence via
//! canonical types, the `<=_n` relations, and reduced-tree representatives.
//!
//! The n-round game equivalence `~_n` is decided by equality of canonical
//! types: `T_0(u)` is the root label and `T_{n+1}(u)` is the pair of the root
//! label with the set `{ T_n(u_p) : p in P }`. By the recursive
//! characterization of the game relations, type equality at depth n+1 is
//! exactly the two-sided back-and-forth condition together with root-label
//! equality, so the pair is a complete invariant. Types are hash-consed:
//! structurally equal types share one id, making class counting cheap.

use std::sync::{Arc, Mutex};

use rustc_hash::{FxHashMap, FxHashSet};

use crate::formula::{Formula, Kind};
use crate::poset::{LabelPoset, RootedPoset};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("evaluation map is not order-preserving at points {0} <= {1}")]
    NotOrderPreserving(usize, usize),
    #[error("evaluation map has wrong length")]
    WrongLength,
    #[error("label {0} out of range")]
    BadLabel(usize),
    #[error("labels are not a powerset of variables; forcing is undefined")]
    NotPowerset,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("label posets differ")]
    LabelMismatch,
    #[error("reduced-tree enumeration exceeded budget ({0} candidates)")]
    Budget(usize),
}

/// An order-preserving map from a finite rooted poset into a label poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    poset: Arc<RootedPoset>,
    labels: Arc<LabelPoset>,
    map: Vec<usize>,
}

impl Evaluation {
    pub fn new(
        poset: Arc<RootedPoset>,
        labels: Arc<LabelPoset>,
        map: Vec<usize>,
    ) -> Result<Self, EvalError> {
        if map.len() != poset.len() {
            return Err(EvalError::WrongLength);
        }
        for &l in &map {
            if l >= labels.len() {
                return Err(EvalError::BadLabel(l));
            }
        }
        for q in poset.points() {
            let mut rem = poset.below_mask(q);
            while rem != 0 {
                let p = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                if !labels.leq(map[p], map[q]) {
                    return Err(EvalError::NotOrderPreserving(p, q));
                }
            }
        }
        Ok(Evaluation { poset, labels, map })
    }

    /// Kripke model over the powerset of `vars`: `var_masks[i]` is the
    /// (downward closed) set of points at which variable `i` holds.
    pub fn kripke(
        poset: Arc<RootedPoset>,
        vars: &[String],
        var_masks: &[u128],
    ) -> Result<Self, EvalError> {
        assert_eq!(vars.len(), var_masks.len());
        let labels = Arc::new(LabelPoset::powerset(vars));
        let map = poset
            .points()
            .map(|p| {
                let mut subset = 0usize;
                for (i, &m) in var_masks.iter().enumerate() {
                    if m & (1 << p) != 0 {
                        subset |= 1 << i;
                    }
                }
                subset
            })
            .collect();
        Evaluation::new(poset, labels, map)
    }

    pub fn poset(&self) -> &Arc<RootedPoset> {
        &self.poset
    }

    pub fn labels(&self) -> &Arc<LabelPoset> {
        &self.labels
    }

    pub fn label_of(&self, p: usize) -> usize {
        self.map[p]
    }

    pub fn root_label(&self) -> usize {
        self.map[self.poset.root()]
    }

    /// The restriction `u_p` to the downset generated by `p`.
    pub fn restrict(&self, p: usize) -> Evaluation {
        let (sub, old) = self.poset.downset_with_map(p);
        Evaluation {
            poset: Arc::new(sub),
            labels: self.labels.clone(),
            map: old.iter().map(|&o| self.map[o]).collect(),
        }
    }

    /// For powerset labels: per-variable masks of points where each variable
    /// holds, in the label poset's variable order.
    pub fn powerset_var_masks(&self) -> Option<Vec<u128>> {
        let vars = self.labels.powerset_vars()?;
        Some((0..vars.len()).map(|i| self.var_mask(i)).collect())
    }

    /// For powerset labels: the mask of points at which `var` (by index) holds.
    fn var_mask(&self, var_index: usize) -> u128 {
        let mut m = 0u128;
        for p in self.poset.points() {
            if self.map[p] & (1 << var_index) != 0 {
                m |= 1 << p;
            }
        }
        m
    }

    /// The set of points forcing `a`, as a bitmask. Requires powerset labels
    /// covering all variables of `a`.
    pub fn forcing_mask(&self, a: &Formula) -> Result<u128, EvalError> {
        let vars = self
            .labels
            .powerset_vars()
            .ok_or(EvalError::NotPowerset)?
            .to_vec();
        let mut var_masks = FxHashMap::default();
        for (i, v) in vars.iter().enumerate() {
            var_masks.insert(v.as_str(), self.var_mask(i));
        }
        let mut memo: FxHashMap<usize, u128> = FxHashMap::default();
        self.forcing_rec(a, &var_masks, &mut memo)
    }

    fn forcing_rec(
        &self,
        a: &Formula,
        var_masks: &FxHashMap<&str, u128>,
        memo: &mut FxHashMap<usize, u128>,
    ) -> Result<u128, EvalError> {
        if let Some(&m) = memo.get(&a.ptr_id()) {
            return Ok(m);
        }
        let full = self.poset.full_mask();
        let result = match a.kind() {
            Kind::Bottom => 0,
            Kind::Var(n) => *var_masks
                .get(&**n)
                .ok_or_else(|| EvalError::UnknownVariable(n.to_string()))?,
            Kind::And(x, y) => {
                self.forcing_rec(x, var_masks, memo)? & self.forcing_rec(y, var_masks, memo)?
            }
            Kind::Or(x, y) => {
                self.forcing_rec(x, var_masks, memo)? | self.forcing_rec(y, var_masks, memo)?
            }
            Kind::Implies(x, y) => {
                let mx = self.forcing_rec(x, var_masks, memo)?;
                let my = self.forcing_rec(y, var_masks, memo)?;
                let bad = mx & !my & full;
                let mut m = 0u128;
                for p in self.poset.points() {
                    if self.poset.below_mask(p) & bad == 0 {
                        m |= 1 << p;
                    }
                }
                m
            }
        };
        memo.insert(a.ptr_id(), result);
        Ok(result)
    }

    /// The inductive forcing relation at point `p` (on the restriction `u_p`;
    /// implication quantifies over all `q <= p`, so evaluating in place is
    /// the same thing).
    pub fn forces(&self, a: &Formula, p: usize) -> Result<bool, EvalError> {
        Ok(self.forcing_mask(a)? & (1 << p) != 0)
    }

    /// Forcing at the root.
    pub fn forces_root(&self, a: &Formula) -> Result<bool, EvalError> {
        self.forces(a, self.poset.root())
    }
}

/// Forcing evaluator that keeps its node memo across formulas, so families of
/// formulas sharing subterms (e.g. substitution iterates) are evaluated once
/// per shared node.
pub struct ForcingEvaluator<'a> {
    eval: &'a Evaluation,
    var_masks: FxHashMap<String, u128>,
    memo: FxHashMap<usize, u128>,
    // Roots are pinned so memo keys (node addresses) stay alive.
    pins: Vec<Formula>,
}

impl<'a> ForcingEvaluator<'a> {
    pub fn new(eval: &'a Evaluation) -> Result<Self, EvalError> {
        let vars = eval
            .labels
            .powerset_vars()
            .ok_or(EvalError::NotPowerset)?
            .to_vec();
        let mut var_masks = FxHashMap::default();
        for (i, v) in vars.iter().enumerate() {
            var_masks.insert(v.clone(), eval.var_mask(i));
        }
        Ok(ForcingEvaluator {
            eval,
            var_masks,
            memo: FxHashMap::default(),
            pins: Vec::new(),
        })
    }

    pub fn mask(&mut self, a: &Formula) -> Result<u128, EvalError> {
        self.pins.push(a.clone());
        self.mask_rec(a)
    }

    fn mask_rec(&mut self, a: &Formula) -> Result<u128, EvalError> {
        if let Some(&m) = self.memo.get(&a.ptr_id()) {
            return Ok(m);
        }
        let full = self.eval.poset.full_mask();
        let result = match a.kind() {
            Kind::Bottom => 0,
            Kind::Var(n) => *self
                .var_masks
                .get(&**n)
                .ok_or_else(|| EvalError::UnknownVariable(n.to_string()))?,
            Kind::And(x, y) => self.mask_rec(x)? & self.mask_rec(y)?,
            Kind::Or(x, y) => self.mask_rec(x)? | self.mask_rec(y)?,
            Kind::Implies(x, y) => {
                let bad = self.mask_rec(x)? & !self.mask_rec(y)? & full;
                let mut m = 0u128;
                for p in self.eval.poset.points() {
                    if self.eval.poset.below_mask(p) & bad == 0 {
                        m |= 1 << p;
                    }
                }
                m
            }
        };
        self.memo.insert(a.ptr_id(), result);
        Ok(result)
    }

    pub fn forces_root(&mut self, a: &Formula) -> Result<bool, EvalError> {
        Ok(self.mask(a)? & (1 << self.eval.poset.root()) != 0)
    }
}

// ---------------------------------------------------------------------------
// Canonical bisimulation types.
// ---------------------------------------------------------------------------

pub type TypeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum TypeKey {
    Leaf { lp: u64, label: u32 },
    Node { root: TypeId, subtypes: Box<[TypeId]> },
}

struct StoreInner {
    map: FxHashMap<TypeKey, TypeId>,
    depth: Vec<u32>,
}

/// Hash-consing store for canonical `~_n` class representatives. Insert-or-get
/// is atomic; a store can be shared across threads.
pub struct TypeStore {
    inner: Mutex<StoreInner>,
}

impl Default for TypeStore {
    fn default() -> Self {
        TypeStore::new()
    }
}

impl TypeStore {
    pub fn new() -> Self {
        TypeStore {
            inner: Mutex::new(StoreInner {
                map: FxHashMap::default(),
                depth: Vec::new(),
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn intern(&self, key: TypeKey, depth: u32) -> TypeId {
        let mut inner = self.inner.lock().unwrap();
        if let Some(&id) = inner.map.get(&key) {
            return id;
        }
        let id = inner.depth.len() as TypeId;
        inner.depth.push(depth);
        inner.map.insert(key, id);
        id
    }

    pub fn depth_of(&self, t: TypeId) -> u32 {
        self.inner.lock().unwrap().depth[t as usize]
    }

    fn leaf(&self, labels: &LabelPoset, label: usize) -> TypeId {
        self.intern(
            TypeKey::Leaf {
                lp: labels.fingerprint(),
                label: label as u32,
            },
            0,
        )
    }

    fn node(&self, root: TypeId, mut subtypes: Vec<TypeId>) -> TypeId {
        subtypes.sort_unstable();
        subtypes.dedup();
        let depth = {
            let inner = self.inner.lock().unwrap();
            inner.depth[subtypes[0] as usize] + 1
        };
        self.intern(
            TypeKey::Node {
                root,
                subtypes: subtypes.into_boxed_slice(),
            },
            depth,
        )
    }

    /// Depth-`n` types of every point (the type of `u_p` at index `p`).
    pub fn point_types(&self, u: &Evaluation, n: u32) -> Vec<TypeId> {
        let poset = u.poset();
        let mut level: Vec<TypeId> = poset
            .points()
            .map(|p| self.leaf(u.labels(), u.label_of(p)))
            .collect();
        let leaves = level.clone();
        for _ in 0..n {
            let next: Vec<TypeId> = poset
                .points()
                .map(|p| {
                    let mut subs = Vec::new();
                    let mut rem = poset.below_mask(p);
                    while rem != 0 {
                        let q = rem.trailing_zeros() as usize;
                        rem &= rem - 1;
                        subs.push(level[q]);
                    }
                    self.node(leaves[p], subs)
                })
                .collect();
            level = next;
        }
        level
    }

    /// The canonical type of `u` at depth `n`; equality decides `~_n`.
    pub fn bisim_type(&self, u: &Evaluation, n: u32) -> TypeId {
        let types = self.point_types(u, n);
        types[u.poset().root()]
    }

    /// The set `Type_n(u) = { [u_p]_n : p in P }`, sorted.
    pub fn type_set(&self, u: &Evaluation, n: u32) -> Vec<TypeId> {
        let mut ts = self.point_types(u, n);
        ts.sort_unstable();
        ts.dedup();
        ts
    }
}

/// `u ~_n v`: equality of canonical depth-`n` types.
pub fn equiv_n(store: &TypeStore, u: &Evaluation, v: &Evaluation, n: u32) -> bool {
    store.bisim_type(u, n) == store.bisim_type(v, n)
}

/// `v <=_n u`: at n = 0 the label order on roots, at n + 1 the condition
/// that every restriction of `v` has a `~_n`-equivalent restriction of `u`,
/// i.e. `Type_n(v)` is a subset of `Type_n(u)`.
pub fn leq_n(store: &TypeStore, v: &Evaluation, u: &Evaluation, n: u32) -> bool {
    if n == 0 {
        return v.labels().leq(v.root_label(), u.root_label());
    }
    let tv = store.type_set(v, n - 1);
    let tu = store.type_set(u, n - 1);
    tv.iter().all(|t| tu.binary_search(t).is_ok())
}

// ---------------------------------------------------------------------------
// Reduced-tree representatives.
// ---------------------------------------------------------------------------

fn tree_poset(child_posets: &[&RootedPoset]) -> RootedPoset {
    let total: usize = 1 + child_posets.iter().map(|c| c.len()).sum::<usize>();
    let mut below: Vec<u128> = Vec::with_capacity(total);
    let mut offset = 0usize;
    for c in child_posets {
        for p in c.points() {
            below.push(c.below_mask(p) << offset);
        }
        offset += c.len();
    }
    let mut root_mask = 1u128 << offset;
    for m in &below {
        root_mask |= *m;
    }
    below.push(root_mask);
    RootedPoset::from_below(below).expect("tree construction is a rooted poset")
}

/// Tree-shaped representatives for `~_n` classes over `L`: evaluations of
/// height at most `n + 1` whose sibling subtrees are pairwise inequivalent at
/// their depth, deduplicated by depth-`n` type. `max_width` caps the number
/// of children per node; completeness in `max_width` is property-tested, not
/// guaranteed.
pub fn reduced_trees(
    store: &TypeStore,
    labels: &Arc<LabelPoset>,
    n: u32,
    max_width: usize,
) -> Result<Vec<Evaluation>, EvalError> {
    const BUDGET: usize = 200_000;
    // Level k holds one representative per depth-k type realized by a tree of
    // height <= k + 1.
    let mut level: Vec<Evaluation> = Vec::new();
    let mut seen: FxHashSet<TypeId> = FxHashSet::default();
    for l in 0..labels.len() {
        let e = Evaluation::new(
            Arc::new(RootedPoset::single()),
            labels.clone(),
            vec![l],
        )
        .expect("single point is order-preserving");
        if seen.insert(store.bisim_type(&e, 0)) {
            level.push(e);
        }
    }
    for depth in 1..=n {
        let mut next: Vec<Evaluation> = Vec::new();
        let mut next_seen: FxHashSet<TypeId> = FxHashSet::default();
        // Trees of smaller height are still candidates at this depth.
        for e in &level {
            if next_seen.insert(store.bisim_type(e, depth)) {
                next.push(e.clone());
            }
        }
        for root_label in 0..labels.len() {
            let eligible: Vec<&Evaluation> = level
                .iter()
                .filter(|e| labels.leq(e.root_label(), root_label))
                .collect();
            let k = eligible.len();
            if k > 24 {
                return Err(EvalError::Budget(k));
            }
            // All nonempty child sets up to max_width.
            for subset in 1u32..(1u32 << k) {
                if (subset.count_ones() as usize) > max_width {
                    continue;
                }
                if next.len() + level.len() > BUDGET {
                    return Err(EvalError::Budget(next.len()));
                }
                let children: Vec<&Evaluation> = (0..k)
                    .filter(|i| subset & (1 << i) != 0)
                    .map(|i| eligible[i])
                    .collect();
                let posets: Vec<&RootedPoset> = children.iter().map(|c| c.poset().as_ref()).collect();
                let poset = tree_poset(&posets);
                let mut map = Vec::with_capacity(poset.len());
                for c in &children {
                    map.extend(c.map.iter().copied());
                }
                map.push(root_label);
                let e = match Evaluation::new(Arc::new(poset), labels.clone(), map) {
                    Ok(e) => e,
                    // Root label below some subtree label: not order-preserving.
                    Err(_) => continue,
                };
                if next_seen.insert(store.bisim_type(&e, depth)) {
                    next.push(e);
                }
            }
        }
        level = next;
    }
    Ok(level)
}

// ---------------------------------------------------------------------------
// Random generation and branch duplication.
// ---------------------------------------------------------------------------

/// A random downward-closed subset: the union of a few principal downsets.
pub fn random_downset(rng: &mut impl rand::Rng, poset: &RootedPoset) -> u128 {
    let n = poset.len();
    let gens = rng.random_range(0..=n.min(3));
    let mut m = 0u128;
    for _ in 0..gens {
        m |= poset.below_mask(rng.random_range(0..n));
    }
    m
}

/// Random Kripke model on `poset` over `vars` (each variable holds on a
/// random downset).
pub fn random_kripke(
    rng: &mut impl rand::Rng,
    poset: Arc<RootedPoset>,
    vars: &[String],
) -> Evaluation {
    let masks: Vec<u128> = vars.iter().map(|_| random_downset(rng, &poset)).collect();
    Evaluation::kripke(poset, vars, &masks).expect("downset labellings are order-preserving")
}

/// Glue a fresh copy of the downset of `p` (`p` must not be the root) below
/// the strict upset of `p`. The collapse map is an open surjection preserving
/// labels, so the result is `~_n`-equivalent to `u` for every `n`.
pub fn duplicate_branch(u: &Evaluation, p: usize) -> Option<Evaluation> {
    let poset = u.poset();
    let root = poset.root();
    if p == root {
        return None;
    }
    let n = poset.len();
    let branch = poset.below_mask(p);
    let k = branch.count_ones() as usize;
    if n + k > crate::poset::MAX_POINTS {
        return None;
    }
    let old_members: Vec<usize> = poset.points().filter(|&q| branch & (1 << q) != 0).collect();
    let mut copy_index = FxHashMap::default();
    for (i, &q) in old_members.iter().enumerate() {
        copy_index.insert(q, n + i);
    }
    let mut below: Vec<u128> = (0..n).map(|q| poset.below_mask(q)).collect();
    for &q in &old_members {
        // The copy of q sits below exactly the copies of things above q in
        // the branch, and below everything strictly above p.
        let mut m = 0u128;
        let mut rem = poset.below_mask(q) & branch;
        while rem != 0 {
            let r = rem.trailing_zeros() as usize;
            rem &= rem - 1;
            m |= 1 << copy_index[&r];
        }
        below.push(m);
    }
    // Points strictly above p see the whole copied branch.
    for q in 0..n {
        if q != p && poset.leq(p, q) {
            for &o in &old_members {
                below[q] |= 1 << copy_index[&o];
            }
        }
    }
    let new_poset = RootedPoset::from_below(below).expect("branch duplication keeps the axioms");
    let mut map = u.map.clone();
    for &q in &old_members {
        map.push(u.map[q]);
    }
    Some(
        Evaluation::new(Arc::new(new_poset), u.labels.clone(), map)
            .expect("copied labels stay order-preserving"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::poset::rooted_posets_up_to;
    use rand::SeedableRng;

    fn two_chain_x() -> Evaluation {
        // 2-chain: point 0 below, point 1 root; bottom labeled {x}, root {}
        let poset = Arc::new(RootedPoset::chain(2));
        Evaluation::kripke(poset, &["x".to_string()], &[0b01]).unwrap()
    }

    #[test]
    fn forcing_examples() {
        let single = Evaluation::kripke(
            Arc::new(RootedPoset::single()),
            &["x".to_string()],
            &[0b1],
        )
        .unwrap();
        assert!(single.forces_root(&parse("x").unwrap()).unwrap());

        let m = two_chain_x();
        assert!(!m.forces_root(&parse("x | ~x").unwrap()).unwrap());
        assert!(m.forces_root(&parse("~~x").unwrap()).unwrap());
        // bottom point forces x
        assert!(m.forces(&parse("x").unwrap(), 0).unwrap());

        assert_eq!(
            m.forces_root(&parse("z").unwrap()),
            Err(EvalError::UnknownVariable("z".to_string()))
        );
    }

    #[test]
    fn forcing_is_persistent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let vars = vec!["x".to_string(), "y".to_string()];
        let formulas = ["x -> y", "~x | y", "(x -> y) -> x", "~(x & y) -> (y | x)"];
        for _ in 0..50 {
            let p = Arc::new(RootedPoset::random(&mut rng, 6));
            let u = random_kripke(&mut rng, p.clone(), &vars);
            for text in formulas {
                let mask = u.forcing_mask(&parse(text).unwrap()).unwrap();
                for q in p.points() {
                    if mask & (1 << q) != 0 {
                        assert_eq!(p.below_mask(q) & !mask, 0, "persistence at {}", q);
                    }
                }
            }
        }
    }

    #[test]
    fn bisim_type_examples() {
        let store = TypeStore::new();
        let labels = Arc::new(LabelPoset::powerset(&["x".to_string()]));

        // equal single points agree at every depth
        let a = Evaluation::new(Arc::new(RootedPoset::single()), labels.clone(), vec![0]).unwrap();
        let b = Evaluation::new(Arc::new(RootedPoset::single()), labels.clone(), vec![0]).unwrap();
        for n in 0..5 {
            assert!(equiv_n(&store, &a, &b, n));
        }

        // 2-chain (bottom {x}, root {}) vs single point {}: equal T0, unequal T1
        let chain = two_chain_x();
        let single =
            Evaluation::new(Arc::new(RootedPoset::single()), labels.clone(), vec![0]).unwrap();
        assert!(equiv_n(&store, &chain, &single, 0));
        assert!(!equiv_n(&store, &chain, &single, 1));
    }

    #[test]
    fn duplicated_branch_is_equivalent_at_all_depths() {
        let store = TypeStore::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let vars = vec!["x".to_string(), "y".to_string()];
        for _ in 0..40 {
            let p = Arc::new(RootedPoset::random(&mut rng, 5));
            let u = random_kripke(&mut rng, p.clone(), &vars);
            let pick = rand::Rng::random_range(&mut rng, 0..p.len());
            if let Some(v) = duplicate_branch(&u, pick) {
                for n in 0..=5 {
                    assert!(equiv_n(&store, &u, &v, n), "depth {}", n);
                }
            }
        }
    }

    #[test]
    fn equiv_is_equivalence_and_downward_compatible() {
        let store = TypeStore::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let vars = vec!["x".to_string()];
        let pool: Vec<Evaluation> = (0..60)
            .map(|_| {
                let n = rand::Rng::random_range(&mut rng, 1..=5);
                let p = Arc::new(RootedPoset::random(&mut rng, n));
                random_kripke(&mut rng, p, &vars)
            })
            .collect();
        for u in &pool {
            assert!(equiv_n(&store, u, u, 3));
        }
        for u in &pool {
            for v in &pool {
                for n in (1..=4).rev() {
                    if equiv_n(&store, u, v, n) {
                        for m in 0..n {
                            assert!(equiv_n(&store, u, v, m));
                        }
                        // ~_n implies ~_0
                        assert_eq!(u.root_label(), v.root_label());
                    }
                }
            }
        }
    }

    #[test]
    fn leq_examples() {
        let store = TypeStore::new();
        let two = Arc::new(LabelPoset::two());

        // single point labeled 1 vs labeled 0 over TWO: 1 <= 0
        let p1 = Evaluation::new(Arc::new(RootedPoset::single()), two.clone(), vec![1]).unwrap();
        let p0 = Evaluation::new(Arc::new(RootedPoset::single()), two.clone(), vec![0]).unwrap();
        assert!(leq_n(&store, &p1, &p0, 0));
        assert!(!leq_n(&store, &p0, &p1, 0));

        // reflexivity through witnesses
        assert!(leq_n(&store, &p0, &p0, 1));

        // v = 2-chain (1 at bottom, 0 at root), u = single point 1:
        // v's root class 0 has no counterpart in u at depth 0.
        let chain = Arc::new(RootedPoset::chain(2));
        let v = Evaluation::new(chain, two.clone(), vec![1, 0]).unwrap();
        let u = p1.clone();
        assert!(!leq_n(&store, &v, &u, 1));

        // u ~_n v implies leq_n both ways
        let store2 = TypeStore::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let vars = vec!["x".to_string()];
        for _ in 0..30 {
            let p = Arc::new(RootedPoset::random(&mut rng, 4));
            let a = random_kripke(&mut rng, p.clone(), &vars);
            if let Some(b) = duplicate_branch(&a, 0) {
                for n in 0..4 {
                    assert!(equiv_n(&store2, &a, &b, n));
                    assert!(leq_n(&store2, &a, &b, n));
                    assert!(leq_n(&store2, &b, &a, n));
                }
            }
        }
    }

    #[test]
    fn reduced_trees_two() {
        let store = TypeStore::new();
        let two = Arc::new(LabelPoset::two());
        // depth 0: one class per label
        let t0 = reduced_trees(&store, &two, 0, 4).unwrap();
        assert_eq!(t0.len(), 2);
        // one-point label poset: exactly 1 class at every depth
        let one = Arc::new(LabelPoset::one());
        for n in 0..4 {
            assert_eq!(reduced_trees(&store, &one, n, 4).unwrap().len(), 1);
        }
    }

    #[test]
    fn reduced_trees_depth1_matches_brute_force() {
        let store = TypeStore::new();
        let two = Arc::new(LabelPoset::two());
        let trees = reduced_trees(&store, &two, 1, 4).unwrap();
        let tree_types: FxHashSet<TypeId> =
            trees.iter().map(|e| store.bisim_type(e, 1)).collect();
        assert_eq!(tree_types.len(), trees.len());

        // Brute force: all evaluations over TWO on rooted posets with <= 3
        // points, deduplicated by depth-1 type.
        let mut brute: FxHashSet<TypeId> = FxHashSet::default();
        for p in rooted_posets_up_to(3) {
            // maps into TWO = downsets marking the points labeled 1
            for d in p.downsets() {
                let map: Vec<usize> = p
                    .points()
                    .map(|q| if d & (1 << q) != 0 { 1 } else { 0 })
                    .collect();
                let e = Evaluation::new(p.clone(), two.clone(), map).unwrap();
                brute.insert(store.bisim_type(&e, 1));
            }
        }
        assert_eq!(tree_types, brute);
    }

    #[test]
    fn representative_completeness_small() {
        // Every evaluation over TWO on <= 5 points is ~_n-equivalent to some
        // reduced tree, n <= 3.
        let store = TypeStore::new();
        let two = Arc::new(LabelPoset::two());
        for n in 0..=3u32 {
            let trees = reduced_trees(&store, &two, n, 6).unwrap();
            let types: FxHashSet<TypeId> = trees.iter().map(|e| store.bisim_type(e, n)).collect();
            for p in rooted_posets_up_to(5) {
                for d in p.downsets() {
                    let map: Vec<usize> = p
                        .points()
                        .map(|q| if d & (1 << q) != 0 { 1 } else { 0 })
                        .collect();
                    let e = Evaluation::new(p.clone(), two.clone(), map).unwrap();
                    assert!(
                        types.contains(&store.bisim_type(&e, n)),
                        "missing representative at depth {}",
                        n
                    );
                }
            }
        }
    }
}
