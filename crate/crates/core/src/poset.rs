//! Finite rooted posets, label posets, downsets, heights, open maps, and
//! enumeration of rooted posets up to isomorphism.
//!
//! Posets store the full `<=` relation as per-point downset bitmasks after
//! transitive closure, so the quantifier-heavy queries (forcing, openness,
//! bisimulation types) are word-parallel. At most 128 points.

use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

pub const MAX_POINTS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("too many points: {0} (max {MAX_POINTS})")]
    TooManyPoints(usize),
    #[error("poset must be nonempty")]
    Empty,
    #[error("relation is not reflexive at point {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric on points {0}, {1}")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive on points {0} <= {1} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("no unique greatest element")]
    NotRooted,
    #[error("map is not order-preserving at points {0} <= {1}")]
    NotOrderPreserving(usize, usize),
    #[error("point {0} out of range")]
    BadPoint(usize),
}

fn check_axioms(below: &[u128]) -> Result<(), PosetError> {
    let n = below.len();
    if n == 0 {
        return Err(PosetError::Empty);
    }
    if n > MAX_POINTS {
        return Err(PosetError::TooManyPoints(n));
    }
    for (p, &m) in below.iter().enumerate() {
        if m & (1 << p) == 0 {
            return Err(PosetError::NotReflexive(p));
        }
        if m >> n != 0 {
            return Err(PosetError::BadPoint(p));
        }
    }
    for p in 0..n {
        for q in 0..n {
            if p != q && below[p] & (1 << q) != 0 {
                // q <= p
                if below[q] & (1 << p) != 0 {
                    return Err(PosetError::NotAntisymmetric(p, q));
                }
                if below[p] & below[q] != below[q] {
                    let r = (below[q] & !below[p]).trailing_zeros() as usize;
                    return Err(PosetError::NotTransitive(r, q, p));
                }
            }
        }
    }
    Ok(())
}

/// A finite poset with a unique greatest element (the root).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedPoset {
    below: Vec<u128>,
    root: usize,
    heights: Vec<u32>,
}

fn compute_heights(below: &[u128]) -> Vec<u32> {
    let n = below.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&p| below[p].count_ones());
    let mut heights = vec![1u32; n];
    for &p in &order {
        let mut h = 1;
        let mut strict = below[p] & !(1u128 << p);
        while strict != 0 {
            let q = strict.trailing_zeros() as usize;
            strict &= strict - 1;
            h = h.max(heights[q] + 1);
        }
        heights[p] = h;
    }
    heights
}

impl RootedPoset {
    /// Build from per-point downset masks (`below[p]` = all `q <= p`, incl. `p`).
    pub fn from_below(below: Vec<u128>) -> Result<Self, PosetError> {
        check_axioms(&below)?;
        let n = below.len();
        let full = if n == 128 { !0u128 } else { (1u128 << n) - 1 };
        let root = below
            .iter()
            .position(|&m| m == full)
            .ok_or(PosetError::NotRooted)?;
        let heights = compute_heights(&below);
        Ok(RootedPoset {
            below,
            root,
            heights,
        })
    }

    /// Build from cover edges `(lo, hi)` meaning `lo <= hi`; the reflexive
    /// transitive closure is computed.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        if n > MAX_POINTS {
            return Err(PosetError::TooManyPoints(n));
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(PosetError::BadPoint(a.max(b)));
            }
        }
        let mut below: Vec<u128> = (0..n).map(|p| 1u128 << p).collect();
        // Fixpoint closure; n is small.
        let mut changed = true;
        while changed {
            changed = false;
            for &(lo, hi) in covers {
                let merged = below[hi] | below[lo];
                if merged != below[hi] {
                    below[hi] = merged;
                    changed = true;
                }
            }
            for p in 0..n {
                let mut strict = below[p] & !(1u128 << p);
                let mut acc = below[p];
                while strict != 0 {
                    let q = strict.trailing_zeros() as usize;
                    strict &= strict - 1;
                    acc |= below[q];
                }
                if acc != below[p] {
                    below[p] = acc;
                    changed = true;
                }
            }
        }
        RootedPoset::from_below(below)
    }

    pub fn single() -> Self {
        RootedPoset::from_below(vec![1]).unwrap()
    }

    /// Chain of `n` points, point `n-1` on top.
    pub fn chain(n: usize) -> Self {
        let below = (0..n).map(|p| (1u128 << (p + 1)) - 1).collect();
        RootedPoset::from_below(below).unwrap()
    }

    /// A root above an antichain of `k` points.
    pub fn root_over_antichain(k: usize) -> Self {
        let mut below: Vec<u128> = (0..k).map(|p| 1u128 << p).collect();
        below.push((1u128 << (k + 1)) - 1);
        RootedPoset::from_below(below).unwrap()
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn points(&self) -> impl Iterator<Item = usize> {
        0..self.below.len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b] & (1 << a) != 0
    }

    /// Bitmask of all `q <= p` (including `p`).
    pub fn below_mask(&self, p: usize) -> u128 {
        self.below[p]
    }

    pub fn full_mask(&self) -> u128 {
        let n = self.len();
        if n == 128 {
            !0
        } else {
            (1u128 << n) - 1
        }
    }

    /// Maximum chain length.
    pub fn height(&self) -> u32 {
        self.heights[self.root]
    }

    /// Longest chain whose maximum is `p`.
    pub fn height_of(&self, p: usize) -> u32 {
        self.heights[p]
    }

    /// The induced sub-poset on `{q : q <= p}`, rooted at `p`, together with
    /// the map from new point indices to old ones.
    pub fn downset_with_map(&self, p: usize) -> (RootedPoset, Vec<usize>) {
        let mask = self.below[p];
        let old: Vec<usize> = self.points().filter(|&q| mask & (1 << q) != 0).collect();
        let mut new_of_old = FxHashMap::default();
        for (new, &o) in old.iter().enumerate() {
            new_of_old.insert(o, new);
        }
        let below = old
            .iter()
            .map(|&o| {
                let mut m = 0u128;
                let mut rem = self.below[o];
                while rem != 0 {
                    let q = rem.trailing_zeros() as usize;
                    rem &= rem - 1;
                    m |= 1 << new_of_old[&q];
                }
                m
            })
            .collect();
        let sub = RootedPoset::from_below(below).expect("downset of a poset is a rooted poset");
        (sub, old)
    }

    /// The induced sub-poset on `{q : q <= p}`, rooted at `p`.
    pub fn downset(&self, p: usize) -> RootedPoset {
        self.downset_with_map(p).0
    }

    /// All downward-closed subsets, as bitmasks, in ascending numeric order.
    /// Intended for small posets (asserts `n <= 20`).
    pub fn downsets(&self) -> Vec<u128> {
        let n = self.len();
        assert!(n <= 20, "downset enumeration is for small posets");
        let mut out = Vec::new();
        for s in 0..(1u128 << n) {
            let mut ok = true;
            let mut rem = s;
            while rem != 0 {
                let p = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                if self.below[p] & !s != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(s);
            }
        }
        out
    }

    /// Cover edges `(lo, hi)`: `lo < hi` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for hi in 0..n {
            for lo in 0..n {
                if lo != hi && self.leq(lo, hi) {
                    let between = self.below[hi] & !self.below[lo] & !(1 << hi);
                    let strictly_between = {
                        let mut found = false;
                        let mut rem = between;
                        while rem != 0 {
                            let m = rem.trailing_zeros() as usize;
                            rem &= rem - 1;
                            if self.leq(lo, m) {
                                found = true;
                                break;
                            }
                        }
                        found
                    };
                    if !strictly_between {
                        out.push((lo, hi));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Random rooted poset with `n` points: a random naturally-labeled poset
    /// on `n - 1` points with a fresh root adjoined.
    pub fn random(rng: &mut impl rand::Rng, n: usize) -> RootedPoset {
        assert!(n >= 1 && n <= 24);
        let base = n - 1;
        let mut below: Vec<u128> = Vec::with_capacity(n);
        for j in 0..base {
            let mut m = 1u128 << j;
            if j > 0 {
                // Union of a few random principal downsets keeps D downward closed.
                let gens = rng.random_range(0..=2.min(j));
                for _ in 0..gens {
                    let g = rng.random_range(0..j);
                    m |= below[g];
                }
            }
            below.push(m);
        }
        let mut root_mask = 1u128 << base;
        for m in &below {
            root_mask |= m;
        }
        below.push(root_mask);
        RootedPoset::from_below(below).expect("construction preserves the axioms")
    }
}

/// A finite poset used as a label space; not necessarily rooted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelPoset {
    below: Vec<u128>,
    names: Vec<String>,
    fingerprint: u64,
    pow_vars: Option<Vec<String>>,
}

impl LabelPoset {
    pub fn new(below: Vec<u128>, names: Vec<String>) -> Result<Self, PosetError> {
        check_axioms(&below)?;
        assert_eq!(below.len(), names.len());
        let mut fp = 0xcbf2_9ce4_8422_2325u64;
        for &m in &below {
            fp ^= (m as u64) ^ ((m >> 64) as u64);
            fp = fp.wrapping_mul(0x1000_0000_01b3);
        }
        Ok(LabelPoset {
            below,
            names,
            fingerprint: fp,
            pow_vars: None,
        })
    }

    /// The two-element poset `{0, 1}` with `1 <= 0`.
    pub fn two() -> Self {
        LabelPoset::new(vec![0b11, 0b10], vec!["0".into(), "1".into()]).unwrap()
    }

    pub fn one() -> Self {
        LabelPoset::new(vec![1], vec!["*".into()]).unwrap()
    }

    /// The powerset of `vars` ordered by reverse inclusion: `s <= t` iff
    /// `s` is a superset of `t`. Labels are encoded as subset bitmasks over
    /// the given variable order.
    pub fn powerset(vars: &[String]) -> Self {
        let v = vars.len();
        assert!(v <= 7, "powerset label poset limited to 7 variables");
        let n = 1usize << v;
        let mut below = vec![0u128; n];
        for (t, m) in below.iter_mut().enumerate() {
            for s in 0..n {
                if s & t == t {
                    *m |= 1 << s;
                }
            }
        }
        let names = (0..n)
            .map(|s| {
                let members: Vec<&str> = (0..v)
                    .filter(|i| s & (1 << i) != 0)
                    .map(|i| vars[i].as_str())
                    .collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        let mut l = LabelPoset::new(below, names).unwrap();
        l.pow_vars = Some(vars.to_vec());
        l
    }

    /// For a powerset label poset, the underlying variable order; labels are
    /// subset bitmasks over it.
    pub fn powerset_vars(&self) -> Option<&[String]> {
        self.pow_vars.as_deref()
    }

    /// Componentwise order on pairs; `(a, b)` is encoded as `a * |l2| + b`.
    pub fn product(l1: &LabelPoset, l2: &LabelPoset) -> Result<Self, PosetError> {
        let (n1, n2) = (l1.len(), l2.len());
        if n1.saturating_mul(n2) > MAX_POINTS {
            return Err(PosetError::TooManyPoints(n1 * n2));
        }
        let n = n1 * n2;
        let mut below = vec![0u128; n];
        for a in 0..n1 {
            for b in 0..n2 {
                let idx = a * n2 + b;
                for a2 in 0..n1 {
                    for b2 in 0..n2 {
                        if l1.leq(a2, a) && l2.leq(b2, b) {
                            below[idx] |= 1 << (a2 * n2 + b2);
                        }
                    }
                }
            }
        }
        let names = (0..n1)
            .flat_map(|a| {
                (0..n2).map(move |b| (a, b))
            })
            .map(|(a, b)| format!("({},{})", l1.names[a], l2.names[b]))
            .collect();
        LabelPoset::new(below, names)
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b] & (1 << a) != 0
    }

    pub fn name(&self, l: usize) -> &str {
        &self.names[l]
    }

    /// Maximum chain length.
    pub fn max_chain(&self) -> u32 {
        *compute_heights(&self.below).iter().max().unwrap()
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Is the label set (as a bitmask) downward closed in `L`?
    pub fn is_downward_closed(&self, set: u128) -> bool {
        let mut rem = set;
        while rem != 0 {
            let l = rem.trailing_zeros() as usize;
            rem &= rem - 1;
            if self.below[l] & !set != 0 {
                return false;
            }
        }
        true
    }

    /// All downward-closed label sets (asserts small).
    pub fn downsets(&self) -> Vec<u128> {
        let n = self.len();
        assert!(n <= 20);
        (0..(1u128 << n))
            .filter(|&s| self.is_downward_closed(s))
            .collect()
    }
}

/// A map between finite posets, with copies of both orders so openness can be
/// checked without holding references.
#[derive(Debug, Clone)]
pub struct PosetMap {
    source_below: Vec<u128>,
    target_below: Vec<u128>,
    map: Vec<usize>,
}

impl PosetMap {
    pub fn new(source_below: Vec<u128>, target_below: Vec<u128>, map: Vec<usize>) -> Self {
        assert_eq!(source_below.len(), map.len());
        PosetMap {
            source_below,
            target_below,
            map,
        }
    }

    pub fn endo_of_rooted(p: &RootedPoset, map: Vec<usize>) -> Self {
        PosetMap::new(p.below.clone(), p.below.clone(), map)
    }

    pub fn between_rooted(source: &RootedPoset, target: &RootedPoset, map: Vec<usize>) -> Self {
        PosetMap::new(source.below.clone(), target.below.clone(), map)
    }

    pub fn identity(p: &RootedPoset) -> Self {
        PosetMap::new(p.below.clone(), p.below.clone(), (0..p.len()).collect())
    }

    pub fn apply(&self, q: usize) -> usize {
        self.map[q]
    }

    pub fn source_len(&self) -> usize {
        self.source_below.len()
    }

    pub fn is_order_preserving(&self) -> bool {
        self.check_order_preserving().is_ok()
    }

    fn check_order_preserving(&self) -> Result<(), PosetError> {
        let n = self.source_below.len();
        for b in 0..n {
            let mut rem = self.source_below[b];
            while rem != 0 {
                let a = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                if self.target_below[self.map[b]] & (1 << self.map[a]) == 0 {
                    return Err(PosetError::NotOrderPreserving(a, b));
                }
            }
        }
        Ok(())
    }

    /// `g . f`: apply `self` first, then `g`.
    pub fn then(&self, g: &PosetMap) -> PosetMap {
        assert_eq!(self.target_below.len(), g.source_below.len());
        PosetMap::new(
            self.source_below.clone(),
            g.target_below.clone(),
            self.map.iter().map(|&p| g.map[p]).collect(),
        )
    }
}

/// True iff `f` is open: for all `q` in the source and `p <= f(q)` in the
/// target there is `q' <= q` with `f(q') = p`. Rejects maps that are not
/// order-preserving with a distinct error.
pub fn is_open(f: &PosetMap) -> Result<bool, PosetError> {
    f.check_order_preserving()?;
    let n = f.source_below.len();
    for q in 0..n {
        let mut image = 0u128;
        let mut rem = f.source_below[q];
        while rem != 0 {
            let q2 = rem.trailing_zeros() as usize;
            rem &= rem - 1;
            image |= 1 << f.map[q2];
        }
        if f.target_below[f.map[q]] & !image != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Componentwise order on pairs (free function form of [`LabelPoset::product`]).
pub fn product_labels(l1: &LabelPoset, l2: &LabelPoset) -> Result<LabelPoset, PosetError> {
    LabelPoset::product(l1, l2)
}

// ---------------------------------------------------------------------------
// Enumeration of rooted posets up to isomorphism.
// ---------------------------------------------------------------------------

/// Canonical code of a poset given by below-masks: the lexicographically
/// least flattened relation matrix over all relabelings compatible with an
/// invariant-based point ordering.
fn canonical_code(below: &[u128]) -> Vec<u128> {
    let n = below.len();
    let heights = compute_heights(below);
    // Iterated invariant refinement: (height, |below|, |above|, sorted child invariants).
    let mut inv: Vec<u64> = (0..n)
        .map(|p| {
            let above = (0..n).filter(|&q| below[q] & (1 << p) != 0).count();
            (u64::from(heights[p]) << 32) | ((below[p].count_ones() as u64) << 16) | above as u64
        })
        .collect();
    for _ in 0..n {
        let mut next = Vec::with_capacity(n);
        for p in 0..n {
            let mut lows: Vec<u64> = (0..n)
                .filter(|&q| q != p && below[p] & (1 << q) != 0)
                .map(|q| inv[q])
                .collect();
            lows.sort_unstable();
            let mut h = inv[p] ^ 0x9e37_79b9_7f4a_7c15;
            for l in lows {
                h ^= l;
                h = h.wrapping_mul(0x1000_0000_01b3);
                h = h.rotate_left(17);
            }
            next.push(h);
        }
        if next == inv {
            break;
        }
        inv = next;
    }
    // Group points by invariant; permutations must keep groups contiguous in
    // sorted-invariant order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&p| (inv[p], p));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &p in &order {
        match groups.last() {
            Some(g) if inv[g[0]] == inv[p] => groups.last_mut().unwrap().push(p),
            _ => groups.push(vec![p]),
        }
    }
    let mut best: Option<Vec<u128>> = None;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        groups: &[Vec<usize>],
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        below: &[u128],
        best: &mut Option<Vec<u128>>,
    ) {
        let n = below.len();
        if perm.len() == n {
            let mut pos = vec![0usize; n];
            for (new, &old) in perm.iter().enumerate() {
                pos[old] = new;
            }
            let code: Vec<u128> = perm
                .iter()
                .map(|&old| {
                    let mut m = 0u128;
                    let mut rem = below[old];
                    while rem != 0 {
                        let q = rem.trailing_zeros() as usize;
                        rem &= rem - 1;
                        m |= 1 << pos[q];
                    }
                    m
                })
                .collect();
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        // The group whose slots start at position perm.len().
        let mut acc = 0;
        let mut g = 0;
        for (i, grp) in groups.iter().enumerate() {
            if perm.len() < acc + grp.len() {
                g = i;
                break;
            }
            acc += grp.len();
        }
        for &p in &groups[g] {
            if !used[p] {
                used[p] = true;
                perm.push(p);
                rec(groups, used, perm, below, best);
                perm.pop();
                used[p] = false;
            }
        }
    }
    let mut used = vec![false; n];
    rec(&groups, &mut used, &mut perm, below, &mut best);
    best.unwrap()
}

/// All naturally-labeled posets on `n` points (labels are a linear extension),
/// as below-mask vectors.
fn naturally_labeled_posets(n: usize) -> Vec<Vec<u128>> {
    let mut out = Vec::new();
    let mut below: Vec<u128> = Vec::with_capacity(n);
    fn rec(n: usize, below: &mut Vec<u128>, out: &mut Vec<Vec<u128>>) {
        let j = below.len();
        if j == n {
            out.push(below.clone());
            return;
        }
        // Choose the strict downset of the new point: any downward-closed
        // subset of the points so far.
        let subsets = 1u32 << j;
        'next: for d in 0..subsets {
            let d = d as u128;
            let mut rem = d;
            while rem != 0 {
                let i = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                if below[i] & !d != 0 {
                    continue 'next;
                }
            }
            below.push(d | (1 << j));
            rec(n, below, out);
            below.pop();
        }
    }
    rec(n, &mut below, &mut out);
    out
}

fn rooted_posets_of_size(m: usize) -> Vec<Arc<RootedPoset>> {
    assert!(m >= 1);
    if m == 1 {
        return vec![Arc::new(RootedPoset::single())];
    }
    let base = m - 1;
    let mut seen: FxHashMap<Vec<u128>, ()> = FxHashMap::default();
    let mut codes: Vec<Vec<u128>> = Vec::new();
    for below in naturally_labeled_posets(base) {
        let code = canonical_code(&below);
        if seen.insert(code.clone(), ()).is_none() {
            codes.push(code);
        }
    }
    codes.sort();
    codes
        .into_iter()
        .map(|mut below| {
            // Adjoin a root above everything.
            let mut root_mask = 1u128 << base;
            for me in below.iter() {
                root_mask |= me;
            }
            below.push(root_mask);
            Arc::new(RootedPoset::from_below(below).expect("canonical base plus root is rooted"))
        })
        .collect()
}

static POSET_CACHE: OnceLock<Mutex<FxHashMap<usize, Arc<Vec<Arc<RootedPoset>>>>>> =
    OnceLock::new();

/// All rooted posets with exactly `m` points, up to isomorphism, in a
/// deterministic canonical order. Cached per process.
pub fn rooted_posets_exact(m: usize) -> Arc<Vec<Arc<RootedPoset>>> {
    let cache = POSET_CACHE.get_or_init(|| Mutex::new(FxHashMap::default()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(m)
        .or_insert_with(|| Arc::new(rooted_posets_of_size(m)))
        .clone()
}

/// All rooted posets with up to `max_points` points, smallest first.
pub fn rooted_posets_up_to(max_points: usize) -> Vec<Arc<RootedPoset>> {
    (1..=max_points)
        .flat_map(|m| rooted_posets_exact(m).iter().cloned().collect::<Vec<_>>())
        .collect()
}
