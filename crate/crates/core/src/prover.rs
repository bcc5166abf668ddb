//! Decision procedures: IPC provability by backward search in a terminating
//! contraction-free sequent calculus with memoization, CPC provability by
//! truth tables, and an independent finite-countermodel oracle.
//!
//! The calculus splits the left-implication rule by the shape of the
//! implication's antecedent, so no loop checking is needed. Sequents are
//! memoized on set-normalized antecedents; the cache persists across calls
//! because iterated-substitution searches re-prove many shared subsequents.


use rustc_hash::FxHashMap;

use crate::evaluation::Evaluation;
use crate::formula::{Formula, Kind};
use crate::poset::rooted_posets_exact;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProverError {
    #[error("proof search exceeded the node budget of {0}; raise the budget")]
    Budget(u64),
    #[error("truth-table check limited to {max} variables, formula has {got}")]
    TooManyVariables { max: usize, got: usize },
}

#[derive(Debug, Clone)]
pub struct ProverConfig {
    /// Maximum number of search nodes per `prove_ipc` call.
    pub node_budget: u64,
    /// Cache entry cap; the cache is cleared when it grows past this.
    pub cache_cap: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            node_budget: 20_000_000,
            cache_cap: usize::MAX,
        }
    }
}

type Id = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum IKind {
    Bottom,
    Var(u32),
    And(Id, Id),
    Or(Id, Id),
    Implies(Id, Id),
}

struct Interner {
    name_ids: FxHashMap<Box<str>, u32>,
    kinds: Vec<IKind>,
    ids: FxHashMap<IKind, Id>,
}

const BOT: Id = 0;
const TOP: Id = 1;

impl Default for Interner {
    fn default() -> Self {
        let mut i = Interner {
            name_ids: FxHashMap::default(),
            kinds: Vec::new(),
            ids: FxHashMap::default(),
        };
        i.raw(IKind::Bottom);
        i.raw(IKind::Implies(BOT, BOT));
        i
    }
}

impl Interner {
    fn raw(&mut self, k: IKind) -> Id {
        if let Some(&id) = self.ids.get(&k) {
            return id;
        }
        let id = self.kinds.len() as Id;
        self.kinds.push(k);
        self.ids.insert(k, id);
        id
    }

    /// Smart constructor: local equivalence-preserving rewrites (unit and
    /// idempotence laws, lattice absorption, residuation collapses) keep the
    /// interned DAG free of the degenerate shapes substitution iterates
    /// produce. Provability is invariant under each rewrite, so search
    /// verdicts are unchanged.
    fn mk(&mut self, k: IKind) -> Id {
        let kind_of = |s: &Self, id: Id| s.kinds[id as usize];
        let k = match k {
            IKind::And(a, b) => {
                if a == b || b == TOP {
                    return a;
                }
                if a == TOP {
                    return b;
                }
                if a == BOT || b == BOT {
                    return BOT;
                }
                // absorption: a & (a | q) = a
                if let IKind::Or(p, q) = kind_of(self, b) {
                    if p == a || q == a {
                        return a;
                    }
                }
                if let IKind::Or(p, q) = kind_of(self, a) {
                    if p == b || q == b {
                        return b;
                    }
                }
                IKind::And(a.min(b), a.max(b))
            }
            IKind::Or(a, b) => {
                if a == b || b == BOT {
                    return a;
                }
                if a == BOT {
                    return b;
                }
                if a == TOP || b == TOP {
                    return TOP;
                }
                // absorption: a | (a & q) = a
                if let IKind::And(p, q) = kind_of(self, b) {
                    if p == a || q == a {
                        return a;
                    }
                }
                if let IKind::And(p, q) = kind_of(self, a) {
                    if p == b || q == b {
                        return b;
                    }
                }
                IKind::Or(a.min(b), a.max(b))
            }
            IKind::Implies(a, b) => {
                if a == b || b == TOP || a == BOT {
                    return TOP;
                }
                if a == TOP {
                    return b;
                }
                // a -> (... | a) and (... & b) -> b are theorems
                if let IKind::Or(p, q) = kind_of(self, b) {
                    if p == a || q == a {
                        return TOP;
                    }
                }
                if let IKind::And(p, q) = kind_of(self, a) {
                    if p == b || q == b {
                        return TOP;
                    }
                }
                // a -> (a & q) collapses to a -> q
                if let IKind::And(p, q) = kind_of(self, b) {
                    if p == a {
                        return self.mk(IKind::Implies(a, q));
                    }
                    if q == a {
                        return self.mk(IKind::Implies(a, p));
                    }
                }
                // (p | b) -> b collapses to p -> b
                if let IKind::Or(p, q) = kind_of(self, a) {
                    if p == b {
                        return self.mk(IKind::Implies(q, b));
                    }
                    if q == b {
                        return self.mk(IKind::Implies(p, b));
                    }
                }
                IKind::Implies(a, b)
            }
            other => other,
        };
        self.raw(k)
    }

    fn name(&mut self, n: &str) -> u32 {
        if let Some(&id) = self.name_ids.get(n) {
            return id;
        }
        let id = self.name_ids.len() as u32;
        self.name_ids.insert(n.into(), id);
        id
    }

    fn intern(&mut self, f: &Formula) -> Id {
        // Pointer-keyed memo is only valid while `f` keeps the DAG alive, so
        // it is local to this conversion.
        let mut memo: FxHashMap<usize, Id> = FxHashMap::default();
        self.intern_rec(f, &mut memo)
    }

    fn intern_rec(&mut self, f: &Formula, memo: &mut FxHashMap<usize, Id>) -> Id {
        if let Some(&id) = memo.get(&f.ptr_id()) {
            return id;
        }
        let id = match f.kind() {
            Kind::Bottom => self.mk(IKind::Bottom),
            Kind::Var(n) => {
                let v = self.name(n);
                self.mk(IKind::Var(v))
            }
            Kind::And(a, b) => {
                let (x, y) = (self.intern_rec(a, memo), self.intern_rec(b, memo));
                self.mk(IKind::And(x, y))
            }
            Kind::Or(a, b) => {
                let (x, y) = (self.intern_rec(a, memo), self.intern_rec(b, memo));
                self.mk(IKind::Or(x, y))
            }
            Kind::Implies(a, b) => {
                let (x, y) = (self.intern_rec(a, memo), self.intern_rec(b, memo));
                self.mk(IKind::Implies(x, y))
            }
        };
        memo.insert(f.ptr_id(), id);
        id
    }
}

/// IPC prover. Reentrant per instance; clone-free formulas are interned into
/// compact ids and all search state lives in this struct.
pub struct Prover {
    cfg: ProverConfig,
    interner: Interner,
    cache: FxHashMap<Box<[Id]>, bool>,
    replace_cache: FxHashMap<(Id, Id, Id), Id>,
    nodes: u64,
}

impl Default for Prover {
    fn default() -> Self {
        Prover::new(ProverConfig::default())
    }
}

impl Prover {
    pub fn new(cfg: ProverConfig) -> Self {
        Prover {
            cfg,
            interner: Interner::default(),
            cache: FxHashMap::default(),
            replace_cache: FxHashMap::default(),
            nodes: 0,
        }
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    /// Drop all memoized sequents (the formula table is kept).
    pub fn clear_cache(&mut self) {
        self.cache.clear();
        self.replace_cache.clear();
    }

    /// Rewrite occurrences of `pat` inside `t` to `by`, re-simplifying.
    fn replace(&mut self, t: Id, pat: Id, by: Id) -> Id {
        if t == pat {
            return by;
        }
        if let Some(&r) = self.replace_cache.get(&(t, pat, by)) {
            return r;
        }
        let r = match self.kind(t) {
            IKind::Bottom | IKind::Var(_) => t,
            IKind::And(a, b) => {
                let (x, y) = (self.replace(a, pat, by), self.replace(b, pat, by));
                if x == a && y == b {
                    t
                } else {
                    self.interner.mk(IKind::And(x, y))
                }
            }
            IKind::Or(a, b) => {
                let (x, y) = (self.replace(a, pat, by), self.replace(b, pat, by));
                if x == a && y == b {
                    t
                } else {
                    self.interner.mk(IKind::Or(x, y))
                }
            }
            IKind::Implies(a, b) => {
                let (x, y) = (self.replace(a, pat, by), self.replace(b, pat, by));
                if x == a && y == b {
                    t
                } else {
                    self.interner.mk(IKind::Implies(x, y))
                }
            }
        };
        self.replace_cache.insert((t, pat, by), r);
        r
    }

    /// Contextual collapse: an antecedent formula is forced (persistently)
    /// throughout the sequent's future, so its occurrences inside the other
    /// members and the goal rewrite to top; under a negated member, the
    /// negated body rewrites to bottom. Returns true if anything changed.
    fn condition(&mut self, ant: &mut Vec<Id>, goal: &mut Id) -> bool {
        let mut changed = false;
        let snapshot = ant.clone();
        for f in snapshot {
            if !contains(ant, f) {
                continue;
            }
            let mut subs: Vec<(Id, Id)> = vec![(f, TOP)];
            if let IKind::Implies(b, c) = self.kind(f) {
                if c == BOT {
                    subs.push((b, BOT));
                }
            }
            for (pat, by) in subs {
                let members: Vec<Id> = ant.iter().copied().filter(|&m| m != f).collect();
                for m in members {
                    let m2 = self.replace(m, pat, by);
                    if m2 != m && contains(ant, m) {
                        let pos = ant.binary_search(&m).unwrap();
                        ant.remove(pos);
                        insert_sorted(ant, m2);
                        changed = true;
                    }
                }
                let g2 = self.replace(*goal, pat, by);
                if g2 != *goal {
                    *goal = g2;
                    changed = true;
                }
            }
        }
        changed
    }

    /// True iff `a` is an IPC theorem.
    pub fn prove_ipc(&mut self, a: &Formula) -> Result<bool, ProverError> {
        let goal = self.interner.intern(a);
        self.nodes = 0;
        self.search(Vec::new(), goal)
    }

    /// True iff `a` and `b` are provably bi-implied in IPC.
    pub fn equiv_ipc(&mut self, a: &Formula, b: &Formula) -> Result<bool, ProverError> {
        let ia = self.interner.intern(a);
        let ib = self.interner.intern(b);
        if ia == ib {
            return Ok(true);
        }
        let fwd = self.interner.mk(IKind::Implies(ia, ib));
        let bwd = self.interner.mk(IKind::Implies(ib, ia));
        self.nodes = 0;
        Ok(self.search(Vec::new(), fwd)? && self.search(Vec::new(), bwd)?)
    }

    fn kind(&self, id: Id) -> IKind {
        self.interner.kinds[id as usize]
    }

    /// Backward proof search. `ant` is sorted and deduplicated.
    fn search(&mut self, mut ant: Vec<Id>, mut goal: Id) -> Result<bool, ProverError> {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget {
            return Err(ProverError::Budget(self.cfg.node_budget));
        }

        // Saturation phase: all invertible rules, then contextual collapse,
        // until neither makes progress.
        loop {
            'saturate: loop {
                // Right implication: move the antecedent over.
                while let IKind::Implies(a, b) = self.kind(goal) {
                    insert_sorted(&mut ant, a);
                    goal = b;
                }
                if contains(&ant, goal) {
                    return Ok(true);
                }
                let mut i = 0;
                while i < ant.len() {
                    let f = ant[i];
                    match self.kind(f) {
                        IKind::Bottom => return Ok(true),
                        IKind::And(a, b) => {
                            ant.remove(i);
                            insert_sorted(&mut ant, a);
                            insert_sorted(&mut ant, b);
                            continue 'saturate;
                        }
                        IKind::Or(a, b) => {
                            // Invertible branch: both extensions must hold.
                            let mut left = ant.clone();
                            left.remove(left.binary_search(&f).unwrap());
                            let mut right = left.clone();
                            insert_sorted(&mut left, a);
                            insert_sorted(&mut right, b);
                            return Ok(self.search(left, goal)? && self.search(right, goal)?);
                        }
                        IKind::Implies(c, b) => match self.kind(c) {
                            IKind::Bottom => {
                                ant.remove(i);
                                continue 'saturate;
                            }
                            IKind::Var(_) if contains(&ant, c) => {
                                ant.remove(i);
                                insert_sorted(&mut ant, b);
                                continue 'saturate;
                            }
                            IKind::And(c1, c2) => {
                                ant.remove(i);
                                let inner = self.interner.mk(IKind::Implies(c2, b));
                                let curried = self.interner.mk(IKind::Implies(c1, inner));
                                insert_sorted(&mut ant, curried);
                                continue 'saturate;
                            }
                            IKind::Or(c1, c2) => {
                                ant.remove(i);
                                let l = self.interner.mk(IKind::Implies(c1, b));
                                let r = self.interner.mk(IKind::Implies(c2, b));
                                insert_sorted(&mut ant, l);
                                insert_sorted(&mut ant, r);
                                continue 'saturate;
                            }
                            _ => {
                                i += 1;
                            }
                        },
                        _ => {
                            i += 1;
                        }
                    }
                }
                break;
            }
            if contains(&ant, goal) {
                return Ok(true);
            }
            if !self.condition(&mut ant, &mut goal) {
                break;
            }
        }
        if contains(&ant, goal) {
            return Ok(true);
        }
        // Invertible right conjunction.
        if let IKind::And(a, b) = self.kind(goal) {
            return Ok(self.search(ant.clone(), a)? && self.search(ant, b)?);
        }

        // Stable sequent: consult the cache.
        let mut key = Vec::with_capacity(ant.len() + 1);
        key.extend_from_slice(&ant);
        key.push(goal);
        let key = key.into_boxed_slice();
        if let Some(&hit) = self.cache.get(&key) {
            return Ok(hit);
        }

        // Choice phase: right disjunction and left nested implication.
        let mut provable = false;
        if let IKind::Or(a, b) = self.kind(goal) {
            provable = self.search(ant.clone(), a)? || self.search(ant.clone(), b)?;
        }
        if !provable {
            for i in 0..ant.len() {
                let f = ant[i];
                if let IKind::Implies(c, b) = self.kind(f) {
                    if let IKind::Implies(c1, c2) = self.kind(c) {
                        // Premise 1: Γ, c1, c2 -> b |- c2 ; premise 2: Γ, b |- goal
                        let mut base = ant.clone();
                        base.remove(base.binary_search(&f).unwrap());
                        let mut p1 = base.clone();
                        insert_sorted(&mut p1, c1);
                        let aux = self.interner.mk(IKind::Implies(c2, b));
                        insert_sorted(&mut p1, aux);
                        if self.search(p1, c2)? {
                            let mut p2 = base;
                            insert_sorted(&mut p2, b);
                            if self.search(p2, goal)? {
                                provable = true;
                                break;
                            }
                        }
                    }
                }
            }
        }

        if self.cache.len() >= self.cfg.cache_cap {
            self.cache.clear();
            self.replace_cache.clear();
        }
        self.cache.insert(key, provable);
        Ok(provable)
    }
}

fn insert_sorted(v: &mut Vec<Id>, x: Id) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn contains(v: &[Id], x: Id) -> bool {
    v.binary_search(&x).is_ok()
}

/// One-shot IPC provability with a fresh default prover.
pub fn prove_ipc(a: &Formula) -> Result<bool, ProverError> {
    Prover::default().prove_ipc(a)
}

/// One-shot IPC equivalence with a fresh default prover.
pub fn equiv_ipc(a: &Formula, b: &Formula) -> Result<bool, ProverError> {
    Prover::default().equiv_ipc(a, b)
}

// ---------------------------------------------------------------------------
// Classical provability by truth tables.
// ---------------------------------------------------------------------------

pub const CPC_VAR_CAP: usize = 24;

/// True iff `a` is a classical tautology. At most [`CPC_VAR_CAP`] variables.
pub fn prove_cpc(a: &Formula) -> Result<bool, ProverError> {
    let vars: Vec<String> = a.vars().into_iter().collect();
    if vars.len() > CPC_VAR_CAP {
        return Err(ProverError::TooManyVariables {
            max: CPC_VAR_CAP,
            got: vars.len(),
        });
    }
    // Compile the DAG to postorder ops once, then evaluate 64 assignments at
    // a time with one u64 lane per assignment.
    enum Op {
        Bottom,
        Var(usize),
        And(usize, usize),
        Or(usize, usize),
        Implies(usize, usize),
    }
    let mut ops: Vec<Op> = Vec::new();
    let mut slot: FxHashMap<usize, usize> = FxHashMap::default();
    fn compile(
        f: &Formula,
        vars: &[String],
        ops: &mut Vec<Op>,
        slot: &mut FxHashMap<usize, usize>,
    ) -> usize {
        if let Some(&s) = slot.get(&f.ptr_id()) {
            return s;
        }
        let op = match f.kind() {
            Kind::Bottom => Op::Bottom,
            Kind::Var(n) => Op::Var(vars.iter().position(|v| v == &**n).unwrap()),
            Kind::And(a, b) => {
                let (x, y) = (compile(a, vars, ops, slot), compile(b, vars, ops, slot));
                Op::And(x, y)
            }
            Kind::Or(a, b) => {
                let (x, y) = (compile(a, vars, ops, slot), compile(b, vars, ops, slot));
                Op::Or(x, y)
            }
            Kind::Implies(a, b) => {
                let (x, y) = (compile(a, vars, ops, slot), compile(b, vars, ops, slot));
                Op::Implies(x, y)
            }
        };
        ops.push(op);
        let s = ops.len() - 1;
        slot.insert(f.ptr_id(), s);
        s
    }
    let top = compile(a, &vars, &mut ops, &mut slot);
    let v = vars.len();
    let total: u64 = 1u64 << v;
    let mut values = vec![0u64; ops.len()];
    let mut base = 0u64;
    while base < total {
        let lanes = (total - base).min(64);
        let live = if lanes == 64 { !0u64 } else { (1u64 << lanes) - 1 };
        for (i, op) in ops.iter().enumerate() {
            values[i] = match *op {
                Op::Bottom => 0,
                Op::Var(j) if j < 6 => {
                    // Lane l has assignment base + l; bit j of it selects the value.
                    let mut m = 0u64;
                    for l in 0..lanes {
                        if (base + l) >> j & 1 == 1 {
                            m |= 1 << l;
                        }
                    }
                    m
                }
                Op::Var(j) => {
                    if base >> j & 1 == 1 {
                        live
                    } else {
                        0
                    }
                }
                Op::And(x, y) => values[x] & values[y],
                Op::Or(x, y) => values[x] | values[y],
                Op::Implies(x, y) => !values[x] | values[y],
            };
        }
        if values[top] & live != live {
            return Ok(false);
        }
        base += lanes;
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Countermodel oracle.
// ---------------------------------------------------------------------------

/// A finite Kripke model refuting a target formula at its root.
#[derive(Debug, Clone)]
pub struct Countermodel {
    pub model: Evaluation,
    pub target: Formula,
}

/// Exhaustively search rooted posets with up to `max_points` points (up to
/// isomorphism) and order-preserving valuations for a model whose root does
/// not force `a`. Deterministic: smallest poset first, then the refutation
/// with fewest labeled variables (ties broken lexicographically). Absence is
/// evidence, not a proof of provability.
pub fn countermodel(a: &Formula, max_points: usize) -> Option<Countermodel> {
    let vars: Vec<String> = a.vars().into_iter().collect();
    let compiled = crate::masks::compile(a, &vars);
    let k = vars.len();
    let mut scratch = Vec::new();
    for m in 1..=max_points {
        for poset in rooted_posets_exact(m).iter() {
            let downsets = poset.downsets();
            let root_bit = 1u128 << poset.root();
            // Odometer over downset tuples; keep the least refutation by
            // (total labeled points, tuple) rather than sorting all tuples.
            let mut idx = vec![0usize; k];
            let mut masks = vec![*downsets.first().expect("downsets nonempty"); k];
            let mut best: Option<(u32, Vec<u128>)> = None;
            loop {
                let forced = compiled.eval(poset, &masks, &mut scratch);
                if forced & root_bit == 0 {
                    let score = masks.iter().map(|mm| mm.count_ones()).sum::<u32>();
                    if best
                        .as_ref()
                        .is_none_or(|(s, t)| (score, &masks) < (*s, t))
                    {
                        best = Some((score, masks.clone()));
                    }
                }
                let mut i = 0;
                while i < k {
                    idx[i] += 1;
                    if idx[i] < downsets.len() {
                        masks[i] = downsets[idx[i]];
                        break;
                    }
                    idx[i] = 0;
                    masks[i] = downsets[0];
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
            if let Some((_, t)) = best {
                let model = Evaluation::kripke(poset.clone(), &vars, &t)
                    .expect("downset valuations are order-preserving");
                return Some(Countermodel {
                    model,
                    target: a.clone(),
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn ipc_theorems() {
        let theorems = [
            "x -> x",
            "~_|_",
            "x -> (y -> x)",
            "(x -> (y -> z)) -> ((x -> y) -> (x -> z))",
            "_|_ -> x",
            "~~(x | ~x)",
            "~~(((x -> y) -> x) -> x)",
            "x & y -> x",
            "x -> x | y",
            "~(x | y) <-> (~x & ~y)",
            "(~x | ~y) -> ~(x & y)",
            "((x | y) -> z) <-> ((x -> z) & (y -> z))",
            "(x & (y | z)) <-> ((x & y) | (x & z))",
            "(x | (y & z)) <-> ((x | y) & (x | z))",
            "(x -> (y -> z)) <-> ((x & y) -> z)",
            "~~~x <-> ~x",
        ];
        let mut prover = Prover::default();
        for t in theorems {
            assert_eq!(prover.prove_ipc(&p(t)), Ok(true), "{}", t);
        }
    }

    #[test]
    fn ipc_non_theorems() {
        let non = [
            "x",
            "_|_",
            "x | ~x",
            "~~x -> x",
            "((x -> y) -> x) -> x",
            "(x -> y) | (y -> x)",
            "~(x & y) -> (~x | ~y)",
            "((x -> y) -> y) -> (x | y)",
            "(~x -> y | z) -> ((~x -> y) | (~x -> z))",
        ];
        let mut prover = Prover::default();
        for t in non {
            assert_eq!(prover.prove_ipc(&p(t)), Ok(false), "{}", t);
        }
    }

    #[test]
    fn equiv_examples() {
        let mut prover = Prover::default();
        assert_eq!(prover.equiv_ipc(&p("x"), &p("x & x")), Ok(true));
        assert_eq!(prover.equiv_ipc(&p("x"), &p("~~x")), Ok(false));
        assert_eq!(prover.equiv_ipc(&p("~x"), &p("~~~x")), Ok(true));
    }

    #[test]
    fn modus_ponens_closure() {
        let mut prover = Prover::default();
        let pairs = [
            ("x -> x | y", "x", "x | y"),
            ("~~(x | ~x)", "~~(x | ~x) -> ~~~~ (x | ~x)", "~~~~(x | ~x)"),
        ];
        for (imp, ante, cons) in pairs {
            // only meaningful when both premises prove
            let both = prover.prove_ipc(&p(&format!("({}) ", imp))).unwrap()
                && prover.prove_ipc(&p(ante)).unwrap();
            if both {
                assert_eq!(
                    prover.prove_ipc(&p(&format!("({}) -> ({})", ante, cons))).unwrap()
                        || prover.prove_ipc(&p(cons)).unwrap(),
                    true
                );
            }
        }
    }

    #[test]
    fn cpc_examples() {
        assert_eq!(prove_cpc(&p("x | ~x")), Ok(true));
        assert_eq!(prove_cpc(&p("x")), Ok(false));
        assert_eq!(prove_cpc(&p("((x -> y) -> x) -> x")), Ok(true));
        assert_eq!(prove_cpc(&p("(x -> y) | (y -> x)")), Ok(true));
        assert_eq!(prove_cpc(&p("~(x & y) -> (~x | ~y)")), Ok(true));
    }

    #[test]
    fn cpc_variable_cap() {
        let mut f = Formula::var("v0");
        for i in 1..=CPC_VAR_CAP {
            f = Formula::or(f, Formula::var(format!("v{}", i)));
        }
        assert!(matches!(
            prove_cpc(&f),
            Err(ProverError::TooManyVariables { .. })
        ));
    }

    #[test]
    fn countermodel_examples() {
        // excluded middle: minimal refutation is the 2-chain with x below only
        let cm = countermodel(&p("x | ~x"), 2).expect("2-chain refutes");
        assert_eq!(cm.model.poset().len(), 2);
        assert_eq!(cm.model.poset().height(), 2);
        let root = cm.model.poset().root();
        assert_eq!(cm.model.label_of(root), 0); // empty label at root
        assert!(!cm.model.forces_root(&p("x | ~x")).unwrap());

        // no countermodel for a theorem
        assert!(countermodel(&p("x -> x"), 6).is_none());

        // double negation elimination
        let cm = countermodel(&p("~~x -> x"), 2).expect("2-chain refutes");
        assert!(!cm.model.forces_root(&p("~~x -> x")).unwrap());
    }

    #[test]
    fn glivenko_spot_checks() {
        let mut prover = Prover::default();
        let formulas = [
            "x | ~x",
            "((x -> y) -> x) -> x",
            "x -> y",
            "~(x & y) -> (~x | ~y)",
            "x & ~x",
        ];
        for t in formulas {
            let f = p(t);
            let classical = prove_cpc(&f).unwrap();
            let nn = Formula::not(Formula::not(f));
            assert_eq!(classical, prover.prove_ipc(&nn).unwrap(), "{}", t);
        }
    }

    #[test]
    fn budget_error_is_reported() {
        let mut prover = Prover::new(ProverConfig {
            node_budget: 0,
            cache_cap: usize::MAX,
        });
        let f = p("~~(((x -> y) -> x) -> x)");
        assert!(matches!(prover.prove_ipc(&f), Err(ProverError::Budget(0))));
    }
}
