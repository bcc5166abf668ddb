//! The dual substitution map on finite models and its iteration: the map
//! recomputes the distinguished variable's bit by forcing the formula, all
//! other variables staying fixed. Includes per-point 2-periodicity, ranks,
//! index/period measurement on models, and the provability-level index.
//!
//! Encoding: the x-coordinate is a map into TWO with value 1 meaning "the
//! point forces x"; monotonicity with 1 <= 0 makes the forcing set downward
//! closed, matching persistence.

use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::evaluation::{EvalError, Evaluation, ForcingEvaluator, TypeId, TypeStore};
use crate::formula::{iterate_formula, substitute, Formula, Substitution};
use crate::poset::{rooted_posets_up_to, RootedPoset};
use crate::prover::{Prover, ProverError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IterationError {
    #[error("mask {0:#x} is not downward closed")]
    NotDownwardClosed(u128),
    #[error("formula uses variables outside {{x}} and the model's fixed variables: {0:?}")]
    VariableMismatch(Vec<String>),
    #[error("trace incomplete: no repeat within {0} steps")]
    TraceIncomplete(usize),
    #[error("index search exhausted the cap of {0}")]
    CapExhausted(u32),
    #[error("variable `{0}` does not occur only positively")]
    NotPositive(String),
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A finite model for one-variable iteration: a fixed part `v` labelling each
/// point with a subset of the fixed variables, and a moving part `u` saying
/// where the iteration variable holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedModel {
    poset: Arc<RootedPoset>,
    x_var: String,
    y_vars: Vec<String>,
    v_masks: Vec<u128>,
    u: u128,
}

impl CombinedModel {
    pub fn new(
        poset: Arc<RootedPoset>,
        x_var: impl Into<String>,
        y_vars: Vec<String>,
        v_masks: Vec<u128>,
        u: u128,
    ) -> Result<Self, IterationError> {
        assert_eq!(y_vars.len(), v_masks.len());
        for &m in v_masks.iter().chain([&u]) {
            if !mask_downward_closed(&poset, m) {
                return Err(IterationError::NotDownwardClosed(m));
            }
        }
        Ok(CombinedModel {
            poset,
            x_var: x_var.into(),
            y_vars,
            v_masks,
            u,
        })
    }

    pub fn random(
        rng: &mut impl rand::Rng,
        poset: Arc<RootedPoset>,
        x_var: &str,
        y_vars: &[String],
    ) -> CombinedModel {
        let v_masks = y_vars
            .iter()
            .map(|_| crate::evaluation::random_downset(rng, &poset))
            .collect();
        let u = crate::evaluation::random_downset(rng, &poset);
        CombinedModel::new(poset, x_var, y_vars.to_vec(), v_masks, u)
            .expect("random downsets are downward closed")
    }

    pub fn poset(&self) -> &Arc<RootedPoset> {
        &self.poset
    }

    pub fn x_var(&self) -> &str {
        &self.x_var
    }

    pub fn y_vars(&self) -> &[String] {
        &self.y_vars
    }

    pub fn u_mask(&self) -> u128 {
        self.u
    }

    pub fn v_masks(&self) -> &[u128] {
        &self.v_masks
    }

    pub fn with_u(&self, u: u128) -> CombinedModel {
        let mut m = self.clone();
        m.u = u;
        m
    }

    /// The Kripke evaluation over the powerset of `y_vars + [x]` that the pair
    /// `(v, u)` denotes; bisimulation depth on this evaluation is the
    /// bisimulation depth of the pair.
    pub fn as_kripke(&self) -> Evaluation {
        self.as_kripke_at(self.u)
    }

    fn as_kripke_at(&self, u: u128) -> Evaluation {
        let mut vars = self.y_vars.clone();
        vars.push(self.x_var.clone());
        let mut masks = self.v_masks.clone();
        masks.push(u);
        Evaluation::kripke(self.poset.clone(), &vars, &masks)
            .expect("downward closed masks are order-preserving")
    }

    /// Glue a fresh copy of the downset of `p` below its strict upset; the
    /// result is `~_n`-equivalent to `self` for every `n` (open surjection).
    pub fn duplicate_branch(&self, p: usize) -> Option<CombinedModel> {
        let dup = crate::evaluation::duplicate_branch(&self.as_kripke(), p)?;
        let mut masks = dup.powerset_var_masks().expect("kripke labels");
        let u = masks.pop().unwrap();
        Some(
            CombinedModel::new(
                dup.poset().clone(),
                self.x_var.clone(),
                self.y_vars.clone(),
                masks,
                u,
            )
            .expect("duplication preserves downward closure"),
        )
    }

    fn check_formula_vars(&self, a: &Formula) -> Result<(), IterationError> {
        let bad: Vec<String> = a
            .vars()
            .into_iter()
            .filter(|v| v != &self.x_var && !self.y_vars.contains(v))
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(IterationError::VariableMismatch(bad))
        }
    }
}

fn mask_downward_closed(poset: &RootedPoset, m: u128) -> bool {
    let mut rem = m;
    while rem != 0 {
        let p = rem.trailing_zeros() as usize;
        rem &= rem - 1;
        if poset.below_mask(p) & !m != 0 {
            return false;
        }
    }
    true
}

/// One application of the x-recomputation map: the new x-set is the set of
/// points forcing `a` in the Kripke model `(v, u)`. The result is downward
/// closed because forcing is persistent.
pub fn chi(a: &Formula, m: &CombinedModel) -> Result<u128, IterationError> {
    m.check_formula_vars(a)?;
    let eval = m.as_kripke();
    Ok(eval.forcing_mask(a)?)
}

/// The trace of the moving part under iteration, with the detected least
/// (index, period) and the b-index used for typing.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    /// `states[k]` is the x-set after `k` applications; the last entry equals
    /// `states[index]` (first repeat).
    pub states: Vec<u128>,
    pub index: usize,
    pub period: usize,
    /// b-index `n = max(1, degree(a))`.
    pub b_index: u32,
    /// Least step at which each point is 2-periodic (None can only occur if
    /// the full trace period exceeds 2, which the theory rules out for
    /// formula-induced maps).
    pub first_periodic: Vec<Option<usize>>,
}

impl IterationTrace {
    /// The x-set after `k` steps, folding through the detected cycle.
    pub fn state(&self, k: usize) -> u128 {
        if k < self.states.len() {
            self.states[k]
        } else {
            let k = self.index + (k - self.index) % self.period;
            self.states[k]
        }
    }

    /// Line-oriented text: one 0/1 string per recorded step (point 0 first),
    /// then `index N period k`.
    pub fn to_text(&self, points: usize) -> String {
        let mut out = String::new();
        for s in &self.states {
            for p in 0..points {
                out.push(if s & (1 << p) != 0 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out.push_str(&format!("index {} period {}\n", self.index, self.period));
        out
    }
}

/// Iterate `chi` until the full x-vector repeats (guaranteed within
/// `2^|P|` steps) or `t_max` steps have been taken.
pub fn iterate_psi(
    a: &Formula,
    m: &CombinedModel,
    t_max: usize,
) -> Result<IterationTrace, IterationError> {
    assert!(t_max >= 1);
    m.check_formula_vars(a)?;
    let mut states = vec![m.u];
    let mut seen: FxHashMap<u128, usize> = FxHashMap::default();
    seen.insert(m.u, 0);
    let mut current = m.clone();
    let (index, period) = loop {
        if states.len() > t_max {
            return Err(IterationError::TraceIncomplete(t_max));
        }
        let next = chi(a, &current)?;
        states.push(next);
        if let Some(&s) = seen.get(&next) {
            break (s, states.len() - 1 - s);
        }
        seen.insert(next, states.len() - 1);
        current = current.with_u(next);
    };
    let trace = IterationTrace {
        states,
        index,
        period,
        b_index: a.degree().max(1),
        first_periodic: Vec::new(),
    };
    let poset = m.poset();
    let first_periodic = poset
        .points()
        .map(|p| (0..=index + period).find(|&s| periodic_on_mask(&trace, poset.below_mask(p), s)))
        .collect();
    Ok(IterationTrace {
        first_periodic,
        ..trace
    })
}

fn periodic_on_mask(trace: &IterationTrace, mask: u128, s: usize) -> bool {
    (trace.state(s + 2) & mask) == (trace.state(s) & mask)
}

/// Is the restriction at `p` 2-periodic at step `s` (i.e. do steps `s` and
/// `s + 2` agree on the whole downset of `p`)?
pub fn is_periodic_point(trace: &IterationTrace, m: &CombinedModel, p: usize, s: usize) -> bool {
    periodic_on_mask(trace, m.poset().below_mask(p), s)
}

/// A violation of the frontier-point lemma, if one were ever found.
#[derive(Debug, Clone)]
pub struct LemmaPeriodViolation {
    pub point: usize,
    pub clause: &'static str,
}

/// For every point whose strict predecessors are all periodic at step 0:
/// the point itself must be periodic at step 0 or at step 1, and a
/// non-periodic point with u_0 = 1 must get u_1 = 0.
pub fn check_lemma_period(
    a: &Formula,
    m: &CombinedModel,
) -> Result<Vec<LemmaPeriodViolation>, IterationError> {
    let trace = iterate_psi(a, m, 1 + (1usize << m.poset().len().min(20)))?;
    let poset = m.poset();
    let mut violations = Vec::new();
    for p in poset.points() {
        let strict = poset.below_mask(p) & !(1u128 << p);
        if !periodic_on_mask(&trace, strict, 0) {
            continue;
        }
        let here = poset.below_mask(p);
        let periodic0 = periodic_on_mask(&trace, here, 0);
        let periodic1 = periodic_on_mask(&trace, here, 1);
        if !periodic0 && !periodic1 {
            violations.push(LemmaPeriodViolation {
                point: p,
                clause: "periodic at step 0 or 1",
            });
        }
        if !periodic0 && trace.state(0) & (1 << p) != 0 && trace.state(1) & (1 << p) != 0 {
            violations.push(LemmaPeriodViolation {
                point: p,
                clause: "non-periodic with u0 = 1 forces u1 = 0",
            });
        }
    }
    Ok(violations)
}

/// Distinct type pairs (of the current and next step restrictions, at depth
/// `b_index - 1`) among the points periodic at step `s` below `p`.
pub fn rank(
    store: &TypeStore,
    m: &CombinedModel,
    trace: &IterationTrace,
    p: usize,
    s: usize,
) -> usize {
    point_type_pairs(store, m, trace, s)
        .into_iter()
        .enumerate()
        .filter_map(|(q, pair)| {
            let on = m.poset().leq(q, p);
            match pair {
                Some(pair) if on => Some(pair),
                _ => None,
            }
        })
        .collect::<FxHashSet<_>>()
        .len()
}

/// For each point: its type pair at step `s` if it is periodic at `s`.
pub fn point_type_pairs(
    store: &TypeStore,
    m: &CombinedModel,
    trace: &IterationTrace,
    s: usize,
) -> Vec<Option<(TypeId, TypeId)>> {
    let depth = trace.b_index - 1;
    let now = m.as_kripke_at(trace.state(s));
    let next = m.as_kripke_at(trace.state(s + 1));
    let t_now = store.point_types(&now, depth);
    let t_next = store.point_types(&next, depth);
    m.poset()
        .points()
        .map(|q| {
            if periodic_on_mask(trace, m.poset().below_mask(q), s) {
                Some((t_now[q], t_next[q]))
            } else {
                None
            }
        })
        .collect()
}

/// Check that non-periodic points below a minimal-rank non-periodic point on
/// which `(v, u)` is constant stay pairwise `~_n`-equivalent along the first
/// `m_max` iterates. Returns the number of (point pair, step) violations.
pub fn check_lemma_minrank(
    store: &TypeStore,
    a: &Formula,
    model: &CombinedModel,
    m_max: usize,
) -> Result<usize, IterationError> {
    let trace = iterate_psi(a, model, 1 + (1usize << model.poset().len().min(20)))?;
    let poset = model.poset();
    let n = trace.b_index;
    let nonper: Vec<usize> = poset
        .points()
        .filter(|&q| !periodic_on_mask(&trace, poset.below_mask(q), 0))
        .collect();
    if nonper.is_empty() {
        return Ok(0);
    }
    let ranks: FxHashMap<usize, usize> = nonper
        .iter()
        .map(|&q| (q, rank(store, model, &trace, q, 0)))
        .collect();
    let mut violations = 0;
    for &p in &nonper {
        // minimal rank: no non-periodic point below has smaller rank
        let minimal = nonper
            .iter()
            .filter(|&&q| poset.leq(q, p))
            .all(|&q| ranks[&q] == ranks[&p]);
        if !minimal {
            continue;
        }
        let below_nonper: Vec<usize> = nonper
            .iter()
            .copied()
            .filter(|&q| poset.leq(q, p))
            .collect();
        // hypothesis: (v, u) constant on the non-periodic part of the downset
        let constant = below_nonper.iter().all(|&q| {
            model
                .v_masks
                .iter()
                .all(|vm| (vm >> q) & 1 == (vm >> below_nonper[0]) & 1)
                && (model.u >> q) & 1 == (model.u >> below_nonper[0]) & 1
        });
        if !constant {
            continue;
        }
        for step in 0..=m_max {
            let state = model.with_u(trace.state(step));
            let kripke = state.as_kripke();
            let types = store.point_types(&kripke, n);
            for (i, &q0) in below_nonper.iter().enumerate() {
                for &q1 in &below_nonper[i + 1..] {
                    if types[q0] != types[q1] {
                        violations += 1;
                    }
                }
            }
        }
    }
    Ok(violations)
}

// ---------------------------------------------------------------------------
// Provability-level index and period.
// ---------------------------------------------------------------------------

/// All combined models on rooted posets with up to `max_points` points:
/// every combination of downsets for the fixed variables and the x-part.
/// Used to reject candidate indices before calling the prover, and by the
/// exhaustive desk-scale experiments.
pub fn all_combined_models(
    x_var: &str,
    y_vars: &[String],
    max_points: usize,
) -> Vec<CombinedModel> {
    let mut out = Vec::new();
    for poset in rooted_posets_up_to(max_points) {
        let downsets = poset.downsets();
        let mut tuples: Vec<Vec<u128>> = vec![Vec::new()];
        for _ in 0..=y_vars.len() {
            let mut next = Vec::with_capacity(tuples.len() * downsets.len());
            for t in &tuples {
                for &d in &downsets {
                    let mut t2 = t.clone();
                    t2.push(d);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        for mut t in tuples {
            let u = t.pop().unwrap();
            out.push(
                CombinedModel::new(poset.clone(), x_var, y_vars.to_vec(), t, u)
                    .expect("downsets are downward closed"),
            );
        }
    }
    out
}

thread_local! {
    static STOCK_CACHE: std::cell::RefCell<FxHashMap<(String, Vec<String>), Arc<Vec<CombinedModel>>>> =
        std::cell::RefCell::new(FxHashMap::default());
}

fn stock_models_cached(x_var: &str, y_vars: &[String]) -> Arc<Vec<CombinedModel>> {
    STOCK_CACHE.with(|cell| {
        let mut cache = cell.borrow_mut();
        cache
            .entry((x_var.to_string(), y_vars.to_vec()))
            .or_insert_with(|| Arc::new(all_combined_models(x_var, y_vars, 3)))
            .clone()
    })
}

/// The least `N >= 1` with `A^{N+2}` provably equivalent to `A^N`, and the
/// period: 1 if additionally `A^{N+1}` is equivalent to `A^N`, else 2.
///
/// Candidate indices are screened on a stock of small Kripke models: the
/// x-recomputation trace on each model gives the least index that can work
/// there, and any smaller candidate is spot-verified to fail by evaluating
/// the syntactic iterates' forcing masks on the witness model (an honest
/// countermodel to the bi-implication). The surviving candidate is certified
/// by the prover, which alone can answer "equivalent".
pub fn ruitenburg_index(
    prover: &mut Prover,
    a: &Formula,
    x: &str,
    n_cap: u32,
) -> Result<(u32, u32), IterationError> {
    assert!(n_cap >= 1);
    if !a.contains_var(x) {
        // A^2 = A syntactically.
        return Ok((1, 1));
    }
    let y_vars: Vec<String> = a.vars().into_iter().filter(|v| v != x).collect();
    let models = stock_models_cached(x, &y_vars);

    // chi-traces per stock model: vars are ordered y_vars then x.
    let mut all_vars = y_vars.clone();
    all_vars.push(x.to_string());
    let compiled = crate::masks::compile(a, &all_vars);
    let mut scratch = Vec::new();
    let mut var_masks = vec![0u128; all_vars.len()];
    // Per model: (states, index, period). states[k] is the k-th chi iterate.
    let mut traces: Vec<(Vec<u128>, usize, usize)> = Vec::with_capacity(models.len());
    for m in models.iter() {
        var_masks[..y_vars.len()].copy_from_slice(m.v_masks());
        let mut states = vec![m.u_mask()];
        let (index, period) = loop {
            var_masks[y_vars.len()] = *states.last().unwrap();
            let next = compiled.eval(m.poset(), &var_masks, &mut scratch);
            if let Some(s) = states.iter().position(|&prev| prev == next) {
                break (s, states.len() - s);
            }
            states.push(next);
        };
        traces.push((states, index, period));
    }
    let trace_state = |t: &(Vec<u128>, usize, usize), k: usize| -> u128 {
        if k < t.0.len() {
            t.0[k]
        } else {
            t.0[t.1 + (k - t.1) % t.2]
        }
    };

    // iterates[i] = A^{i+1}, built on demand.
    let mut iterates: Vec<Formula> = vec![a.clone()];
    let grow = |iterates: &mut Vec<Formula>, upto: u32| {
        while (iterates.len() as u32) < upto {
            let next = substitute(a, &Substitution::single(x, iterates.last().unwrap().clone()));
            iterates.push(next);
        }
    };

    let mut candidate = 1u32;
    'candidates: while candidate <= n_cap {
        let n = candidate as usize;
        for (mi, t) in traces.iter().enumerate() {
            if trace_state(t, n + 2) != trace_state(t, n) {
                // The model claims A^{n+2} and A^n differ; verify the
                // rejection on the syntactic iterates so minimality never
                // rests on the trace shortcut.
                grow(&mut iterates, candidate + 2);
                let eval = models[mi].as_kripke();
                let mut fe = ForcingEvaluator::new(&eval)?;
                if fe.mask(&iterates[n - 1])? != fe.mask(&iterates[n + 1])? {
                    candidate += 1;
                    continue 'candidates;
                }
                // Trace and syntactic forcing disagree (cannot happen); fall
                // through to the prover as the authority.
                break;
            }
        }
        grow(&mut iterates, candidate + 2);
        let a_n = &iterates[n - 1];
        let a_n2 = &iterates[n + 1];
        if prover.equiv_ipc(a_n2, a_n)? {
            let a_n1 = &iterates[n];
            let mut period = 1u32;
            if traces
                .iter()
                .any(|t| trace_state(t, n + 1) != trace_state(t, n))
            {
                period = 2;
            } else if !prover.equiv_ipc(a_n1, a_n)? {
                period = 2;
            }
            return Ok((candidate, period));
        }
        candidate += 1;
    }
    Err(IterationError::CapExhausted(n_cap))
}

/// For `a` monotone (x strictly positive), the fixpoint formula `A^N(_|_/x)`,
/// verified to satisfy `A(F/x) <-> F` in IPC.
pub fn fixpoint_check(
    prover: &mut Prover,
    a: &Formula,
    x: &str,
    n_cap: u32,
) -> Result<Formula, IterationError> {
    if !a.positive_in(x) {
        return Err(IterationError::NotPositive(x.to_string()));
    }
    let (n, _) = ruitenburg_index(prover, a, x, n_cap)?;
    let fix = substitute(
        &iterate_formula(a, x, n),
        &Substitution::single(x, Formula::bottom()),
    );
    let unfolded = substitute(a, &Substitution::single(x, fix.clone()));
    if !prover.equiv_ipc(&unfolded, &fix)? {
        // By ultimate periodicity on the increasing bottom-substituted chain
        // this cannot happen; treat it as a cap problem.
        return Err(IterationError::CapExhausted(n_cap));
    }
    Ok(fix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn single_model(x_forced: bool) -> CombinedModel {
        CombinedModel::new(
            Arc::new(RootedPoset::single()),
            "x",
            vec!["y".to_string()],
            vec![0],
            if x_forced { 1 } else { 0 },
        )
        .unwrap()
    }

    #[test]
    fn chi_examples() {
        // A = x: chi is the x-projection
        let m = single_model(true);
        assert_eq!(chi(&parse("x").unwrap(), &m).unwrap(), m.u_mask());

        // A = y with y at the root: constantly 1
        let m = CombinedModel::new(
            Arc::new(RootedPoset::single()),
            "x",
            vec!["y".to_string()],
            vec![1],
            0,
        )
        .unwrap();
        assert_eq!(chi(&parse("y").unwrap(), &m).unwrap(), 1);
        assert_eq!(chi(&parse("y").unwrap(), &m.with_u(1)).unwrap(), 1);

        // A = ~x on a single point flips the bit
        let m = single_model(true);
        let not_x = parse("~x").unwrap();
        let u1 = chi(&not_x, &m).unwrap();
        assert_eq!(u1, 0);
        assert_eq!(chi(&not_x, &m.with_u(u1)).unwrap(), 1);

        // unknown variable
        assert!(matches!(
            chi(&parse("z").unwrap(), &m),
            Err(IterationError::VariableMismatch(_))
        ));
    }

    #[test]
    fn trace_examples() {
        // A = x: u1 = u0, index 0 period 1
        let m = single_model(true);
        let t = iterate_psi(&parse("x").unwrap(), &m, 10).unwrap();
        assert_eq!((t.index, t.period), (0, 1));

        // A = ~x from u0 = 1: 1, 0, 1 -> index 0 period 2
        let t = iterate_psi(&parse("~x").unwrap(), &m, 10).unwrap();
        assert_eq!((t.index, t.period), (0, 2));
        assert_eq!(t.states, vec![1, 0, 1]);

        // A = ~x | y on the 2-chain, both v empty, u0 = bottom only
        let m = CombinedModel::new(
            Arc::new(RootedPoset::chain(2)),
            "x",
            vec!["y".to_string()],
            vec![0],
            0b01,
        )
        .unwrap();
        let t = iterate_psi(&parse("~x | y").unwrap(), &m, 10).unwrap();
        assert!(t.period <= 2);
        // consecutive entries satisfy the defining recurrence
        for k in 0..t.states.len() - 1 {
            assert_eq!(
                chi(&parse("~x | y").unwrap(), &m.with_u(t.states[k])).unwrap(),
                t.states[k + 1]
            );
        }
        // trace text round trip shape
        let text = t.to_text(2);
        assert!(text.ends_with(&format!("index {} period {}\n", t.index, t.period)));

        // trace incomplete error
        assert!(matches!(
            iterate_psi(&parse("~x").unwrap(), &single_model(true), 1),
            Err(IterationError::TraceIncomplete(1))
        ));
    }

    #[test]
    fn periodic_point_examples() {
        let m = single_model(true);
        let t = iterate_psi(&parse("x").unwrap(), &m, 10).unwrap();
        assert!(is_periodic_point(&t, &m, 0, 0));

        let t = iterate_psi(&parse("~x").unwrap(), &m, 10).unwrap();
        assert!(is_periodic_point(&t, &m, 0, 0));
        assert_eq!(t.first_periodic, vec![Some(0)]);
    }

    #[test]
    fn lemma_period_examples() {
        let m = single_model(true);
        assert!(check_lemma_period(&parse("x").unwrap(), &m)
            .unwrap()
            .is_empty());
        assert!(check_lemma_period(&parse("~x").unwrap(), &m)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn lemma_period_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let y_vars = vec!["y".to_string()];
        let formulas = [
            "~x | y",
            "(x -> y) -> x",
            "~(x & y)",
            "x -> y",
            "((x -> y) -> x) -> x",
            "~~x",
        ];
        for _ in 0..100 {
            let n = rand::Rng::random_range(&mut rng, 1..=6);
            let poset = Arc::new(RootedPoset::random(&mut rng, n));
            let m = CombinedModel::random(&mut rng, poset, "x", &y_vars);
            for f in formulas {
                let v = check_lemma_period(&parse(f).unwrap(), &m).unwrap();
                assert!(v.is_empty(), "violations for {} on {:?}", f, m);
            }
        }
    }

    #[test]
    fn index_from_height_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let y_vars = vec!["y".to_string()];
        let formulas = ["~x | y", "(x -> y) -> x", "~~x", "x | (y -> x)"];
        for _ in 0..100 {
            let n = rand::Rng::random_range(&mut rng, 1..=7);
            let poset = Arc::new(RootedPoset::random(&mut rng, n));
            let h = poset.height() as usize;
            let m = CombinedModel::random(&mut rng, poset, "x", &y_vars);
            for f in formulas {
                let t = iterate_psi(&parse(f).unwrap(), &m, 200).unwrap();
                // after height(P) steps every point is 2-periodic
                assert_eq!(
                    t.state(h + 2),
                    t.state(h),
                    "psi^height not periodic for {}",
                    f
                );
            }
        }
    }

    #[test]
    fn rank_examples() {
        let store = TypeStore::new();
        // chain with constant labels under A = x: everything periodic at 0,
        // one type pair
        let m = CombinedModel::new(
            Arc::new(RootedPoset::chain(3)),
            "x",
            vec!["y".to_string()],
            vec![0b111],
            0b111,
        )
        .unwrap();
        let t = iterate_psi(&parse("x").unwrap(), &m, 10).unwrap();
        for p in 0..3 {
            assert_eq!(rank(&store, &m, &t, p, 0), 1);
        }

        // no periodic points below p -> rank 0: single point under ~x has
        // period 2, which IS periodic; use a fabricated trace instead by
        // checking monotonicity on random models.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let y_vars = vec!["y".to_string()];
        for _ in 0..30 {
            let n = rand::Rng::random_range(&mut rng, 1..=6);
            let poset = Arc::new(RootedPoset::random(&mut rng, n));
            let m = CombinedModel::random(&mut rng, poset.clone(), "x", &y_vars);
            let t = iterate_psi(&parse("(x -> y) -> x").unwrap(), &m, 300).unwrap();
            for p in poset.points() {
                for q in poset.points() {
                    if poset.leq(q, p) {
                        assert!(rank(&store, &m, &t, p, 0) >= rank(&store, &m, &t, q, 0));
                    }
                }
            }
        }
    }

    #[test]
    fn minrank_lemma_spot_check() {
        use rand::SeedableRng;
        let store = TypeStore::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        let y_vars = vec!["y".to_string()];
        let formulas = ["(x -> y) -> x", "~x | y", "~(x -> y)", "((x -> y) -> x) -> y"];
        let mut applicable = 0;
        for _ in 0..200 {
            let n = rand::Rng::random_range(&mut rng, 1..=6);
            let poset = Arc::new(RootedPoset::random(&mut rng, n));
            let m = CombinedModel::random(&mut rng, poset, "x", &y_vars);
            for f in formulas {
                let v = check_lemma_minrank(&store, &parse(f).unwrap(), &m, 4).unwrap();
                assert_eq!(v, 0, "minrank violations for {}", f);
                applicable += 1;
            }
        }
        assert!(applicable > 0);
    }

    #[test]
    fn ruitenburg_examples() {
        let mut prover = Prover::default();
        let (n, p) = ruitenburg_index(&mut prover, &parse("x").unwrap(), "x", 10).unwrap();
        assert_eq!((n, p), (1, 1));

        let (n, p) = ruitenburg_index(&mut prover, &parse("~x").unwrap(), "x", 10).unwrap();
        assert_eq!((n, p), (1, 2));

        let (n, p) = ruitenburg_index(&mut prover, &parse("x | y").unwrap(), "x", 10).unwrap();
        assert_eq!((n, p), (1, 1));
    }

    #[test]
    fn ruitenburg_matches_naive_prover_search() {
        // Independent oracle: find the least N by prover calls alone.
        let mut prover = Prover::default();
        let formulas = [
            "~x",
            "x -> y",
            "~~x",
            "(x -> y) -> x",
            "x & y",
            "x | ~y",
            "~x | y",
            "(x -> y) | x",
            "~(x | y)",
            "((x -> y) -> x) -> y",
        ];
        for f in formulas {
            let a = parse(f).unwrap();
            let naive = (1..=12)
                .find(|&n| {
                    let an = iterate_formula(&a, "x", n);
                    let an2 = iterate_formula(&a, "x", n + 2);
                    prover.equiv_ipc(&an2, &an).unwrap()
                })
                .unwrap();
            let naive_period = {
                let an = iterate_formula(&a, "x", naive);
                let an1 = iterate_formula(&a, "x", naive + 1);
                if prover.equiv_ipc(&an1, &an).unwrap() {
                    1
                } else {
                    2
                }
            };
            let (n, p) = ruitenburg_index(&mut prover, &a, "x", 12).unwrap();
            assert_eq!((n, p), (naive, naive_period), "formula {}", f);
        }
    }

    #[test]
    fn fixpoint_examples() {
        let mut prover = Prover::default();
        // A = x | y: least fixpoint is y
        let fix = fixpoint_check(&mut prover, &parse("x | y").unwrap(), "x", 10).unwrap();
        assert!(prover.equiv_ipc(&fix, &parse("y").unwrap()).unwrap());

        // A = x: fixpoint bottom
        let fix = fixpoint_check(&mut prover, &parse("x").unwrap(), "x", 10).unwrap();
        assert!(prover.equiv_ipc(&fix, &Formula::bottom()).unwrap());

        // A = (y -> x) & z
        let a = parse("(y -> x) & z").unwrap();
        let fix = fixpoint_check(&mut prover, &a, "x", 10).unwrap();
        let unfolded = substitute(&a, &Substitution::single("x", fix.clone()));
        assert!(prover.equiv_ipc(&unfolded, &fix).unwrap());

        // positivity violation
        assert!(matches!(
            fixpoint_check(&mut prover, &parse("~x").unwrap(), "x", 10),
            Err(IterationError::NotPositive(_))
        ));
    }
}
