//! The acceptance experiments: twelve criteria covering the index/period
//! property, the classical case, Glivenko checks, model-level periodicity
//! lemmas, bounded-bisimulation properties, the syntactic/semantic bridge,
//! the ladder suite, period bounds, the duality shadows, and prover/oracle
//! agreement. Each criterion reports one pass/fail line; identical
//! configurations produce identical reports.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::bounds;
use crate::corpus::{exhaustive_count, for_each_exhaustive, random_formula};
use crate::dualitylite::{
    check_nform, downset_implies, ev_map, heyting_implies, Subpresheaf,
};
use crate::evaluation::{equiv_n, reduced_trees, Evaluation, ForcingEvaluator, TypeStore};
use crate::formula::{iterate_formula, Formula};
use crate::iteration::{
    all_combined_models, check_lemma_period, chi, iterate_psi, ruitenburg_index, CombinedModel,
};
use crate::ladder::{
    eval_generator, inverse_image_iterates, ladder_endo, projectivity_check, star_construction,
    vee_vee, LadderDownset, LadderPoset,
};
use crate::poset::{is_open, rooted_posets_up_to, LabelPoset, RootedPoset};
use crate::prover::{countermodel, prove_cpc, Prover, ProverConfig};

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Exhaustive corpus: every formula over {x, y} with at most this many
    /// connectives.
    pub exhaustive_cap: u32,
    /// Extra random corpus: this many formulas over {x, y1, y2}.
    pub random_count: usize,
    pub random_conn: u32,
    /// Cap on the measured index.
    pub index_cap: u32,
    pub prover_budget: u64,
    pub prover_cache_cap: usize,
    /// Seeded (formula, model) pairs for the model-level criteria.
    pub pair_count: usize,
    /// Model pairs per formula for the b-index criterion.
    pub pairs_per_formula: usize,
    /// Random valid models for the ladder map construction.
    pub star_models: usize,
    /// Countermodel search cap.
    pub max_countermodel_points: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0xA11CE,
            exhaustive_cap: 5,
            random_count: 200,
            random_conn: 9,
            index_cap: 12,
            prover_budget: 50_000_000,
            prover_cache_cap: 4_000_000,
            pair_count: 500,
            pairs_per_formula: 200,
            star_models: 300,
            max_countermodel_points: 8,
        }
    }
}

impl SuiteConfig {
    fn prover(&self) -> Prover {
        Prover::new(ProverConfig {
            node_budget: self.prover_budget,
            cache_cap: self.prover_cache_cap,
        })
    }
}

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:2} {} {} ({})",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "index-period"),
    (2, "classical-case"),
    (3, "glivenko"),
    (4, "index-from-height"),
    (5, "frontier-lemma"),
    (6, "b-index"),
    (7, "degree-correspondence"),
    (8, "duality-bridge"),
    (9, "ladder"),
    (10, "period-bounds"),
    (11, "duality-lite"),
    (12, "oracle-agreement"),
];

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, cfg)).collect()
}

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionOutcome {
    let name = CRITERIA
        .iter()
        .find(|&&(i, _)| i == id)
        .map(|&(_, n)| n)
        .expect("criterion id in 1..=12");
    let (passed, detail) = match id {
        1 => criterion_index_period(cfg),
        2 => criterion_classical(cfg),
        3 => criterion_glivenko(cfg),
        4 => criterion_index_from_height(cfg),
        5 => criterion_frontier_lemma(cfg),
        6 => criterion_b_index(cfg),
        7 => criterion_degree_correspondence(cfg),
        8 => criterion_duality_bridge(cfg),
        9 => criterion_ladder(cfg),
        10 => criterion_period_bounds(cfg),
        11 => criterion_duality_lite(cfg),
        12 => criterion_oracle_agreement(cfg),
        _ => unreachable!(),
    };
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
    }
}

fn random_corpus(cfg: &SuiteConfig) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.random_count)
        .map(|i| {
            let conn = 1 + (i as u32 % cfg.random_conn);
            random_formula(&mut rng, &["x", "y1", "y2"], conn)
        })
        .collect()
}

/// Seeded (formula, model) pairs shared by the trace criteria.
fn trace_pairs(cfg: &SuiteConfig, max_points: usize) -> Vec<(Formula, CombinedModel)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7ace);
    (0..cfg.pair_count)
        .map(|i| {
            let conn = 1 + (i as u32 % 7);
            let a = random_formula(&mut rng, &["x", "y1", "y2"], conn);
            let y_vars: Vec<String> = a.vars().into_iter().filter(|v| v != "x").collect();
            let n = rng.random_range(1..=max_points);
            let poset = Arc::new(RootedPoset::random(&mut rng, n));
            let m = CombinedModel::random(&mut rng, poset, "x", &y_vars);
            (a, m)
        })
        .collect()
}

// --- criterion 1 -----------------------------------------------------------

fn criterion_index_period(cfg: &SuiteConfig) -> (bool, String) {
    let mut prover = cfg.prover();
    let mut count = 0u64;
    let mut failures = 0u64;
    let mut max_n = 0u32;
    let mut check = |prover: &mut Prover, f: &Formula| {
        count += 1;
        match ruitenburg_index(prover, f, "x", cfg.index_cap.max(14)) {
            Ok((n, p)) if (p == 1 || p == 2) && n <= cfg.index_cap => max_n = max_n.max(n),
            _ => failures += 1,
        }
    };
    for_each_exhaustive(&["x", "y"], cfg.exhaustive_cap, |f| check(&mut prover, f));
    for f in random_corpus(cfg) {
        check(&mut prover, &f);
    }
    (
        failures == 0,
        format!("{} formulas, max N = {}, {} failures", count, max_n, failures),
    )
}

// --- criterion 2 -----------------------------------------------------------

fn criterion_classical(cfg: &SuiteConfig) -> (bool, String) {
    let mut count = 0u64;
    let mut failures = 0u64;
    let mut check = |f: &Formula| {
        count += 1;
        let a3 = iterate_formula(f, "x", 3);
        match prove_cpc(&Formula::iff(a3, f.clone())) {
            Ok(true) => {}
            _ => failures += 1,
        }
    };
    for_each_exhaustive(&["x", "y"], cfg.exhaustive_cap, &mut check);
    for f in random_corpus(cfg) {
        check(&f);
    }
    let mut f3_violations = 0usize;
    for t in 1..=4 {
        let report = bounds::classical_f3(t);
        f3_violations += report.violations;
    }
    let fixture = bounds::classical_f3(3).fixture_index_period;
    let ok = failures == 0 && f3_violations == 0 && fixture == (1, 2);
    (
        ok,
        format!(
            "{} formulas A^3<->A, {} failures; f^3=f violations {}; fixture {:?}",
            count, failures, f3_violations, fixture
        ),
    )
}

// --- criterion 3 -----------------------------------------------------------

fn criterion_glivenko(cfg: &SuiteConfig) -> (bool, String) {
    let mut prover = cfg.prover();
    let x = Formula::var("x");
    let not = Formula::not;
    let spot1 = prover
        .equiv_ipc(&not(x.clone()), &not(not(not(x.clone()))))
        .unwrap_or(false);
    let spot2 = !prover
        .equiv_ipc(&x, &not(not(x.clone())))
        .unwrap_or(true);
    let cm = countermodel(&Formula::iff(x.clone(), not(not(x.clone()))), 2);
    let spot3 = cm.map(|c| c.model.poset().len() == 2).unwrap_or(false);

    let mut count = 0u64;
    let mut failures = 0u64;
    let mut check = |prover: &mut Prover, f: &Formula| {
        count += 1;
        let classical = prove_cpc(f).unwrap_or(false);
        let nn = Formula::not(Formula::not(f.clone()));
        match prover.prove_ipc(&nn) {
            Ok(intuitionistic) if intuitionistic == classical => {}
            _ => failures += 1,
        }
    };
    for_each_exhaustive(&["x", "y"], cfg.exhaustive_cap, |f| check(&mut prover, f));
    for f in random_corpus(cfg) {
        check(&mut prover, &f);
    }
    let ok = spot1 && spot2 && spot3 && failures == 0;
    (
        ok,
        format!(
            "~x<->~~~x {}, x<->~~x refuted on 2 points {}, glivenko on {} formulas, {} failures",
            spot1, spot3, count, failures
        ),
    )
}

// --- criteria 4, 5 ---------------------------------------------------------

fn trace_horizon(m: &CombinedModel) -> usize {
    2 + (1usize << m.poset().len().min(20))
}

fn criterion_index_from_height(cfg: &SuiteConfig) -> (bool, String) {
    let pairs = trace_pairs(cfg, 8);
    let mut violations = 0usize;
    for (a, m) in &pairs {
        let t = iterate_psi(a, m, trace_horizon(m)).expect("trace completes");
        let h = m.poset().height() as usize;
        if t.state(h + 2) != t.state(h) {
            violations += 1;
        }
    }
    (
        violations == 0,
        format!("{} pairs, {} violations", pairs.len(), violations),
    )
}

fn criterion_frontier_lemma(cfg: &SuiteConfig) -> (bool, String) {
    let pairs = trace_pairs(cfg, 8);
    let mut violations = 0usize;
    for (a, m) in &pairs {
        violations += check_lemma_period(a, m).expect("trace completes").len();
    }
    (
        violations == 0,
        format!("{} pairs, {} violations", pairs.len(), violations),
    )
}

// --- criterion 6 -----------------------------------------------------------

fn criterion_b_index(cfg: &SuiteConfig) -> (bool, String) {
    let store = TypeStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb1de);
    let mut formulas: Vec<Formula> = ["~x", "(x -> y1) -> x", "~~x", "x -> y1", "~x | y1"]
        .iter()
        .map(|t| crate::formula::parse(t).unwrap())
        .collect();
    for _ in 0..15 {
        let conn = 1 + rng.random_range(0..6);
        formulas.push(random_formula(&mut rng, &["x", "y1", "y2"], conn));
    }
    let mut pairs_checked = 0usize;
    let mut equiv_pairs = 0usize;
    let mut violations = 0usize;
    for a in &formulas {
        let y_vars: Vec<String> = a.vars().into_iter().filter(|v| v != "x").collect();
        let n = a.degree().max(1);
        // Pool of models bucketed by type at depth n + k.
        let pool: Vec<CombinedModel> = (0..60)
            .map(|_| {
                let size = rng.random_range(1..=6);
                let poset = Arc::new(RootedPoset::random(&mut rng, size));
                CombinedModel::random(&mut rng, poset, "x", &y_vars)
            })
            .collect();
        for k in 0..=2u32 {
            let depth = n + k;
            let mut buckets: FxHashMap<crate::evaluation::TypeId, Vec<usize>> =
                FxHashMap::default();
            for (i, m) in pool.iter().enumerate() {
                buckets
                    .entry(store.bisim_type(&m.as_kripke(), depth))
                    .or_default()
                    .push(i);
            }
            let mut check_pair = |m0: &CombinedModel, m1: &CombinedModel| {
                pairs_checked += 1;
                if !equiv_n(&store, &m0.as_kripke(), &m1.as_kripke(), depth) {
                    return;
                }
                equiv_pairs += 1;
                let im0 = m0.with_u(chi(a, m0).expect("chi"));
                let im1 = m1.with_u(chi(a, m1).expect("chi"));
                if !equiv_n(&store, &im0.as_kripke(), &im1.as_kripke(), k) {
                    violations += 1;
                }
            };
            let per_k = cfg.pairs_per_formula / 3 + 1;
            let mut used = 0usize;
            for idxs in buckets.values() {
                for i in 0..idxs.len() {
                    for j in i + 1..idxs.len() {
                        if used >= per_k {
                            break;
                        }
                        check_pair(&pool[idxs[i]], &pool[idxs[j]]);
                        used += 1;
                    }
                }
            }
            // Guaranteed-equivalent pairs from branch duplication. Attempts
            // are capped because one-point models have no branch to copy.
            let mut attempts = 0;
            while used < per_k && attempts < 10 * per_k {
                attempts += 1;
                let m = &pool[rng.random_range(0..pool.len())];
                let p = rng.random_range(0..m.poset().len());
                if let Some(dup) = m.duplicate_branch(p) {
                    check_pair(m, &dup);
                    used += 1;
                }
            }
        }
    }
    (
        violations == 0,
        format!(
            "{} formulas, {} pairs ({} equivalent), {} violations",
            formulas.len(),
            pairs_checked,
            equiv_pairs,
            violations
        ),
    )
}

// --- criterion 7 -----------------------------------------------------------

fn criterion_degree_correspondence(cfg: &SuiteConfig) -> (bool, String) {
    let store = TypeStore::new();
    let vars = ["x".to_string(), "y".to_string()];
    // All evaluations on rooted posets with <= 4 points over P({x, y}).
    let mut evals: Vec<Evaluation> = Vec::new();
    for poset in rooted_posets_up_to(4) {
        let downsets = poset.downsets();
        for &mx in &downsets {
            for &my in &downsets {
                evals.push(
                    Evaluation::kripke(poset.clone(), &vars, &[mx, my])
                        .expect("downsets are order-preserving"),
                );
            }
        }
    }
    // Classes at depth 2.
    let mut classes: FxHashMap<crate::evaluation::TypeId, Vec<usize>> = FxHashMap::default();
    for (i, e) in evals.iter().enumerate() {
        classes.entry(store.bisim_type(e, 2)).or_default().push(i);
    }
    let multi: Vec<&Vec<usize>> = classes.values().filter(|v| v.len() > 1).collect();

    let mut formulas: Vec<Formula> = Vec::new();
    for_each_exhaustive(&["x", "y"], 3, |f| {
        if f.degree() <= 2 {
            formulas.push(f.clone());
        }
    });
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xde6);
    let mut extra = 0;
    while extra < 300 {
        let conn = 1 + rng.random_range(0..6);
        let f = random_formula(&mut rng, &["x", "y"], conn);
        if f.degree() <= 2 {
            formulas.push(f);
            extra += 1;
        }
    }

    let var_names: Vec<String> = vars.to_vec();
    let mut scratch = Vec::new();
    let mut violations = 0usize;
    for f in &formulas {
        let compiled = crate::masks::compile(f, &var_names);
        let forced_root: Vec<bool> = evals
            .iter()
            .map(|e| {
                let masks = e.powerset_var_masks().expect("kripke");
                let m = compiled.eval(e.poset(), &masks, &mut scratch);
                m & (1 << e.poset().root()) != 0
            })
            .collect();
        for class in &multi {
            let first = forced_root[class[0]];
            if class.iter().any(|&i| forced_root[i] != first) {
                violations += 1;
            }
        }
    }
    (
        violations == 0,
        format!(
            "{} evaluations in {} classes ({} multi), {} formulas, {} violations",
            evals.len(),
            classes.len(),
            multi.len(),
            formulas.len(),
            violations
        ),
    )
}

// --- criterion 8 -----------------------------------------------------------

fn criterion_duality_bridge(cfg: &SuiteConfig) -> (bool, String) {
    let mut checks = 0u64;
    let mut violations = 0u64;
    let mut verify = |a: &Formula, m: &CombinedModel| {
        // chi iterates vs forcing of the syntactic iterates, i <= 6.
        let eval = m.as_kripke();
        let mut fe = ForcingEvaluator::new(&eval).expect("kripke labels");
        let mut u = m.u_mask();
        for i in 1..=6u32 {
            u = chi(a, &m.with_u(u)).expect("chi evaluates");
            let syntactic = fe
                .mask(&iterate_formula(a, "x", i))
                .expect("forcing evaluates");
            checks += 1;
            if syntactic != u {
                violations += 1;
            }
        }
    };

    // Exhaustive tier: formulas over {x, y} with <= 2 connectives, all
    // combined models with <= 4 points over y.
    let y = vec!["y".to_string()];
    let models = all_combined_models("x", &y, 4);
    for_each_exhaustive(&["x", "y"], 2, |f| {
        for m in &models {
            verify(f, m);
        }
    });

    // Seeded tier: random formulas on random models with <= 6 points.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb71d6e);
    for _ in 0..cfg.pair_count {
        let conn = 1 + rng.random_range(0..6);
        let a = random_formula(&mut rng, &["x", "y1", "y2"], conn);
        let y_vars: Vec<String> = a.vars().into_iter().filter(|v| v != "x").collect();
        let size = rng.random_range(1..=6);
        let poset = Arc::new(RootedPoset::random(&mut rng, size));
        let m = CombinedModel::random(&mut rng, poset, "x", &y_vars);
        verify(&a, &m);
    }
    (
        violations == 0,
        format!("{} iterate checks, {} violations", checks, violations),
    )
}

// --- criterion 9 -----------------------------------------------------------

fn criterion_ladder(cfg: &SuiteConfig) -> (bool, String) {
    let l12 = LadderPoset::new(12).expect("k = 12");
    let mut problems: Vec<String> = Vec::new();

    for n in -1..=10i64 {
        if eval_generator(&l12, n).is_err() {
            problems.push(format!("generator {}", n));
        }
    }
    // vee on every proper normal-form downset: an upper bound adding one
    // point for pairs, identity on principal downsets.
    for d in l12.proper_downsets() {
        let v = match vee_vee(d) {
            Ok(v) => v,
            Err(_) => {
                problems.push(format!("vee {}", d));
                continue;
            }
        };
        if v <= l12.truncation() {
            let dm = d.mask(&l12);
            let vm = l12.down_mask(v);
            let ok = match d {
                LadderDownset::Down(_) => vm == dm,
                LadderDownset::DownPair(_) => {
                    dm & !vm == 0 && vm.count_ones() == dm.count_ones() + 1
                }
                _ => false,
            };
            if !ok {
                problems.push(format!("vee value {}", d));
            }
        }
    }
    if ladder_endo(&l12).is_err() {
        problems.push("endo not open".into());
    }
    match inverse_image_iterates(&l12, LadderDownset::Down(0), 4) {
        Ok(it) => {
            let mut sorted = it.clone();
            sorted.dedup();
            if sorted.len() != it.len() {
                problems.push("iterates not distinct".into());
            }
        }
        Err(e) => problems.push(format!("iterates: {}", e)),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x57a7);
    let ladder = LadderPoset::new(24).expect("k = 24");
    let mut stars = 0usize;
    for _ in 0..cfg.star_models {
        let n = rng.random_range(1..=8);
        let poset = Arc::new(RootedPoset::random(&mut rng, n));
        let minimals: u128 = poset
            .points()
            .filter(|&p| poset.below_mask(p) == 1 << p)
            .fold(0, |acc, p| acc | (1 << p));
        let a_mask = minimals | crate::evaluation::random_downset(&mut rng, &poset);
        let b_mask = a_mask | crate::evaluation::random_downset(&mut rng, &poset);
        let m = Evaluation::kripke(
            poset,
            &["a".to_string(), "b".to_string()],
            &[a_mask, b_mask],
        )
        .expect("downsets are order-preserving");
        match star_construction(&m, &ladder) {
            Ok(f) => {
                stars += 1;
                if is_open(&f) != Ok(true) {
                    problems.push("star not open".into());
                }
            }
            Err(e) => problems.push(format!("star: {}", e)),
        }
    }

    let mut prover = cfg.prover();
    if projectivity_check(&mut prover) != Ok(true) {
        problems.push("projectivity".into());
    }

    (
        problems.is_empty(),
        if problems.is_empty() {
            format!(
                "generators -1..=10 ok, endo open, iterates distinct, {} star maps, projectivity ok",
                stars
            )
        } else {
            problems.join("; ")
        },
    )
}

// --- criterion 10 ----------------------------------------------------------

fn criterion_period_bounds(cfg: &SuiteConfig) -> (bool, String) {
    let pairs = trace_pairs(cfg, 8);
    let mut bound_violations = 0usize;
    let mut period_over_two = 0usize;
    for (a, m) in &pairs {
        let t = iterate_psi(a, m, trace_horizon(m)).expect("trace completes");
        if !bounds::check_period_bound(&t, m).ok() {
            bound_violations += 1;
        }
        if t.period > 2 {
            period_over_two += 1;
        }
    }
    let mut factorial_ok = true;
    for m in 1..=12 {
        for n in 1..=12 {
            factorial_ok &= bounds::factorial_inequality(m, n);
        }
    }
    let mut nonmono_ok = true;
    for n in 1..=12u32 {
        let (_, period) = bounds::nonmonotone_counterexample(n);
        nonmono_ok &= period == 1u64 << n;
    }
    let mut boolean_ok = true;
    for n in 1..=2u32 {
        let r = bounds::boolean_endo_experiment(n, 0, cfg.seed);
        boolean_ok &= r.within_lcm_bound && r.lcm_within_factorial;
    }
    let ok = bound_violations == 0
        && period_over_two == 0
        && factorial_ok
        && nonmono_ok
        && boolean_ok;
    (
        ok,
        format!(
            "{} traces within K!/l! bounds ({} violations, {} periods > 2); factorial {}, nonmonotone 2^n {}, boolean lcm {}",
            pairs.len(), bound_violations, period_over_two, factorial_ok, nonmono_ok, boolean_ok
        ),
    )
}

// --- criterion 11 ----------------------------------------------------------

fn criterion_duality_lite(cfg: &SuiteConfig) -> (bool, String) {
    let _ = cfg;
    let store = Arc::new(TypeStore::new());
    let two = Arc::new(LabelPoset::two());
    let mut pool: Vec<Evaluation> = Vec::new();
    for p in rooted_posets_up_to(3) {
        for d in p.downsets() {
            let map: Vec<usize> = p
                .points()
                .map(|q| if d & (1 << q) != 0 { 1 } else { 0 })
                .collect();
            pool.push(Evaluation::new(p.clone(), two.clone(), map).expect("downset labelling"));
        }
    }
    let mut problems = 0usize;

    // Families: the three downward closed label sets and the principal
    // families of a few pool members at depths 0 and 1.
    let mut families: Vec<Subpresheaf> = Vec::new();
    for d in [0b00u128, 0b10, 0b11] {
        families.push(Subpresheaf::iota(two.clone(), d).expect("downward closed"));
    }
    for (i, g) in pool.iter().enumerate() {
        if i % 4 == 0 {
            families.push(Subpresheaf::down_n(store.clone(), g.clone(), 1));
            families.push(Subpresheaf::down_n(store.clone(), g.clone(), 0));
        }
    }

    // Commuting triangle for every downward closed d and every f.
    for f in &pool {
        for d in [0b00u128, 0b10, 0b11] {
            let x = Subpresheaf::iota(two.clone(), d).expect("downward closed");
            let lhs = ev_map(&x, f);
            let mut rhs = 0u128;
            for p in f.poset().points() {
                if d & (1 << f.label_of(p)) != 0 {
                    rhs |= 1 << p;
                }
            }
            if lhs != rhs {
                problems += 1;
            }
        }
    }
    // Heyting morphism on family pairs.
    for (i, s) in families.iter().enumerate() {
        for t in families.iter().skip(i) {
            let imp = heyting_implies(s, t).expect("same labels");
            let uni = s.union(t).expect("same labels");
            let int = s.intersection(t).expect("same labels");
            for f in &pool {
                let (es, et) = (ev_map(s, f), ev_map(t, f));
                if ev_map(&imp, f) != downset_implies(f.poset(), es, et)
                    || ev_map(&uni, f) != es | et
                    || ev_map(&int, f) != es & et
                {
                    problems += 1;
                }
            }
        }
    }
    // Normal-form equation at n = 0 and n = 1.
    let mut nform_mismatches = 0usize;
    for n in 0..=1u32 {
        let mut universe = pool.clone();
        universe.extend(reduced_trees(&store, &two, n, 5).expect("small width"));
        for u in &pool {
            nform_mismatches += check_nform(&store, u, n, &universe, &pool)
                .mismatches
                .len();
        }
    }
    let ok = problems == 0 && nform_mismatches == 0;
    (
        ok,
        format!(
            "{} evaluations, {} families, {} morphism problems, {} nform mismatches",
            pool.len(),
            families.len(),
            problems,
            nform_mismatches
        ),
    )
}

// --- criterion 12 ----------------------------------------------------------

fn criterion_oracle_agreement(cfg: &SuiteConfig) -> (bool, String) {
    let mut prover = cfg.prover();
    // Sample: the full <= 2 connective tier, a deterministic slice of the
    // larger tiers, and the random corpus.
    let mut sample: Vec<Formula> = Vec::new();
    for_each_exhaustive(&["x", "y"], 2, |f| sample.push(f.clone()));
    let total = exhaustive_count(3, cfg.exhaustive_cap);
    let step = (total / 300).max(1);
    let mut i = 0u64;
    for_each_exhaustive(&["x", "y"], cfg.exhaustive_cap, |f| {
        if i % step == 0 && f.connectives() > 2 {
            sample.push(f.clone());
        }
        i += 1;
    });
    sample.extend(random_corpus(cfg));

    let mut provable = 0usize;
    let mut refuted = 0usize;
    let mut escapes = 0usize;
    let mut disagreements = 0usize;
    for f in &sample {
        let proved = prover.prove_ipc(f).unwrap_or(false);
        if proved {
            provable += 1;
            if countermodel(f, cfg.max_countermodel_points).is_some() {
                disagreements += 1;
            }
        } else if f.degree() <= 3 {
            match countermodel(f, cfg.max_countermodel_points) {
                Some(cm) => {
                    refuted += 1;
                    // the countermodel must actually refute at its root
                    if cm.model.forces_root(f).unwrap_or(true) {
                        disagreements += 1;
                    }
                }
                None => escapes += 1,
            }
        }
    }
    (
        disagreements == 0,
        format!(
            "{} formulas: {} provable (no countermodel), {} refuted, {} escapes, {} disagreements",
            sample.len(),
            provable,
            refuted,
            escapes,
            disagreements
        ),
    )
}
