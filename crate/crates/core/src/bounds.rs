//! Period bounds for iterated maps: view sets and the factorial bound, the
//! non-monotone construction with period 2^n, exhaustive verification of the
//! classical third-iterate identity, and the measured periods of duals of
//! Boolean endomorphisms against the lcm bound.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rustc_hash::FxHashMap;

use crate::iteration::{CombinedModel, IterationTrace};

/// The set of labels a point sees along an iteration, as `(v-label, u-bit)`
/// pairs encoded `v_label * 2 + u_bit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewSet {
    pub point: usize,
    pub labels: std::collections::BTreeSet<usize>,
}

fn v_label_of(m: &CombinedModel, p: usize) -> usize {
    let mut label = 0usize;
    for (i, vm) in m.v_masks().iter().enumerate() {
        if vm & (1 << p) != 0 {
            label |= 1 << i;
        }
    }
    label
}

/// The view set of `p`: all `(v(p), u_k(p))` pairs over the recorded trace
/// (the trace reaches its repeat, so this is the exact infinite view set).
pub fn view_set(trace: &IterationTrace, m: &CombinedModel, p: usize) -> ViewSet {
    let v = v_label_of(m, p);
    let labels = trace
        .states
        .iter()
        .map(|s| v * 2 + ((s >> p) & 1) as usize)
        .collect();
    ViewSet { point: p, labels }
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn lcm_up_to(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, j| acc.lcm(&BigUint::from(j)))
}

/// Period-bound report for one trace: the period against `K!` (view-set
/// cardinality of the whole model) and `l!` (label poset size).
#[derive(Debug, Clone)]
pub struct PeriodBoundReport {
    pub period: usize,
    pub view_cardinality: usize,
    pub label_count: usize,
    pub within_view_bound: bool,
    pub within_label_bound: bool,
}

impl PeriodBoundReport {
    pub fn ok(&self) -> bool {
        self.within_view_bound && self.within_label_bound
    }
}

/// Assert `period <= K!` and `period <= l!` where `K` is the cardinality of
/// the model's view set and `l` the number of labels (`2^{|y| + 1}`).
pub fn check_period_bound(trace: &IterationTrace, m: &CombinedModel) -> PeriodBoundReport {
    let mut all = std::collections::BTreeSet::new();
    for p in m.poset().points() {
        all.extend(view_set(trace, m, p).labels);
    }
    let k = all.len();
    let l = 1usize << (m.y_vars().len() + 1);
    let period = BigUint::from(trace.period);
    PeriodBoundReport {
        period: trace.period,
        view_cardinality: k,
        label_count: l,
        within_view_bound: period <= factorial(k as u64),
        within_label_bound: period <= factorial(l as u64),
    }
}

/// Exact big-integer check of `n * m! <= (m + n - 1)!`.
pub fn factorial_inequality(m: u64, n: u64) -> bool {
    assert!(m >= 1 && n >= 1);
    BigUint::from(n) * factorial(m) <= factorial(m + n - 1)
}

/// First repeat of the iterate sequence of an endofunction given as a table:
/// the least `(index, period)` with `f^{index + period} = f^{index}`.
pub fn table_index_period(table: &[usize]) -> (usize, usize) {
    let n = table.len();
    let mut seen: FxHashMap<Vec<usize>, usize> = FxHashMap::default();
    let mut current: Vec<usize> = (0..n).collect(); // f^0 = id
    let mut step = 0usize;
    loop {
        if let Some(&s) = seen.get(&current) {
            return (s, step - s);
        }
        seen.insert(current.clone(), step);
        current = current.iter().map(|&i| table[i]).collect();
        step += 1;
    }
}

/// The non-monotone construction: a bijection of `{0,1}^n` of order exactly
/// `2^n`, built level by level (flip the last coordinate exactly when the
/// prefix completes its own cycle). Returns the table over `n`-bit words and
/// the measured period of the iterate sequence.
pub fn nonmonotone_counterexample(n: u32) -> (Vec<usize>, u64) {
    assert!(n >= 1 && n <= 16);
    // psi_1 swaps the single bit.
    let mut table: Vec<usize> = vec![1, 0];
    for i in 1..n {
        let size = 1usize << i;
        // Orbit positions: w_j = psi_i^j(0...0).
        let mut pos = vec![0usize; size];
        let mut w = 0usize;
        for j in 0..size {
            pos[w] = j;
            w = table[w];
        }
        assert_eq!(w, 0, "psi_i is a full cycle");
        let mut next = vec![0usize; size * 2];
        for w in 0..size {
            for x in 0..2usize {
                let flipped = if pos[w] == size - 1 { 1 - x } else { x };
                next[w | (x << i)] = table[w] | (flipped << i);
            }
        }
        table = next;
    }
    // Measure the period of the word orbit starting from all zeros (the map
    // is a bijection, so the orbit through 0 is a pure cycle).
    let mut period = 0u64;
    let mut w = table[0];
    period += 1;
    while w != 0 {
        w = table[w];
        period += 1;
    }
    (table, period)
}

/// Report for the exhaustive classical case: every map on `T x 2` commuting
/// with the first projection satisfies `f^3 = f`.
#[derive(Debug, Clone)]
pub struct ClassicalReport {
    pub t_size: usize,
    pub checked: usize,
    pub violations: usize,
    /// Index and period of the three-component fixture (identity, swap,
    /// constant), expected (1, 2) = (max{0,0,1}, lcm{1,2,1}).
    pub fixture_index_period: (usize, usize),
}

/// Exhaustively enumerate all `f = <pi_0, g>` on `T x {0,1}` for `|T| =
/// t_size` and check `f^3 = f`.
pub fn classical_f3(t_size: usize) -> ClassicalReport {
    assert!(t_size >= 1 && t_size <= 6);
    let points = t_size * 2; // (a, b) encoded a * 2 + b
    let g_choices = 1u64 << points; // g : T x 2 -> 2
    let mut checked = 0usize;
    let mut violations = 0usize;
    for g_bits in 0..g_choices {
        let table: Vec<usize> = (0..points)
            .map(|i| {
                let a = i / 2;
                let gb = ((g_bits >> i) & 1) as usize;
                a * 2 + gb
            })
            .collect();
        let f2: Vec<usize> = (0..points).map(|i| table[table[i]]).collect();
        let f3: Vec<usize> = (0..points).map(|i| table[f2[i]]).collect();
        checked += 1;
        if f3 != table {
            violations += 1;
        }
    }

    // The three-component fixture on T = {0, 1, 2}:
    // a = 0: g(b) = b; a = 1: g(b) = 1 - b; a = 2: g(b) = 1.
    let fixture: Vec<usize> = (0..6)
        .map(|i| {
            let (a, b) = (i / 2, i % 2);
            let gb = match a {
                0 => b,
                1 => 1 - b,
                _ => 1,
            };
            a * 2 + gb
        })
        .collect();
    let fixture_index_period = table_index_period(&fixture);

    ClassicalReport {
        t_size,
        checked,
        violations,
        fixture_index_period,
    }
}

/// Report for measured periods of endofunctions of a `2^n`-point set (the
/// duals of free Boolean algebra endomorphisms on `n` generators).
#[derive(Debug, Clone)]
pub struct BooleanEndoReport {
    pub n: u32,
    pub k: u64,
    pub maps_checked: usize,
    pub max_period: usize,
    pub max_index: usize,
    /// period <= lcm(1..k) for every map checked
    pub within_lcm_bound: bool,
    /// lcm(1..k) <= k!
    pub lcm_within_factorial: bool,
}

/// Measure `(index, period)` over functions on a `2^n`-point set: exhaustive
/// for `n <= 2`, otherwise `samples` seeded random tables.
pub fn boolean_endo_experiment(n: u32, samples: usize, seed: u64) -> BooleanEndoReport {
    assert!(n <= 4);
    let k = 1u64 << n;
    let points = k as usize;
    let lcm = lcm_up_to(k);
    let fact = factorial(k);
    let mut max_period = 0usize;
    let mut max_index = 0usize;
    let mut within = true;
    let mut checked = 0usize;
    let consider = |table: &[usize]| -> (usize, usize) { table_index_period(table) };
    if n <= 2 {
        // all k^k tables
        let total = (points as u64).pow(points as u32);
        for code in 0..total {
            let mut c = code;
            let table: Vec<usize> = (0..points)
                .map(|_| {
                    let t = (c % points as u64) as usize;
                    c /= points as u64;
                    t
                })
                .collect();
            let (index, period) = consider(&table);
            max_period = max_period.max(period);
            max_index = max_index.max(index);
            within &= BigUint::from(period) <= lcm;
            checked += 1;
        }
    } else {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let table: Vec<usize> = (0..points).map(|_| rng.random_range(0..points)).collect();
            let (index, period) = consider(&table);
            max_period = max_period.max(period);
            max_index = max_index.max(index);
            within &= BigUint::from(period) <= lcm;
            checked += 1;
        }
    }
    BooleanEndoReport {
        n,
        k,
        maps_checked: checked,
        max_period,
        max_index,
        within_lcm_bound: within,
        lcm_within_factorial: lcm <= fact,
    }
}
