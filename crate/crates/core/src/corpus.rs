//! Formula corpora: exhaustive enumeration of all ASTs up to a connective
//! count over a leaf pool, and seeded random generation.
//!
//! Lower tiers are materialized once and shared (each enumerated formula
//! allocates only its top node); the final tier is streamed to the consumer
//! so multi-million-formula corpora never sit in memory at once.

use crate::formula::Formula;

fn leaves(vars: &[&str]) -> Vec<Formula> {
    let mut out = vec![Formula::bottom()];
    out.extend(vars.iter().map(|v| Formula::var(*v)));
    out
}

/// Number of formulas with exactly `k` connectives over `m` leaves: the
/// binary trees weighted by 3 operator choices per node.
pub fn tier_count(num_leaves: u64, k: u32) -> u64 {
    // t(0) = m; t(k) = 3 * sum_{i+j=k-1} t(i) t(j)
    let mut t = vec![num_leaves];
    for kk in 1..=k {
        let mut s = 0u64;
        for i in 0..kk {
            s += t[i as usize] * t[(kk - 1 - i) as usize];
        }
        t.push(3 * s);
    }
    t[k as usize]
}

/// Total formulas with at most `max_conn` connectives.
pub fn exhaustive_count(num_leaves: u64, max_conn: u32) -> u64 {
    (0..=max_conn).map(|k| tier_count(num_leaves, k)).sum()
}

/// Materialized tiers 0..=cap: `tiers[k]` holds every formula with exactly
/// `k` connectives. Intended for small caps (the count grows fast).
pub fn exhaustive_tiers(vars: &[&str], cap: u32) -> Vec<Vec<Formula>> {
    let mut tiers: Vec<Vec<Formula>> = vec![leaves(vars)];
    for k in 1..=cap {
        let mut tier = Vec::with_capacity(tier_count(tiers[0].len() as u64, k) as usize);
        for i in 0..k {
            let j = k - 1 - i;
            for l in &tiers[i as usize] {
                for r in &tiers[j as usize] {
                    tier.push(Formula::and(l.clone(), r.clone()));
                    tier.push(Formula::or(l.clone(), r.clone()));
                    tier.push(Formula::implies(l.clone(), r.clone()));
                }
            }
        }
        tiers.push(tier);
    }
    tiers
}

/// Visit every formula with at most `max_conn` connectives, streaming the
/// final tier (lower tiers are materialized internally).
pub fn for_each_exhaustive(vars: &[&str], max_conn: u32, mut f: impl FnMut(&Formula)) {
    if max_conn == 0 {
        for l in leaves(vars) {
            f(&l);
        }
        return;
    }
    let tiers = exhaustive_tiers(vars, max_conn - 1);
    for tier in &tiers {
        for x in tier {
            f(x);
        }
    }
    let k = max_conn;
    for i in 0..k {
        let j = k - 1 - i;
        for l in &tiers[i as usize] {
            for r in &tiers[j as usize] {
                f(&Formula::and(l.clone(), r.clone()));
                f(&Formula::or(l.clone(), r.clone()));
                f(&Formula::implies(l.clone(), r.clone()));
            }
        }
    }
}

/// Random AST with exactly `conn` connectives; leaves drawn uniformly from
/// the pool plus bottom, operators uniform, sizes split uniformly.
pub fn random_formula(rng: &mut impl rand::Rng, pool: &[&str], conn: u32) -> Formula {
    if conn == 0 {
        let i = rng.random_range(0..=pool.len());
        return if i == pool.len() {
            Formula::bottom()
        } else {
            Formula::var(pool[i])
        };
    }
    let left = rng.random_range(0..conn);
    let right = conn - 1 - left;
    let l = random_formula(rng, pool, left);
    let r = random_formula(rng, pool, right);
    match rng.random_range(0..3) {
        0 => Formula::and(l, r),
        1 => Formula::or(l, r),
        _ => Formula::implies(l, r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn counts_match_enumeration() {
        for cap in 0..=4 {
            let mut seen = 0u64;
            for_each_exhaustive(&["x", "y"], cap, |_| seen += 1);
            assert_eq!(seen, exhaustive_count(3, cap), "cap {}", cap);
        }
        // Catalan-style closed checks: 3 leaves
        assert_eq!(tier_count(3, 0), 3);
        assert_eq!(tier_count(3, 1), 27);
        assert_eq!(tier_count(3, 2), 486);
        assert_eq!(tier_count(3, 3), 10_935);
        assert_eq!(tier_count(3, 4), 275_562);
        assert_eq!(tier_count(3, 5), 7_440_174);
    }

    #[test]
    fn enumeration_has_no_duplicates_small() {
        let mut seen = std::collections::HashSet::new();
        for_each_exhaustive(&["x", "y"], 2, |f| {
            assert!(seen.insert(f.clone()), "duplicate {}", f);
        });
        assert_eq!(seen.len(), 516);
    }

    #[test]
    fn random_formulas_have_exact_size() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for conn in 0..10 {
            for _ in 0..50 {
                let f = random_formula(&mut rng, &["x", "y1", "y2"], conn);
                assert_eq!(f.connectives(), conn as u64);
            }
        }
    }

    #[test]
    fn parse_print_round_trip_large_corpus() {
        // round trip on 10^4 seeded random formulas
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for i in 0..10_000 {
            let conn = i % 12;
            let f = random_formula(&mut rng, &["x", "y1", "y2"], conn);
            let printed = f.to_string();
            let reparsed = crate::formula::parse(&printed).unwrap();
            assert_eq!(f, reparsed, "round trip failed for {}", printed);
        }
    }
}
