//! Property tests for the formula layer: printer/parser inverses,
//! substitution laws, and degree bounds on iterates.

use proptest::prelude::*;

use ruitenburg::formula::{degree, iterate_formula, parse, substitute, Formula, Substitution};

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::bottom()),
        Just(Formula::var("x")),
        Just(Formula::var("y1")),
        Just(Formula::var("y2")),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.prop_map(Formula::not),
        ]
    })
}

proptest! {
    #[test]
    fn parse_inverts_print(f in formula_strategy()) {
        let printed = f.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(f, reparsed);
    }

    #[test]
    fn identity_substitution_is_identity(f in formula_strategy()) {
        prop_assert_eq!(substitute(&f, &Substitution::new()), f.clone());
        let s = Substitution::single("x", Formula::var("x"));
        prop_assert_eq!(substitute(&f, &s), f);
    }

    #[test]
    fn iterate_unfolds_by_substitution(f in formula_strategy(), i in 1u32..5) {
        let lhs = iterate_formula(&f, "x", i + 1);
        let rhs = substitute(&f, &Substitution::single("x", iterate_formula(&f, "x", i)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn iterate_degree_is_linearly_bounded(f in formula_strategy(), i in 1u32..6) {
        let it = iterate_formula(&f, "x", i);
        prop_assert!(degree(&it) <= i * degree(&f));
    }
}
