mod common;

use common::{brute_force_taut, f, opaque_parts, rng, taut_corpus_formula};
use g2ws::modal::{is_modalized, taut_check, EnvError, FixedPointEnv, Formula};
use proptest::prelude::*;

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bot),
        Just(Formula::Top),
        prop::sample::select(vec!["p", "q", "r", "s1"]).prop_map(Formula::atom),
        prop::sample::select(vec!["c", "d", "tau"]).prop_map(Formula::constant),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::boxed),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(x in formula_strategy()) {
        let text = x.to_string();
        prop_assert_eq!(Formula::parse(&text).unwrap(), x);
    }

    #[test]
    fn taut_matches_truth_tables(x in formula_strategy()) {
        let mut parts = Vec::new();
        opaque_parts(&x, &mut parts);
        prop_assume!(parts.len() <= 10);
        prop_assert_eq!(taut_check(&x), brute_force_taut(&x));
    }

    #[test]
    fn excluded_middle_over_anything(x in formula_strategy()) {
        prop_assert!(taut_check(&Formula::or(x.clone(), Formula::not(x.clone()))));
        prop_assert!(taut_check(&Formula::imp(x.clone(), x)));
    }

    #[test]
    fn box_is_opaque(x in formula_strategy()) {
        // []x <-> []x' is never propositional unless x and x' coincide.
        let y = Formula::and(x.clone(), Formula::Top);
        prop_assert!(!taut_check(&Formula::iff(Formula::boxed(x), Formula::boxed(y))));
    }

    #[test]
    fn sigma_closed_under_and_or(a in formula_strategy(), b in formula_strategy()) {
        // Boxed formulas belong whatever their body; the class is closed
        // under conjunction and disjunction.
        let env = FixedPointEnv::new();
        let (sa, sb) = (Formula::boxed(a), Formula::boxed(b));
        prop_assert_eq!(env.is_sigma_box(&sa), Ok(true));
        prop_assert_eq!(env.is_sigma_box(&Formula::and(sa.clone(), sb.clone())), Ok(true));
        prop_assert_eq!(env.is_sigma_box(&Formula::or(sa.clone(), Formula::Bot)), Ok(true));
        prop_assert_eq!(env.is_sigma_box(&Formula::imp(Formula::not(Formula::Bot), sb)), Ok(true));
        prop_assert_ne!(env.is_sigma_box(&Formula::not(sa)), Ok(true));
    }

    #[test]
    fn env_accepts_exactly_modalized(x in formula_strategy()) {
        let def = x.clone();
        let mut env = FixedPointEnv::new();
        env.define("d", Formula::Top).unwrap();
        let res = env.clone().with("c", def.clone());
        let foreign_ok = def.constants().iter().all(|k| k == "c" || k == "d" || k == "tau");
        if foreign_ok {
            prop_assert_eq!(res.is_ok(), is_modalized("c", &def), "{}", def);
        } else {
            prop_assert!(res.is_err());
        }
        if res.is_ok() {
            let ax = env.with("c", def.clone()).unwrap().fix_axiom("c").unwrap();
            prop_assert_eq!(ax, Formula::iff(Formula::constant("c"), def));
        }
    }
}

#[test]
fn seeded_taut_corpus_agrees() {
    let mut r = rng(11);
    let mut tautologies = 0;
    let mut checked = 0;
    while checked < 1000 {
        let x = taut_corpus_formula(&mut r, &["p", "q", "r", "s"]);
        let mut parts = Vec::new();
        opaque_parts(&x, &mut parts);
        if parts.len() > 8 {
            continue;
        }
        checked += 1;
        let expected = brute_force_taut(&x);
        assert_eq!(taut_check(&x), expected, "{x}");
        tautologies += expected as usize;
    }
    // The mixture must exercise both answers.
    assert!(tautologies > 200 && tautologies < 800, "{tautologies}");
}

#[test]
fn sigma_class_examples() {
    let env = FixedPointEnv::new().with("g", f("[]~#g")).unwrap();
    for s in [
        "bot",
        "top",
        "[]p",
        "[]p & ([]q | bot)",
        "#g",
        "~bot",
        "bot -> []p",
        "top -> #g",
    ] {
        assert!(env.is_sigma_box(&f(s)).unwrap(), "{s}");
    }
    for s in ["p", "~[]p", "[]p -> []q", "#tau", "p | []p", "top <-> p"] {
        assert!(!env.is_sigma_box(&f(s)).unwrap(), "{s}");
    }
    assert_eq!(
        env.is_sigma_box(&f("#h")),
        Err(EnvError::UnresolvedConstant("h".into()))
    );
}

#[test]
fn env_rejections() {
    let env = FixedPointEnv::new();
    assert!(matches!(env.clone().with("c", f("#c")), Err(EnvError::NotModalized(_))));
    assert!(matches!(env.clone().with("tau", f("[]p")), Err(EnvError::Reserved(_))));
    assert!(matches!(
        env.clone().with("c", f("[]#e")),
        Err(EnvError::ForwardReference { .. })
    ));
    let e = env.with("c", f("[]#c")).unwrap();
    assert!(matches!(e.with("c", f("[]p")), Err(EnvError::Redefined(_))));
}
