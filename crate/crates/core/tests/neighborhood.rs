mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::{f, random_formula, rng};
use g2ws::modal::Formula;
use g2ws::neighborhood::{
    countermodel_search, ecd3_without_m, filters_refute_k, parse_model, ros_without_d, ClosureFlag, NeighborhoodModel,
    SearchSpec,
};
use rand::Rng;

fn model(text: &str) -> NeighborhoodModel {
    parse_model(text).unwrap()
}

const THREE: &str =
    "worlds: a b c\natom p: a\natom q: b\nnbhd a: {a} {a b c}\nnbhd b: {a} {a b c}\nnbhd c: {a} {a b c}\n";
const TWO: &str = "worlds: a b\natom p: a\nnbhd a: {a} {b} {a b}\nnbhd b: {a} {b} {a b}\n";

#[test]
fn eval_examples() {
    let empty = model("worlds: w\nnbhd w:\n");
    assert_eq!(empty.eval_at("w", &f("[]bot")), Ok(false));
    let with_empty = model("worlds: w\nnbhd w: {}\n");
    assert_eq!(with_empty.eval_at("w", &f("[]bot")), Ok(true));
    let m = model(THREE);
    assert_eq!(m.eval_at("a", &f("[]p")), Ok(true));
    assert_eq!(m.eval_at("a", &f("[](p | q)")), Ok(false));
    assert_eq!(m.globally_valid(&f("top")), Ok(true));
    assert_eq!(m.globally_valid(&f("[]p -> [](p | q)")), Ok(false));
    assert_eq!(m.globally_valid(&f("[]top")), Ok(true));
    assert!(m.eval_at("a", &f("#c")).is_err());
}

#[test]
fn closure_examples() {
    let r = model(THREE).closure_report();
    assert!(r.intersection_closed && r.contains_unit && !r.supplemented);
    let r = model("worlds: a b\nnbhd a:\nnbhd b:\n").closure_report();
    assert!(r.empty_free && r.supplemented && !r.contains_unit);
    let r = model(TWO).closure_report();
    assert!(!r.d_consistent);
}

/// Set-theoretic flag checks written independently of the library.
fn oracle_flags(fam: u64, n: usize) -> [bool; 4] {
    let full = (1u64 << n) - 1;
    let sets: Vec<u64> = (0..=full).filter(|x| fam >> x & 1 == 1).collect();
    let has = |x: u64| fam >> x & 1 == 1;
    let supplemented = sets.iter().all(|&x| (0..=full).filter(|y| y & x == x).all(has));
    let intersection = sets.iter().all(|&x| sets.iter().all(|&y| has(x & y)));
    [supplemented, intersection, has(full), !has(0)]
}

fn oracle_covers(fam: u64, n: usize, require: &[ClosureFlag]) -> bool {
    let [s, i, u, e] = oracle_flags(fam, n);
    require.iter().all(|fl| match fl {
        ClosureFlag::Supplemented => s,
        ClosureFlag::IntersectionClosed => i,
        ClosureFlag::ContainsUnit => u,
        ClosureFlag::EmptyFree => e,
        ClosureFlag::DConsistent => (0..=((1u64 << n) - 1))
            .filter(|x| fam >> x & 1 == 1)
            .all(|x| fam >> (!x & ((1u64 << n) - 1)) & 1 == 0),
    })
}

/// Naive enumeration in the canonical order, evaluating through the model's
/// own semantics rather than the compiled search.
fn brute_force(spec: &SearchSpec) -> Option<NeighborhoodModel> {
    for n in 1..=spec.max_worlds {
        let full = (1u64 << n) - 1;
        let fams: Vec<u64> = (0..1u64 << (1u64 << n))
            .filter(|&fam| oracle_covers(fam, n, &spec.require))
            .collect();
        if fams.is_empty() {
            continue;
        }
        for v in 0..1u64 << (n * spec.atoms.len()) {
            let val: BTreeMap<String, u64> = spec
                .atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (a.clone(), v >> (i * n) & full))
                .collect();
            let total = fams.len().pow(n as u32);
            for idx in 0..total {
                // World a is the most significant digit.
                let mut rest = idx;
                let mut pick = vec![0u64; n];
                for w in (0..n).rev() {
                    pick[w] = fams[rest % fams.len()];
                    rest /= fams.len();
                }
                let m = NeighborhoodModel::from_families(n, pick, val.clone()).unwrap();
                if !m.globally_valid(&spec.target).unwrap() && spec.valid.iter().all(|x| m.globally_valid(x).unwrap()) {
                    return Some(m);
                }
            }
        }
    }
    None
}

#[test]
fn regression_ecd3_without_m() {
    let spec = ecd3_without_m();
    let t = Instant::now();
    let found = countermodel_search(&spec).unwrap().expect("a witness exists");
    assert!(t.elapsed().as_secs_f64() < 10.0);
    assert!(found.world_count() <= 3);
    let r = found.closure_report();
    assert!(r.intersection_closed && r.contains_unit && !r.supplemented);
    assert!(spec.valid.iter().all(|x| found.globally_valid(x).unwrap()));
    assert_eq!(found.globally_valid(&spec.target), Ok(false));
    assert_eq!(Some(found), brute_force(&spec));

    // The hand-built three-world witness meets the same requirements.
    let m = model(THREE);
    assert!(m.closure_report().covers(&spec.require));
    assert!(spec.valid.iter().all(|x| m.globally_valid(x).unwrap()));
    assert_eq!(m.globally_valid(&spec.target), Ok(false));
}

#[test]
fn regression_ros_without_d() {
    let spec = ros_without_d();
    let t = Instant::now();
    let found = countermodel_search(&spec).unwrap().expect("a witness exists");
    assert!(t.elapsed().as_secs_f64() < 10.0);
    assert!(found.world_count() <= 2);
    assert!(found.closure_report().empty_free);
    assert_eq!(found.globally_valid(&spec.target), Ok(false));
    assert_eq!(Some(found), brute_force(&spec));

    let m = model(TWO);
    assert!(m.closure_report().empty_free);
    assert_eq!(m.globally_valid(&spec.target), Ok(false));
}

#[test]
fn filters_validate_k() {
    let t = Instant::now();
    assert_eq!(countermodel_search(&filters_refute_k(4)).unwrap(), None);
    assert!(t.elapsed().as_secs_f64() < 10.0);
    assert_eq!(brute_force(&filters_refute_k(2)), None);
}

#[test]
fn small_searches_match_brute_force() {
    let specs = [
        ("[]p", vec![], vec![ClosureFlag::ContainsUnit]),
        ("[]p -> p", vec![], vec![ClosureFlag::Supplemented]),
        (
            "[](p & q) -> []p",
            vec!["[]p -> [][]p"],
            vec![ClosureFlag::ContainsUnit],
        ),
        ("~[]bot", vec![], vec![ClosureFlag::IntersectionClosed]),
        ("[]p | []~p", vec![], vec![ClosureFlag::DConsistent]),
    ];
    for (target, valid, require) in specs {
        let spec = SearchSpec {
            require,
            valid: valid.into_iter().map(f).collect(),
            target: f(target),
            max_worlds: 2,
            atoms: vec!["p".into(), "q".into()],
        };
        assert_eq!(countermodel_search(&spec).unwrap(), brute_force(&spec), "{target}");
    }
}

#[test]
fn search_is_deterministic_across_thread_counts() {
    let spec = ecd3_without_m();
    let reference = countermodel_search(&spec).unwrap();
    for threads in [1, 2, 3, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        assert_eq!(pool.install(|| countermodel_search(&spec).unwrap()), reference);
    }
}

fn random_model(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> NeighborhoodModel {
    let universe = if n == 6 { u64::MAX } else { (1u64 << (1u64 << n)) - 1 };
    let fams = (0..n).map(|_| r.gen::<u64>() & universe).collect();
    let val = ["p", "q"]
        .iter()
        .map(|a| (a.to_string(), r.gen::<u64>() & ((1u64 << n) - 1)))
        .collect();
    NeighborhoodModel::from_families(n, fams, val).unwrap()
}

fn probes(r: &mut rand_chacha::ChaCha8Rng, count: usize) -> Vec<Formula> {
    let mut out = vec![Formula::Top, Formula::Bot, f("p"), f("~p"), f("p | q")];
    while out.len() < count {
        let x = random_formula(r, 3, &["p", "q"]);
        if x.modal_depth() <= 2 {
            out.push(x);
        }
    }
    out
}

#[test]
fn re_is_admissible() {
    let mut r = rng(31);
    for _ in 0..200 {
        let n = r.gen_range(1..=3);
        let m = random_model(&mut r, n);
        let pool = probes(&mut r, 30);
        for a in &pool {
            for b in &pool {
                if m.truth_set(a).unwrap() == m.truth_set(b).unwrap() {
                    assert_eq!(
                        m.truth_set(&Formula::boxed(a.clone())).unwrap(),
                        m.truth_set(&Formula::boxed(b.clone())).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn flags_match_rule_and_axiom_validity() {
    let mut r = rng(32);
    for _ in 0..300 {
        let n = r.gen_range(1..=3);
        let m = random_model(&mut r, n);
        let rep = m.closure_report();
        let pool = probes(&mut r, 25);
        let nec_ok = pool
            .iter()
            .filter(|x| m.globally_valid(x).unwrap())
            .all(|x| m.globally_valid(&Formula::boxed(x.clone())).unwrap());
        assert_eq!(nec_ok, rep.contains_unit, "{m}");
        let ros_ok = pool
            .iter()
            .filter(|x| m.globally_valid(&Formula::not((*x).clone())).unwrap())
            .all(|x| m.globally_valid(&Formula::not(Formula::boxed(x.clone()))).unwrap());
        assert_eq!(ros_ok, rep.empty_free, "{m}");
        for a in &pool[..10] {
            for b in &pool[..10] {
                let (ba, bb) = (Formula::boxed(a.clone()), Formula::boxed(b.clone()));
                if rep.supplemented {
                    let mono = Formula::imp(Formula::boxed(Formula::and(a.clone(), b.clone())), ba.clone());
                    assert!(m.globally_valid(&mono).unwrap());
                }
                if rep.intersection_closed {
                    let c = Formula::imp(Formula::and(ba, bb), Formula::boxed(Formula::and(a.clone(), b.clone())));
                    assert!(m.globally_valid(&c).unwrap());
                }
            }
        }
        if rep.d_consistent {
            for a in &pool {
                let d = Formula::imp(
                    Formula::boxed(a.clone()),
                    Formula::not(Formula::boxed(Formula::not(a.clone()))),
                );
                assert!(m.globally_valid(&d).unwrap());
            }
        }
    }
}

#[test]
fn library_flags_agree_with_oracle() {
    for n in 1..=3 {
        for fam in 0..1u64 << (1u64 << n) {
            let m = NeighborhoodModel::from_families(n, vec![fam; n], BTreeMap::new()).unwrap();
            let r = m.closure_report();
            assert_eq!(
                [r.supplemented, r.intersection_closed, r.contains_unit, r.empty_free],
                oracle_flags(fam, n),
                "n={n} fam={fam:b}"
            );
        }
    }
}

#[test]
fn model_files_round_trip() {
    let mut r = rng(33);
    for _ in 0..100 {
        let n = r.gen_range(1..=4);
        let m = random_model(&mut r, n);
        assert_eq!(parse_model(&m.to_string()).unwrap(), m);
    }
}
