//! Kernel proofs against finite neighborhood models: every line that does
//! not depend on fixed-point constants must be globally true in every model
//! that validates the rules and axioms the proof may use.

use g2ws::derive::library;
use g2ws::kernel::Justification;
use g2ws::neighborhood::{admits, model_pool, semantic_violations};

#[test]
fn corpus_lines_hold_in_admissible_models() {
    let pool = model_pool(120, 2024);
    assert!(pool.len() >= 50);
    assert!(pool.iter().all(|m| m.world_count() <= 3));
    let mut admitted = 0;
    for e in library() {
        for (i, m) in pool.iter().enumerate() {
            if !admits(m, &e.proof, &e.required) {
                continue;
            }
            admitted += 1;
            let v = semantic_violations(m, &e.proof);
            assert!(v.is_empty(), "{} in pool model {i}: {v:?}\n{m}", e.name);
        }
    }
    assert!(admitted > 100, "only {admitted} (entry, model) pairs were admissible");
}

#[test]
fn hypothesis_free_entries_are_exercised() {
    // Entries without hypotheses or constants must find admissible models.
    let pool = model_pool(120, 2024);
    for e in library() {
        let plain = e.proof.hyps.is_empty()
            && e.proof.env.is_empty()
            && e.proof.lines.iter().all(|l| !l.formula.has_constants());
        if plain {
            assert!(pool.iter().any(|m| admits(m, &e.proof, &e.required)), "{}", e.name);
        }
    }
}

#[test]
fn violations_appear_when_frame_conditions_fail() {
    // Running a C-using proof in models that are not intersection-closed
    // should break something for at least one model; the check has teeth.
    let pool = model_pool(120, 2024);
    let e = library()
        .into_iter()
        .find(|e| e.name == "cons_from_ros_c")
        .expect("entry");
    assert!(e
        .proof
        .lines
        .iter()
        .any(|l| matches!(l.just, Justification::Ax(..) | Justification::Ros(_))));
    let broken = pool
        .iter()
        .filter(|m| !m.closure_report().intersection_closed || !m.closure_report().empty_free)
        .any(|m| !semantic_violations(m, &e.proof).is_empty());
    assert!(broken);
}
