//! The implication graph between condition sets and versions of G2.

use std::fmt::Write as _;

use crate::conditions::{subsumes, Condition, ConditionSet};
use crate::kernel::{check_proof, Proof};
use crate::neighborhood::{countermodel_search, ecd3_without_m, ros_without_d, NeighborhoodModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeStatus {
    /// Backed by kernel-checked proofs.
    Mechanized,
    /// Backed by a countermodel only.
    Countermodel,
    /// Outside the propositional kernel; recorded, not mechanized.
    Cited,
}

impl EdgeStatus {
    pub fn name(self) -> &'static str {
        match self {
            EdgeStatus::Mechanized => "mechanized",
            EdgeStatus::Countermodel => "countermodel",
            EdgeStatus::Cited => "cited",
        }
    }
}

/// A proof attached to an edge, with the condition set it is checked under.
#[derive(Clone, Debug)]
pub struct Evidence {
    pub label: String,
    pub proof: Proof,
    pub checked_under: ConditionSet,
}

impl Evidence {
    pub fn checks(&self) -> bool {
        check_proof(&self.proof, &self.checked_under).accepted()
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub from: &'static str,
    pub to: &'static str,
    pub status: EdgeStatus,
    pub evidence: Vec<Evidence>,
    /// A finite model showing the converse implication fails, at the modal
    /// level only.
    pub strictness: Option<(String, NeighborhoodModel)>,
    pub note: &'static str,
}

#[derive(Clone, Debug)]
pub struct EdgeReport {
    /// `(id, label)`, in drawing order.
    pub nodes: Vec<(&'static str, &'static str)>,
    pub edges: Vec<Edge>,
}

impl EdgeReport {
    pub fn count(&self, status: EdgeStatus) -> usize {
        self.edges.iter().filter(|e| e.status == status).count()
    }

    /// `(mechanized, countermodel, cited)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (
            self.count(EdgeStatus::Mechanized),
            self.count(EdgeStatus::Countermodel),
            self.count(EdgeStatus::Cited),
        )
    }

    /// Every mechanized edge has evidence and every piece of evidence checks.
    pub fn all_evidence_checks(&self) -> bool {
        self.edges.iter().all(|e| {
            (e.status != EdgeStatus::Mechanized || !e.evidence.is_empty()) && e.evidence.iter().all(Evidence::checks)
        })
    }

    pub fn label(&self, id: &str) -> &'static str {
        self.nodes
            .iter()
            .find(|(n, _)| *n == id)
            .map(|(_, l)| *l)
            .unwrap_or("?")
    }
}

pub const NODES: [(&str, &str); 16] = [
    ("ConG", "⊬Con^G"),
    ("ConL", "⊬Con^L"),
    ("Ros", "non-Ros"),
    ("ConS", "⊬Con^S"),
    ("ConH", "⊬Con^H"),
    ("EC3", "{E,C,D3}"),
    ("E3", "{E,D3}"),
    ("S", "{S1C}"),
    ("C3", "{C,D3}"),
    ("EUCBE", "{E^U,CB_ex}"),
    ("23", "{D2,D3}"),
    ("MU", "{M^U}"),
    ("1U2U", "{D1^U,D2^U}"),
    ("EUCBEC", "{E^U,CB_ex,C}"),
    ("DCUCB", "{CB,D0C^U}"),
    ("2GPCG", "{D2^G,PC^G}"),
];

fn set(items: &[Condition]) -> ConditionSet {
    ConditionSet::of(items.iter().copied())
}

fn evidence(label: &str, proof: Proof, checked_under: ConditionSet) -> Evidence {
    Evidence {
        label: label.to_string(),
        proof,
        checked_under,
    }
}

fn built(r: Result<Proof, crate::kernel::BuildError>) -> Proof {
    r.expect("corpus generator builds")
}

/// Classifies every edge of the implication graph. Mechanized edges carry
/// kernel proofs; two of them also carry a countermodel for the converse.
pub fn figure1_report() -> EdgeReport {
    use super::*;
    use Condition::{Ros, C, E, K, S1C};
    const D3: Condition = Condition::D3_USUAL;

    let p = Formula::atom("p");
    let q = Formula::atom("q");
    let cited = |from, to, note| Edge {
        from,
        to,
        status: EdgeStatus::Cited,
        evidence: vec![],
        strictness: None,
        note,
    };
    let mech = |from, to, evidence, note| Edge {
        from,
        to,
        status: EdgeStatus::Mechanized,
        evidence,
        strictness: None,
        note,
    };

    let ecd3 = set(&[E, C, D3]);
    let nonros = built(gen_nonros_c_d3());
    let g2_e = built(gen_g2_cons_e_d3());

    let conl_ros = mech(
        "ConL",
        "Ros",
        vec![evidence("conl_from_ros", built(gen_conl_from_ros()), set(&[Ros]))],
        "Ros proves Con^L",
    );
    let mut ros_cons = mech(
        "Ros",
        "ConS",
        vec![evidence(
            "ros_from_cons",
            built(gen_ros_from_cons(&p)),
            ConditionSet::empty(),
        )],
        "Con^S instances give the Rosser rule",
    );
    ros_cons.strictness = countermodel_search(&ros_without_d())
        .expect("valid spec")
        .map(|m| ("empty-free model falsifying []p -> ~[]~p".to_string(), m));
    let mut t23 = mech(
        "23",
        "EC3",
        vec![
            evidence(
                "subsumes K => C",
                subsumes(&set(&[K]), C, &[p.clone(), q.clone()]).expect("registered"),
                set(&[K]),
            ),
            evidence(
                "subsumes K => E",
                subsumes(&set(&[K]), E, &[p.clone(), q.clone()]).expect("registered"),
                set(&[K]),
            ),
            evidence("g2_conl via K", g2_conl_via_k(), set(&[K, D3])),
        ],
        "K yields the C and E steps",
    );
    t23.strictness = countermodel_search(&ecd3_without_m())
        .expect("valid spec")
        .map(|m| ("E, C, D3-valid model where M fails".to_string(), m));

    let edges = vec![
        cited("ConG", "ConL", "Con^G needs a logic-provability predicate"),
        conl_ros,
        ros_cons,
        cited("ConS", "ConH", "Con^H quantifies over all formulas"),
        mech(
            "EC3",
            "ConL",
            vec![evidence("g2_conl_e_c_d3", built(gen_g2_conl_e_c_d3()), ecd3.clone())],
            "E, C and D3 refute Con^L",
        ),
        mech(
            "EC3",
            "E3",
            vec![evidence(
                "g2_cons_e_d3 under the larger set",
                g2_e.clone(),
                ecd3.clone(),
            )],
            "inclusion of condition sets",
        ),
        mech(
            "E3",
            "ConS",
            vec![evidence("g2_cons_e_d3", g2_e, set(&[E, D3]))],
            "E and D3 refute Con^S",
        ),
        t23,
        cited("MU", "EUCBE", "uniform conditions need first-order arithmetic"),
        cited("EUCBE", "E3", "uniform conditions need first-order arithmetic"),
        cited("EUCBEC", "23", "uniform conditions need first-order arithmetic"),
        cited("EUCBEC", "EUCBE", "inclusion of uniform condition sets"),
        cited("EUCBE", "S", "uniform conditions need first-order arithmetic"),
        mech(
            "S",
            "ConS",
            vec![evidence("g2_cons_s1c", built(gen_g2_cons_s1c()), set(&[S1C]))],
            "S1C refutes Con^S",
        ),
        cited("1U2U", "EUCBEC", "uniform conditions need first-order arithmetic"),
        cited("1U2U", "MU", "uniform conditions need first-order arithmetic"),
        mech(
            "C3",
            "Ros",
            vec![evidence("nonros_c_d3", nonros.clone(), set(&[C, D3, Ros]))],
            "C and D3 are inconsistent with Ros",
        ),
        mech(
            "EC3",
            "C3",
            vec![evidence(
                "nonros_c_d3 under the larger set",
                nonros,
                set(&[E, C, D3, Ros]),
            )],
            "inclusion of condition sets",
        ),
        cited("MU", "DCUCB", "uniform conditions need first-order arithmetic"),
        cited("DCUCB", "ConH", "Con^H quantifies over all formulas"),
        cited("2GPCG", "ConG", "global conditions need a logic-provability predicate"),
        cited("2GPCG", "1U2U", "global conditions need first-order arithmetic"),
    ];
    EdgeReport {
        nodes: NODES.to_vec(),
        edges,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Tsv,
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the report. Output order follows the report, so it is stable.
pub fn emit_graph(report: &EdgeReport, format: GraphFormat) -> String {
    let mut out = String::new();
    match format {
        GraphFormat::Tsv => {
            out.push_str("from\tto\tfrom_label\tto_label\tstatus\tevidence\tstrictness\tnote\n");
            for e in &report.edges {
                let ev: Vec<&str> = e.evidence.iter().map(|x| x.label.as_str()).collect();
                let strict = e.strictness.as_ref().map_or("-", |(s, _)| s.as_str());
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    e.from,
                    e.to,
                    report.label(e.from),
                    report.label(e.to),
                    e.status.name(),
                    if ev.is_empty() { "-".to_string() } else { ev.join("; ") },
                    strict,
                    e.note
                );
            }
        }
        GraphFormat::Dot => {
            out.push_str("digraph implications {\n  rankdir=BT;\n  node [shape=box];\n");
            for (id, label) in &report.nodes {
                let _ = writeln!(out, "  \"{}\" [label=\"{}\"];", dot_escape(id), dot_escape(label));
            }
            for e in &report.edges {
                let style = match e.status {
                    EdgeStatus::Mechanized => "solid",
                    EdgeStatus::Countermodel => "dashed",
                    EdgeStatus::Cited => "dotted",
                };
                let _ = writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [label=\"{}\", style={}];",
                    dot_escape(e.from),
                    dot_escape(e.to),
                    e.status.name(),
                    style
                );
            }
            out.push_str("}\n");
        }
    }
    out
}
