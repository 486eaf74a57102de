//! Generators for the derivation corpus.
//!
//! Each generator builds a [`Proof`] with a [`ProofBuilder`]; nothing here is
//! trusted, every output is meant to be replayed through
//! [`check_proof`](crate::kernel::check_proof).
//!
//! Consistency assumptions appear as hypothesis instances: `cons` is the
//! instance `[]x -> ~[]~x` needed by the proof, `conl` is `~[]bot`.

mod figure1;

pub use figure1::{emit_graph, figure1_report, Edge, EdgeReport, EdgeStatus, Evidence, GraphFormat, NODES};

use crate::conditions::{AxiomTag, Condition, ConditionSet};
use crate::kernel::{BuildError, Proof, ProofBuilder};
use crate::modal::{FixedPointEnv, Formula, TAU};

fn f(text: &str) -> Formula {
    Formula::parse(text).expect("built-in formula parses")
}

fn bx(a: &Formula) -> Formula {
    Formula::boxed(a.clone())
}

fn not(a: &Formula) -> Formula {
    Formula::not(a.clone())
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::imp(a.clone(), b.clone())
}

fn iff(a: &Formula, b: &Formula) -> Formula {
    Formula::iff(a.clone(), b.clone())
}

/// `[]x -> ~[]~x`.
pub fn cons_instance(x: &Formula) -> Formula {
    imp(&bx(x), &not(&bx(&not(x))))
}

fn cs(items: &[Condition]) -> ConditionSet {
    ConditionSet::of(items.iter().copied())
}

/// A target formula supplied by a caller must be constant-free.
fn check_target(a: &Formula) -> Result<(), BuildError> {
    if let Some(c) = a.constants().into_iter().next() {
        return Err(BuildError::BadParam(format!("target formula mentions constant #{c}")));
    }
    Ok(())
}

/// From `~a` and a consistency instance at `a`, conclude `~[]a`. Only D1.
pub fn gen_ros_from_cons(a: &Formula) -> Result<Proof, BuildError> {
    check_target(a)?;
    let mut b = ProofBuilder::new(ConditionSet::empty(), FixedPointEnv::new());
    b.declare_hyp("neg", not(a));
    b.declare_hyp("cons", cons_instance(a));
    let neg = b.hyp("neg")?;
    let boxed = b.nec(neg);
    let cons = b.hyp("cons")?;
    b.prop_close(not(&bx(a)), &[boxed, cons])?;
    Ok(b.finish())
}

fn cons_from_ros_c_lines(b: &mut ProofBuilder, a: &Formula) -> Result<usize, BuildError> {
    let contra = Formula::and(a.clone(), not(a));
    let t = b.taut(not(&contra))?;
    let r = b.rosser(t, None)?;
    let c = b.conj_axiom(a, &not(a))?;
    b.prop_close(cons_instance(a), &[r, c])
}

/// The consistency instance at `a`, with no hypotheses, from C and Ros.
pub fn gen_cons_from_ros_c(a: &Formula) -> Result<Proof, BuildError> {
    check_target(a)?;
    let mut b = ProofBuilder::new(cs(&[Condition::C, Condition::Ros]), FixedPointEnv::new());
    cons_from_ros_c_lines(&mut b, a)?;
    Ok(b.finish())
}

/// `~[]bot` from Ros.
pub fn gen_conl_from_ros() -> Result<Proof, BuildError> {
    let mut b = ProofBuilder::new(cs(&[Condition::Ros]), FixedPointEnv::new());
    let t = b.taut(Formula::not(Formula::Bot))?;
    b.ros(t)?;
    Ok(b.finish())
}

/// From `~a` and `~[]bot`, conclude `~[]a` under E.
pub fn gen_ros_from_conl_e(a: &Formula) -> Result<Proof, BuildError> {
    gen_ros_from_conl_with(a, cs(&[Condition::E]))
}

/// As [`gen_ros_from_conl_e`], with the boxing step routed through `route`
/// (`E`, `M` or `K`).
pub fn gen_ros_from_conl_with(a: &Formula, route: ConditionSet) -> Result<Proof, BuildError> {
    check_target(a)?;
    let route = route.without(Condition::Ros);
    let mut b = ProofBuilder::new(route, FixedPointEnv::new());
    b.declare_hyp("neg", not(a));
    b.declare_hyp("conl", f("~[]bot"));
    let neg = b.hyp("neg")?;
    let conl = b.hyp("conl")?;
    b.rosser(neg, Some(conl))?;
    Ok(b.finish())
}

/// The Goedel sentence `#c <-> ~[]#c` refutes a consistency instance.
/// From line `cons` proving `[]#c -> ~[]~#c`, derive `bot`.
fn g2_e_d3_body(b: &mut ProofBuilder, cons: usize) -> Result<usize, BuildError> {
    let c = Formula::constant("c");
    let fix = b.fix("c")?;
    let flipped = b.prop_close(iff(&not(&c), &bx(&c)), &[fix])?;
    let boxed = b.box_iff(flipped)?;
    let d3 = b.ax(AxiomTag::D3(1, 2), vec![c.clone()])?;
    let not_pr = b.prop_close(not(&bx(&c)), &[boxed, d3, cons])?;
    let holds = b.prop_close(c.clone(), &[fix, not_pr])?;
    let pr = b.nec(holds);
    b.prop_close(Formula::Bot, &[not_pr, pr])
}

fn goedel_env() -> FixedPointEnv {
    FixedPointEnv::new()
        .with("c", f("~[]#c"))
        .expect("modalized definition")
}

/// `bot` from the consistency instance at the Goedel sentence, under E and D3.
pub fn gen_g2_cons_e_d3() -> Result<Proof, BuildError> {
    let mut b = ProofBuilder::new(cs(&[Condition::E, Condition::D3_USUAL]), goedel_env());
    let c = Formula::constant("c");
    b.declare_hyp("cons", cons_instance(&c));
    let cons = b.hyp("cons")?;
    g2_e_d3_body(&mut b, cons)?;
    Ok(b.finish())
}

fn s1cm_env() -> FixedPointEnv {
    FixedPointEnv::new()
        .with("c", f("[]~(#tau -> #c)"))
        .expect("modalized definition")
}

/// With `#c <-> []~(#tau -> #c)` and line `cons` proving the consistency
/// instance at `#tau -> #c`, derive `bot` using S1Cm and the hypothesis `tau`.
fn g2_s1cm_body(b: &mut ProofBuilder, cons: usize) -> Result<usize, BuildError> {
    let c = Formula::constant("c");
    let tc = imp(&Formula::constant(TAU), &c);
    let fix = b.fix("c")?;
    let s1 = b.ax(AxiomTag::S1Cm, vec![c.clone()])?;
    let neg = b.prop_close(not(&c), &[fix, s1, cons])?;
    let tau = b.hyp("tau")?;
    let neg_tc = b.prop_close(not(&tc), &[neg, tau])?;
    let pr = b.nec(neg_tc);
    b.prop_close(Formula::Bot, &[fix, pr, neg])
}

/// `bot` from `tau` and a consistency instance, under S1Cm alone.
pub fn gen_g2_cons_s1cm() -> Result<Proof, BuildError> {
    let mut b = ProofBuilder::new(cs(&[Condition::S1Cm]), s1cm_env());
    let tc = f("#tau -> #c");
    b.declare_hyp("tau", Formula::constant(TAU));
    b.declare_hyp("cons", cons_instance(&tc));
    let cons = b.hyp("cons")?;
    g2_s1cm_body(&mut b, cons)?;
    Ok(b.finish())
}

/// `bot` from a consistency instance under S1C alone, with `#c <-> []~#c`.
pub fn gen_g2_cons_s1c() -> Result<Proof, BuildError> {
    let env = FixedPointEnv::new()
        .with("c", f("[]~#c"))
        .expect("modalized definition");
    let mut b = ProofBuilder::new(cs(&[Condition::S1C]), env);
    let c = Formula::constant("c");
    b.declare_hyp("cons", cons_instance(&c));
    let fix = b.fix("c")?;
    let s1 = b.ax(AxiomTag::S1C, vec![c.clone()])?;
    let cons = b.hyp("cons")?;
    let neg = b.prop_close(not(&c), &[fix, s1, cons])?;
    let pr = b.nec(neg);
    b.prop_close(Formula::Bot, &[fix, pr, neg])?;
    Ok(b.finish())
}

/// `bot` from `tau` under C, S1Cm and Ros: the consistency instance is
/// derived from C and Ros instead of assumed.
pub fn gen_g2_ros_c_s1cm() -> Result<Proof, BuildError> {
    let route = cs(&[Condition::C, Condition::S1Cm, Condition::Ros]);
    let mut b = ProofBuilder::new(route, s1cm_env());
    b.declare_hyp("tau", Formula::constant(TAU));
    let cons = cons_from_ros_c_lines(&mut b, &f("#tau -> #c"))?;
    g2_s1cm_body(&mut b, cons)?;
    Ok(b.finish())
}

/// `bot` from `~[]bot` under E, C and D3.
pub fn gen_g2_conl_e_c_d3() -> Result<Proof, BuildError> {
    gen_g2_conl_with(cs(&[Condition::E, Condition::C, Condition::D3_USUAL]))
}

/// As [`gen_g2_conl_e_c_d3`], with E and C steps routed through `route`;
/// `{K, D3}` derives them from K.
pub fn gen_g2_conl_with(route: ConditionSet) -> Result<Proof, BuildError> {
    let mut b = ProofBuilder::new(route, goedel_env());
    let c = Formula::constant("c");
    b.declare_hyp("conl", f("~[]bot"));
    let conl = b.hyp("conl")?;
    let contra = Formula::and(c.clone(), not(&c));
    let t = b.taut(not(&contra))?;
    let eq = b.prop_close(iff(&contra, &Formula::Bot), &[t])?;
    let boxed = b.box_iff(eq)?;
    let no_contra = b.prop_close(not(&bx(&contra)), &[boxed, conl])?;
    let conj = b.conj_axiom(&c, &not(&c))?;
    let cons = b.prop_close(cons_instance(&c), &[no_contra, conj])?;
    g2_e_d3_body(&mut b, cons)?;
    Ok(b.finish())
}

/// `bot` under C, D3 and Ros with `#c <-> []~(#c & []#c)`.
pub fn gen_nonros_c_d3() -> Result<Proof, BuildError> {
    nonros_impl(None)
}

/// `skip` omits one of the two C instances (0 or 1), which must make the
/// propositional step fail.
fn nonros_impl(skip: Option<usize>) -> Result<Proof, BuildError> {
    let env = FixedPointEnv::new()
        .with("c", f("[]~(#c & []#c)"))
        .expect("modalized definition");
    let route = cs(&[Condition::C, Condition::D3_USUAL, Condition::Ros]);
    let mut b = ProofBuilder::new(route, env);
    let c = Formula::constant("c");
    let plus = Formula::and(c.clone(), bx(&c));
    let fix = b.fix("c")?;
    let d3 = b.ax(AxiomTag::D3(1, 2), vec![c.clone()])?;
    let mut premises = vec![fix, d3];
    if skip != Some(0) {
        premises.push(b.conj_axiom(&c, &bx(&c))?);
    }
    if skip != Some(1) {
        premises.push(b.conj_axiom(&not(&plus), &plus)?);
    }
    let t = b.taut(not(&Formula::and(not(&plus), plus.clone())))?;
    premises.push(b.ros(t)?);
    let neg = b.prop_close(not(&plus), &premises)?;
    let pr_neg = b.nec(neg);
    let holds = b.prop_close(c.clone(), &[fix, pr_neg])?;
    let pr = b.nec(holds);
    b.prop_close(Formula::Bot, &[neg, holds, pr])?;
    Ok(b.finish())
}

/// `a` from `[](a & []#d) -> a` under E, C and D3, with `#d <-> ([]#d -> a)`.
pub fn gen_lob_variant(a: &Formula) -> Result<Proof, BuildError> {
    check_target(a)?;
    let d = Formula::constant("d");
    let env = FixedPointEnv::new().with("d", imp(&bx(&d), a))?;
    let route = cs(&[Condition::E, Condition::C, Condition::D3_USUAL]);
    let mut b = ProofBuilder::new(route, env);
    let a_d = Formula::and(a.clone(), bx(&d));
    b.declare_hyp("h", imp(&bx(&a_d), a));
    let fix = b.fix("d")?;
    let d_d = Formula::and(d.clone(), bx(&d));
    let eq = b.prop_close(iff(&d_d, &a_d), &[fix])?;
    let boxed = b.box_iff(eq)?;
    let d3 = b.ax(AxiomTag::D3(1, 2), vec![d.clone()])?;
    let conj = b.conj_axiom(&d, &bx(&d))?;
    let h = b.hyp("h")?;
    let key = b.prop_close(imp(&bx(&d), a), &[boxed, d3, conj, h])?;
    let holds = b.prop_close(d.clone(), &[fix, key])?;
    let pr = b.nec(holds);
    b.mp(pr, key)?;
    Ok(b.finish())
}

/// `a` from `[]a -> a` under K and D3(n, n+k), with
/// `#e <-> ([]#e & ... & []^(n+k-1)#e -> a)`.
pub fn gen_weak_lob(n: u32, k: u32, a: &Formula) -> Result<Proof, BuildError> {
    if n < 1 || k < 1 {
        return Err(BuildError::BadParam(format!(
            "weak_lob needs n >= 1 and k >= 1, got n={n}, k={k}"
        )));
    }
    check_target(a)?;
    let top = n + k;
    let e = Formula::constant("e");
    let powers: Vec<Formula> = (1..top).map(|i| Formula::boxed_n(e.clone(), i)).collect();
    let conj = Formula::conj_all(powers.clone());
    let env = FixedPointEnv::new().with("e", imp(&conj, a))?;
    let route = cs(&[Condition::K, Condition::D3(n, top)]);
    let mut b = ProofBuilder::new(route, env);
    b.declare_hyp("h", imp(&bx(a), a));

    let fix = b.fix("e")?;
    let unfold = b.prop_close(imp(&e, &imp(&conj, a)), &[fix])?;
    let pr_unfold = b.nec(unfold);
    let k1 = b.ax(AxiomTag::K, vec![e.clone(), imp(&conj, a)])?;
    let lifted = b.mp(pr_unfold, k1)?;
    let k2 = b.ax(AxiomTag::K, vec![conj.clone(), a.clone()])?;
    let mut premises = vec![lifted, k2];
    // Distribute the box over the conjunction one conjunct at a time.
    let mut acc = powers[0].clone();
    for p in &powers[1..] {
        premises.push(b.conj_axiom(&acc, p)?);
        acc = Formula::and(acc, p.clone());
    }
    premises.push(b.ax(AxiomTag::D3(n, top), vec![e.clone()])?);
    premises.push(b.hyp("h")?);
    let key = b.prop_close(imp(&conj, a), &premises)?;
    let holds = b.prop_close(e.clone(), &[fix, key])?;
    let mut boxes = vec![key];
    let mut last = holds;
    for _ in 1..top {
        last = b.nec(last);
        boxes.push(last);
    }
    b.prop_close(a.clone(), &boxes)?;
    Ok(b.finish())
}

/// From S1Cm and E, with `tau` assumed, the S1C instance at `sigma`.
pub fn gen_s1c_from_e_s1cm(sigma: &Formula) -> Result<Proof, BuildError> {
    check_target(sigma)?;
    let route = cs(&[Condition::E, Condition::S1Cm]);
    let mut b = ProofBuilder::new(route, FixedPointEnv::new());
    let tau = Formula::constant(TAU);
    b.declare_hyp("tau", tau.clone());
    let s1 = b.ax(AxiomTag::S1Cm, vec![sigma.clone()])?;
    let t = b.hyp("tau")?;
    let eq = b.prop_close(iff(&imp(&tau, sigma), sigma), &[t])?;
    let boxed = b.box_iff(eq)?;
    b.prop_close(imp(sigma, &bx(sigma)), &[s1, boxed])?;
    Ok(b.finish())
}

/// One corpus entry.
#[derive(Clone, Debug)]
pub struct TheoremEntry {
    pub name: String,
    pub summary: &'static str,
    /// The conditions the proof is checked under.
    pub required: ConditionSet,
    /// Human-readable description of the hypotheses.
    pub hypotheses: &'static str,
    pub expected_goal: Formula,
    pub proof: Proof,
}

impl TheoremEntry {
    fn new(
        name: impl Into<String>,
        summary: &'static str,
        hypotheses: &'static str,
        expected_goal: Formula,
        proof: Proof,
    ) -> Self {
        Self {
            name: name.into(),
            summary,
            required: proof.conditions.clone(),
            hypotheses,
            expected_goal,
            proof,
        }
    }

    /// Conditions whose removal must break the proof.
    pub fn required_flags(&self) -> Vec<Condition> {
        self.required.iter().collect()
    }

    /// First line using `cond`, which is where a check without it fails.
    pub fn first_use(&self, cond: Condition) -> Option<usize> {
        self.proof
            .lines
            .iter()
            .find(|l| l.just.required_condition() == Some(cond))
            .map(|l| l.index)
    }
}

/// Parameters accepted by [`generate`].
#[derive(Clone, Debug, Default)]
pub struct GenParams {
    pub n: Option<u32>,
    pub k: Option<u32>,
    pub target: Option<Formula>,
}

/// Names accepted by [`generate`], in corpus order.
pub const GENERATOR_NAMES: &[&str] = &[
    "ros_from_cons",
    "cons_from_ros_c",
    "conl_from_ros",
    "ros_from_conl_e",
    "g2_cons_e_d3",
    "g2_cons_s1cm",
    "g2_cons_s1c",
    "g2_ros_c_s1cm",
    "g2_conl_e_c_d3",
    "nonros_c_d3",
    "lob_variant",
    "weak_lob",
    "s1c_from_e_s1cm",
];

/// Runs a generator by name. The default target is `p` (or `[]p` for
/// `s1c_from_e_s1cm`); `weak_lob` needs `n` and `k`.
pub fn generate(name: &str, params: &GenParams) -> Result<TheoremEntry, BuildError> {
    let target = params.target.clone();
    let a = target.clone().unwrap_or_else(|| Formula::atom("p"));
    let unused = |what: &str| -> Result<(), BuildError> {
        if what == "target" && target.is_some() || what == "nk" && (params.n.is_some() || params.k.is_some()) {
            return Err(BuildError::BadParam(format!("{name} does not take that parameter")));
        }
        Ok(())
    };
    let bot = Formula::Bot;
    let entry = match name {
        "ros_from_cons" => {
            unused("nk")?;
            TheoremEntry::new(
                name,
                "Con^S instance gives the Rosser step",
                "neg: ~a, cons: []a -> ~[]~a",
                not(&bx(&a)),
                gen_ros_from_cons(&a)?,
            )
        }
        "cons_from_ros_c" => {
            unused("nk")?;
            TheoremEntry::new(
                name,
                "C and Ros give Con^S instances",
                "none",
                cons_instance(&a),
                gen_cons_from_ros_c(&a)?,
            )
        }
        "conl_from_ros" => {
            unused("nk")?;
            unused("target")?;
            TheoremEntry::new(name, "Ros gives Con^L", "none", f("~[]bot"), gen_conl_from_ros()?)
        }
        "ros_from_conl_e" => {
            unused("nk")?;
            TheoremEntry::new(
                name,
                "E and Con^L give the Rosser step",
                "neg: ~a, conl: ~[]bot",
                not(&bx(&a)),
                gen_ros_from_conl_e(&a)?,
            )
        }
        "g2_cons_e_d3" => {
            unused("nk")?;
            unused("target")?;
            TheoremEntry::new(
                name,
                "E and D3 refute Con^S at the Goedel sentence",
                "cons at #c",
                bot,
                gen_g2_cons_e_d3()?,
            )
        }
        "g2_cons_s1cm" => {
            unused("nk")?;
            unused("target")?;
            TheoremEntry::new(
                name,
                "S1Cm refutes Con^S given tau",
                "tau, cons at #tau -> #c",
                bot,
                gen_g2_cons_s1cm()?,
            )
        }
        "g2_cons_s1c" => {
            unused("nk")?;
            unused("target")?;
            TheoremEntry::new(name, "S1C refutes Con^S", "cons at #c", bot, gen_g2_cons_s1c()?)
        }
        "g2_ros_c_s1cm" => {
            unused("nk")?;
            unused("target")?;
            TheoremEntry::new(
                name,
                "C, S1Cm and Ros are inconsistent given tau",
                "tau",
                bot,
                gen_g2_ros_c_s1cm()?,
            )
        }
        "g2_conl_e_c_d3" => {
            unused("nk")?;
            unused("target")?;
            TheoremEntry::new(
                name,
                "E, C and D3 refute Con^L",
                "conl: ~[]bot",
                bot,
                gen_g2_conl_e_c_d3()?,
            )
        }
        "nonros_c_d3" | "g2_ec" => {
            unused("nk")?;
            unused("target")?;
            TheoremEntry::new(
                "nonros_c_d3",
                "C and D3 are inconsistent with Ros",
                "none",
                bot,
                gen_nonros_c_d3()?,
            )
        }
        "lob_variant" => {
            unused("nk")?;
            TheoremEntry::new(
                name,
                "Loeb-style rule under E, C and D3",
                "h: [](a & []#d) -> a",
                a.clone(),
                gen_lob_variant(&a)?,
            )
        }
        "weak_lob" => {
            let n = params
                .n
                .ok_or_else(|| BuildError::BadParam("weak_lob needs --n".into()))?;
            let k = params
                .k
                .ok_or_else(|| BuildError::BadParam("weak_lob needs --k".into()))?;
            let mut entry = TheoremEntry::new(
                name,
                "Loeb's rule under K and D3(n, n+k)",
                "h: []a -> a",
                a.clone(),
                gen_weak_lob(n, k, &a)?,
            );
            entry.name = format!("weak_lob({n},{k})");
            entry
        }
        "s1c_from_e_s1cm" => {
            unused("nk")?;
            let sigma = target.unwrap_or_else(|| f("[]p"));
            TheoremEntry::new(
                name,
                "E and S1Cm give S1C given tau",
                "tau",
                imp(&sigma, &bx(&sigma)),
                gen_s1c_from_e_s1cm(&sigma)?,
            )
        }
        other => return Err(BuildError::BadParam(format!("unknown derivation {other:?}"))),
    };
    Ok(entry)
}

/// The full corpus: every generator at its default target, `weak_lob` for
/// `1 <= n, k <= 3`.
pub fn library() -> Vec<TheoremEntry> {
    let mut out = Vec::new();
    for name in GENERATOR_NAMES {
        if *name == "weak_lob" {
            for n in 1..=3 {
                for k in 1..=3 {
                    let params = GenParams {
                        n: Some(n),
                        k: Some(k),
                        target: None,
                    };
                    out.push(generate(name, &params).expect("corpus entry builds"));
                }
            }
        } else {
            out.push(generate(name, &GenParams::default()).expect("corpus entry builds"));
        }
    }
    out
}

/// The `{K, D3}` replay of the Con^L theorem, through K-derived C and E steps.
pub fn g2_conl_via_k() -> Proof {
    gen_g2_conl_with(cs(&[Condition::K, Condition::D3_USUAL])).expect("K route builds")
}
