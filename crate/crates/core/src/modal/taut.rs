use super::Formula;

/// Opaque atoms of `f` in order of first occurrence: propositional atoms,
/// fixed-point constants and maximal boxed subformulas.
pub fn opaque_atoms(f: &Formula) -> Vec<&Formula> {
    let mut out: Vec<&Formula> = Vec::new();
    collect(f, &mut out);
    out
}

fn collect<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Bot | Formula::Top => {}
        Formula::Atom(_) | Formula::Const(_) | Formula::Box(_) => {
            if !out.contains(&f) {
                out.push(f);
            }
        }
        Formula::Not(a) => collect(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            collect(a, out);
            collect(b, out);
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Lit(bool),
    Var(usize),
    Not,
    And,
    Or,
    Imp,
    Iff,
}

fn compile(f: &Formula, atoms: &[&Formula], code: &mut Vec<Op>) {
    match f {
        Formula::Bot => code.push(Op::Lit(false)),
        Formula::Top => code.push(Op::Lit(true)),
        Formula::Atom(_) | Formula::Const(_) | Formula::Box(_) => {
            let i = atoms.iter().position(|a| *a == f).expect("atom collected");
            code.push(Op::Var(i));
        }
        Formula::Not(a) => {
            compile(a, atoms, code);
            code.push(Op::Not);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            compile(a, atoms, code);
            compile(b, atoms, code);
            code.push(match f {
                Formula::And(..) => Op::And,
                Formula::Or(..) => Op::Or,
                Formula::Imp(..) => Op::Imp,
                _ => Op::Iff,
            });
        }
    }
}

const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Classical tautology check with boxes and constants treated as opaque
/// atoms. The truth table is evaluated 64 valuations at a time.
pub fn taut_check(f: &Formula) -> bool {
    let atoms = opaque_atoms(f);
    let mut code = Vec::new();
    compile(f, &atoms, &mut code);
    let n = atoms.len();
    let (chunks, live): (u64, u64) = if n <= 6 {
        (1, if n == 6 { u64::MAX } else { (1u64 << (1u64 << n)) - 1 })
    } else {
        (1u64 << (n - 6), u64::MAX)
    };
    let mut stack: Vec<u64> = Vec::with_capacity(code.len());
    for chunk in 0..chunks {
        stack.clear();
        for op in &code {
            match *op {
                Op::Lit(b) => stack.push(if b { u64::MAX } else { 0 }),
                Op::Var(i) => stack.push(if i < 6 {
                    LOW_PATTERNS[i]
                } else if (chunk >> (i - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }),
                Op::Not => {
                    let a = stack.pop().unwrap();
                    stack.push(!a);
                }
                Op::And | Op::Or | Op::Imp | Op::Iff => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    stack.push(match *op {
                        Op::And => a & b,
                        Op::Or => a | b,
                        Op::Imp => !a | b,
                        _ => !(a ^ b),
                    });
                }
            }
        }
        if stack.pop().unwrap() & live != live {
            return false;
        }
    }
    true
}
