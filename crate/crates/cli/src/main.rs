use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use g2ws::arith::{bounded_equiv, to_existential_dnf_traced, QfFormula};
use g2ws::conditions::ConditionSet;
use g2ws::derive::{emit_graph, figure1_report, generate, library, GenParams, GraphFormat};
use g2ws::kernel::{check_proof, parse_proof};
use g2ws::modal::Formula;
use g2ws::neighborhood::{countermodel_search, parse_flags, parse_model, SearchSpec};
use g2ws::saturation::{parse_toy_theory, saturate_range, soundness_audit};

/// Writes to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn emit(args: fmt::Arguments<'_>) {
    if let Err(e) = io::stdout().lock().write_fmt(args) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("g2ws: error: writing output: {e}");
        std::process::exit(2);
    }
}

macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

macro_rules! outln {
    () => { emit(format_args!("\n")) };
    ($($t:tt)*) => { emit(format_args!("{}\n", format_args!($($t)*))) };
}

/// Derivability-condition workbench: proof checking, derivations,
/// neighborhood countermodels, saturation and arithmetic normal forms.
#[derive(Parser, Debug)]
#[command(name = "g2ws", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Check a proof file.
    Check {
        file: PathBuf,
        /// Condition set to check under, e.g. "E,C,D3"; overrides the file header.
        #[arg(long)]
        conditions: Option<String>,
    },
    /// Generate a proof from the derivation library.
    Derive(DeriveArgs),
    /// Evaluate, inspect or search neighborhood models.
    Model {
        #[command(subcommand)]
        op: ModelOp,
    },
    /// Quantifier-free arithmetic normal forms.
    Arith {
        #[command(subcommand)]
        op: ArithOp,
    },
    /// Print stratum sizes of the saturation construction as TSV.
    Saturate {
        /// Toy theory file.
        #[arg(short = 't', long = "theory")]
        theory: PathBuf,
        #[arg(long = "m-max")]
        m_max: u64,
        /// Also audit every stratum against the closure oracle.
        #[arg(long)]
        audit: bool,
    },
    /// Emit the implication graph.
    #[command(group(ArgGroup::new("format").required(true).args(["dot", "tsv"])))]
    Graph {
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        tsv: bool,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("what").required(true).args(["name", "all"])))]
struct DeriveArgs {
    /// Generator name.
    name: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Target formula for parametric generators.
    #[arg(long)]
    target: Option<String>,
    /// Output file (a directory with --all).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Every library entry.
    #[arg(long, conflicts_with_all = ["n", "k", "target"])]
    all: bool,
    /// With --all: print the implication-graph classification (TSV, then DOT).
    #[arg(long, requires = "all")]
    report: bool,
}

#[derive(Subcommand, Debug)]
enum ModelOp {
    /// Truth of a formula at a world.
    Eval {
        #[arg(short = 'm', long)]
        model: PathBuf,
        #[arg(short = 'w', long)]
        world: String,
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Closure properties of the neighborhood functions.
    Props {
        #[arg(short = 'm', long)]
        model: PathBuf,
    },
    /// Exhaustive search for a model falsifying the target.
    Search {
        /// Closure flags, e.g. "intersection_closed,contains_unit".
        #[arg(long, default_value = "")]
        require: String,
        /// Formulas that must be globally valid, comma separated.
        #[arg(long, default_value = "")]
        valid: String,
        #[arg(long)]
        target: String,
        #[arg(long = "max-worlds")]
        max_worlds: usize,
        #[arg(long, default_value = "p")]
        atoms: String,
    },
}

#[derive(Subcommand, Debug)]
enum ArithOp {
    /// Print the existential DNF.
    Normalize {
        #[arg(short = 'f', long)]
        formula: String,
        /// Print every pipeline stage first.
        #[arg(long)]
        trace: bool,
    },
    /// Check the normal form against the input on all assignments up to B.
    Equiv {
        #[arg(short = 'f', long)]
        formula: String,
        #[arg(short = 'B', long = "bound", default_value_t = 4)]
        bound: u64,
    },
}

enum Failure {
    /// Well-formed input, negative answer.
    Semantic(String),
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_or_print(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn formula(text: &str) -> Result<Formula, Failure> {
    Formula::parse(text).map_err(|e| usage(format!("formula {text:?}: {e}")))
}

fn run_check(file: &Path, conditions: Option<&str>) -> Outcome {
    let proof = parse_proof(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let cs = match conditions {
        Some(s) => s.parse::<ConditionSet>().map_err(usage)?,
        None => proof.conditions.clone(),
    };
    let report = check_proof(&proof, &cs);
    outln!("{report}");
    if report.accepted() {
        Ok(())
    } else {
        Err(Failure::Semantic(format!("{}: proof rejected", file.display())))
    }
}

fn run_derive(args: &DeriveArgs) -> Outcome {
    if args.all {
        if args.report {
            let report = figure1_report();
            let mut text = emit_graph(&report, GraphFormat::Tsv);
            text.push('\n');
            text.push_str(&emit_graph(&report, GraphFormat::Dot));
            return write_or_print(args.output.as_deref(), &text);
        }
        let entries = library();
        return match &args.output {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
                for e in &entries {
                    let path = dir.join(format!("{}.prf", e.name));
                    fs::write(&path, e.proof.to_string()).map_err(|err| usage(format!("{}: {err}", path.display())))?;
                }
                Ok(())
            }
            None => {
                for e in &entries {
                    outln!("# {}: {}", e.name, e.summary);
                    out!("{}", e.proof);
                    outln!();
                }
                Ok(())
            }
        };
    }
    let name = args.name.as_deref().expect("clap requires a name without --all");
    let params = GenParams {
        n: args.n,
        k: args.k,
        target: args.target.as_deref().map(formula).transpose()?,
    };
    let entry = generate(name, &params).map_err(usage)?;
    write_or_print(args.output.as_deref(), &entry.proof.to_string())
}

fn run_model(op: &ModelOp) -> Outcome {
    match op {
        ModelOp::Eval {
            model,
            world,
            formula: f,
        } => {
            let m = parse_model(&read(model)?).map_err(usage)?;
            let v = m.eval_at(world, &formula(f)?).map_err(usage)?;
            outln!("{v}");
            Ok(())
        }
        ModelOp::Props { model } => {
            let m = parse_model(&read(model)?).map_err(usage)?;
            outln!("{}", m.closure_report());
            Ok(())
        }
        ModelOp::Search {
            require,
            valid,
            target,
            max_worlds,
            atoms,
        } => {
            let spec = SearchSpec {
                require: parse_flags(require).map_err(usage)?,
                valid: valid
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(formula)
                    .collect::<Result<_, _>>()?,
                target: formula(target)?,
                max_worlds: *max_worlds,
                atoms: atoms
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
            };
            match countermodel_search(&spec).map_err(usage)? {
                Some(m) => {
                    out!("{m}");
                    Ok(())
                }
                None => Err(Failure::Semantic(format!("no countermodel within {max_worlds} worlds"))),
            }
        }
    }
}

fn run_arith(op: &ArithOp) -> Outcome {
    match op {
        ArithOp::Normalize { formula: f, trace } => {
            let q = QfFormula::parse(f).map_err(|e| usage(format!("formula {f:?}: {e}")))?;
            let (dnf, steps) = to_existential_dnf_traced(&q);
            if *trace {
                for s in &steps {
                    outln!("{}\t{}", s.stage, s.text);
                }
            }
            outln!("{dnf}");
            Ok(())
        }
        ArithOp::Equiv { formula: f, bound } => {
            let q = QfFormula::parse(f).map_err(|e| usage(format!("formula {f:?}: {e}")))?;
            let (dnf, _) = to_existential_dnf_traced(&q);
            if bounded_equiv(&q, &dnf, *bound) {
                outln!("equivalent up to {bound}");
                Ok(())
            } else {
                outln!("not equivalent");
                Err(Failure::Semantic(format!("{dnf} disagrees with {q}")))
            }
        }
    }
}

fn run_saturate(theory: &Path, m_max: u64, audit: bool) -> Outcome {
    let th = parse_toy_theory(&read(theory)?).map_err(|e| usage(format!("{}: {e}", theory.display())))?;
    outln!("m\tk\tsize\tfixpoint");
    for s in saturate_range(&th, 0, m_max) {
        for (k, x) in s.strata.iter().enumerate() {
            outln!("{}\t{k}\t{}\t{}", s.m, x.len(), k == s.k_star);
        }
    }
    if audit {
        let report = soundness_audit(&th, m_max);
        out!("{report}");
        if !report.sound() {
            return Err(Failure::Semantic("saturation audit found violations".into()));
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.verb {
        Verb::Check { file, conditions } => run_check(file, conditions.as_deref()),
        Verb::Derive(args) => run_derive(args),
        Verb::Model { op } => run_model(op),
        Verb::Arith { op } => run_arith(op),
        Verb::Saturate { theory, m_max, audit } => run_saturate(theory, *m_max, *audit),
        Verb::Graph { dot, output, .. } => {
            let format = if *dot { GraphFormat::Dot } else { GraphFormat::Tsv };
            write_or_print(output.as_deref(), &emit_graph(&figure1_report(), format))
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("G2WS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("G2WS_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(usage)
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 on --help.
    let cli = Cli::parse();
    match init_threads().and_then(|()| dispatch(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic(msg)) => {
            eprintln!("g2ws: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("g2ws: error: {msg}");
            ExitCode::from(2)
        }
    }
}
