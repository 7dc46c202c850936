//! `mulam`: command-line front end to the workbench.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use mulam_core::gen::{GenConfig, Generator};
use mulam_core::lamu;
use mulam_core::measures::{bold_ms, ms};
use mulam_core::oracle::{explore, node_cap_from_env};
use mulam_core::resource::{self, step_sum, StepMode, Strategy};
use mulam_core::suites::{self, Suite, SuiteConfig};
use mulam_core::taylor::{self, Budget, Solvability};
use mulam_core::textio::{self, parse_context, parse_res_term, parse_sum, parse_term};
use mulam_core::{Bool, Error, Nat, Semiring, Sum, Term};

#[derive(Parser)]
#[command(name = "mulam", version, about = "λμ-calculus, resource calculus and Taylor expansion workbench")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    /// Expression given inline.
    #[arg(short = 'e', long = "expr")]
    expr: Option<String>,
    /// File holding the expression (`-` for stdin).
    #[arg(conflicts_with = "expr")]
    file: Option<PathBuf>,
}

impl Input {
    fn read(&self) -> Result<String, Failure> {
        match (&self.expr, &self.file) {
            (Some(e), _) => Ok(e.clone()),
            (None, Some(p)) if p.as_os_str() == "-" => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(e.to_string()))?;
                Ok(s)
            }
            (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
            (None, None) => Err(Failure::Input("give an expression with -e or a file".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemiringArg {
    Bool,
    Nat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Calculus {
    Lamu,
    Res,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Head,
    Leftmost,
    Rightmost,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Syntax {
    Auto,
    Term,
    Res,
    Sum,
    Context,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Term,
    Resterm,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and print in canonical form (or as a JSON AST).
    Parse {
        #[command(flatten)]
        input: Input,
        #[arg(long = "as", value_enum, default_value = "auto")]
        syntax: Syntax,
    },
    /// Print a reduction trace.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "lamu")]
        calculus: Calculus,
        #[arg(long, value_enum, default_value = "leftmost")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
    },
    /// Normal form of a resource term or sum.
    Normalize {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "bool")]
        semiring: SemiringArg,
        /// Print every step with its redex position and measure.
        #[arg(long)]
        trace: bool,
    },
    /// Termination measures of a resource term.
    Measure {
        #[command(flatten)]
        input: Input,
    },
    /// Approximants of a λμ-term up to a size.
    Taylor {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Normal forms of the approximants up to a size.
    Nft {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Compare two terms by their truncated normal-form sets.
    NftEq {
        left: String,
        right: String,
        #[arg(long)]
        max_size: usize,
    },
    /// Run head reduction for a bounded number of steps.
    Solvable {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
    /// Run a seeded property suite.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_term_size: Option<usize>,
        /// Defaults to MULAM_NODE_CAP, else 50000.
        #[arg(long)]
        node_cap: Option<usize>,
    },
    /// Generate a random term.
    Gen {
        #[arg(long, value_enum, default_value = "resterm")]
        kind: GenKind,
        #[arg(long, default_value_t = 12)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        closed: bool,
    },
    /// Full reduction graph of a resource sum.
    Explore {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "bool")]
        semiring: SemiringArg,
        #[arg(long)]
        node_cap: Option<usize>,
    },
}

enum Failure {
    /// Bad input; exit 2.
    Input(String),
    /// A check failed; exit 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(json: bool, value: serde_json::Value, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json values serialize"));
    } else {
        println!("{}", text());
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let json = cli.json;
    match &cli.cmd {
        Cmd::Parse { input, syntax } => parse_cmd(&input.read()?, *syntax, json),
        Cmd::Reduce { input, calculus, strategy, seed, max_steps } => {
            let src = input.read()?;
            match calculus {
                Calculus::Lamu => reduce_lamu(&parse_term(&src)?, *strategy, *seed, *max_steps, json),
                Calculus::Res => reduce_res(&parse_sum::<Bool>(&src)?, *strategy, *seed, *max_steps, json),
            }
        }
        Cmd::Normalize { input, semiring, trace } => {
            let src = input.read()?;
            match semiring {
                SemiringArg::Bool => normalize_cmd::<Bool>(&src, *trace, json),
                SemiringArg::Nat => normalize_cmd::<Nat>(&src, *trace, json),
            }
        }
        Cmd::Measure { input } => {
            let t = parse_res_term(&input.read()?)?;
            let m = bold_ms(&t);
            emit(json, json!({"ms": m.ms.elements(), "deg_mu": m.deg_mu, "size": m.size}), || {
                format!("ms     {}\ndeg_mu {}\nsize   {}\nbold   {m}", ms(&t), t.deg_mu(), t.size())
            });
            Ok(())
        }
        Cmd::Taylor { input, max_size, limit } => {
            let m = parse_term(&input.read()?)?;
            let ts = taylor::taylor_enum(&m, &Budget { max_size: *max_size, max_count: *limit });
            emit(json, json!(ts.iter().map(|t| t.to_string()).collect::<Vec<_>>()), || {
                ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("\n")
            });
            Ok(())
        }
        Cmd::Nft { input, max_size, limit } => {
            let m = parse_term(&input.read()?)?;
            let set = taylor::nft_truncated(&m, &Budget { max_size: *max_size, max_count: *limit });
            let lines: Vec<String> = set.iter().map(|t| t.to_string()).collect();
            emit(json, json!(lines), || if lines.is_empty() { "0".into() } else { lines.join("\n") });
            Ok(())
        }
        Cmd::NftEq { left, right, max_size } => {
            let (m, n) = (parse_term(left)?, parse_term(right)?);
            let v = taylor::nft_eq_truncated(&m, &n, &Budget::size(*max_size));
            let witness = v.witness.as_ref().map(|w| w.to_string());
            emit(json, json!({"equal": v.holds, "max_size": max_size, "witness": witness}), || match &witness {
                None => format!("equal up to size {max_size}"),
                Some(w) => format!("different up to size {max_size}: {w} is in one set only"),
            });
            Ok(())
        }
        Cmd::Solvable { input, fuel } => {
            let m = parse_term(&input.read()?)?;
            let s = taylor::solvable(&m, *fuel);
            emit(json, json!(s), || match s {
                Solvability::Solvable(n) => format!("Solvable({n})"),
                Solvability::Unknown => "Unknown".into(),
            });
            Ok(())
        }
        Cmd::Check { suite, samples, seed, max_term_size, node_cap } => {
            let suite: Suite = suite.parse().map_err(Failure::Input)?;
            let cfg = SuiteConfig {
                samples: *samples,
                seed: *seed,
                max_term_size: *max_term_size,
                node_cap: node_cap.unwrap_or_else(node_cap_from_env),
            };
            let rep = suites::run(suite, &cfg);
            eprintln!("wall time {:.3}s", rep.wall_time.as_secs_f64());
            emit(json, serde_json::to_value(&rep).expect("report serializes"), || {
                rep.to_string().trim_end().to_string()
            });
            if rep.passed() {
                Ok(())
            } else {
                Err(Failure::Check(String::new()))
            }
        }
        Cmd::Gen { kind, size, seed, closed } => {
            let mut g = Generator::new(GenConfig { closed: *closed, ..GenConfig::default() }, *seed);
            let (text, ast) = match kind {
                GenKind::Term => {
                    let t = g.term(*size);
                    (t.to_string(), textio::term_json(&t))
                }
                GenKind::Resterm => {
                    let t = g.res_term(*size);
                    (t.to_string(), textio::res_json(&t))
                }
            };
            emit(json, ast, || text);
            Ok(())
        }
        Cmd::Explore { input, semiring, node_cap } => {
            let src = input.read()?;
            let cap = node_cap.unwrap_or_else(node_cap_from_env);
            match semiring {
                SemiringArg::Bool => explore_cmd::<Bool>(&src, cap, json),
                SemiringArg::Nat => explore_cmd::<Nat>(&src, cap, json),
            }
        }
    }
}

fn parse_cmd(src: &str, syntax: Syntax, json: bool) -> Result<(), Failure> {
    let term = |s: &str| parse_term(s).map(|t| (t.to_string(), textio::term_json(&t)));
    let res = |s: &str| parse_res_term(s).map(|t| (t.to_string(), textio::res_json(&t)));
    let sum = |s: &str| parse_sum::<Nat>(s).map(|t| (t.to_string(), textio::sum_json(&t)));
    let ctx = |s: &str| parse_context(s).map(|c| (c.to_string(), textio::context_json(&c)));
    let (text, ast) = match syntax {
        Syntax::Term => term(src)?,
        Syntax::Res => res(src)?,
        Syntax::Sum => sum(src)?,
        Syntax::Context => ctx(src)?,
        // report the λμ error when nothing fits
        Syntax::Auto => term(src).or_else(|e| res(src).or_else(|_| sum(src)).or_else(|_| ctx(src)).map_err(|_| e))?,
    };
    emit(json, ast, || text);
    Ok(())
}

fn reduce_lamu(m: &Term, strategy: StrategyArg, seed: u64, max_steps: usize, json: bool) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = m.clone();
    let mut trace = vec![json!({"step": 0, "term": cur.to_string()})];
    let mut lines = vec![format!("0: {cur}")];
    for i in 1..=max_steps {
        let rs = lamu::redexes(&cur);
        let chosen: Option<Vec<u32>> = match strategy {
            StrategyArg::Head => lamu::head_redex_path(&cur),
            StrategyArg::Leftmost => rs.first().map(|r| r.path.clone()),
            StrategyArg::Rightmost => rs.last().map(|r| r.path.clone()),
            StrategyArg::Random if rs.is_empty() => None,
            StrategyArg::Random => Some(rs[rng.gen_range(0..rs.len())].path.clone()),
        };
        let Some(path) = chosen else { break };
        let kind = cur.subterm(&path).and_then(lamu::redex_kind).expect("chosen path is a redex");
        cur = lamu::reduce_redex(&cur, &path)?;
        trace.push(json!({"step": i, "path": path, "kind": kind, "term": cur.to_string()}));
        lines.push(format!("{i}: {kind} at {path:?} -> {cur}"));
    }
    emit(json, json!(trace), || lines.join("\n"));
    Ok(())
}

fn reduce_res(s: &Sum<Bool>, strategy: StrategyArg, seed: u64, max_steps: usize, json: bool) -> Result<(), Failure> {
    let mut cur = s.clone();
    let mut trace = vec![json!({"step": 0, "sum": cur.to_string()})];
    let mut lines = vec![format!("0: {cur}")];
    let mut strat = match strategy {
        StrategyArg::Head => None,
        StrategyArg::Leftmost => Some(Strategy::Leftmost),
        StrategyArg::Rightmost => Some(Strategy::Rightmost),
        StrategyArg::Random => Some(Strategy::random(seed)),
    };
    for i in 1..=max_steps {
        match strat.as_mut() {
            None => {
                let next = resource::head_iter(&cur, 1);
                if cur.terms().all(resource::is_hnf) {
                    break;
                }
                cur = next;
                trace.push(json!({"step": i, "sum": cur.to_string()}));
                lines.push(format!("{i}: head -> {cur}"));
            }
            Some(st) => match step_sum(&cur, st) {
                Ok(step) => {
                    cur = step.result;
                    trace.push(json!({
                        "step": i, "addend": step.addend.to_string(), "path": step.redex.path,
                        "kind": step.redex.kind, "sum": cur.to_string(),
                    }));
                    lines
                        .push(format!("{i}: {} at {:?} in {} -> {cur}", step.redex.kind, step.redex.path, step.addend));
                }
                Err(Error::Normal) => break,
                Err(e) => return Err(e.into()),
            },
        }
    }
    emit(json, json!(trace), || lines.join("\n"));
    Ok(())
}

fn normalize_cmd<S: Semiring>(src: &str, trace: bool, json: bool) -> Result<(), Failure> {
    let sum = match parse_sum::<S>(src) {
        Ok(s) => s,
        Err(e) if parse_term(src).is_ok() => {
            return Err(Failure::Input(format!(
                "{e}\nthis looks like a λμ-term; normalize works on resource terms, try `mulam reduce --calculus lamu`"
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let mut steps = Vec::new();
    let mut lines = Vec::new();
    if trace {
        let mut cur = sum.clone();
        let mut strategy = Strategy::Leftmost;
        loop {
            match step_sum(&cur, &mut strategy) {
                Ok(step) => {
                    let m = bold_ms(&step.addend);
                    cur = step.result;
                    lines.push(format!(
                        "{}: {} at {:?} in {} (measure {m}) -> {cur}",
                        steps.len() + 1,
                        step.redex.kind,
                        step.redex.path,
                        step.addend
                    ));
                    steps.push(json!({
                        "addend": step.addend.to_string(), "path": step.redex.path, "kind": step.redex.kind,
                        "measure": {"ms": m.ms.elements(), "deg_mu": m.deg_mu, "size": m.size},
                        "sum": cur.to_string(),
                    }));
                }
                Err(Error::Normal) => break,
                Err(e) => return Err(e.into()),
            }
        }
    }
    let nf = resource::normalize(&sum);
    lines.push(nf.to_string());
    emit(json, json!({"trace": steps, "normal_form": textio::sum_json(&nf)}), || lines.join("\n"));
    Ok(())
}

fn explore_cmd<S: Semiring>(src: &str, cap: usize, json: bool) -> Result<(), Failure> {
    let sum = parse_sum::<S>(src)?;
    let g = explore(&sum, StepMode::Whole, cap)?;
    let text = || {
        let mut out = format!("{} nodes, {} edges\n", g.nodes.len(), g.edges.len());
        for (i, n) in g.nodes.iter().enumerate() {
            out.push_str(&format!("  [{i}] {n}\n"));
        }
        for e in &g.edges {
            out.push_str(&format!("  {} -> {}: {} at {:?} in {}\n", e.from, e.to, e.kind, e.path, e.addend));
        }
        let sinks: Vec<String> = g.sinks.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("sinks: {}", sinks.join(", ")));
        out
    };
    emit(json, g.to_json(), text);
    Ok(())
}
