//! `eocount`: classify signatures, decide signature sets, evaluate grids.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal invariant violation,
//! 3 refused (budget exhausted or verdict undecided).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eo_core::classify::{first_eom_pairing, ClassReport};
use eo_core::grid::builtin::{gen_builtin, Generated};
use eo_core::grid::codec::signature_file;
use eo_core::grid::random::gen_random;
use eo_core::grid::{dual_grid, parse_grid, pi_transform, tau_set, to_canonical_json, EOGrid, BRUTE_FORCE_BUDGET};
use eo_core::solve::{decide, evaluate, EvalOptions, Strategy};
use eo_core::{Error, Pairing, Signature};

#[derive(Parser)]
#[command(name = "eocount", version, about = "Exact counting of weighted Eulerian orientations")]
struct Cli {
    /// Print machine-readable JSON where a command has a plain form.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Brute,
    Active,
    Passive,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Brute => Strategy::Brute,
            StrategyArg::Active => Strategy::Active,
            StrategyArg::Passive => Strategy::Passive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    Dual,
    Pi,
    Tau,
}

#[derive(Subcommand)]
enum Command {
    /// Class report for every signature in a file.
    Classify {
        file: PathBuf,
        /// Only this signature.
        #[arg(long)]
        name: Option<String>,
    },
    /// Tractability verdict for the signature set of a file.
    Decide { file: PathBuf },
    /// Exact partition function of a grid.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        /// Print the reduction steps after the value.
        #[arg(long)]
        trace: bool,
        /// Support combinations brute force may visit.
        #[arg(long, default_value_t = BRUTE_FORCE_BUDGET)]
        budget: u64,
    },
    /// Write a builtin signature or grid, or `random FAMILY ARITY` with `--seed`.
    Gen {
        name: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dual of a grid, or `π`/`τ` of every signature in a file.
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        file: PathBuf,
        /// Pairing for `tau`, e.g. `1-3,2-4`; defaults to the first valid one.
        #[arg(long)]
        pairing: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Invalid(String),
    Internal(String),
    Refused(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ if e.is_refusal() => Failure::Refused(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_grid(path: &Path) -> Result<EOGrid, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    parse_grid(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write_out(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn classify(file: &Path, name: Option<&str>) -> Outcome {
    let g = read_grid(file)?;
    let mut out = serde_json::Map::new();
    for (n, f) in g.signatures() {
        if name.is_some_and(|want| want != n) {
            continue;
        }
        out.insert(n.clone(), serde_json::to_value(ClassReport::of(f)).expect("report serializes"));
    }
    if let Some(want) = name {
        if out.is_empty() {
            return Err(Failure::Invalid(format!("no signature named {want:?}")));
        }
    }
    println!("{}", pretty(&Value::Object(out)));
    Ok(())
}

fn decide_cmd(file: &Path) -> Outcome {
    let g = read_grid(file)?;
    let names: Vec<&String> = g.signatures().keys().collect();
    let set: Vec<Signature> = g.signatures().values().cloned().collect();
    let verdict = decide(&set)?;
    let mut v = serde_json::to_value(&verdict).expect("verdict serializes");
    v["signatures"] = json!(names);
    println!("{}", pretty(&v));
    if verdict.is_undecided() {
        let reason = v["reason"].as_str().unwrap_or("undecided").to_string();
        return Err(Failure::Refused(reason));
    }
    Ok(())
}

fn eval_cmd(file: &Path, strategy: Strategy, trace: bool, budget: u64, as_json: bool) -> Outcome {
    let g = read_grid(file)?;
    let e = evaluate(&g, &EvalOptions { strategy, budget })?;
    for w in &e.warnings {
        eprintln!("warning: {w}");
    }
    if as_json {
        println!("{}", pretty(&serde_json::to_value(&e).expect("evaluation serializes")));
    } else {
        println!("{}", e.value);
        if trace {
            let report = json!({
                "route": e.route,
                "backend": e.backend,
                "dualized": e.dualized,
                "steps": e.steps,
            });
            println!("{}", pretty(&report));
        }
    }
    Ok(())
}

fn generated_text(name: &str, g: Generated) -> String {
    match g {
        Generated::Signature(f) => signature_file(name, &f),
        Generated::Grid(g) => to_canonical_json(&g),
    }
}

fn gen_cmd(name: &str, params: &[String], seed: u64, output: Option<&Path>) -> Outcome {
    let (label, g) = if name == "random" {
        let [family, arity] = params else {
            return Err(Failure::Invalid("random takes FAMILY ARITY".into()));
        };
        let arity = arity.parse().map_err(|_| Failure::Invalid(format!("arity {arity:?} is not a number")))?;
        (family.as_str(), gen_random(family, arity, seed)?)
    } else {
        (name, gen_builtin(name, params)?)
    };
    write_out(output, &generated_text(label, g))
}

fn parse_pairing(text: &str) -> Result<Pairing, Failure> {
    let mut pairs = Vec::new();
    for part in text.split(',') {
        let (a, b) = part
            .split_once('-')
            .ok_or_else(|| Failure::Invalid(format!("pair {part:?} is not of the form a-b")))?;
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| Failure::Invalid(format!("bad index {s:?}")));
        pairs.push((num(a)?, num(b)?));
    }
    Ok(Pairing::new(pairs)?)
}

fn transform_cmd(kind: TransformKind, file: &Path, pairing: Option<&str>, output: Option<&Path>) -> Outcome {
    let g = read_grid(file)?;
    let text = match kind {
        TransformKind::Dual => to_canonical_json(&dual_grid(&g)),
        TransformKind::Pi | TransformKind::Tau => {
            let mut sigs = std::collections::BTreeMap::new();
            for (n, f) in g.signatures() {
                match kind {
                    TransformKind::Pi => {
                        sigs.insert(format!("pi-{n}"), pi_transform(f)?);
                    }
                    _ => {
                        let p = match pairing {
                            Some(t) => parse_pairing(t)?,
                            None => first_eom_pairing(f)?
                                .ok_or_else(|| Failure::Invalid(format!("signature {n} is not EOM")))?,
                        };
                        for (k, t) in tau_set(f, &p)?.into_iter().enumerate() {
                            sigs.insert(format!("tau{k}-{n}"), t);
                        }
                    }
                }
            }
            to_canonical_json(&EOGrid::new(sigs, Vec::new(), Vec::new())?)
        }
    };
    write_out(output, &text)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Classify { file, name } => classify(&file, name.as_deref()),
        Command::Decide { file } => decide_cmd(&file),
        Command::Eval { file, strategy, trace, budget } => eval_cmd(&file, strategy.into(), trace, budget, cli.json),
        Command::Gen { name, params, seed, output } => gen_cmd(&name, &params, seed, output.as_deref()),
        Command::Transform { kind, file, pairing, output } => {
            transform_cmd(kind, &file, pairing.as_deref(), output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Refused(m)) => {
            eprintln!("refused: {m}");
            ExitCode::from(3)
        }
    }
}
