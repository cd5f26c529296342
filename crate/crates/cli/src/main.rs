use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use ordlab::closure::{
    build_witness_order, check_axioms, enumerate_maximal_free, invariant_of, quotient, verify_witness, AxiomReport,
    Budget, Closure, ClosureError, ClosureSystem,
};
use ordlab::generators::{gen, realize_invariant, GenError, GenSpec, RealizeStyle};
use ordlab::io::ScenarioFile;
use ordlab::order::QuadRat;
use ordlab::pairing::{
    classify, completion_maps, dep_sets, direction, restrict_to_model, sample_classes, verify_dep_laws, Law,
    PairingError, Scenario, Status, DEFAULT_CUT_PAIRS, DEFAULT_POINT_SAMPLES,
};
use ordlab::suite::run_suite;

/// Closure systems, class-quotient invariants and their correspondences.
#[derive(Parser)]
#[command(name = "ordlab", version)]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closure axioms, exchange and degeneracy of a closure scenario.
    Axioms { file: String },
    /// Class quotient and its linear order.
    Quotient { file: String },
    /// Invariant of a subset (the whole carrier by default).
    Inv {
        file: String,
        /// Comma-separated element ids.
        #[arg(long)]
        subset: Option<String>,
    },
    /// Builds the canonical witness order and verifies it.
    Witness { file: String },
    /// Operations on pairing scenarios.
    Pair {
        #[command(subcommand)]
        op: PairOp,
    },
    /// Writes a named example as a scenario file.
    Gen {
        name: String,
        /// Generator parameter, `key=value` (repeatable).
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
    },
    /// Builds a closure system whose invariant is a given finite order.
    Realize { file: String },
    /// Runs the acceptance suite.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum PairOp {
    Classify(PairArgs),
    Direction(PairArgs),
    Deps(PairArgs),
    Verify(PairArgs),
    Complete(PairArgs),
}

#[derive(Args)]
struct PairArgs {
    file: String,
    /// Sampled points (cut pairs for `complete`).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// A class of the p side, e.g. `1/2` or `1+1*r2`.
    #[arg(long)]
    at: Option<String>,
}

#[derive(Serialize)]
struct Report {
    command: String,
    inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    verdicts: Vec<Law>,
    result: Value,
    timing_ms: u128,
}

/// Failure to run a command at all.
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

fn read_input(path: &str) -> Result<String, Invalid> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Invalid(format!("{path}: {e}")))
    }
}

fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn effective_seed(seed: u64) -> Result<u64, Invalid> {
    match std::env::var("ORDLAB_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| Invalid(format!("ORDLAB_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(seed),
    }
}

fn law(name: &str, ok: bool, witness: impl FnOnce() -> String) -> Law {
    if ok {
        Law::pass(name)
    } else {
        Law::fail(name, witness())
    }
}

/// Errors that are checked violations (exit 1) rather than bad input (exit 2).
fn closure_violation(e: &ClosureError) -> bool {
    matches!(e, ClosureError::NotClosure(_) | ClosureError::NotTotallyDegenerated(_))
}

fn pairing_violation(e: &PairingError) -> bool {
    !matches!(
        e,
        PairingError::PointNotInOrder(_)
            | PairingError::Invalid(_)
            | PairingError::InvalidModel(_)
            | PairingError::WrongKind { .. }
            | PairingError::Unsupported(_)
    )
}

enum Outcome {
    Report(Report),
    /// Raw output for the producing commands.
    Document(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let start = Instant::now();
    match run(cli.command, start) {
        Ok(Outcome::Document(text)) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Report(report)) => {
            let failed = report.verdicts.iter().any(Law::failed);
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print_text(&report);
            }
            ExitCode::from(if failed { 1 } else { 0 })
        }
        Err(Invalid(msg)) => {
            if json {
                println!("{}", json!({ "error": msg }));
            }
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_text(r: &Report) {
    println!("{} ({})", r.command, &r.inputs_digest[..12.min(r.inputs_digest.len())]);
    if let Some(seed) = r.seed {
        println!("seed {seed}{}", r.samples.map(|s| format!(", {s} samples")).unwrap_or_default());
    }
    for l in &r.verdicts {
        let status = match l.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotApplicable => "n/a ",
        };
        match &l.witness {
            Some(w) => println!("  {status} {}: {w}", l.law),
            None => println!("  {status} {}", l.law),
        }
    }
    if !r.result.is_null() {
        println!("{}", serde_json::to_string_pretty(&r.result).expect("result serializes"));
    }
}

fn load_system(path: &str) -> Result<(String, ClosureSystem), Invalid> {
    let text = read_input(path)?;
    let sys = ScenarioFile::from_json(&text)?.into_system()?;
    Ok((digest(&text), sys))
}

fn load_scenario(path: &str) -> Result<(String, Scenario), Invalid> {
    let text = read_input(path)?;
    let scn = ScenarioFile::from_json(&text)?.into_scenario()?;
    Ok((digest(&text), scn))
}

fn report(command: &str, digest: String, verdicts: Vec<Law>, result: Value, start: Instant) -> Outcome {
    Outcome::Report(Report {
        command: command.into(),
        inputs_digest: digest,
        seed: None,
        samples: None,
        verdicts,
        result,
        timing_ms: start.elapsed().as_millis(),
    })
}

fn axiom_laws(r: &AxiomReport) -> Vec<Law> {
    let w = |c: &ordlab::closure::AxiomCheck| c.witness.as_ref().map(|w| serde_json::to_string(w).unwrap_or_default());
    let mut laws = vec![];
    for (name, c) in [("monotone", &r.monotone), ("finite_character", &r.finite_character), ("transitive", &r.transitive)] {
        laws.push(Law::from_first(name, w(c)));
    }
    laws
}

fn run(command: Command, start: Instant) -> Result<Outcome, Invalid> {
    match command {
        Command::Axioms { file } => {
            let (d, sys) = load_system(&file)?;
            let r = check_axioms(&sys, Budget::default());
            // Exchange and degeneracy are classifications, not laws the input claims.
            let result = serde_json::to_value(&r)?;
            Ok(report("axioms", d, axiom_laws(&r), result, start))
        }
        Command::Quotient { file } => {
            let (d, sys) = load_system(&file)?;
            match quotient(&sys) {
                Ok(q) => {
                    let result = json!({ "classes": q.len(), "quotient": q.describe(sys.carrier()) });
                    Ok(report("quotient", d, vec![Law::pass("totally_degenerated")], result, start))
                }
                Err(e) if closure_violation(&e) => {
                    let name = if matches!(e, ClosureError::NotClosure(_)) { "closure" } else { "totally_degenerated" };
                    let w = match &e {
                        ClosureError::NotTotallyDegenerated(x) => {
                            format!("{e}; X = {{{}}}", x.iter().map(|&i| sys.carrier().id(i)).collect::<Vec<_>>().join(", "))
                        }
                        _ => e.to_string(),
                    };
                    Ok(report("quotient", d, vec![Law::fail(name, w)], Value::Null, start))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Inv { file, subset } => {
            let (d, sys) = load_system(&file)?;
            let xs: Vec<usize> = match &subset {
                None => (0..sys.len()).collect(),
                Some(s) if s.trim().is_empty() => vec![],
                Some(s) => {
                    let ids: Vec<String> = s.split(',').map(|t| t.trim().to_string()).collect();
                    sys.carrier().resolve(&ids)?
                }
            };
            let run = || -> Result<_, ClosureError> {
                Ok((invariant_of(&sys, &xs)?, enumerate_maximal_free(&sys, &xs)?))
            };
            match run() {
                Ok((inv, seqs)) => {
                    let lens_agree = seqs.iter().all(|s| s.len() == inv.len());
                    let verdicts = vec![law("maximal_free_lengths", lens_agree, || {
                        format!("a maximal free sequence differs in length from Inv = {inv}")
                    })];
                    let named: Vec<Vec<&str>> =
                        seqs.iter().map(|s| s.iter().map(|&i| sys.carrier().id(i)).collect()).collect();
                    let result = json!({
                        "invariant": inv.to_string(),
                        "length": inv.len(),
                        "maximal_free_sequences": named.len(),
                        "example": named.first(),
                    });
                    Ok(report("inv", d, verdicts, result, start))
                }
                Err(e) if closure_violation(&e) => {
                    Ok(report("inv", d, vec![Law::fail("totally_degenerated", e.to_string())], Value::Null, start))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Witness { file } => {
            let (d, sys) = load_system(&file)?;
            let w = match build_witness_order(&sys) {
                Ok(w) => w,
                Err(e) if closure_violation(&e) => {
                    return Ok(report("witness", d, vec![Law::fail("totally_degenerated", e.to_string())], Value::Null, start))
                }
                Err(e) => return Err(e.into()),
            };
            let r = verify_witness(&sys, &w)?;
            let verdicts = vec![
                law("free_pairs_increasing", r.free_pairs_increasing(), || format!("{:?}", r.free_pair_violations)),
                law("classes_convex", r.classes_convex(), || format!("{:?}", r.convexity_violations)),
                law("incomparability_closed", r.incomparability_closed(), || {
                    format!("{:?}", r.incomparability_violations)
                }),
            ];
            let result = json!({ "pairs": w.pairs().len(), "locus_convex": r.locus_convex, "ambient": r.ambient });
            Ok(report("witness", d, verdicts, result, start))
        }
        Command::Pair { op } => run_pair(op, start),
        Command::Gen { name, params } => {
            let mut spec = GenSpec::new(&name);
            for p in &params {
                let (k, v) = p.split_once('=').ok_or_else(|| Invalid(format!("parameter {p:?} is not key=value")))?;
                let v = match v.trim() {
                    "true" => 1,
                    "false" => 0,
                    t => t.parse().map_err(|_| Invalid(format!("parameter {k}: {t:?} is not an integer")))?,
                };
                spec = spec.with(k.trim(), v);
            }
            let g = gen(&spec).map_err(|e: GenError| Invalid(e.to_string()))?;
            Ok(Outcome::Document(g.to_file().to_json()))
        }
        Command::Realize { file } => {
            let text = read_input(&file)?;
            let (order, style) = parse_order_file(&text)?;
            let sys = realize_invariant(&order, style)?;
            Ok(Outcome::Document(ScenarioFile::closure(sys.spec().clone()).to_json()))
        }
        Command::Suite { seed } => {
            let seed = effective_seed(seed)?;
            let outcomes = run_suite(seed);
            let verdicts = outcomes
                .iter()
                .map(|o| {
                    let name = format!("{} {}", o.id, o.name);
                    if o.passed {
                        Law { law: name, status: Status::Pass, witness: Some(o.detail.clone()) }
                    } else {
                        Law::fail(&name, o.detail.clone())
                    }
                })
                .collect();
            Ok(Outcome::Report(Report {
                command: "suite".into(),
                inputs_digest: digest(&format!("suite {seed}")),
                seed: Some(seed),
                samples: None,
                verdicts,
                result: Value::Null,
                timing_ms: start.elapsed().as_millis(),
            }))
        }
    }
}

/// `["a", "b"]` or `{"order": [...], "style": "simple_dense" | "zwindow", "window": n}`.
fn parse_order_file(text: &str) -> Result<(Vec<String>, RealizeStyle), Invalid> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum OrderFile {
        Bare(Vec<String>),
        Full {
            order: Vec<String>,
            #[serde(flatten)]
            style: Option<RealizeStyle>,
        },
    }
    match serde_json::from_str::<OrderFile>(text) {
        Ok(OrderFile::Bare(order)) => Ok((order, RealizeStyle::SimpleDense)),
        Ok(OrderFile::Full { order, style }) => Ok((order, style.unwrap_or_default())),
        Err(e) => Err(Invalid(format!("malformed order file: {e}"))),
    }
}

fn run_pair(op: PairOp, start: Instant) -> Result<Outcome, Invalid> {
    let (name, args) = match op {
        PairOp::Classify(a) => ("classify", a),
        PairOp::Direction(a) => ("direction", a),
        PairOp::Deps(a) => ("deps", a),
        PairOp::Verify(a) => ("verify", a),
        PairOp::Complete(a) => ("complete", a),
    };
    let seed = effective_seed(args.seed)?;
    let default = if name == "complete" { DEFAULT_CUT_PAIRS } else { DEFAULT_POINT_SAMPLES };
    let samples = args.samples.unwrap_or(default);
    if samples == 0 {
        return Err(Invalid("--samples must be positive".into()));
    }
    let (d, scn) = load_scenario(&args.file)?;
    let command = format!("pair {name}");
    let at = match &args.at {
        Some(a) => Some(a.parse::<QuadRat>().map_err(|e| Invalid(format!("--at: {e}")))?),
        None => None,
    };
    // A model, when present, restricts the scenario before anything else.
    let scn = match &scn.model {
        Some(m) => restrict_to_model(&scn, m, DEFAULT_POINT_SAMPLES, seed),
        None => Ok(scn),
    };

    let outcome: Result<(Vec<Law>, Value), PairingError> = scn.and_then(|scn| match name {
        "classify" => classify(&scn, samples, seed).map(|k| (vec![Law::pass("dichotomy")], json!({ "kind": k }))),
        "direction" => direction(&scn, samples, seed).map(|r| {
            (vec![Law::pass("strictly_monotone"), Law::pass("commute_matches_direction")], serde_json::to_value(r).unwrap())
        }),
        "deps" => {
            let points = match &at {
                Some(a) => vec![a.clone()],
                None => sample_classes(&scn.lin_p.points, samples.min(5), seed),
            };
            points
                .iter()
                .map(|a| dep_sets(&scn, a))
                .collect::<Result<Vec<_>, _>>()
                .map(|ds| (vec![], serde_json::to_value(ds).unwrap()))
        }
        "verify" => verify_dep_laws(&scn, samples, seed).map(|r| (r.laws.clone(), json!({ "samples": r.samples }))),
        _ => completion_maps(&scn, samples, seed).map(|r| {
            let mut laws = r.laws.clone();
            let verdict_ok = matches!(r.verdict, ordlab::order::Verdict::Iso | ordlab::order::Verdict::AntiIso);
            laws.push(law("completions_related", verdict_ok, || {
                format!("{:?}{}", r.verdict, r.note.as_ref().map(|n| format!(": {n}")).unwrap_or_default())
            }));
            (laws, serde_json::to_value(&r).unwrap())
        }),
    });
    let (verdicts, result) = match outcome {
        Ok(v) => v,
        Err(e) if pairing_violation(&e) => (vec![Law::fail(name, e.to_string())], Value::Null),
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome::Report(Report {
        command,
        inputs_digest: d,
        seed: Some(seed),
        samples: Some(samples),
        verdicts,
        result,
        timing_ms: start.elapsed().as_millis(),
    }))
}
