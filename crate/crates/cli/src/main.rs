use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use topraag::homology::{chain_complex, homological_connectivity, homology, reduced_homology, sublevel_complex, CellComplex};
use topraag::model::ModelConfig;
use topraag::suites::{run_suite, valley_study, Suite, SuiteConfig};
use topraag::{build_ball, BallCaps, BaseModel, Engine, Error, Graph};

#[derive(Parser)]
#[command(name = "topraag", version, about = "Topological right-angled Artin groups and their Salvetti complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a ball in the Salvetti complex and export it.
    Build(Common),
    /// Run a verification suite.
    Verify(Common),
    /// Integral homology of an exported complex, a sublevel complex or a truncated valley.
    Homology(HomologyArgs),
    /// Canonical form of a word.
    NormalForm {
        #[command(flatten)]
        common: Common,
        /// Whitespace separated tokens, e.g. "s (12) t^-1".
        #[arg(long)]
        word: String,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    radius: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    latitude: i64,
    /// Word radius of valley truncations.
    #[arg(long, default_value_t = 4)]
    window: usize,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    cap_vertices: usize,
    #[arg(long, default_value_t = 10_000_000)]
    cap_cubes: usize,
}

#[derive(Args)]
struct HomologyArgs {
    #[command(flatten)]
    common: Common,
    /// Complex JSON: a ball export or `{"cells": [[corners...], ...]}`.
    #[arg(long, conflicts_with = "valley")]
    complex: Option<PathBuf>,
    /// Truncated valley of the fundamental apartment at `--latitude`, window `--window`.
    #[arg(long)]
    valley: bool,
}

/// Failure with its exit code: 1 for property or regime failures, 2 for configuration errors.
struct Failure {
    code: u8,
    message: String,
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::RegimeMismatch(_)
        | Error::DisconnectedGraph(_)
        | Error::NonClosedComplex(_)
        | Error::InfiniteStabiliser
        | Error::NoInteriorVertices
        | Error::EmptyWindow
        | Error::NotShrinkingModel
        | Error::RelationViolation { .. } => 1,
        _ => 2,
    }
}

fn hint(e: &Error) -> Option<&'static str> {
    match e {
        Error::DisconnectedGraph(_) => Some(
            "non-automorphic models need a connected graph; pass a connected graph or a model with phi(U) = U",
        ),
        Error::RegimeMismatch(_) => Some("this model and graph combination has no element engine"),
        _ => None,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut message = e.to_string();
        if let Some(hint) = hint(&e) {
            message = format!("{message}\nhint: {hint}");
        }
        Failure { code: classify(&e), message }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(inner) => Failure { code: classify(inner), message: format!("{e:#}") },
            None => Failure { code: 2, message: format!("{e:#}") },
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

struct Loaded {
    graph: Option<Graph>,
    model: Option<BaseModel>,
    graph_json: Value,
    model_json: Value,
}

fn load(c: &Common) -> Result<Loaded, Failure> {
    let mut out = Loaded { graph: None, model: None, graph_json: Value::Null, model_json: Value::Null };
    if let Some(p) = &c.graph {
        let v = read_json(p)?;
        out.graph = Some(Graph::from_json(&v.to_string())?);
        out.graph_json = serde_json::to_value(out.graph.as_ref().unwrap().to_raw()).expect("graph serialises");
    }
    if let Some(p) = &c.model {
        let v = read_json(p)?;
        let cfg: ModelConfig =
            serde_json::from_value(v).map_err(|e| Failure { code: 2, message: format!("model {}: {e}", p.display()) })?;
        out.model = Some(BaseModel::from_config(&cfg)?);
        out.model_json = serde_json::to_value(&cfg).expect("model serialises");
    }
    Ok(out)
}

fn config_hash(config: &Value) -> String {
    hex::encode(Sha256::digest(config.to_string().as_bytes()))
}

fn config_value(command: &str, c: &Common, l: &Loaded, extra: Value) -> Value {
    json!({
        "command": command,
        "graph": l.graph_json,
        "model": l.model_json,
        "radius": c.radius,
        "latitude": c.latitude,
        "window": c.window,
        "suite": c.suite,
        "n": c.n,
        "seed": c.seed,
        "cap_vertices": c.cap_vertices,
        "cap_cubes": c.cap_cubes,
        "extra": extra,
    })
}

fn emit(report: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("report serialises");
    let mut stdout = std::io::stdout().lock();
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(stdout, "{text}");
    if let Some(p) = out {
        fs::write(p, text + "\n").map_err(|e| Failure { code: 2, message: format!("writing {}: {e}", p.display()) })?;
    }
    Ok(())
}

fn need<T: Clone>(x: &Option<T>, flag: &str) -> Result<T, Failure> {
    x.clone().ok_or_else(|| Failure { code: 2, message: format!("missing {flag}") })
}

fn caps(c: &Common) -> BallCaps {
    BallCaps { max_vertices: c.cap_vertices, max_cubes: c.cap_cubes }
}

fn cmd_build(c: &Common) -> Outcome {
    let l = load(c)?;
    let engine = Engine::new(need(&l.model, "--model")?, need(&l.graph, "--graph")?)?;
    let ball = build_ball(&engine, c.radius, caps(c))?;
    let hash = config_hash(&config_value("build", c, &l, Value::Null));
    let export = {
        let mut v = ball.export_json(l.model_json.clone());
        v["meta"]["config_hash"] = json!(hash);
        v
    };
    if let Some(p) = &c.out {
        let text = serde_json::to_string(&export).expect("export serialises");
        fs::write(p, text + "\n").map_err(|e| Failure { code: 2, message: format!("writing {}: {e}", p.display()) })?;
    }
    let degree_formula = match engine.cayley_abels_degree() {
        topraag::model::Index::Finite(d) => json!(d),
        topraag::model::Index::Infinite => json!("inf"),
    };
    let inner_degrees: std::collections::BTreeSet<usize> =
        (0..ball.vertices.len()).filter(|&v| ball.vertices[v].dist < c.radius).map(|v| ball.degree(v)).collect();
    let summary = json!({
        "config_hash": hash,
        "engine": engine.kind().to_string(),
        "radius": c.radius,
        "vertices": ball.vertices.len(),
        "cubes_by_dim": ball.counts(),
        "euler_characteristic": ball.euler_characteristic(),
        "vertex_degree": degree_formula,
        "inner_vertex_degrees": inner_degrees,
        "dimension": engine.graph().clique_number(),
        "out": c.out.as_ref().map(|p| p.display().to_string()),
    });
    emit(&summary, None)?;
    Ok(true)
}

fn cmd_verify(c: &Common) -> Outcome {
    let name = need(&c.suite, "--suite")?;
    let suite = Suite::parse(&name).ok_or_else(|| Failure {
        code: 2,
        message: format!(
            "unknown suite `{name}`; expected one of {}",
            Suite::ALL.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
        ),
    })?;
    let l = load(c)?;
    let cfg = SuiteConfig {
        graph: l.graph.clone(),
        model: l.model.clone(),
        radius: c.radius,
        latitude: c.latitude,
        window: c.window,
        n: c.n,
        seed: c.seed,
        caps: caps(c),
        ..SuiteConfig::default()
    };
    let report = run_suite(suite, &cfg)?;
    let mut v = report.to_json();
    v["config_hash"] = json!(config_hash(&config_value("verify", c, &l, Value::Null)));
    emit(&v, c.out.as_deref())?;
    Ok(report.pass())
}

fn cmd_homology(a: &HomologyArgs) -> Outcome {
    let c = &a.common;
    let l = load(c)?;
    let mut report = if let Some(path) = &a.complex {
        let v = read_json(path)?;
        let complex = CellComplex::from_json(&v)?;
        let cc = chain_complex(&complex)?;
        let h = reduced_homology(&cc);
        json!({
            "source": "complex",
            "cells_by_dim": complex.counts(),
            "euler_characteristic": complex.euler_characteristic(),
            "reduced": h.to_json(),
            "unreduced": homology(&cc).to_json(),
            "connectivity": homological_connectivity(&h).to_json(),
        })
    } else if a.valley {
        let g = need(&l.graph, "--graph")?;
        let study = valley_study(&g, c.latitude, c.window)?;
        json!({
            "source": "valley",
            "latitude": c.latitude,
            "radii": study.radii,
            "cells": study.cells,
            "stabilised": study.stabilised,
            "reduced": [study.homology[0].to_json(), study.homology[1].to_json()],
            "connectivity": [
                homological_connectivity(&study.homology[0]).to_json(),
                homological_connectivity(&study.homology[1]).to_json(),
            ],
            "link_reduced": study.link.to_json(),
        })
    } else {
        let engine = Engine::new(need(&l.model, "--model")?, need(&l.graph, "--graph")?)?;
        let ball = build_ball(&engine, c.radius, caps(c))?;
        let complex = sublevel_complex(&ball, c.latitude);
        let cc = chain_complex(&complex)?;
        let h = reduced_homology(&cc);
        json!({
            "source": "sublevel",
            "latitude": c.latitude,
            "cells_by_dim": complex.counts(),
            "reduced": h.to_json(),
            "connectivity": homological_connectivity(&h).to_json(),
        })
    };
    let extra = json!({"complex": a.complex.as_ref().map(|p| p.display().to_string()), "valley": a.valley});
    report["config_hash"] = json!(config_hash(&config_value("homology", c, &l, extra)));
    emit(&report, c.out.as_deref())?;
    Ok(true)
}

fn cmd_normal_form(c: &Common, word: &str) -> Outcome {
    let l = load(c)?;
    let engine = Engine::new(need(&l.model, "--model")?, need(&l.graph, "--graph")?)?;
    let g = engine.parse_element(word)?;
    let report = json!({
        "engine": engine.kind().to_string(),
        "normal_form": engine.format(&g),
        "word": engine.word_string(&g),
        "exponent": engine.exponent(&g),
    });
    emit(&report, c.out.as_deref())?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build(c) => cmd_build(c),
        Command::Verify(c) => cmd_verify(c),
        Command::Homology(a) => cmd_homology(a),
        Command::NormalForm { common, word } => cmd_normal_form(common, word),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
