use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use sepgraph::condition_n::{check_condition_n, FailureWitness, LocalOrientation, LocalOutcome};
use sepgraph::decomposition::{decompose, stratify_branch_free};
use sepgraph::dynamics::{
    act, enumerate_patterns, folner_ratio, folner_set, stabilizer_witness, Configuration, FolnerOptions,
    LazyConfiguration, Pattern,
};
use sepgraph::monoid::{presentation, Counterexample, MonoidPresentation, Property};
use sepgraph::orientation::{classify_edges, synthesize_orientation, verify_orientation, Orientation, OrientationKind};
use sepgraph::{AnalysisError, Path, SeparatedGraph, VertexSet, Word};

#[derive(Parser)]
#[command(name = "sepgraph", version, about = "Analyses of finitely separated graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph file and report its shape.
    Validate { file: PathBuf },
    /// Per-vertex Condition (N) table.
    Analyze { file: PathBuf },
    /// Decide Condition (N); exits 1 when it fails.
    CheckN {
        file: PathBuf,
        /// Include a verified failure witness.
        #[arg(long)]
        witness: bool,
    },
    /// Branching, branch-free and acyclic parts, strata and edge types.
    Decompose { file: PathBuf },
    /// Verify or synthesize an orientation.
    Orient(OrientArgs),
    /// Finite-depth patterns of the partial action.
    Dynamics(DynamicsArgs),
    /// Cancellation properties of the graph monoid.
    Monoid {
        file: PathBuf,
        /// unperforation, pseudo-cancellation, separation or almost-unperforation; all four if omitted.
        #[arg(long)]
        check: Option<String>,
        #[arg(long, default_value_t = 12)]
        bound: u32,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["verify", "synthesize"])))]
struct OrientArgs {
    file: PathBuf,
    /// Orientation file with `orient <edge> <+1|-1>` lines.
    #[arg(long)]
    verify: Option<PathBuf>,
    #[arg(long)]
    synthesize: bool,
}

#[derive(Args)]
struct DynamicsArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Base vertex; the first declared vertex if omitted.
    #[arg(long)]
    at: Option<String>,
    /// Path literal to act by.
    #[arg(long)]
    act: Option<String>,
    /// Size of the Følner set to build; needs --orientation.
    #[arg(long, requires = "orientation")]
    folner: Option<usize>,
    #[arg(long)]
    orientation: Option<PathBuf>,
    #[arg(long)]
    stabilizer_witness: bool,
}

#[derive(Serialize)]
struct Digest {
    vertices: usize,
    edges: usize,
    groups: usize,
}

#[derive(Serialize)]
struct Report {
    command: String,
    graph: Digest,
    payload: Value,
    version: &'static str,
}

enum Failure {
    /// Bad input: exit 2.
    Input(String),
    /// The analysis could not run on this graph: exit 2 as well, with a different prefix.
    Analysis(AnalysisError),
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Graph(_) | AnalysisError::NotAdmissible | AnalysisError::MissingSign(_) => {
                Failure::Input(e.to_string())
            }
            e => Failure::Analysis(e),
        }
    }
}

/// Payload plus whether the result counts as "negative with witness".
type Outcome = Result<(Value, bool), Failure>;

fn load(file: &PathBuf) -> Result<SeparatedGraph, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    sepgraph::format::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))
}

fn names(g: &SeparatedGraph, set: &VertexSet) -> Vec<String> {
    g.vertex_names_of(set)
}

fn local(g: &SeparatedGraph, o: &LocalOutcome) -> Value {
    match o {
        LocalOutcome::Oriented(LocalOrientation::Type1 { group, .. }) => {
            json!({"type": "1", "group": g.group_name(*group)})
        }
        LocalOutcome::Oriented(LocalOrientation::Type2 { edge, .. }) => {
            json!({"type": "2", "edge": g.edge_name(*edge)})
        }
        LocalOutcome::Fails(_) => json!({"type": "none"}),
    }
}

fn witness(g: &SeparatedGraph, w: &FailureWitness) -> Value {
    json!({
        "vertex": g.vertex_name(w.vertex),
        "alpha": w.alpha.literal(g),
        "beta": w.beta.literal(g),
        "gamma": w.gamma.literal(g),
        "delta": w.delta.literal(g),
        "epsilon": w.epsilon.literal(g),
        "verified": w.verify(g).is_ok(),
    })
}

fn validate(g: &SeparatedGraph) -> Outcome {
    let groups: Map<String, Value> = g
        .group_ids()
        .map(|x| {
            let members: Vec<&str> = g.group(x).members.iter().map(|&e| g.edge_name(e)).collect();
            (g.group_name(x), json!(members))
        })
        .collect();
    Ok((json!({"verdict": true, "groups": groups, "isolated": names(g, &g.isolated_vertices())}), false))
}

fn analyze(g: &SeparatedGraph) -> Outcome {
    let r = check_condition_n(g)?;
    let rows: Vec<Value> = r
        .vertices
        .iter()
        .map(|v| {
            json!({
                "vertex": g.vertex_name(v.vertex),
                "returns": v.return_count,
                "branching": v.branching,
                "local_orientation": v.outcome.as_ref().map(|o| local(g, o)),
            })
        })
        .collect();
    let branching: Vec<&str> = r.branching().map(|v| g.vertex_name(v.vertex)).collect();
    Ok((json!({"verdict": r.verdict, "branching": branching, "vertices": rows}), false))
}

fn check_n(g: &SeparatedGraph, with_witness: bool) -> Outcome {
    let r = check_condition_n(g)?;
    let branching: Vec<&str> = r.branching().map(|v| g.vertex_name(v.vertex)).collect();
    let mut p = json!({"verdict": r.verdict, "branching": branching});
    if with_witness {
        p["witness"] = r.witnesses().next().map_or(Value::Null, |w| witness(g, w));
    }
    Ok((p, !r.verdict))
}

fn decomposition(g: &SeparatedGraph) -> Outcome {
    let d = decompose(g)?;
    let br = d.branching_subgraph(g);
    let edge_types = match classify_edges(&br) {
        Ok(t) => json!(t.iter().map(|(&e, t)| (br.edge_name(e).to_string(), json!(t.label()))).collect::<Map<_, _>>()),
        Err(e) => json!({"error": e.to_string()}),
    };
    let bf = d.branch_free_subgraph(g);
    let strata: Vec<Vec<String>> = stratify_branch_free(&bf)?.strata.iter().map(|s| names(&bf, s)).collect();
    let critical: Vec<&str> = d.critical_edges.iter().map(|&e| g.edge_name(e)).collect();
    Ok((
        json!({
            "branching": names(g, &d.branching),
            "subgraphs": {
                "branching": names(g, &d.branching_part),
                "branch_free": names(g, &d.branch_free),
                "acyclic": names(g, &d.acyclic),
            },
            "weakly_branching": names(g, &d.weakly_branching),
            "critical_edges": critical,
            "strata": strata,
            "edge_types": edge_types,
        }),
        false,
    ))
}

fn orientation_json(g: &SeparatedGraph, o: &Orientation) -> Value {
    g.edge_ids().map(|e| (g.edge_name(e).to_string(), json!(o.sign(e)))).collect::<Map<_, _>>().into()
}

fn orient(g: &SeparatedGraph, args: &OrientArgs) -> Outcome {
    if let Some(file) = &args.verify {
        let text = std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
        let o = Orientation::parse(g, &text)?;
        let check = verify_orientation(g, &o);
        let cases: Map<String, Value> = check
            .vertices
            .iter()
            .map(|(v, c)| (g.vertex_name(*v).to_string(), json!(c)))
            .collect();
        let invalid = check.kind == OrientationKind::Invalid;
        return Ok((
            json!({"verdict": check.kind.name(), "orientation": orientation_json(g, &o), "vertices": cases}),
            invalid,
        ));
    }
    // Synthesis runs on the branching subgraph, which is the input itself
    // whenever every vertex hooks a branching vertex.
    let d = decompose(g)?;
    let br = d.branching_subgraph(g);
    match synthesize_orientation(&br) {
        Ok(o) => Ok((
            json!({
                "verdict": verify_orientation(&br, &o).kind.name(),
                "subgraphs": {"branching": names(g, &d.branching_part)},
                "orientation": orientation_json(&br, &o),
                "text": o.to_text(&br),
            }),
            false,
        )),
        Err(AnalysisError::ConditionNFails(_)) => {
            let r = check_condition_n(g)?;
            let w = r.witnesses().next().map_or(Value::Null, |w| witness(g, w));
            Ok((json!({"verdict": "invalid", "orientation": null, "witness": w}), true))
        }
        Err(e) => Err(e.into()),
    }
}

fn parse_path(g: &SeparatedGraph, text: &str) -> Result<Path, Failure> {
    let word = Word::parse(g, text).map_err(|e| Failure::Input(format!("path `{text}`: {e}")))?;
    Path::new(g, word).map_err(|e| Failure::Input(format!("path `{text}`: {e}")))
}

fn dynamics(g: &SeparatedGraph, args: &DynamicsArgs) -> Outcome {
    let base = match &args.at {
        Some(name) => g.vertex(name).ok_or_else(|| Failure::Input(format!("unknown vertex `{name}`")))?,
        None => g.vertices().next().ok_or_else(|| Failure::Input("graph has no vertices".into()))?,
    };
    let act_by = args.act.as_deref().map(|t| parse_path(g, t)).transpose()?;
    if let Some(p) = &act_by {
        if p.source() != base && !p.is_trivial() {
            return Err(Failure::Input(format!(
                "path {} starts at {}, not at {}",
                p.literal(g),
                g.vertex_name(p.source()),
                g.vertex_name(base)
            )));
        }
    }
    let mut out = Map::new();
    let mut negative = false;
    if args.stabilizer_witness {
        let r = check_condition_n(g)?;
        match r.witnesses().next() {
            Some(fw) => {
                let sw = stabilizer_witness(g, fw, args.depth)?;
                negative = !sw.verified();
                let mut w = witness(g, fw);
                w["pattern_size"] = json!(sw.pattern.len());
                w["valid"] = json!(sw.valid);
                w["fixed"] = json!(sw.fixed);
                w["free"] = json!(sw.free);
                w["problems"] = json!(sw.problems);
                out.insert("verdict".into(), json!(sw.verified()));
                out.insert("witness".into(), w);
                out.insert("patterns".into(), json!([sw.pattern.dump(g)]));
            }
            None => {
                out.insert("verdict".into(), json!(true));
                out.insert("witness".into(), Value::Null);
            }
        }
        return Ok((Value::Object(out), negative));
    }
    let seed_words: Vec<Word> = act_by.iter().map(|p| p.word().clone()).collect();
    let xi = LazyConfiguration::containing(g, base, 0, &seed_words)?;
    if let Some(n) = args.folner {
        let file = args.orientation.as_ref().expect("clap enforces --orientation");
        let text = std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
        let o = Orientation::parse(g, &text)?;
        let opts = FolnerOptions::default();
        let f = folner_set(g, &o, &xi, n, opts)?;
        let probes: Vec<Word> = match &act_by {
            Some(p) => vec![p.word().clone()],
            None => Pattern::truncate(g, &xi, 1)?.members().iter().filter(|w| w.len() == 1).cloned().collect(),
        };
        let mut ratios = Map::new();
        for w in &probes {
            let r = folner_ratio(g, &o, &xi, n, w, opts)?;
            ratios.insert(
                w.literal(g),
                json!({"defect": r.defect, "size": r.size, "ratio": r.ratio, "bound": w.len() as f64 / n as f64}),
            );
        }
        let members: Vec<String> = f.members.iter().map(|w| w.literal(g)).collect();
        out.insert("folner".into(), json!({"n": f.n, "members": members, "ratios": ratios}));
        return Ok((Value::Object(out), false));
    }
    match &act_by {
        Some(p) => {
            let pat = Pattern::truncate(g, &xi, args.depth)?;
            let moved = act(g, &pat, p.word())?;
            out.insert("base".into(), json!(g.vertex_name(xi.base())));
            out.insert("patterns".into(), json!([pat.dump(g), moved.dump(g)]));
        }
        None => {
            let pats = enumerate_patterns(g, base, args.depth)?;
            out.insert("count".into(), json!(pats.len()));
            out.insert("patterns".into(), json!(pats.iter().map(|p| p.dump(g)).collect::<Vec<_>>()));
        }
    }
    Ok((Value::Object(out), negative))
}

fn counterexample(p: &MonoidPresentation, c: &Counterexample) -> Value {
    let l = |x| p.literal(x);
    match c {
        Counterexample::Unperforation { n, a, b } | Counterexample::AlmostUnperforation { n, a, b } => {
            json!({"n": n, "a": l(a), "b": l(b)})
        }
        Counterexample::PseudoCancellation { a, b, c } => json!({"a": l(a), "b": l(b), "c": l(c)}),
        Counterexample::Separation { a, b } => json!({"a": l(a), "b": l(b)}),
    }
}

fn monoid(g: &SeparatedGraph, check: Option<&str>, bound: u32) -> Outcome {
    let props = match check {
        Some(name) => vec![Property::from_name(name).ok_or_else(|| Failure::Input(format!("unknown property `{name}`")))?],
        None => Property::ALL.to_vec(),
    };
    let full = presentation(g);
    let pres = full.simplified();
    let mut checks = Map::new();
    for prop in props {
        let r = prop.check(&pres, bound);
        checks.insert(
            prop.name().into(),
            json!({
                "verdict": r.verdict.name(),
                "counterexample": r.counterexample.as_ref().map(|c| counterexample(&pres, c)),
            }),
        );
    }
    Ok((
        json!({"monoid": {
            "presentation": full.to_string(),
            "simplified": pres.to_string(),
            "bound": bound,
            "checks": checks,
        }}),
        false,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, file) = match &cli.command {
        Command::Validate { file } => ("validate", file),
        Command::Analyze { file } => ("analyze", file),
        Command::CheckN { file, .. } => ("check-n", file),
        Command::Decompose { file } => ("decompose", file),
        Command::Orient(a) => ("orient", &a.file),
        Command::Dynamics(a) => ("dynamics", &a.file),
        Command::Monoid { file, .. } => ("monoid", file),
    };
    let result = load(file).and_then(|g| {
        let outcome = match &cli.command {
            Command::Validate { .. } => validate(&g),
            Command::Analyze { .. } => analyze(&g),
            Command::CheckN { witness, .. } => check_n(&g, *witness),
            Command::Decompose { .. } => decomposition(&g),
            Command::Orient(a) => orient(&g, a),
            Command::Dynamics(a) => dynamics(&g, a),
            Command::Monoid { check, bound, .. } => monoid(&g, check.as_deref(), *bound),
        }?;
        Ok((g, outcome))
    });
    match result {
        Ok((g, (payload, negative))) => {
            let report = Report {
                command: name.into(),
                graph: Digest { vertices: g.vertex_count(), edges: g.edge_count(), groups: g.group_count() },
                payload,
                version: env!("CARGO_PKG_VERSION"),
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            // A closed pipe (e.g. `| head`) is not an error worth a panic.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(if negative { 1 } else { 0 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Analysis(e)) => {
            eprintln!("error: analysis not applicable: {e}");
            ExitCode::from(2)
        }
    }
}
