//! `qtoric`: invariants and birational operations on quasitoric models.
//!
//! Every invocation writes one JSON document to standard output. Exit codes:
//! 0 success, 2 usage error, 3 unreadable or invalid model, 4 domain error.

mod render;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use quasitoric::charts::{self, ChartError, DEFAULT_TOLERANCE};
use quasitoric::{
    cohomology::CohomologyError, BatchReport, BigInt, BirationalError, LocalModelParams, ModelError, QuasitoricModel,
    Side, TransitionParams,
};
use serde_json::{json, Map, Value};

use render::{int, rational, table, vector, vectors};

#[derive(Parser, Debug)]
#[command(name = "qtoric", version, about = "Exact invariants and blowdowns of 4-dimensional quasitoric orbifolds")]
struct Cli {
    /// Also print aligned tables to standard error.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check primitivity, adjacency and positive omniorientation.
    Validate { model: PathBuf },
    /// Vertices with determinants, singularity types and SL flags.
    Info { model: PathBuf },
    /// Betti numbers of the underlying space or Chen-Ruan Betti numbers.
    #[command(group(ArgGroup::new("kind").required(true).args(["singular", "chen_ruan"])))]
    Cohomology {
        model: PathBuf,
        #[arg(long)]
        singular: bool,
        #[arg(long = "chen-ruan")]
        chen_ruan: bool,
    },
    /// Todd genus of a quasitoric manifold.
    ToddGenus { model: PathBuf },
    /// Delete an edge, contracting its sphere.
    Blowdown {
        model: PathBuf,
        #[arg(long)]
        edge: usize,
    },
    /// Insert an edge at a vertex.
    Blowup {
        model: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long, value_enum, default_value_t = SideArg::First, conflicts_with = "crepant")]
        side: SideArg,
        /// Pick whichever side gives a crepant blowup.
        #[arg(long)]
        crepant: bool,
    },
    /// Resolve singular vertices by repeated blowups.
    #[command(group(ArgGroup::new("target").required(true).args(["vertex", "all"])))]
    Resolve {
        model: PathBuf,
        #[arg(long)]
        vertex: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Compare Chen-Ruan Betti tables degree by degree.
    Mckay { a: PathBuf, b: PathBuf },
    /// Check the blowdown chart identities at random points.
    VerifyCharts {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0.1)]
        eps1: f64,
        #[arg(long, default_value_t = 0.5)]
        eps2: f64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SideArg {
    First,
    Second,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::First => Side::First,
            SideArg::Second => Side::Second,
        }
    }
}

/// A failed invocation: exit code plus the JSON error document.
#[derive(Debug)]
struct Failure {
    code: u8,
    payload: Value,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            payload: json!({"error": "Usage", "message": message.into()}),
        }
    }

    fn domain(payload: Value) -> Self {
        Self { code: 4, payload }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let payload = match e {
            ModelError::Parse(message) => json!({"error": "ParseError", "message": message}),
            ModelError::Validation(report) => json!({
                "error": "ValidationError",
                "failures": report.failures.iter().map(render::finding).collect::<Vec<_>>(),
            }),
        };
        Self { code: 3, payload }
    }
}

impl From<BirationalError> for Failure {
    fn from(e: BirationalError) -> Self {
        Self::domain(match e {
            BirationalError::NotAdmissible(reason) => json!({"error": "NotAdmissible", "reason": reason.as_str()}),
            BirationalError::TooFewEdges { edges } => json!({"error": "TooFewEdges", "edges": edges}),
            BirationalError::IndexOutOfRange { index, len } => {
                json!({"error": "IndexOutOfRange", "index": index, "len": len})
            }
            BirationalError::NotPositivelyOmnioriented => json!({"error": "NotPositivelyOmnioriented"}),
        })
    }
}

impl From<CohomologyError> for Failure {
    fn from(e: CohomologyError) -> Self {
        Self::domain(match e {
            CohomologyError::NotAManifold { vertex } => json!({"error": "NotAManifold", "vertex": vertex}),
            CohomologyError::GenericityFailure { direction, vertex } => {
                json!({"error": "GenericityFailure", "direction": direction, "vertex": vertex})
            }
        })
    }
}

impl From<ChartError> for Failure {
    fn from(e: ChartError) -> Self {
        match e {
            ChartError::InvalidParams(message) => Self::usage(message),
            ChartError::Domain(message) => Self::domain(json!({"error": "DomainError", "message": message})),
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    let result = if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map(|_| buf)
    } else {
        std::fs::read(path)
    };
    result.map_err(|e| Failure {
        code: 3,
        payload: json!({"error": "Io", "path": path.display().to_string(), "message": e.to_string()}),
    })
}

fn load(path: &Path) -> Result<QuasitoricModel, Failure> {
    Ok(QuasitoricModel::parse(&read_input(path)?)?)
}

fn model_value(model: &QuasitoricModel) -> Value {
    json!({"edges": vectors(model.edges())})
}

fn show_model(title: &str, model: &QuasitoricModel) {
    table(title, &["edge", "x", "y"], &render::edge_rows(model.edges()));
}

fn validate(path: &Path, pretty: bool) -> Result<Value, Failure> {
    let edges = quasitoric::model::parse_edges::<BigInt>(&read_input(path)?)?;
    let report = quasitoric::validate_edges(&edges);
    if pretty {
        let rows: Vec<_> = report.failures.iter().map(|f| vec![f.kind().to_string(), f.to_string()]).collect();
        table(
            &format!("valid: {}, positively omnioriented: {}", report.valid, report.positively_omnioriented),
            &["finding", "detail"],
            &rows,
        );
    }
    let value = render::validation(&report);
    if report.valid {
        Ok(value)
    } else {
        Err(Failure { code: 3, payload: value })
    }
}

fn info(path: &Path, pretty: bool) -> Result<Value, Failure> {
    let model = load(path)?;
    let mut rows = Vec::new();
    let vertices: Vec<Value> = model
        .vertices()
        .iter()
        .map(|v| {
            let ty = quasitoric::singularity_type(v);
            let sl = quasitoric::is_sl(v);
            rows.push(vec![
                v.index.to_string(),
                v.first.to_string(),
                v.second.to_string(),
                v.det.to_string(),
                if v.is_smooth() {
                    "smooth".to_string()
                } else {
                    format!("1/{}(1, {})", ty.order, ty.weight)
                },
                sl.to_string(),
            ]);
            json!({
                "index": v.index,
                "first": vector(&v.first),
                "second": vector(&v.second),
                "det": int(&v.det),
                "type": {"order": int(&ty.order), "weight": int(&ty.weight)},
                "sl": sl,
            })
        })
        .collect();
    let sl = vertices.iter().all(|v| v["sl"] == json!(true));
    if pretty {
        table("vertices", &["vertex", "first", "second", "det", "type", "sl"], &rows);
    }
    Ok(json!({
        "edges": model.len(),
        "positively_omnioriented": model.is_positively_omnioriented(),
        "manifold": model.is_manifold(),
        "sl": sl,
        "vertices": vertices,
    }))
}

fn cohomology(path: &Path, chen_ruan: bool, pretty: bool) -> Result<Value, Failure> {
    let model = load(path)?;
    let (kind, betti, total, rows) = if chen_ruan {
        let t = quasitoric::cr_betti(&model);
        let rows = t.entries.iter().map(|(d, n)| vec![rational(d), n.to_string()]).collect::<Vec<_>>();
        ("chen-ruan", render::cr_betti(&t), t.total(), rows)
    } else {
        let t = quasitoric::singular_betti(&model);
        let rows = t.entries.iter().map(|(d, n)| vec![d.to_string(), n.to_string()]).collect::<Vec<_>>();
        ("singular", render::betti(&t), t.total(), rows)
    };
    if pretty {
        table(&format!("{kind} Betti numbers, total {total}"), &["degree", "dim"], &rows);
    }
    Ok(json!({"kind": kind, "betti": betti, "total": total}))
}

fn todd_genus(path: &Path, pretty: bool) -> Result<Value, Failure> {
    let genus = quasitoric::todd_genus(&load(path)?)?;
    if pretty {
        eprintln!("Todd genus: {genus}");
    }
    Ok(json!({"todd_genus": genus}))
}

fn blowdown(path: &Path, edge: usize, pretty: bool) -> Result<Value, Failure> {
    let model = load(path)?;
    let site = quasitoric::blowdown_site(&model, edge)?;
    let out = quasitoric::blowdown(&model, &site);
    if pretty {
        eprintln!(
            "edge {edge}: k = {}, m = {}, smooth side {}, crepant: {}",
            site.k,
            site.m,
            site.smooth_side,
            site.is_crepant()
        );
        show_model("result", &out);
    }
    Ok(model_value(&out))
}

fn blowup(path: &Path, vertex: usize, side: SideArg, crepant: bool, pretty: bool) -> Result<Value, Failure> {
    let model = load(path)?;
    let b = if crepant {
        quasitoric::crepant_blowup(&model, vertex)?
            .ok_or_else(|| Failure::domain(json!({"error": "NoCrepantBlowup", "vertex": vertex})))?
    } else {
        quasitoric::blowup(&model, vertex, side.into())?
    };
    if pretty {
        eprintln!(
            "inserted {} at edge {}: k = {}, m = {}, crepant: {}",
            b.inserted,
            b.edge_index,
            b.k,
            b.m,
            b.is_crepant()
        );
        show_model("result", &b.model);
    }
    Ok(model_value(&b.model))
}

fn resolve(path: &Path, vertex: Option<usize>, pretty: bool) -> Result<Value, Failure> {
    let model = load(path)?;
    let r = match vertex {
        Some(v) => quasitoric::resolve_vertex(&model, v)?,
        None => quasitoric::resolve_all(&model)?,
    };
    let steps: Vec<Value> = r
        .steps
        .iter()
        .map(|(k, m)| json!({"k": int(k), "m": int(m), "crepant": k.clone() + 1 == *m}))
        .collect();
    if pretty {
        let rows: Vec<_> = r
            .inserted
            .iter()
            .zip(&r.steps)
            .enumerate()
            .map(|(i, (v, (k, m)))| vec![i.to_string(), v.to_string(), k.to_string(), m.to_string()])
            .collect();
        table("insertions", &["step", "vector", "k", "m"], &rows);
        show_model("result", &r.model);
    }
    Ok(json!({
        "edges": vectors(r.model.edges()),
        "inserted": vectors(&r.inserted),
        "steps": steps,
    }))
}

fn mckay(a: &Path, b: &Path, pretty: bool) -> Result<Value, Failure> {
    let report = quasitoric::mckay_check(&load(a)?, &load(b)?);
    if pretty {
        let mut degrees: Vec<_> = report.table_x.entries.keys().chain(report.table_y.entries.keys()).collect();
        degrees.sort();
        degrees.dedup();
        let rows: Vec<_> = degrees
            .into_iter()
            .map(|d| {
                vec![
                    rational(d),
                    report.table_x.get(d).to_string(),
                    report.table_y.get(d).to_string(),
                ]
            })
            .collect();
        table(&format!("equal: {}", report.equal), &["degree", "A", "B"], &rows);
    }
    Ok(json!({
        "equal": report.equal,
        "total_diff": report.total_diff,
        "a": render::cr_betti(&report.table_x),
        "b": render::cr_betti(&report.table_y),
        "diff": render::diff(&report.degreewise_diff),
    }))
}

fn batch_value(report: &BatchReport) -> Value {
    let identities: Map<String, Value> = report
        .max_residuals
        .iter()
        .map(|r| (r.identity.clone(), json!(r.residual)))
        .collect();
    json!({
        "points": report.points,
        "max_residual": report.max(),
        "identities": identities,
    })
}

#[allow(clippy::too_many_arguments)]
fn verify_charts(
    k: u32,
    m: u32,
    s: f64,
    t: f64,
    eps1: f64,
    eps2: f64,
    points: usize,
    tolerance: f64,
    seed: u64,
    pretty: bool,
) -> Result<Value, Failure> {
    let params = LocalModelParams::new(k, m, s, t, eps1, eps2)?;
    let transition = TransitionParams::new(0, 1, -i64::from(k), i64::from(m), s, t)?;
    let blowdown = charts::verify_blowdown_batch(&params, points, seed)?;
    let trans = charts::verify_transition_batch(&transition, points, seed)?;
    let passed = blowdown.passes(tolerance) && trans.passes(tolerance);
    let exponent = charts::discrepancy_exponent(&BigInt::from(k), &BigInt::from(m));
    if pretty {
        let rows: Vec<_> = blowdown
            .max_residuals
            .iter()
            .chain(&trans.max_residuals)
            .map(|r| vec![r.identity.clone(), format!("{:.3e}", r.residual)])
            .collect();
        table(
            &format!("k = {k}, m = {m}, {} points, tolerance {tolerance:e}", blowdown.points),
            &["identity", "max residual"],
            &rows,
        );
    }
    let value = json!({
        "k": k,
        "m": m,
        "s": s,
        "t": t,
        "eps1": eps1,
        "eps2": eps2,
        "seed": seed,
        "points": points,
        "tolerance": tolerance,
        "passed": passed,
        "discrepancy_exponent": rational(&exponent),
        "blowdown": batch_value(&blowdown),
        "transition": batch_value(&trans),
    });
    if passed {
        Ok(value)
    } else {
        Err(Failure::domain(value))
    }
}

fn run(cli: Cli) -> Result<Value, Failure> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Validate { model } => validate(&model, pretty),
        Command::Info { model } => info(&model, pretty),
        Command::Cohomology { model, chen_ruan, .. } => cohomology(&model, chen_ruan, pretty),
        Command::ToddGenus { model } => todd_genus(&model, pretty),
        Command::Blowdown { model, edge } => blowdown(&model, edge, pretty),
        Command::Blowup {
            model,
            vertex,
            side,
            crepant,
        } => blowup(&model, vertex, side, crepant, pretty),
        Command::Resolve { model, vertex, .. } => resolve(&model, vertex, pretty),
        Command::Mckay { a, b } => mckay(&a, &b, pretty),
        Command::VerifyCharts {
            k,
            m,
            s,
            t,
            eps1,
            eps2,
            points,
            tolerance,
        } => verify_charts(k, m, s, t, eps1, eps2, points, tolerance, cli.seed, pretty),
    }
}

fn main() -> ExitCode {
    let result = match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{}", e.render());
            Err(Failure::usage(e.kind().to_string()))
        }
    };
    match result {
        Ok(value) => {
            println!("{value}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            println!("{}", f.payload);
            ExitCode::from(f.code)
        }
    }
}
