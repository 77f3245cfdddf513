//! Command-line front end for `graph-hessian`.
//!
//! Every command produces a JSON report with sorted keys:
//!
//! ```text
//! { "command", "parameters", "results", "checks", "exit_code" }
//! ```
//!
//! `checks` objects (at the top level and inside sweep points) hold the
//! verification flags; the exit code is 1 exactly when one of them is
//! false, 2 on usage or input errors, and 0 otherwise. Large integers and
//! rationals are written as decimal strings.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_hessian::block_spectra::{closed_form_kmn, closed_form_kn, Tolerance};
use graph_hessian::graphs::{
    build_graph, enumerate_spanning_trees_capped, parse_edge_list, tree_count_cofactor,
    trees_containing, GraphSpec, MultiGraph, DEFAULT_EDGE_CAP,
};
use graph_hessian::kirchhoff::{all_ones, hessian_at_ones, kirchhoff_polynomial_capped};
use graph_hessian::lefschetz::{slp_check_poly, BasisOrder, SlpReport};
use graph_hessian::linalg::{char_poly, determinant, verify_spectrum, Inertia, Spectrum};
use graph_hessian::verify::{sweep_blocks, sweep_kmn, sweep_kn, BlockBounds, KmnPoint, KnPoint};
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

/// Environment variable overriding the spanning-tree enumeration cap.
pub const EDGE_CAP_VAR: &str = "KIRCHHOFF_EDGE_CAP";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid graph descriptor `{0}`: expected Kn:<n>, Kmn:<m>,<n> or file:<path>")]
    Descriptor(String),
    #[error("invalid list `{text}`: {message}")]
    List { text: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid {EDGE_CAP_VAR} value `{0}`")]
    EdgeCap(String),
    #[error(transparent)]
    Core(#[from] graph_hessian::Error),
}

/// `Kn:<n>`, `Kmn:<m>,<n>` or `file:<path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphDescriptor {
    Complete(usize),
    CompleteBipartite(usize, usize),
    File(PathBuf),
}

impl FromStr for GraphDescriptor {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CliError::Descriptor(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match kind {
            "Kn" => {
                let n = num(rest)?;
                if n == 0 {
                    return Err(bad());
                }
                Ok(Self::Complete(n))
            }
            "Kmn" => {
                let (m, n) = rest.split_once(',').ok_or_else(bad)?;
                let (m, n) = (num(m)?, num(n)?);
                if m == 0 || n == 0 {
                    return Err(bad());
                }
                Ok(Self::CompleteBipartite(m, n))
            }
            "file" if !rest.is_empty() => Ok(Self::File(PathBuf::from(rest))),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GraphDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Complete(n) => write!(f, "Kn:{n}"),
            Self::CompleteBipartite(m, n) => write!(f, "Kmn:{m},{n}"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl GraphDescriptor {
    pub fn load(&self) -> Result<MultiGraph, CliError> {
        match self {
            Self::Complete(n) => Ok(build_graph(&GraphSpec::Complete(*n))?),
            Self::CompleteBipartite(m, n) => {
                Ok(build_graph(&GraphSpec::CompleteBipartite(*m, *n))?)
            }
            Self::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(parse_edge_list(&text)?)
            }
        }
    }
}

fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse().map_err(|_| CliError::List {
                text: text.to_string(),
                message: format!("cannot parse `{t}`"),
            })
        })
        .collect()
}

/// Comma-separated edge ids.
pub fn parse_edge_ids(text: &str) -> Result<Vec<usize>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    parse_list(text)
}

/// Comma-separated rationals such as `1,-2,3/4`.
pub fn parse_rationals(text: &str) -> Result<Vec<BigRational>, CliError> {
    let values: Vec<BigRational> = parse_list(text)?;
    Ok(values)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "graph-hessian",
    version,
    about = "Exact Kirchhoff polynomials, graph Hessians and Lefschetz checks"
)]
pub struct Cli {
    /// Output format; tables render the same payload as the JSON.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spanning-tree counts.
    #[command(subcommand)]
    Trees(TreesCommand),
    /// The Hessian of the Kirchhoff polynomial at the all-ones point.
    Hessian(HessianArgs),
    /// Sweeps comparing closed forms and block reductions with exact results.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Strong Lefschetz check via higher Hessians.
    Slp(SlpArgs),
}

#[derive(Debug, Subcommand)]
pub enum TreesCommand {
    /// Tree count from a Laplacian cofactor.
    Count {
        #[arg(long)]
        graph: GraphDescriptor,
        /// Cross-check against explicit enumeration.
        #[arg(long)]
        enumerate: bool,
    },
    /// Trees containing every listed edge, via contraction.
    Containing {
        #[arg(long)]
        graph: GraphDescriptor,
        /// Comma-separated edge ids.
        #[arg(long)]
        edges: String,
    },
}

#[derive(Debug, Args)]
pub struct HessianArgs {
    #[arg(long)]
    pub graph: GraphDescriptor,
    /// Include the matrix itself (the default when no other output is asked for).
    #[arg(long)]
    pub at_ones: bool,
    #[arg(long)]
    pub det: bool,
    /// Exact spectrum with inertia, verified against the matrix.
    #[arg(long)]
    pub spectrum: bool,
    /// Include the Kirchhoff polynomial, one `coeff: e<id> ...` line per term.
    #[arg(long)]
    pub dump_poly: bool,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Complete graphs K_n.
    Kn {
        #[arg(long, default_value_t = 3)]
        from: usize,
        #[arg(long, default_value_t = 8)]
        to: usize,
    },
    /// Complete bipartite graphs K_{m,n} with 3 <= m + n <= max-sum.
    Kmn {
        #[arg(long, default_value_t = 9)]
        max_sum: usize,
    },
    /// Randomized block-reduction identities.
    Blocks {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest circulant block (cyclic) and block size (structured);
        /// mixed specs use corners up to half of it. Grids have at most 4
        /// block rows.
        #[arg(long, default_value_t = 6)]
        size_cap: usize,
    },
}

#[derive(Debug, Args)]
pub struct SlpArgs {
    #[arg(long)]
    pub graph: GraphDescriptor,
    /// Coefficients of L, one per edge in id order (default: all ones).
    #[arg(long = "L")]
    pub l: Option<String>,
}

/// Captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

struct Report {
    command: &'static str,
    parameters: Value,
    results: Value,
    checks: Map<String, Value>,
}

fn rat(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

fn spectrum_json(s: &Spectrum) -> Value {
    Value::Array(
        s.pairs()
            .iter()
            .map(|(v, m)| json!({ "value": v.to_string(), "multiplicity": m }))
            .collect(),
    )
}

fn inertia_json(i: &Inertia) -> Value {
    json!({ "positive": i.positive, "negative": i.negative, "zero": i.zero })
}

fn edge_cap() -> Result<usize, CliError> {
    match std::env::var(EDGE_CAP_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::EdgeCap(v)),
        Err(_) => Ok(DEFAULT_EDGE_CAP),
    }
}

fn edges_json(g: &MultiGraph) -> Value {
    Value::Array(g.edges().iter().map(|e| json!([e.u, e.v])).collect())
}

fn trees(cmd: &TreesCommand) -> Result<Report, CliError> {
    match cmd {
        TreesCommand::Count { graph, enumerate } => {
            let g = graph.load()?;
            let count = tree_count_cofactor(&g);
            let mut results = json!({ "count": count.to_string() });
            let mut checks = Map::new();
            if *enumerate {
                let trees = enumerate_spanning_trees_capped(&g, edge_cap()?)?;
                results["enumerated"] = json!(trees.len().to_string());
                checks.insert(
                    "enumeration_matches_cofactor".into(),
                    json!(num_bigint::BigInt::from(trees.len()) == count),
                );
            }
            Ok(Report {
                command: "trees count",
                parameters: json!({ "graph": graph.to_string(), "enumerate": enumerate }),
                results,
                checks,
            })
        }
        TreesCommand::Containing { graph, edges } => {
            let g = graph.load()?;
            let edges = parse_edge_ids(edges)?;
            let count = trees_containing(&g, &edges)?;
            Ok(Report {
                command: "trees containing",
                parameters: json!({ "graph": graph.to_string(), "edges": edges }),
                results: json!({ "count": count.to_string() }),
                checks: Map::new(),
            })
        }
    }
}

fn hessian(args: &HessianArgs) -> Result<Report, CliError> {
    let g = args.graph.load()?;
    let h = hessian_at_ones(&g)?;
    let mut results = Map::new();
    let mut checks = Map::new();
    results.insert("edges".into(), edges_json(&g));
    let show_matrix = args.at_ones || !(args.det || args.spectrum || args.dump_poly);
    if show_matrix {
        let rows = (0..h.rows())
            .map(|i| Value::Array(h.row(i).iter().map(rat).collect()))
            .collect();
        results.insert("matrix".into(), Value::Array(rows));
    }
    if args.det {
        results.insert("det".into(), rat(&determinant(&h)?));
    }
    if args.spectrum {
        let chi = char_poly(&h)?;
        let (roots, residual) = chi.rational_roots();
        let spectrum = Spectrum::new(roots);
        let split = residual.degree() == Some(0);
        let mut s = Map::new();
        s.insert("char_poly".into(), json!(chi.to_string()));
        s.insert("eigenvalues".into(), spectrum_json(&spectrum));
        s.insert(
            "residual".into(),
            if split {
                Value::Null
            } else {
                json!(residual.to_string())
            },
        );
        if split {
            let check = verify_spectrum(&h, &spectrum)?;
            checks.insert(
                "spectrum_char_poly_match".into(),
                json!(check.char_poly_match),
            );
            checks.insert(
                "spectrum_diagonalizable".into(),
                json!(check.diagonalizable),
            );
            if let Some(i) = check.inertia {
                s.insert("inertia".into(), inertia_json(&i));
                s.insert("lorentzian".into(), json!(i.is_lorentzian()));
            }
        }
        let closed = match &args.graph {
            GraphDescriptor::Complete(n) if *n >= 3 => Some(closed_form_kn(*n)?.spectrum),
            GraphDescriptor::CompleteBipartite(m, n) if m + n >= 3 => {
                Some(closed_form_kmn(*m, *n)?.spectrum)
            }
            _ => None,
        };
        if let Some(closed) = closed {
            checks.insert(
                "closed_form_match".into(),
                json!(split && closed == spectrum),
            );
        }
        results.insert("spectrum".into(), Value::Object(s));
    }
    if args.dump_poly {
        let f = kirchhoff_polynomial_capped(&g, edge_cap()?)?;
        results.insert("polynomial".into(), json!(f.dump()));
    }
    Ok(Report {
        command: "hessian",
        parameters: json!({
            "graph": args.graph.to_string(),
            "at_ones": args.at_ones,
            "det": args.det,
            "spectrum": args.spectrum,
            "dump_poly": args.dump_poly,
        }),
        results: Value::Object(results),
        checks,
    })
}

fn kn_point_json(p: &KnPoint) -> Value {
    json!({
        "n": p.closed.n,
        "spectrum": spectrum_json(&p.closed.spectrum),
        "formula_det": rat(&p.closed.formula_det),
        "product_det": rat(&p.closed.product_det),
        "computed_det": rat(&p.computed_det),
        "inertia": p.spectrum.inertia.as_ref().map(inertia_json),
        "rank_one": p.rank_checks.iter().map(|c| json!({ "k": c.k, "rank": c.rank, "restricted": c.restricted })).collect::<Vec<_>>(),
        "checks": {
            "char_poly_match": p.spectrum.char_poly_match,
            "diagonalizable": p.spectrum.diagonalizable,
            "det_matches_formula": p.det_matches_formula,
            "formula_matches_product": p.closed.agrees(),
            "lorentzian": p.inertia_lorentzian,
            "orbit_blocks_match": p.orbit_blocks_match,
            "rank_one": p.rank_one_holds(),
        },
    })
}

fn kmn_point_json(p: &KmnPoint) -> Value {
    json!({
        "m": p.closed.m,
        "n": p.closed.n,
        "spectrum": spectrum_json(&p.closed.spectrum),
        "paper_det": rat(&p.closed.formula_det),
        "product_det": rat(&p.closed.product_det),
        "computed_det": rat(&p.computed_det),
        "agrees": p.formula_agrees(),
        "inertia": p.spectrum.inertia.as_ref().map(inertia_json),
        "checks": {
            "char_poly_match": p.spectrum.char_poly_match,
            "diagonalizable": p.spectrum.diagonalizable,
            "lorentzian": p.inertia_lorentzian,
            "product_matches_computed": p.product_matches_computed(),
        },
    })
}

fn verify(cmd: &VerifyCommand) -> Result<Report, CliError> {
    match *cmd {
        VerifyCommand::Kn { from, to } => {
            let points = sweep_kn(from, to)?;
            let mut checks = Map::new();
            checks.insert(
                "all_points".into(),
                json!(points.iter().all(KnPoint::passed)),
            );
            Ok(Report {
                command: "verify kn",
                parameters: json!({ "from": from, "to": to }),
                results: json!({ "points": points.iter().map(kn_point_json).collect::<Vec<_>>() }),
                checks,
            })
        }
        VerifyCommand::Kmn { max_sum } => {
            let points = sweep_kmn(max_sum)?;
            let disagreements: Vec<Value> = points
                .iter()
                .filter(|p| !p.formula_agrees())
                .map(|p| json!([p.closed.m, p.closed.n]))
                .collect();
            let mut checks = Map::new();
            checks.insert(
                "all_points".into(),
                json!(points.iter().all(KmnPoint::passed)),
            );
            Ok(Report {
                command: "verify kmn",
                parameters: json!({ "max_sum": max_sum }),
                results: json!({
                    "points": points.iter().map(kmn_point_json).collect::<Vec<_>>(),
                    "det_formula_disagreements": disagreements,
                }),
                checks,
            })
        }
        VerifyCommand::Blocks {
            trials,
            seed,
            size_cap,
        } => {
            let bounds = BlockBounds {
                size_cap,
                ..BlockBounds::default()
            };
            let tol = Tolerance::default();
            let sweep = sweep_blocks(trials, seed, bounds, tol)?;
            let summary = |checks: &[graph_hessian::block_spectra::IdentityCheck]| {
                json!({
                    "trials": checks.len(),
                    "failed_trials": checks.iter().enumerate().filter(|(_, c)| !c.passed).map(|(i, _)| i).collect::<Vec<_>>(),
                    "max_relative_error": checks.iter().map(|c| c.max_relative_error).fold(0.0, f64::max),
                    "max_absolute_error_at_zero": checks.iter().map(|c| c.max_absolute_error_at_zero).fold(0.0, f64::max),
                })
            };
            let mut checks = Map::new();
            checks.insert("cyclic_identity".into(), json!(sweep.cyclic_passed()));
            checks.insert("mixed_identity".into(), json!(sweep.mixed_passed()));
            checks.insert(
                "structured_identity".into(),
                json!(sweep.structured_passed()),
            );
            Ok(Report {
                command: "verify blocks",
                parameters: json!({
                    "trials": trials,
                    "seed": seed,
                    "size_cap": size_cap,
                    "max_block_rows": bounds.max_l,
                    "tolerance": { "relative": tol.relative, "absolute": tol.absolute },
                }),
                results: json!({
                    "cyclic": summary(&sweep.cyclic),
                    "mixed": summary(&sweep.mixed),
                    "structured": {
                        "trials": sweep.structured.len(),
                        "failed_trials": sweep.structured.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect::<Vec<_>>(),
                    },
                }),
                checks,
            })
        }
    }
}

/// JSON form of a Lefschetz report.
pub fn slp_json(graph: &str, r: &SlpReport) -> Value {
    json!({
        "graph": graph,
        "s": r.s,
        "hilbert": r.hilbert,
        "L": r.point.iter().map(rat).collect::<Vec<_>>(),
        "per_k": r.per_k.iter().map(|d| json!({
            "k": d.k,
            "dim": d.dim,
            "power": d.power,
            "det_numerator": d.det.numer().to_string(),
            "det_denominator": d.det.denom().to_string(),
            "nonzero": d.nonzero,
        })).collect::<Vec<_>>(),
        "verdict": r.verdict,
        "lambda1_all_variables": r.lambda1_all_variables,
    })
}

fn slp(args: &SlpArgs) -> Result<Report, CliError> {
    let g = args.graph.load()?;
    let f = kirchhoff_polynomial_capped(&g, edge_cap()?)?;
    let given = args.l.as_deref().map(parse_rationals).transpose()?;
    let point = given
        .clone()
        .unwrap_or_else(|| all_ones(f.variable_count()));
    if point.len() != f.variable_count() {
        return Err(graph_hessian::Error::DimensionMismatch {
            expected: f.variable_count(),
            found: point.len(),
        }
        .into());
    }
    let report = slp_check_poly(&f, &point, BasisOrder::Lex)?;
    let mut checks = Map::new();
    checks.insert("verdict".into(), json!(report.verdict));
    Ok(Report {
        command: "slp",
        parameters: json!({
            "graph": args.graph.to_string(),
            "L": given.as_ref().map(|l| l.iter().map(rat).collect::<Vec<_>>()),
        }),
        results: slp_json(&args.graph.to_string(), &report),
        checks,
    })
}

/// True if some `checks` object anywhere in `v` holds a `false`.
pub fn has_failed_check(v: &Value) -> bool {
    match v {
        Value::Object(map) => map.iter().any(|(k, child)| {
            (k == "checks"
                && child
                    .as_object()
                    .is_some_and(|c| c.values().any(|b| *b == Value::Bool(false))))
                || has_failed_check(child)
        }),
        Value::Array(items) => items.iter().any(has_failed_check),
        _ => false,
    }
}

fn render_table(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, child) in map {
                    let p = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&p, child, out);
                }
            }
            Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), child, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in rows {
        let mut lines = val.lines();
        out.push_str(&format!("{k:<width$}  {}\n", lines.next().unwrap_or("")));
        for line in lines {
            out.push_str(&format!("{:width$}  {line}\n", ""));
        }
    }
    out
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Trees(cmd) => trees(cmd),
        Command::Hessian(args) => hessian(args),
        Command::Verify(cmd) => verify(cmd),
        Command::Slp(args) => slp(args),
    }
}

/// Parses arguments, runs the command and renders the report.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                stdout,
                stderr,
                exit_code: code,
            };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
                exit_code: 2,
            }
        }
    };
    let mut doc = json!({
        "command": report.command,
        "parameters": report.parameters,
        "results": report.results,
        "checks": Value::Object(report.checks),
    });
    let exit_code = i32::from(has_failed_check(&doc));
    doc["exit_code"] = json!(exit_code);
    let stdout = match cli.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
        Format::Table => render_table(&doc),
    };
    Outcome {
        stdout,
        stderr: String::new(),
        exit_code,
    }
}
