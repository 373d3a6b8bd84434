//! Command-line front end. Every command reads JSON, writes JSON or a plain-text
//! rendering to stdout and reports errors on stderr.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 invalid input, 3 resource bound or
//! undecided search.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::certificate::{metabolize, verify_certificate, StableCongruenceCertificate, Verdict};
use crate::error::{Error, Result};
use crate::filtration::{pushforward_expand, FormalSum, IndexSet};
use crate::graphspace::{
    edge_to_pi1, enumerate_graphs, graded_group, out_equivalent, pi1_to_edge, DecoratedGraph, GraphLimits,
    Pi1Decoration,
};
use crate::groupring::GroupRingElement;
use crate::groups::{Group, GroupElement, QuotientMap};
use crate::hermitian::{default_elementary_bound, HermitianMatrix};
use crate::milnor::{surgery_equivalent, Equivalence, MuCollection};
use crate::multisig::{multisignature, DEFAULT_TAU};
use crate::realization::{eval_normlike, normlike_decompose, realization_moves};
use crate::scalar::Int;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "equisurg", version, about = "Exact algebra for surgery on links over group rings")]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct Options {
    /// TOML file with default settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Move budget for the elementary-factorization search (default 10 n^2).
    #[arg(long, global = true)]
    pub elementary_bound: Option<usize>,
    /// Word-length radius searched in infinite groups.
    #[arg(long, global = true)]
    pub ball_radius: Option<usize>,
    /// Largest graph degree accepted.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    /// Largest group order accepted by the graph commands.
    #[arg(long, global = true)]
    pub max_group_order: Option<usize>,
    /// Cap on labeled graphs examined by the graph commands.
    #[arg(long, global = true)]
    pub max_labelings: Option<usize>,
    /// Eigenvalue tolerance for signatures.
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certificate of stable congruence from A + (-A) to a unidiagonal matrix.
    WittMetabolize(MatrixInput),
    /// Replays and checks a certificate.
    WittVerify(FileInput),
    /// Multisignature over Z[Z/m] or Z.
    WittMultisig(MatrixInput),
    /// Handle moves realizing a linking matrix.
    Realize(MatrixInput),
    /// Norm-like decomposition of a kernel element.
    Normlike(FileInput),
    /// Canonical decorated trivalent graphs of a degree.
    GraphsEnumerate(GraphArgs),
    /// Graded group of decorated graphs modulo the relations.
    GraphsRank(GraphArgs),
    /// Converts between edge labelings and fundamental-group decorations.
    GraphsConvert(ConvertArgs),
    /// Closes a Milnor collection under the symmetries.
    MuValidate(FileInput),
    /// Decides surgery equivalence of two Milnor collections.
    MuEquiv(MuEquivArgs),
    /// Applies a Delta move to a Milnor collection.
    MuDelta(MuDeltaArgs),
    /// Compares both sides of the pushforward expansion.
    BracketCheck(BracketArgs),
}

#[derive(Args, Debug)]
pub struct FileInput {
    /// Input JSON file, `-` for stdin.
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct MatrixInput {
    /// Matrix JSON: an array of rows, or `{"group": .., "matrix": rows}`.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Group for bare rows, e.g. `cyclic:4`.
    #[arg(long)]
    pub group: Option<String>,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    #[arg(long)]
    pub degree: usize,
    /// Group spec, e.g. `trivial`, `cyclic:2`, `s3`.
    #[arg(long, default_value = "trivial")]
    pub group: String,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    /// A decorated graph or a fundamental-group decoration.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Second decoration of the same graph, tested for conjugacy with the first.
    #[arg(long)]
    pub against: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MuEquivArgs {
    #[arg(long)]
    pub left: PathBuf,
    #[arg(long)]
    pub right: PathBuf,
}

#[derive(Args, Debug)]
pub struct MuDeltaArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Component indices `i,j,k`, 1-based.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ijk: Vec<usize>,
    #[arg(long)]
    pub g: String,
    #[arg(long)]
    pub h: String,
    /// Apply the inverse move.
    #[arg(long)]
    pub negative: bool,
}

#[derive(Args, Debug)]
pub struct BracketArgs {
    /// Surgered sublink `L`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub l: Vec<usize>,
    /// Bracket sublink `K`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    /// Instead check every disjoint pair with `|L|, |K|` up to this size.
    #[arg(long)]
    pub exhaustive: Option<usize>,
}

#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    elementary_bound: Option<usize>,
    ball_radius: Option<usize>,
    max_degree: Option<usize>,
    max_group_order: Option<usize>,
    max_labelings: Option<usize>,
    tau: Option<f64>,
    format: Option<Format>,
}

/// Effective settings.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub elementary_bound: Option<usize>,
    pub ball_radius: usize,
    pub limits: GraphLimits,
    pub tau: f64,
    pub format: Format,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            elementary_bound: None,
            ball_radius: 3,
            limits: GraphLimits::default(),
            tau: DEFAULT_TAU,
            format: Format::Json,
        }
    }
}

impl Config {
    pub fn resolve(opts: &Options) -> Result<Self> {
        let file = match &opts.config {
            Some(path) => {
                let text = read_text(path)?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| Error::parse(path.display().to_string(), e.message().to_string()))?
            }
            None => FileConfig::default(),
        };
        let d = Config::default();
        let cfg = Config {
            elementary_bound: opts.elementary_bound.or(file.elementary_bound),
            ball_radius: opts.ball_radius.or(file.ball_radius).unwrap_or(d.ball_radius),
            limits: GraphLimits {
                max_degree: opts.max_degree.or(file.max_degree).unwrap_or(d.limits.max_degree),
                max_group_order: opts.max_group_order.or(file.max_group_order).unwrap_or(d.limits.max_group_order),
                max_labelings: opts.max_labelings.or(file.max_labelings).unwrap_or(d.limits.max_labelings),
            },
            tau: opts.tau.or(file.tau).unwrap_or(d.tau),
            format: opts.format.or(file.format).unwrap_or(d.format),
        };
        let positive = [
            ("elementary_bound", cfg.elementary_bound.unwrap_or(1)),
            ("ball_radius", cfg.ball_radius),
            ("max_degree", cfg.limits.max_degree),
            ("max_group_order", cfg.limits.max_group_order),
            ("max_labelings", cfg.limits.max_labelings),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidInput(format!("{name} must be positive")));
        }
        if !(cfg.tau > 0.0 && cfg.tau.is_finite()) {
            return Err(Error::InvalidInput(format!("tau must be positive, got {}", cfg.tau)));
        }
        Ok(cfg)
    }

    fn elementary(&self) -> impl Fn(usize) -> usize {
        let fixed = self.elementary_bound;
        move |n| fixed.unwrap_or_else(|| default_elementary_bound(n))
    }
}

/// Result of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceBound(_) => EXIT_BOUND,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let cfg = match Config::resolve(&cli.options) {
        Ok(c) => c,
        Err(e) => return Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    match execute(&cli.command, &cfg) {
        Ok((code, value)) => Outcome { code, stdout: render(&value, cfg.format), stderr: String::new() },
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::parse("stdin", e.to_string()))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Error::parse(format!("{}:{}:{}", path.display(), e.line(), e.column()), e.to_string())
    })
}

fn read_matrix(input: &MatrixInput) -> Result<HermitianMatrix<Int>> {
    let v = read_json(&input.input)?;
    let flag_group = input.group.as_deref().map(Group::from_spec).transpose()?;
    let (rows, group) = match v.get("matrix") {
        Some(rows) => {
            let g = v.get("group").map(Group::from_json).transpose()?;
            (rows.clone(), flag_group.or(g))
        }
        None => (v, flag_group),
    };
    HermitianMatrix::from_json(&rows, group.as_ref())
}

/// Element given on the command line as JSON or as a bare word.
fn parse_element(group: &Group, s: &str) -> Result<GroupElement> {
    let v = serde_json::from_str::<Value>(s).unwrap_or_else(|_| Value::String(s.to_string()));
    group.parse_element(&v)
}

fn index_set(xs: &[usize]) -> IndexSet {
    xs.iter().copied().collect()
}

fn execute(cmd: &Command, cfg: &Config) -> Result<(i32, Value)> {
    match cmd {
        Command::WittMetabolize(input) => {
            let a = read_matrix(input)?;
            let cert = metabolize(&a, cfg.elementary())?;
            Ok((EXIT_OK, cert.to_json()))
        }
        Command::WittVerify(input) => {
            let cert = StableCongruenceCertificate::<Int>::from_json(&read_json(&input.input)?)?;
            let (code, verdict, reason) = match verify_certificate(&cert, cfg.elementary()) {
                Verdict::Verified => (EXIT_OK, "verified", None),
                Verdict::Failed(r) => (EXIT_NEGATIVE, "failed", Some(r)),
                Verdict::Unknown(r) => (EXIT_BOUND, "unknown", Some(r)),
            };
            Ok((
                code,
                json!({
                    "verdict": verdict,
                    "reason": reason,
                    "steps": cert.steps.len(),
                    "net_stabilization": cert.net_stabilization(),
                    "end_signature": cert.end.unidiagonal_signature(),
                }),
            ))
        }
        Command::WittMultisig(input) => {
            let a = read_matrix(input)?;
            let p = multisignature::<f64, Int>(&a, cfg.tau)?;
            Ok((EXIT_OK, json!({"sigma": p.sigma, "reduced": p.reduced()})))
        }
        Command::Realize(input) => {
            let a = read_matrix(input)?;
            let g = a.group().clone();
            let moves = realization_moves(&a)?;
            Ok((EXIT_OK, json!({"size": a.size(), "moves": moves.iter().map(|m| m.to_json(&g)).collect::<Vec<_>>()})))
        }
        Command::Normlike(input) => {
            let v = read_json(&input.input)?;
            let q = QuotientMap::from_json(v.get("quotient").ok_or_else(|| Error::parse("quotient", "missing"))?)?;
            let lambda = GroupRingElement::<Int>::from_json(
                v.get("lambda").ok_or_else(|| Error::parse("lambda", "missing"))?,
                Some(q.source()),
            )?;
            let terms = normlike_decompose(&lambda, &q)?;
            let back: GroupRingElement<Int> = eval_normlike(&terms, q.source())?;
            Ok((
                EXIT_OK,
                json!({
                    "terms": terms.iter().map(|t| t.to_json(q.source())).collect::<Vec<_>>(),
                    "round_trip": back == lambda,
                }),
            ))
        }
        Command::GraphsEnumerate(args) => {
            let group = Group::from_spec(&args.group)?;
            let graphs = enumerate_graphs::<Int>(args.degree, &group, &cfg.limits)?;
            Ok((
                EXIT_OK,
                json!({
                    "degree": args.degree,
                    "group": group.to_json(),
                    "count": graphs.len(),
                    "graphs": graphs.iter().map(DecoratedGraph::to_json).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::GraphsRank(args) => {
            let group = Group::from_spec(&args.group)?;
            Ok((EXIT_OK, graded_group(args.degree, &group, &cfg.limits)?.to_json()))
        }
        Command::GraphsConvert(args) => {
            let v = read_json(&args.input)?;
            let decoration = |v: &Value| -> Result<Pi1Decoration> {
                if v.get("forest").is_some() {
                    Pi1Decoration::from_json(v)
                } else {
                    edge_to_pi1(&DecoratedGraph::<Int>::from_json(v, None)?)
                }
            };
            let d = decoration(&v)?;
            let mut out = json!({"pi1": d.to_json(), "edges": pi1_to_edge::<Int>(&d)?.to_json()});
            let mut code = EXIT_OK;
            if let Some(path) = &args.against {
                let other = decoration(&read_json(path)?)?;
                let same = out_equivalent(&d, &other)?;
                out["out_equivalent"] = json!(same);
                if !same {
                    code = EXIT_NEGATIVE;
                }
            }
            Ok((code, out))
        }
        Command::MuValidate(input) => match MuCollection::<Int>::from_json(&read_json(&input.input)?) {
            Ok(c) => Ok((EXIT_OK, json!({"valid": true, "support": c.len(), "collection": c.to_json()}))),
            Err(e @ (Error::Conflict(_) | Error::Undefined(_))) => {
                Ok((EXIT_NEGATIVE, json!({"valid": false, "reason": e.to_string()})))
            }
            Err(e) => Err(e),
        },
        Command::MuEquiv(args) => {
            let c1 = MuCollection::<Int>::from_json(&read_json(&args.left)?)?;
            let c2 = MuCollection::<Int>::from_json(&read_json(&args.right)?)?;
            let (verdict, lift) = surgery_equivalent(&c1, &c2, cfg.ball_radius)?;
            let code = match verdict {
                Equivalence::Equivalent => EXIT_OK,
                Equivalence::Inequivalent => EXIT_NEGATIVE,
                Equivalence::Unknown => EXIT_BOUND,
            };
            let g = c1.group();
            let lift = lift.map(|u| u.iter().map(|x| g.element_to_json(x)).collect::<Vec<_>>());
            Ok((code, json!({"verdict": verdict.name(), "lift_change": lift})))
        }
        Command::MuDelta(args) => {
            let c = MuCollection::<Int>::from_json(&read_json(&args.input)?)?;
            let (g, h) = (parse_element(c.group(), &args.g)?, parse_element(c.group(), &args.h)?);
            let [i, j, k] = <[usize; 3]>::try_from(args.ijk.as_slice())
                .map_err(|_| Error::InvalidInput("--ijk needs three indices".into()))?;
            let (out, warning) = c.delta_move(i, j, k, &g, &h, !args.negative)?;
            Ok((EXIT_OK, json!({"collection": out.to_json(), "warning": warning})))
        }
        Command::BracketCheck(args) => match args.exhaustive {
            Some(n) => {
                if n > 6 {
                    return Err(Error::ResourceBound(format!("exhaustive check up to size {n}")));
                }
                let (mut checked, mut failures) = (0usize, Vec::new());
                for nl in 0..=n {
                    for nk in 0..=n {
                        let l: IndexSet = (0..nl).collect();
                        let k: IndexSet = (nl..nl + nk).collect();
                        let (lhs, rhs) = pushforward_expand::<Int>(&l, &k)?;
                        checked += 1;
                        if lhs != rhs {
                            failures.push(json!([nl, nk]));
                        }
                    }
                }
                let code = if failures.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
                Ok((code, json!({"checked": checked, "failures": failures})))
            }
            None => {
                let (l, k) = (index_set(&args.l), index_set(&args.k));
                let (lhs, rhs): (FormalSum<Int>, FormalSum<Int>) = pushforward_expand(&l, &k)?;
                let equal = lhs == rhs;
                Ok((
                    if equal { EXIT_OK } else { EXIT_NEGATIVE },
                    json!({"equal": equal, "lhs": lhs.to_json(), "rhs": rhs.to_json()}),
                ))
            }
        },
    }
}

/// JSON pretty-printed, or one `key: value` line per top-level field.
pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            match v {
                Value::Object(map) => {
                    let width = map.keys().map(String::len).max().unwrap_or(0);
                    for (key, val) in map {
                        let shown = match val {
                            Value::String(x) => x.clone(),
                            other => other.to_string(),
                        };
                        s.push_str(&format!("{key:<width$}  {shown}\n"));
                    }
                }
                other => {
                    s.push_str(&other.to_string());
                    s.push('\n');
                }
            }
            s
        }
    }
}
