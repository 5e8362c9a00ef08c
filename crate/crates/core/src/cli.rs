//! The `cohomlen` command line.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::asymptotics::{
    fit_quasipolynomial, fraction_string, growth_estimate, length_entry_json,
    length_sequence_range, limit_via_volume, sequence_generating_function, AsymptoticsError,
    LengthSequence,
};
use crate::dsl::{parse_graph, parse_ideal, parse_ideals, ParseError};
use crate::graphs::{
    edge_ideal, height_edge_ideal, locally_bipartite, prop45_criterion, Graph, GraphError,
};
use crate::homology::{FieldSpec, HomologyError};
use crate::ideal::{IdealError, IdealFamily, MonomialIdeal};
use crate::polyhedra::{lattice_count, CertificateMethod, CoConvexRegion, PolyError};
use crate::takayama::{member_total_length, TakayamaError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub location: Option<(usize, usize)>,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
            location: None,
        }
    }

    fn io(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_IO,
            message: message.into(),
            location: None,
        }
    }

    /// `{"code": .., "message": .., "location": {"line": .., "column": ..}}`.
    pub fn envelope(&self) -> Value {
        let mut v = json!({"code": self.code, "message": self.message});
        if let Some((line, column)) = self.location {
            v["location"] = json!({"line": line, "column": column});
        }
        v
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: e.message,
            location: Some((e.line, e.column)),
        }
    }
}

fn poly_code(e: &PolyError) -> i32 {
    match e {
        PolyError::Overflow | PolyError::TooLarge(_) | PolyError::Certificate(_) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError {
            code: poly_code(&e),
            message: e.to_string(),
            location: None,
        }
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        let code = match &e {
            IdealError::Overflow | IdealError::DimensionTooLarge(_) => EXIT_RESOURCE,
            IdealError::Polyhedron(p) => poly_code(p),
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
            location: None,
        }
    }
}

impl From<TakayamaError> for CliError {
    fn from(e: TakayamaError) -> Self {
        let code = match e {
            TakayamaError::DimensionMismatch { .. } => EXIT_USAGE,
            TakayamaError::TooLarge(_) | TakayamaError::BoxTooLarge(_) => EXIT_RESOURCE,
        };
        CliError {
            code,
            message: e.to_string(),
            location: None,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        let code = match e {
            GraphError::TooLarge(_) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
            location: None,
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<AsymptoticsError> for CliError {
    fn from(e: AsymptoticsError) -> Self {
        match e {
            AsymptoticsError::Ideal(e) => e.into(),
            AsymptoticsError::Takayama(e) => e.into(),
            AsymptoticsError::Polyhedron(e) => e.into(),
            AsymptoticsError::TooLarge(m) => CliError {
                code: EXIT_RESOURCE,
                message: format!("resource limit: {m}"),
                location: None,
            },
            AsymptoticsError::Consistency(_) => CliError {
                code: EXIT_CONSISTENCY,
                message: e.to_string(),
                location: None,
            },
            e => CliError::usage(e.to_string()),
        }
    }
}

/// An inclusive range `a..b`, or a single `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub start: u64,
    pub end: u64,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("`{t}` is not a nonnegative integer"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if start > end {
            return Err(format!("empty range {start}..{end}"));
        }
        Ok(NRange { start, end })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Powers,
    Sat,
    Intclosure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "cohomlen", version, about = "Lengths of local cohomology of monomial ideals")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Characteristic of the coefficient field: 0 or a prime.
    #[arg(long = "char", global = true, default_value_t = 0)]
    pub characteristic: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, env = "COHOMLEN_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct IdealInput {
    /// Ideal program, as a file path or inline text.
    #[arg(long)]
    pub ideal: String,
    #[arg(long, value_enum, default_value_t = FamilyArg::Powers)]
    pub family: FamilyArg,
}

#[derive(Args, Debug, Clone)]
pub struct FitArgs {
    /// Largest polynomial degree tried (default: the ring dimension).
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub max_period: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// λ(H^i_m(R/I_n)) with its graded support.
    Length {
        #[command(flatten)]
        input: IdealInput,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Lengths for a range of n.
    Sequence {
        #[command(flatten)]
        input: IdealInput,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: NRange,
    },
    /// Fit a quasi-polynomial to the length sequence.
    Fit {
        #[command(flatten)]
        input: IdealInput,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: NRange,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Rational generating function of the length sequence.
    Genfun {
        #[command(flatten)]
        input: IdealInput,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: NRange,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Non-certified growth statistics of λ(n) / n^d.
    Growth {
        #[command(flatten)]
        input: IdealInput,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: NRange,
    },
    /// Exact lim λ(H^i_m(R/Ī^n)) / n^d.
    Limit {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        i: usize,
    },
    /// Whether each length in the range is finite.
    Finite {
        #[command(flatten)]
        input: IdealInput,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: NRange,
    },
    /// Combinatorial finiteness criterion for H^1 of edge-ideal powers.
    GraphCheck {
        #[arg(long)]
        graph: String,
        /// Also run the length oracle on I(G)^n for these n.
        #[arg(long)]
        n: Option<NRange>,
    },
    /// Volume of a co-convex region: the first ideal is the outer region,
    /// the others are removed.
    Volume {
        #[arg(long)]
        ideal: String,
        /// Also count lattice points of n·C.
        #[arg(long)]
        n: Option<u64>,
    },
}

/// Resolved settings for a single run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub field: FieldSpec,
    pub n_range: Option<NRange>,
    pub max_period: usize,
    pub max_degree: Option<usize>,
    pub thread_count: Option<usize>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let field = FieldSpec::from_characteristic(cli.global.characteristic)?;
        let (n_range, fit) = match &cli.command {
            Command::Sequence { n, .. } | Command::Growth { n, .. } | Command::Finite { n, .. } => {
                (Some(*n), None)
            }
            Command::Fit { n, fit, .. } | Command::Genfun { n, fit, .. } => (Some(*n), Some(fit)),
            Command::Length { n, .. } => (Some(NRange { start: *n, end: *n }), None),
            Command::GraphCheck { n, .. } => (*n, None),
            _ => (None, None),
        };
        if cli.global.threads == Some(0) {
            return Err(CliError::usage("--threads must be positive"));
        }
        Ok(RunConfig {
            field,
            n_range,
            max_period: fit.map_or(2, |f| f.max_period),
            max_degree: fit.and_then(|f| f.max_degree),
            thread_count: cli.global.threads,
            output_format: cli.global.format,
            output_path: cli.global.out.clone(),
        })
    }

    /// The degree bound for a ring of dimension `d`.
    pub fn max_degree_for(&self, d: usize) -> Result<usize, CliError> {
        match self.max_degree {
            Some(m) if m > d => Err(CliError::usage(format!(
                "--max-degree {m} exceeds the ring dimension {d}"
            ))),
            Some(m) => Ok(m),
            None => Ok(d),
        }
    }
}

/// A DSL argument: an existing file is read, anything else is parsed inline.
fn read_source(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return fs::read_to_string(path).map_err(|e| CliError::io(format!("{arg}: {e}")));
    }
    if arg.contains(';') {
        return Ok(arg.to_string());
    }
    Err(CliError::io(format!("{arg}: no such file")))
}

fn load_ideal(arg: &str) -> Result<MonomialIdeal, CliError> {
    Ok(parse_ideal(&read_source(arg)?)?)
}

fn load_graph(arg: &str) -> Result<Graph, CliError> {
    Ok(parse_graph(&read_source(arg)?)?)
}

fn family(input: &IdealInput) -> Result<IdealFamily, CliError> {
    let base = load_ideal(&input.ideal)?;
    Ok(match input.family {
        FamilyArg::Powers => IdealFamily::powers(base),
        FamilyArg::Sat => IdealFamily::saturated_powers(base),
        FamilyArg::Intclosure => IdealFamily::integral_closure_powers(base),
    })
}

fn sequence(input: &IdealInput, i: usize, n: NRange, cfg: &RunConfig) -> Result<LengthSequence, CliError> {
    Ok(length_sequence_range(&family(input)?, i, n.start, n.end, cfg.field)?)
}

/// Rendered output of one command.
pub struct Output {
    pub json: Value,
    pub csv: String,
}

fn csv_pairs(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k},{v}\n")).collect()
}

fn qp_csv(qp: &crate::asymptotics::QuasiPolynomial) -> String {
    let mut s = String::new();
    for (r, p) in qp.polys.iter().enumerate() {
        for (k, c) in p.iter().enumerate() {
            s.push_str(&format!("{r},{k},{}\n", fraction_string(c)));
        }
    }
    s
}

fn run_command(cli: &Cli, cfg: &RunConfig) -> Result<Output, CliError> {
    match &cli.command {
        Command::Length { input, i, n } => {
            let f = family(input)?;
            let member = f.member(*n)?;
            let r = member_total_length(&member, *i, cfg.field)?;
            let csv = match r.value() {
                Some(v) => format!("{n},{v}\n"),
                None => format!("{n},infinite\n"),
            };
            Ok(Output {
                json: length_entry_json(*n, &r),
                csv,
            })
        }
        Command::Sequence { input, i, n } => {
            let s = sequence(input, *i, *n, cfg)?;
            Ok(Output {
                json: s.to_json(),
                csv: s.to_csv(),
            })
        }
        Command::Fit { input, i, n, .. } => {
            let s = sequence(input, *i, *n, cfg)?;
            let qp = fit_quasipolynomial(&s, cfg.max_degree_for(s.dim())?, cfg.max_period)?;
            Ok(Output {
                json: qp.to_json(),
                csv: qp_csv(&qp),
            })
        }
        Command::Genfun { input, i, n, .. } => {
            let s = sequence(input, *i, *n, cfg)?;
            let (_, g) =
                sequence_generating_function(&s, cfg.max_degree_for(s.dim())?, cfg.max_period)?;
            let join = |v: Vec<String>| v.join(" ");
            Ok(Output {
                json: g.to_json(),
                csv: csv_pairs(&[
                    ("numerator", join(g.numerator.iter().map(|c| c.to_string()).collect())),
                    (
                        "denominator_factors",
                        join(g.denominator_factors.iter().map(|b| b.to_string()).collect()),
                    ),
                ]),
            })
        }
        Command::Growth { input, i, n } => {
            let s = sequence(input, *i, *n, cfg)?;
            let g = growth_estimate(&s)?;
            let json = g.to_json();
            let field = |k: &str| json[k].as_str().unwrap_or_default().to_string();
            Ok(Output {
                csv: csv_pairs(&[
                    ("limsup_est", field("limsup_est")),
                    ("liminf_est", field("liminf_est")),
                    ("trend", field("trend")),
                    (
                        "fitted_degree",
                        g.fitted_degree.map_or("none".into(), |d| d.to_string()),
                    ),
                ]),
                json,
            })
        }
        Command::Limit { ideal, i } => {
            let l = fraction_string(&limit_via_volume(&load_ideal(ideal)?, *i)?);
            Ok(Output {
                json: json!({"i": i, "limit": l}),
                csv: format!("{l}\n"),
            })
        }
        Command::Finite { input, i, n } => {
            let f = family(input)?;
            let mut rows = Vec::new();
            let mut csv = String::new();
            for k in n.start..=n.end {
                let finite = member_total_length(&f.member(k)?, *i, cfg.field)?.is_finite();
                rows.push(json!({"n": k, "finite": finite}));
                csv.push_str(&format!("{k},{finite}\n"));
            }
            Ok(Output {
                json: Value::Array(rows),
                csv,
            })
        }
        Command::GraphCheck { graph, n } => {
            let g = load_graph(graph)?;
            let report = prop45_criterion(&g)?;
            let mut json = json!({
                "finite": report.finite,
                "witnesses": report.witnesses,
                "locally_bipartite": locally_bipartite(&g)?,
                "height": height_edge_ideal(&g),
            });
            let mut csv = csv_pairs(&[
                ("finite", report.finite.to_string()),
                ("locally_bipartite", json["locally_bipartite"].to_string()),
                ("height", json["height"].to_string()),
            ]);
            if let Some(n) = n {
                let f = IdealFamily::powers(edge_ideal(&g));
                let mut rows = Vec::new();
                for k in n.start..=n.end {
                    let finite = member_total_length(&f.member(k)?, 1, cfg.field)?.is_finite();
                    rows.push(json!({"n": k, "finite": finite}));
                    csv.push_str(&format!("oracle_{k},{finite}\n"));
                }
                json["oracle"] = Value::Array(rows);
            }
            Ok(Output { json, csv })
        }
        Command::Volume { ideal, n } => {
            let (dim, ideals) = parse_ideals(&read_source(ideal)?)?;
            let region = CoConvexRegion::from_ideals(dim, &ideals[..1], &ideals[1..])?;
            let v = fraction_string(&region.volume()?);
            let cert = region.certificate();
            let method = match cert.method {
                CertificateMethod::BoundedOuter => "bounded_outer",
                CertificateMethod::Monotone => "monotone",
            };
            let mut json = json!({
                "volume": v,
                "certificate": {"bound": cert.bound, "method": method},
            });
            let mut csv = csv_pairs(&[("volume", v)]);
            if let Some(n) = n {
                let count = lattice_count(&region, *n);
                json["lattice_count"] = json!({"n": n, "count": count});
                csv.push_str(&format!("lattice_count_{n},{count}\n"));
            }
            Ok(Output { json, csv })
        }
    }
}

fn emit(cfg: &RunConfig, out: &Output) -> Result<(), CliError> {
    let text = match cfg.output_format {
        OutputFormat::Json => format!("{}\n", out.json),
        OutputFormat::Csv => out.csv.clone(),
    };
    match &cfg.output_path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(e.to_string())),
    }
}

/// Run a parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    let out = match cfg.thread_count {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError {
                code: EXIT_RESOURCE,
                message: e.to_string(),
                location: None,
            })?
            .install(|| run_command(cli, &cfg))?,
        None => run_command(cli, &cfg)?,
    };
    emit(&cfg, &out)
}

/// Entry point: parse `args`, run, print any error envelope to stderr and
/// return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            let err = CliError::usage(e.to_string().trim_end());
            eprintln!("{}", json!({ "error": err.envelope() }));
            return EXIT_USAGE;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.envelope() }));
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("1..8".parse::<NRange>(), Ok(NRange { start: 1, end: 8 }));
        assert_eq!("1..=8".parse::<NRange>(), Ok(NRange { start: 1, end: 8 }));
        assert_eq!("3".parse::<NRange>(), Ok(NRange { start: 3, end: 3 }));
        assert!("8..1".parse::<NRange>().is_err());
        assert!("a..b".parse::<NRange>().is_err());
    }

    #[test]
    fn parse_error_envelope() {
        let e: CliError = parse_ideal("ring 2; ideal x3;").unwrap_err().into();
        assert_eq!(e.code, EXIT_USAGE);
        let v = e.envelope();
        assert!(v["location"]["line"].is_u64());
    }

    #[test]
    fn max_degree_is_bounded_by_dimension() {
        let cli = Cli::try_parse_from([
            "cohomlen", "fit", "--ideal", "ring 2; ideal x1;", "--i", "1", "--n", "1..20",
            "--max-degree", "3",
        ])
        .unwrap();
        let cfg = RunConfig::from_cli(&cli).unwrap();
        assert_eq!(cfg.max_degree_for(2).unwrap_err().code, EXIT_USAGE);
        assert_eq!(cfg.max_degree_for(3).unwrap(), 3);
    }
}
