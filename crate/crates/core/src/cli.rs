//! Command-line front end.
//!
//! Every subcommand reads one datum as JSON from a file or stdin (`-`) and
//! writes a report. Vertex numbers on the command line and in reports start
//! at 1. Exit status: 0 success, 1 negative verdict, 2 usage or input error,
//! 3 budget exhausted.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::admissibility::{
    check_lemma31, check_pi0, explore_closure, gcm_violations, principal_roots, regular_km_orbit, Budget,
    Verdict,
};
use crate::cartan::{normalize, structure_flags, symmetrizer, CartanDatum};
use crate::classify::{check_th84, classify, decompose_nonelemental, witness_json, ClassifyBudget};
use crate::codec;
use crate::diagram::{to_diagram, Format};
use crate::error::Error;
use crate::rational;
use crate::reflections::reflect_word;
use crate::search::{candidate_count, run_search, SearchSpec};
use crate::superalgebra::{build_graded, growth_estimate, oracle_s12a, GrowthKind, DEFAULT_DIM_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "superkac", version, about = "Cartan data of contragredient Lie superalgebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Reflection depth budget [env: SUPERKAC_BUDGET_DEPTH]
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Orbit node budget [env: SUPERKAC_BUDGET_NODES]
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Largest root-space dimension built before giving up
    #[arg(long, global = true, default_value_t = DEFAULT_DIM_BUDGET)]
    dim_budget: usize,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<String>,
}

#[derive(Debug, Args)]
struct Input {
    /// Datum JSON file, or `-` for stdin
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DiagramFormat {
    Text,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rescale rows to the normal form
    Normalize(Input),
    /// Indecomposable, elemental and symmetrizable flags
    Flags(Input),
    /// Dynkin-style diagram
    Diagram {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "text")]
        format: DiagramFormat,
    },
    /// Odd reflections; repeat --at for a word
    Reflect {
        #[command(flatten)]
        input: Input,
        #[arg(long, required = true)]
        at: Vec<usize>,
    },
    /// Odd-reflection orbit up to the budget
    Orbit {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
        /// Do not reflect at singular roots
        #[arg(long)]
        regular_only: bool,
    },
    /// Yes/no checks
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long, group = "which")]
        lemma31: bool,
        #[arg(long, group = "which")]
        gcm: bool,
        #[arg(long, group = "which")]
        admissible: bool,
        #[arg(long, group = "which")]
        regular_km: bool,
    },
    /// Principal even roots and their matrix
    Pi0(Input),
    /// Root-space dimensions by height
    Dims {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_height: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Polynomial or exponential growth fit
    Growth {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 36)]
        max_height: usize,
    },
    /// Full classification verdict
    Classify(Input),
    /// Zero-row stripping of a non-elemental datum
    Decompose(Input),
    /// Finite-growth conditions for a non-elemental datum
    Th84(Input),
    /// Root-space dimensions of the S(1,2,a) vector-field realization
    OracleS12a {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value_t = 8)]
        max_height: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Exhaustive classification search
    Search {
        #[arg(long)]
        spec: String,
        /// Worker threads, overriding the spec
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// Outcome of a subcommand before it is written out.
struct Report {
    body: String,
    code: i32,
}

impl Report {
    fn json(v: Value, code: i32) -> Self {
        let mut body = serde_json::to_string_pretty(&v).expect("json");
        body.push('\n');
        Report { body, code }
    }

    fn text(body: String) -> Self {
        Report { body, code: EXIT_OK }
    }
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Like [`run`], writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, &report.body).map_err(|e| e.to_string()),
        None => out.write_all(report.body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    report.code
}

fn env_usize(name: &str) -> Result<Option<usize>, Error> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidBudget(format!("{name}={v}"))),
        Err(_) => Ok(None),
    }
}

fn budget(g: &Global) -> Result<Budget, Error> {
    let d = Budget::default();
    let depth = g.depth.or(env_usize("SUPERKAC_BUDGET_DEPTH")?).unwrap_or(d.max_depth);
    let nodes = g.nodes.or(env_usize("SUPERKAC_BUDGET_NODES")?).unwrap_or(d.max_nodes);
    Budget::new(depth, nodes)
}

fn classify_budget(g: &Global) -> Result<ClassifyBudget, Error> {
    Ok(ClassifyBudget {
        orbit: budget(g)?,
        dim_budget: g.dim_budget,
        ..ClassifyBudget::default()
    })
}

fn read_text(path: &str) -> Result<String, Error> {
    let mut text = String::new();
    let r = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    r.map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
    Ok(text)
}

fn read_datum(input: &Input) -> Result<CartanDatum, Error> {
    codec::parse(&read_text(&input.input)?)
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn verdict_report(v: Verdict, extra: Value) -> Report {
    let (code, witness) = match &v {
        Verdict::Yes => (EXIT_OK, Value::Null),
        Verdict::No(w) => (EXIT_NEGATIVE, witness_json(w)),
        Verdict::Inconclusive => (EXIT_BUDGET, Value::Null),
    };
    let mut body = json!({"verdict": v.name(), "witness": witness});
    if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
        b.extend(e);
    }
    Report::json(body, code)
}

fn execute(cli: &Cli) -> Result<Report, Error> {
    let g = &cli.global;
    Ok(match &cli.command {
        Command::Normalize(i) => Report::text(codec::serialize(&normalize(&read_datum(i)?)) + "\n"),
        Command::Flags(i) => {
            let d = read_datum(i)?;
            let f = structure_flags(&d);
            let sym = symmetrizer(&d).map(|s| s.iter().map(rational::format).collect::<Vec<_>>());
            Report::json(
                json!({
                    "indecomposable": f.indecomposable,
                    "elemental": f.elemental,
                    "symmetrizable": f.symmetrizable,
                    "zero_rows": one_based(&f.zero_row_indices),
                    "symmetrizer": sym,
                }),
                EXIT_OK,
            )
        }
        Command::Diagram { input, format } => {
            let f = match format {
                DiagramFormat::Text => Format::Text,
                DiagramFormat::Dot => Format::Dot,
            };
            Report::text(to_diagram(&read_datum(input)?, f))
        }
        Command::Reflect { input, at } => {
            let d = normalize(&read_datum(input)?);
            let word = at
                .iter()
                .map(|&k| {
                    k.checked_sub(1)
                        .filter(|&k| k < d.n())
                        .ok_or(Error::IndexOutOfRange { index: k, size: d.n() })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Report::json(reflect_word(&d, &word)?.to_json(), EXIT_OK)
        }
        Command::Orbit { input, format, regular_only } => {
            let d = normalize(&read_datum(input)?);
            let o = explore_closure(&d, budget(g)?, !regular_only)?;
            match format {
                GraphFormat::Json => Report::json(o.to_json(), EXIT_OK),
                GraphFormat::Dot => Report::text(o.to_dot()),
            }
        }
        Command::Check { input, lemma31, gcm, admissible, regular_km } => {
            let d = normalize(&read_datum(input)?);
            if *lemma31 || *gcm {
                let vs = if *lemma31 { check_lemma31(&d) } else { gcm_violations(&d) };
                let code = if vs.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
                let list: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                Report::json(json!({"verdict": if vs.is_empty() { "yes" } else { "no" }, "violations": list}), code)
            } else if *admissible || *regular_km {
                let o = if *admissible {
                    explore_closure(&d, budget(g)?, true)?
                } else {
                    regular_km_orbit(&d, budget(g)?)?
                };
                verdict_report(o.verdict(), json!({"status": o.status, "nodes": o.len(), "depth": o.depth}))
            } else {
                return Err(Error::Invalid(
                    "choose one of --lemma31, --gcm, --admissible, --regular-km".into(),
                ));
            }
        }
        Command::Pi0(i) => {
            let d = normalize(&read_datum(i)?);
            let prs = principal_roots(&d, budget(g)?)?;
            let report = check_pi0(&prs, d.n());
            Report::json(json!({"roots": prs.to_json(), "check": report}), EXIT_OK)
        }
        Command::Dims { input, max_height, format } => {
            let dims = build_graded(&read_datum(input)?, *max_height, g.dim_budget);
            let code = if dims.budget_hit { EXIT_BUDGET } else { EXIT_OK };
            let mut r = match format {
                TableFormat::Csv => Report::text(dims.to_csv()),
                TableFormat::Json => Report::json(dims.to_json(), EXIT_OK),
            };
            r.code = code;
            r
        }
        Command::Growth { input, max_height } => {
            let v = growth_estimate(&build_graded(&read_datum(input)?, *max_height, g.dim_budget));
            let code = match v.kind {
                GrowthKind::Inconclusive { .. } => EXIT_BUDGET,
                _ => EXIT_OK,
            };
            Report::json(json!(v), code)
        }
        Command::Classify(i) => {
            let v = classify(&read_datum(i)?, classify_budget(g)?)?;
            let code = if v.finite_growth().is_none() { EXIT_BUDGET } else { EXIT_OK };
            Report::json(v.to_json(), code)
        }
        Command::Decompose(i) => Report::json(decompose_nonelemental(&normalize(&read_datum(i)?))?.to_json(), EXIT_OK),
        Command::Th84(i) => {
            let d = normalize(&read_datum(i)?);
            let dec = decompose_nonelemental(&d)?;
            let r = check_th84(&dec, &d, classify_budget(g)?);
            let code = if r.overall { EXIT_OK } else { EXIT_NEGATIVE };
            Report::json(json!({"decomposition": dec.to_json(), "report": r}), code)
        }
        Command::OracleS12a { a, max_height, format } => {
            let dims = oracle_s12a(&rational::parse(a)?, *max_height);
            match format {
                TableFormat::Csv => Report::text(dims.to_csv()),
                TableFormat::Json => Report::json(dims.to_json(), EXIT_OK),
            }
        }
        Command::Search { spec, workers } => {
            let mut s = SearchSpec::from_json(&read_text(spec)?)?;
            if workers.is_some() {
                s.workers = *workers;
            }
            if s.budget.is_none() {
                s.budget = Some(budget(g)?);
            }
            if s.dim_budget.is_none() {
                s.dim_budget = Some(g.dim_budget);
            }
            let total = candidate_count(&s)?;
            let report = run_search(&s)?;
            let code = if report.inconclusive().next().is_some() { EXIT_BUDGET } else { EXIT_OK };
            let mut v = report.to_json();
            v["candidates"] = json!(total.to_string());
            Report::json(v, code)
        }
    })
}
