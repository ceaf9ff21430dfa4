//! `sturan`: command-line driver for the spectral Turán toolkit.
//!
//! Exit status is 0 on success, 1 when a verdict fails or a cached search is
//! not reproduced, and 2 on bad input. With `--json`, errors are printed to
//! stdout as `{"code": .., "kind": .., "message": ..}`.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spectral_turan::families::FamilySpec;
use spectral_turan::poly::{ClosedForm, FormParams, Polynomial, CLOSED_FORM_NAMES};
use spectral_turan::search::{self, SearchReport};
use spectral_turan::spectral::{self, Partition};
use spectral_turan::verify::{self, fmt_sig, Claim, Status, Verdict};
use spectral_turan::{canonical_form, graph6, Error, Graph, PatternId};

/// `println!` that tolerates a closed stdout, e.g. when piped into `head`.
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "sturan", version, about = "Spectral Turán verification and search toolkit")]
struct Cli {
    /// Emit JSON on stdout, errors included.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV where the verb supports it.
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Build a named graph family.
    Family(FamilyArgs),
    /// Spectral radius of a graph.
    Rho(RhoArgs),
    /// Whether a graph avoids a pattern.
    FreeCheck(FreeCheckArgs),
    /// Quotient matrix of an equitable partition and its characteristic polynomial.
    Quotient(QuotientArgs),
    /// Largest real root of a polynomial or of a registered closed form.
    LargestRoot(RootArgs),
    /// Check a bound or ordering and print a verdict.
    Verify(VerifyArgs),
    /// Exhaustive or heuristic search for the largest spectral radius.
    Search(SearchArgs),
    /// Summarize the reports stored in a search cache.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    G6,
    Json,
}

#[derive(Args)]
struct FamilyArgs {
    /// Family as JSON, e.g. '{"family":"F","params":{"m":23,"t":2}}'.
    #[arg(long)]
    spec: String,
    #[arg(long, value_enum, default_value = "g6")]
    out: OutFormat,
}

#[derive(Args)]
struct RhoArgs {
    /// Graph in graph6.
    #[arg(long)]
    graph: String,
    /// Include the Perron vector in JSON output.
    #[arg(long)]
    perron: bool,
}

#[derive(Args)]
struct FreeCheckArgs {
    #[arg(long)]
    graph: String,
    /// `k2r1:<r>`, `theta123` or `g6:<graph6>`.
    #[arg(long)]
    pattern: String,
}

#[derive(Args)]
struct QuotientArgs {
    /// Graph in graph6; requires --partition.
    #[arg(long, conflicts_with = "spec", requires = "partition")]
    graph: Option<String>,
    /// Blocks as JSON, e.g. '[[0],[1,2,3]]'.
    #[arg(long)]
    partition: Option<String>,
    /// Family as JSON; its standard partition is used unless --partition is given.
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Args)]
struct RootArgs {
    /// Comma-separated coefficients, highest degree first.
    #[arg(long, conflicts_with = "form", allow_hyphen_values = true)]
    poly: Option<String>,
    /// Registered closed form, e.g. `pendant-split-star`.
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: clique-bound, star-bound, theta-bound, star-orderings,
    /// pendant-orderings, neighbourhood-structure, vertex-deletion.
    #[arg(long)]
    claim: String,
    /// Graph in graph6, for the graph claims.
    #[arg(long)]
    graph: Option<String>,
    /// File of graph6 lines (`-` for stdin), for the graph claims.
    #[arg(long, conflicts_with = "graph")]
    input: Option<PathBuf>,
    #[arg(long)]
    r: Option<usize>,
    /// Vertex for the vertex claims (default: every vertex, or the largest
    /// Perron entry for the neighbourhood claim).
    #[arg(long)]
    vertex: Option<usize>,
    /// Edge count for the ordering claims.
    #[arg(long)]
    m: Option<usize>,
    /// Check every edge count from --m up to this one.
    #[arg(long)]
    m_max: Option<usize>,
    /// Largest pendant count for pendant-orderings (default: m).
    #[arg(long)]
    tmax: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, default_value = "theta123")]
    pattern: String,
    /// `none` or a comma list of `star`, `split-star`, `g6:<graph6>`.
    #[arg(long, default_value = "none")]
    exclude: String,
    /// Use seeded hill climbing instead of exhaustive enumeration.
    #[arg(long)]
    heuristic: bool,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSONL cache; the report is checked against and appended to it.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    cache: PathBuf,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::CacheMismatch { .. } => (1, "cache_mismatch"),
            Error::NoConvergence { .. } => (1, "no_convergence"),
            Error::Overflow => (1, "overflow"),
            Error::Io(_) => (2, "io"),
            _ => (2, "invalid_input"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, kind: "usage", message: message.into() }
}

type CliResult = std::result::Result<u8, Failure>;

struct Out {
    json: bool,
    csv: bool,
}

impl Out {
    fn emit(&self, value: &Value, text: impl FnOnce() -> String) {
        if self.json {
            say!("{}", serde_json::to_string_pretty(value).expect("serializable"));
        } else {
            say!("{}", text());
        }
    }
}

fn parse_graph(s: &str) -> Result<Graph, Failure> {
    Ok(graph6::decode(s.trim().strip_prefix("g6:").unwrap_or(s.trim()))?)
}

fn family(args: &FamilyArgs) -> CliResult {
    let spec = FamilySpec::from_json(&args.spec)?;
    let g = spec.build()?;
    let g6 = graph6::encode(&g);
    match args.out {
        OutFormat::G6 => say!("{g6}"),
        OutFormat::Json => {
            let partition = spec.partition()?.map(|p| p.blocks().to_vec());
            let value = json!({
                "spec": serde_json::from_str::<Value>(&spec.to_json()).expect("valid json"),
                "graph6": g6,
                "canonical": canonical_form(&g).to_string(),
                "n": g.n(),
                "m": g.size(),
                "partition": partition,
            });
            say!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
    }
    Ok(0)
}

fn rho(args: &RhoArgs, out: &Out) -> CliResult {
    let g = parse_graph(&args.graph)?;
    let r = spectral::spectral_radius(&g)?;
    let mut value = r.to_json(args.perron);
    value["graph"] = json!(graph6::encode(&g));
    out.emit(&value, || fmt_sig(r.rho));
    Ok(0)
}

fn free_check(args: &FreeCheckArgs, out: &Out) -> CliResult {
    let g = parse_graph(&args.graph)?;
    let pattern: PatternId = args.pattern.parse()?;
    let free = pattern.is_free(&g);
    let value = json!({ "graph": graph6::encode(&g), "pattern": pattern.to_string(), "free": free });
    out.emit(&value, || if free { "free".into() } else { "contains".into() });
    Ok(0)
}

fn quotient(args: &QuotientArgs, out: &Out) -> CliResult {
    let blocks = |s: &str| -> Result<Vec<Vec<usize>>, Failure> {
        serde_json::from_str(s).map_err(|e| usage(format!("--partition: {e}")))
    };
    let (g, p) = match (&args.graph, &args.spec) {
        (Some(g6), None) => {
            let g = parse_graph(g6)?;
            let b = blocks(args.partition.as_deref().unwrap_or_default())?;
            let p = Partition::new(g.n(), b)?;
            (g, p)
        }
        (None, Some(spec)) => {
            let spec = FamilySpec::from_json(spec)?;
            let g = spec.build()?;
            let p = match &args.partition {
                Some(s) => Partition::new(g.n(), blocks(s)?)?,
                None => spec.partition()?.ok_or_else(|| usage("family has no standard partition; pass --partition"))?,
            };
            (g, p)
        }
        _ => return Err(usage("quotient needs --graph with --partition, or --spec")),
    };
    let q = spectral::quotient_matrix(&g, &p)?;
    let cp = q.char_poly()?;
    let quotient_rho = q.spectral_radius()?;
    let graph_rho = spectral::rho(&g)?;
    let value = json!({
        "graph": graph6::encode(&g),
        "partition": p.blocks(),
        "matrix": q.b,
        "char_poly": cp.coeffs().iter().rev().map(|c| c.to_string()).collect::<Vec<_>>(),
        "char_poly_text": cp.to_string(),
        "quotient_rho": quotient_rho,
        "rho": graph_rho,
    });
    out.emit(&value, || {
        let rows: Vec<String> = q.b.iter().map(|r| format!("{r:?}")).collect();
        format!(
            "matrix: {}\nchar poly: {cp}\nquotient rho: {}\nrho: {}",
            rows.join(" "),
            fmt_sig(quotient_rho),
            fmt_sig(graph_rho)
        )
    });
    Ok(0)
}

fn largest_root(args: &RootArgs, out: &Out) -> CliResult {
    let (label, p, form) = match (&args.poly, &args.form) {
        (Some(s), None) => (s.clone(), s.parse::<Polynomial>()?, None),
        (None, Some(name)) => {
            let params = FormParams { n: args.n, k: args.k, m: args.m, t: args.t };
            let form = ClosedForm::from_name(name, params)?;
            (name.clone(), form.polynomial()?, Some(form))
        }
        _ => {
            let names: Vec<&str> = CLOSED_FORM_NAMES.iter().map(|(n, _)| *n).collect();
            return Err(usage(format!("largest-root needs --poly or --form (one of {})", names.join(", "))));
        }
    };
    let root = p.largest_real_root()?;
    let mut value = json!({ "input": label, "polynomial": p.to_string(), "root": root, "residual": p.eval(root) });
    if let Some(form) = form {
        value["form"] = serde_json::to_value(form).expect("serializable");
    }
    out.emit(&value, || fmt_sig(root));
    Ok(0)
}

fn read_graphs(args: &VerifyArgs) -> Result<Vec<Graph>, Failure> {
    if let Some(g6) = &args.graph {
        return Ok(vec![parse_graph(g6)?]);
    }
    let Some(path) = &args.input else {
        return Err(usage("this claim needs --graph or --input"));
    };
    let lines: Vec<String> = if path.as_os_str() == "-" {
        io::stdin().lock().lines().collect::<io::Result<_>>().map_err(Error::from)?
    } else {
        fs::read_to_string(path).map_err(Error::from)?.lines().map(str::to_string).collect()
    };
    lines.iter().map(|l| l.trim()).filter(|l| !l.is_empty() && !l.starts_with('#')).map(parse_graph).collect()
}

fn edge_counts(args: &VerifyArgs) -> Result<Vec<usize>, Failure> {
    let m = args.m.ok_or_else(|| usage("this claim needs --m"))?;
    let hi = args.m_max.unwrap_or(m);
    if hi < m {
        return Err(usage("--m-max is below --m"));
    }
    Ok((m..=hi).collect())
}

fn verify_verdicts(args: &VerifyArgs) -> Result<Vec<Verdict>, Failure> {
    let claim = Claim::from_id(&args.claim).map_err(|e| usage(e.to_string()))?;
    let r = || args.r.ok_or_else(|| usage("this claim needs --r"));
    let verdicts = match claim {
        Claim::CliqueBound => {
            let r = r()?;
            verify::run_batch(&read_graphs(args)?, |g| verify::check_clique_bound(g, r))?
        }
        Claim::StarBound => {
            let r = r()?;
            verify::run_batch(&read_graphs(args)?, |g| verify::check_star_bound(g, r))?
        }
        Claim::ThetaBound => verify::run_batch(&read_graphs(args)?, verify::check_theta_bound)?,
        Claim::StarOrderings => verify::run_batch(&edge_counts(args)?, |&m| verify::check_star_orderings(m))?,
        Claim::PendantOrderings => {
            let tmax = args.tmax;
            verify::run_batch(&edge_counts(args)?, |&m| verify::check_pendant_orderings(m, tmax.unwrap_or(m)))?
        }
        Claim::NeighbourhoodStructure => verify::run_batch(&read_graphs(args)?, |g| match args.vertex {
            Some(v) => verify::check_neighbourhood_structure(g, v),
            None => verify::check_neighbourhood_at_max_entry(g),
        })?,
        Claim::VertexDeletion => {
            let points: Vec<(Graph, usize)> = read_graphs(args)?
                .into_iter()
                .flat_map(|g| {
                    let vs: Vec<usize> = match args.vertex {
                        Some(v) => vec![v],
                        None => (0..g.n()).collect(),
                    };
                    vs.into_iter().map(move |v| (g.clone(), v))
                })
                .collect();
            verify::run_batch(&points, |(g, v)| verify::check_vertex_deletion(g, *v))?
        }
    };
    Ok(verdicts)
}

fn verdict_line(v: &Verdict) -> String {
    let status = serde_json::to_value(v.status).expect("serializable");
    let margin = v.margin.map(fmt_sig).unwrap_or_else(|| "-".into());
    let mut line = format!("{} {} {} margin={margin}", v.claim_id, v.params, status.as_str().unwrap_or_default());
    if v.exploratory {
        line.push_str(" (exploratory)");
    }
    line
}

fn verify(args: &VerifyArgs, out: &Out) -> CliResult {
    let verdicts = verify_verdicts(args)?;
    if out.csv {
        verify::write_csv(io::stdout().lock(), &verdicts)?;
    } else if out.json {
        let value = match verdicts.as_slice() {
            [one] => serde_json::to_value(one),
            many => serde_json::to_value(many),
        }
        .expect("serializable");
        say!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        for v in &verdicts {
            say!("{}", verdict_line(v));
        }
    }
    let failed = verdicts.iter().any(|v| matches!(v.status, Status::Fail | Status::Indeterminate));
    Ok(u8::from(failed))
}

fn report_row(r: &SearchReport) -> Vec<String> {
    vec![
        r.m.to_string(),
        r.pattern.to_string(),
        r.exclusions.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
        r.heuristic.to_string(),
        r.seed.map(|s| s.to_string()).unwrap_or_default(),
        r.restarts.map(|s| s.to_string()).unwrap_or_default(),
        r.enumerated.to_string(),
        r.excluded.to_string(),
        fmt_sig(r.max_rho),
        r.argmax.join(" "),
        r.max_rho_fewer_edges.map(fmt_sig).unwrap_or_default(),
    ]
}

const REPORT_COLUMNS: [&str; 11] = [
    "m",
    "pattern",
    "exclusions",
    "heuristic",
    "seed",
    "restarts",
    "enumerated",
    "excluded",
    "max_rho",
    "argmax",
    "max_rho_fewer_edges",
];

fn write_report_csv(reports: &[SearchReport]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    let io_err = |e: csv::Error| Failure::from(Error::from(e));
    w.write_record(REPORT_COLUMNS).map_err(io_err)?;
    for r in reports {
        w.write_record(report_row(r)).map_err(io_err)?;
    }
    w.flush().map_err(Error::from)?;
    Ok(())
}

fn report_summary(r: &SearchReport) -> String {
    let mode = match (r.seed, r.restarts) {
        (Some(seed), Some(restarts)) => format!("heuristic, seed {seed}, {restarts} restarts"),
        _ => "exhaustive".into(),
    };
    let mut s = format!(
        "m={} pattern={} ({mode})\n  classes: {} ({} excluded)\n  max rho: {}\n  argmax: {}",
        r.m,
        r.pattern,
        r.enumerated,
        r.excluded,
        fmt_sig(r.max_rho),
        r.argmax.join(" ")
    );
    if let Some(f) = r.max_rho_fewer_edges {
        s.push_str(&format!("\n  max rho with fewer edges: {}", fmt_sig(f)));
    }
    s
}

fn search(args: &SearchArgs, out: &Out) -> CliResult {
    let pattern: PatternId = args.pattern.parse()?;
    let exclusions = search::resolve_exclusions(&search::parse_exclusions(&args.exclude)?, args.m)?;
    let report = if args.heuristic {
        search::hill_climb(args.m, &pattern, &exclusions, args.restarts, args.seed)?
    } else {
        search::extremal_search(args.m, &pattern, &exclusions)?
    };
    let cached = match &args.cache {
        Some(path) => Some(search::record_in_cache(path, &report)?),
        None => None,
    };
    if out.csv {
        write_report_csv(std::slice::from_ref(&report))?;
    } else {
        let mut value = serde_json::to_value(&report).expect("serializable");
        if let Some(hit) = cached {
            value["cache_hit"] = json!(hit);
        }
        out.emit(&value, || report_summary(&report));
    }
    Ok(0)
}

fn report(args: &ReportArgs, out: &Out) -> CliResult {
    let reports = search::read_cache(&args.cache)?;
    if out.csv {
        write_report_csv(&reports)?;
    } else if out.json {
        say!("{}", serde_json::to_string_pretty(&reports).expect("serializable"));
    } else {
        for r in &reports {
            say!("{}", report_summary(r));
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> CliResult {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| usage(format!("--threads: {e}")))?;
    }
    let out = Out { json: cli.json, csv: cli.csv };
    match &cli.verb {
        Verb::Family(a) => family(a),
        Verb::Rho(a) => rho(a, &out),
        Verb::FreeCheck(a) => free_check(a, &out),
        Verb::Quotient(a) => quotient(a, &out),
        Verb::LargestRoot(a) => largest_root(a, &out),
        Verb::Verify(a) => verify(a, &out),
        Verb::Search(a) => search(a, &out),
        Verb::Report(a) => report(a, &out),
    }
}

fn report_failure(f: &Failure, json: bool) {
    if json {
        let value = json!({ "code": f.code, "kind": f.kind, "message": f.message });
        say!("{value}");
    } else {
        eprintln!("error: {}", f.message);
    }
}

fn main() -> ExitCode {
    let json = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            if json {
                report_failure(&usage(e.to_string().trim_end()), true);
            } else {
                let _ = e.print();
            }
            return ExitCode::from(2);
        }
    };
    let code = match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            report_failure(&f, cli.json);
            f.code
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
