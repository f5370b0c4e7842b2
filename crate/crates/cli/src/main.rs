use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wheelpath::certify::{emit, verify_certificate, verify_document};
use wheelpath::construct::{build_structure, ConstructOptions, Constructed};
use wheelpath::lemmas::{run_lemmas, Fault};
use wheelpath::pairing::{pair_structure, pi3_lower, pi3_upper, random_triple, Pi3Report, SampleSpec, Verdict};
use wheelpath::{Budget, CayleyGraph, Certificate, ConstructError, Family, Permutation};

const EXIT_USAGE: u8 = 2;
const EXIT_CONSTRUCTION: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_MISMATCH: u8 = 5;

#[derive(Parser)]
#[command(name = "wheelpath", version, about = "Disjoint path structures in wheel-generated Cayley graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory for output files when --out is not given.
    #[arg(long, env = "WHEELPATH_OUT_DIR", global = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Export a graph as DOT or an edge list.
    Gen(GenArgs),
    /// Build and certify a structure for three vertices.
    Structure(StructureArgs),
    /// Compare constructed and upper bounds on 3-path-connectivity.
    Pi3(Pi3Args),
    /// Run the structural checklist.
    Lemmas(LemmaArgs),
    /// Re-check a certificate file.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Edgelist,
    Certificate,
    Report,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "wheel")]
    family: String,
    #[arg(long, value_enum, default_value = "dot")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StructureArgs {
    #[arg(long)]
    n: usize,
    /// Three permutations separated by semicolons, e.g. "e;(1 2 3);[3,1,2,4,5]".
    #[arg(long, conflicts_with = "random")]
    omega: Option<String>,
    /// Draw the three vertices from --seed.
    #[arg(long)]
    random: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Fail instead of falling back to the generic solver.
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value = "certificate")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Pi3Args {
    #[arg(long)]
    n: usize,
    /// Evaluate every triple (n = 4 only).
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value = "report")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct VerifyArgs {
    path: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = cli.out_dir.clone();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a, out_dir),
        Command::Structure(a) => cmd_structure(a, out_dir),
        Command::Pi3(a) => cmd_pi3(a, out_dir),
        Command::Lemmas(a) => cmd_lemmas(a, out_dir),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn graph(n: usize, family: Family) -> Result<CayleyGraph, Failure> {
    if n < family.min_degree() {
        return Err(fail(EXIT_USAGE, format!("{family} requires n >= {}", family.min_degree())));
    }
    CayleyGraph::build(n, family).map_err(|e| fail(EXIT_USAGE, e.to_string()))
}

/// `--out`, else `<out-dir>/<name>`, else nothing (stdout).
fn target(out: Option<PathBuf>, out_dir: Option<PathBuf>, name: &str) -> Option<PathBuf> {
    out.or_else(|| out_dir.map(|d| d.join(name)))
}

fn write(path: &PathBuf, content: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, content).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

/// Text to stdout; with a path, also the text there and JSON beside it.
fn report<T: Serialize>(text: &str, sidecar: &T, path: Option<PathBuf>) -> Result<(), Failure> {
    print!("{text}");
    if let Some(p) = path {
        write(&p, text)?;
        let json = p.with_extension("json");
        let mut body = serde_json::to_string_pretty(sidecar).expect("serialisable");
        body.push('\n');
        write(&json, &body)?;
        println!("wrote {} and {}", p.display(), json.display());
    }
    Ok(())
}

fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c + 1 == r.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<w$}  ", w = widths[c]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn pair(k: &str, v: impl ToString) -> Vec<String> {
    vec![k.to_string(), v.to_string()]
}

fn cmd_gen(a: GenArgs, out_dir: Option<PathBuf>) -> Outcome {
    let family: Family = a.family.parse().map_err(|e: wheelpath::PermError| fail(EXIT_USAGE, e.to_string()))?;
    let g = graph(a.n, family)?;
    let (body, ext) = match a.format {
        Format::Dot => (g.to_dot(), "dot"),
        Format::Edgelist => (g.to_edge_list(), "txt"),
        _ => return Err(fail(EXIT_USAGE, "gen writes dot or edgelist")),
    };
    let short = if family == Family::Wheel { "cw" } else { "bs" };
    match target(a.out, out_dir, &format!("{short}{}.{ext}", a.n)) {
        Some(p) => {
            write(&p, &body)?;
            println!("wrote {} ({} vertices, {} edges)", p.display(), g.vertex_count(), g.edge_count());
        }
        None => print!("{body}"),
    }
    Ok(0)
}

fn parse_omega(g: &CayleyGraph, text: &str) -> Result<[usize; 3], Failure> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 3 {
        return Err(fail(EXIT_USAGE, format!("omega needs three permutations separated by ';', got {}", parts.len())));
    }
    let mut out = [0usize; 3];
    for (i, p) in parts.iter().enumerate() {
        let perm = Permutation::parse_with_degree(p, g.n()).map_err(|e| fail(EXIT_USAGE, format!("{p:?}: {e}")))?;
        out[i] = g.vertex(&perm).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    }
    if out[0] == out[1] || out[0] == out[2] || out[1] == out[2] {
        return Err(fail(EXIT_USAGE, "omega repeats a vertex"));
    }
    Ok(out)
}

fn construct_failure(e: ConstructError) -> Failure {
    match e {
        ConstructError::Topology(t) => fail(EXIT_USAGE, t.to_string()),
        other => fail(EXIT_CONSTRUCTION, other.to_string()),
    }
}

fn certify(g: &CayleyGraph, built: &Constructed, seed: u64) -> Result<Certificate, Failure> {
    let paths = pair_structure(&g.full_view(), &built.structure).map_err(|e| fail(EXIT_VERIFY, e.to_string()))?;
    Ok(Certificate::for_structure(g, built, &paths, seed))
}

#[derive(Serialize)]
struct StructureSummary<'a> {
    n: usize,
    omega: &'a [String; 3],
    case: String,
    bundles: [usize; 3],
    omega_paths: usize,
    fallback_reason: Option<&'a str>,
    verified: bool,
}

fn cmd_structure(a: StructureArgs, out_dir: Option<PathBuf>) -> Outcome {
    let g = graph(a.n, Family::Wheel)?;
    let seed = a.seed.unwrap_or(0);
    let omega = match (&a.omega, a.random) {
        (Some(text), _) => parse_omega(&g, text)?,
        (None, true) => {
            let s = a.seed.ok_or_else(|| fail(EXIT_USAGE, "--random needs --seed"))?;
            random_triple(g.vertex_count(), s)
        }
        (None, false) => return Err(fail(EXIT_USAGE, "give --omega or --random --seed S")),
    };
    let options = ConstructOptions {
        strict: a.strict,
        budget: Budget { seed, ..Budget::default() },
    };
    let built = build_structure(&g, omega, options).map_err(construct_failure)?;
    let cert = certify(&g, &built, seed)?;
    let verdict = verify_certificate(&cert);
    let summary = StructureSummary {
        n: a.n,
        omega: &cert.omega,
        case: built.trace.case_id.to_string(),
        bundles: built.structure.counts(),
        omega_paths: cert.omega_paths.len(),
        fallback_reason: built.trace.fallback_reason.as_deref(),
        verified: verdict.passed(),
    };
    let mut rows = vec![
        pair("n", a.n),
        pair("a", &cert.omega[0]),
        pair("b", &cert.omega[1]),
        pair("c", &cert.omega[2]),
        pair("case", &summary.case),
        pair("bundles (ab, ac, bc)", format!("{:?}", summary.bundles)),
        pair("omega paths", summary.omega_paths),
        pair("verified", if summary.verified { "pass" } else { "FAIL" }),
    ];
    if let Some(r) = summary.fallback_reason {
        rows.push(pair("fallback reason", r));
    }
    let text = align(&rows);
    let path = target(a.out, out_dir, &format!("structure-n{}.{}", a.n, if a.format == Format::Report { "txt" } else { "json" }));
    match a.format {
        Format::Certificate => match path {
            Some(p) => {
                write(&p, &emit(&cert))?;
                print!("{text}");
                println!("wrote {}", p.display());
            }
            None => print!("{}", emit(&cert)),
        },
        Format::Report => report(&text, &summary, path)?,
        _ => return Err(fail(EXIT_USAGE, "structure writes certificate or report")),
    }
    if !verdict.passed() {
        for v in &verdict.violations {
            eprintln!("violation: {v}");
        }
        return Ok(EXIT_VERIFY);
    }
    Ok(0)
}

#[derive(Serialize)]
struct Pi3Summary {
    report: Pi3Report,
    sample: SampleSpec,
    case_counts: BTreeMap<String, usize>,
    witness_paths: Vec<Vec<usize>>,
}

fn cmd_pi3(a: Pi3Args, out_dir: Option<PathBuf>) -> Outcome {
    let g = graph(a.n, Family::Wheel)?;
    let spec = if a.exhaustive {
        if a.n != 4 {
            return Err(fail(EXIT_USAGE, "--exhaustive is only supported at n = 4"));
        }
        SampleSpec::Exhaustive
    } else {
        let samples = a.samples.ok_or_else(|| fail(EXIT_USAGE, "give --exhaustive or --samples N --seed S"))?;
        let seed = a.seed.ok_or_else(|| fail(EXIT_USAGE, "--samples needs --seed"))?;
        SampleSpec::Stratified { samples, seed }
    };
    if a.jobs == 0 {
        return Err(fail(EXIT_USAGE, "--jobs must be at least 1"));
    }
    let options = ConstructOptions {
        strict: a.strict,
        ..ConstructOptions::default()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let lower = pool.install(|| pi3_lower(&g, spec, options)).map_err(construct_failure)?;
    let upper = pi3_upper(&g);
    let rep = Pi3Report::new(a.n, &lower, &upper);
    let mut rows = vec![
        pair("n", a.n),
        pair("triples evaluated", rep.evaluated),
        pair("lower (constructed)", rep.lower),
        pair("lower witness", format!("{:?}", rep.lower_witness)),
        pair("upper (3k - r)/4", rep.upper),
        pair("r", rep.r),
        pair("r witness", format!("{:?}", rep.r_witness)),
        pair("formula (6n - 9)/4", rep.formula),
        pair("verdict", format!("{:?}", rep.verdict).to_uppercase()),
    ];
    for (case, count) in &lower.case_counts {
        rows.push(pair(&format!("case {case}"), count));
    }
    let text = align(&rows);
    match a.format {
        Format::Report => {
            let summary = Pi3Summary {
                report: rep.clone(),
                sample: spec,
                case_counts: lower.case_counts.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                witness_paths: lower.witness.paths.iter().map(|p| p.vertices().to_vec()).collect(),
            };
            report(&text, &summary, target(a.out, out_dir, &format!("pi3-n{}.txt", a.n)))?;
        }
        Format::Certificate => {
            let built = build_structure(&g, lower.witness.omega, options).map_err(construct_failure)?;
            let cert = certify(&g, &built, 0)?.with_report(rep.clone());
            match target(a.out, out_dir, &format!("pi3-n{}.json", a.n)) {
                Some(p) => {
                    print!("{text}");
                    write(&p, &emit(&cert))?;
                    println!("wrote {}", p.display());
                }
                None => print!("{}", emit(&cert)),
            }
            if !verify_certificate(&cert).passed() {
                return Ok(EXIT_VERIFY);
            }
        }
        _ => return Err(fail(EXIT_USAGE, "pi3 writes report or certificate")),
    }
    Ok(if rep.verdict == Verdict::Match { 0 } else { EXIT_MISMATCH })
}

fn cmd_lemmas(a: LemmaArgs, out_dir: Option<PathBuf>) -> Outcome {
    if !(4..=5).contains(&a.n) {
        return Err(fail(EXIT_USAGE, "lemmas supports n = 4 or 5"));
    }
    let fault = if a.inject_fault { Fault::DropCrossEdge } else { Fault::None };
    let rows = run_lemmas(a.n, fault).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let mut table = vec![vec!["lemma".into(), "check".into(), "expected".into(), "observed".into(), "result".into()]];
    for r in &rows {
        table.push(vec![
            r.lemma.clone(),
            r.check.clone(),
            r.expected.clone(),
            r.observed.clone(),
            if r.passed { "PASS".into() } else { "FAIL".into() },
        ]);
    }
    report(&align(&table), &rows, target(a.out, out_dir, &format!("lemmas-n{}.txt", a.n)))?;
    Ok(if rows.iter().all(|r| r.passed) { 0 } else { EXIT_MISMATCH })
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let doc = fs::read_to_string(&a.path).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", a.path.display())))?;
    let verdict = verify_document(&doc).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let rows: Vec<Vec<String>> = verdict
        .checks
        .iter()
        .map(|c| vec![c.name.clone(), if c.passed { "PASS".into() } else { "FAIL".into() }])
        .collect();
    print!("{}", align(&rows));
    for v in &verdict.violations {
        println!("violation: {v}");
    }
    Ok(if verdict.passed() { 0 } else { EXIT_VERIFY })
}
