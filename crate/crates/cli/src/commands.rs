use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use unmixed::corpus::random_corpus_fixed;
use unmixed::graph::{cover_lattice, graph_from_lattice};
use unmixed::ideal::edge_ideal;
use unmixed::io::{self, FormatError, Instance};
use unmixed::oracle::{betti_oracle, OracleConfig};
use unmixed::resolution::build_resolution;
use unmixed::verify::{verify_lattice, InstanceVerdict, Level, Mutation, Summary, VerifyConfig};
use unmixed::{betti, fixtures, CoverLattice, InvariantReport};

use crate::{Common, Format, LevelArg};

/// Largest ground size the oracle accepts.
const ORACLE_MAX_N: usize = 7;

pub enum CliError {
    /// Bad input: exit 1.
    Invalid { code: String, message: String },
    /// A check failed: exit 2.
    Mismatch(Value),
}

impl CliError {
    fn invalid(code: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Invalid { code: code.into(), message: message.into() }
    }

    pub fn report(self) -> ExitCode {
        match self {
            CliError::Invalid { code, message } => {
                eprintln!("{}", json!({"error": code, "message": message}));
                ExitCode::from(1)
            }
            CliError::Mismatch(v) => {
                eprintln!("{}", serde_json::to_string_pretty(&json!({"mismatch": v})).expect("json"));
                ExitCode::from(2)
            }
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::invalid(e.code(), e.to_string())
    }
}

impl From<unmixed::verify::VerifyError> for CliError {
    fn from(e: unmixed::verify::VerifyError) -> Self {
        CliError::invalid("Oracle", e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::invalid("Io", format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, content).map_err(|e| io_err(path, e))
}

/// A loaded instance: the lattice, and whether it came from a graph file.
struct Loaded {
    name: String,
    lattice: CoverLattice,
    from_graph: bool,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let name = path.display().to_string();
    match io::parse_instance(&text)? {
        Instance::Lattice(lattice) => Ok(Loaded { name, lattice, from_graph: false }),
        Instance::Graph(g) => {
            let g = g.normalize().map_err(FormatError::from)?;
            let lattice = cover_lattice(&g).map_err(FormatError::from)?;
            Ok(Loaded { name, lattice, from_graph: true })
        }
    }
}

fn load_all(path: &Path) -> Result<Vec<Loaded>, CliError> {
    if !path.is_dir() {
        return Ok(vec![load(path)?]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| io_err(path, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && matches!(p.extension().and_then(|x| x.to_str()), Some("graph" | "lattice" | "json" | "txt"))
        })
        .collect();
    files.sort();
    files.iter().map(|p| load(p)).collect()
}

fn fixture_instances() -> Vec<Loaded> {
    fixtures::named()
        .into_iter()
        .map(|(name, lattice)| Loaded { name: name.to_string(), lattice, from_graph: false })
        .collect()
}

fn level(common: &Common) -> Level {
    match common.level {
        LevelArg::Formulas => Level::Formulas,
        LevelArg::Oracle => Level::Oracle,
    }
}

fn config(common: &Common, mutation: Option<Mutation>) -> VerifyConfig {
    VerifyConfig {
        level: level(common),
        field: common.field,
        // every multidegree of a ground size 7 problem fits
        closure_cap: 1 << (2 * ORACLE_MAX_N),
        mutation,
    }
}

fn check_oracle_size(common: &Common, lattices: &[&CoverLattice]) -> Result<(), CliError> {
    if common.level == LevelArg::Oracle {
        if let Some(l) = lattices.iter().find(|l| l.n() > ORACLE_MAX_N) {
            return Err(CliError::invalid(
                "OracleTooLarge",
                format!("the oracle needs n <= {ORACLE_MAX_N}, got n = {}", l.n()),
            ));
        }
    }
    Ok(())
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn with_timestamp(mut v: Value, common: &Common) -> Value {
    if !common.no_timestamp {
        v["timestamp"] = json!(timestamp());
    }
    v
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn failed_checks(v: &InstanceVerdict) -> (Vec<&'static str>, Vec<&'static str>) {
    let failed = v.checks.iter().filter(|c| !c.passed && !c.advisory).map(|c| c.property).collect();
    let notes = v.checks.iter().filter(|c| !c.passed && c.advisory).map(|c| c.property).collect();
    (failed, notes)
}

pub fn analyze(input: &Path, common: &Common) -> Result<(), CliError> {
    let loaded = load(input)?;
    let l = &loaded.lattice;
    check_oracle_size(common, &[l])?;
    let report = InvariantReport::from_lattice(l);
    let res = build_resolution(l).map_err(|e| CliError::invalid("Resolution", e.to_string()))?;
    let multidegrees: Vec<Vec<String>> =
        res.levels.iter().map(|lv| lv.iter().map(|g| g.multidegree.to_string()).collect()).collect();

    let mut verdict = None;
    if common.level == LevelArg::Oracle {
        verdict = Some(verify_lattice(l, &config(common, None))?);
    }

    match common.format {
        Format::Json => {
            let mut doc = json!({
                "input": loaded.name,
                "source": if loaded.from_graph { "graph" } else { "lattice" },
                "lattice": io::lattice_to_json(l),
                "graph": io::graph_to_json(&graph_from_lattice(l)),
                "report": report,
                "resolution": {"level_ranks": res.level_ranks(), "multidegrees": multidegrees},
            });
            if let Some(v) = &verdict {
                let (failed, notes) = failed_checks(v);
                doc["oracle"] = json!({
                    "verdict": if v.passed() { "MATCH" } else { "MISMATCH" },
                    "summary": v.oracle,
                    "failed": failed,
                    "notes": notes,
                });
            }
            print_json(&with_timestamp(doc, common));
        }
        Format::Text => {
            let table = match &verdict {
                Some(_) => Some(
                    betti_oracle(
                        &edge_ideal(&graph_from_lattice(l)),
                        OracleConfig { field: common.field, closure_cap: 1 << (2 * ORACLE_MAX_N) },
                    )
                    .map_err(|e| CliError::invalid("Oracle", e.to_string()))?,
                ),
                None => None,
            };
            let mut out = format!("input: {}\n", loaded.name);
            out.push_str(&report.render_text(table.as_ref()));
            let _ = writeln!(out, "resolution of H, level ranks: {:?}", res.level_ranks());
            for (i, lv) in multidegrees.iter().enumerate() {
                let _ = writeln!(out, "  F_{i}: {}", lv.join(" "));
            }
            if let Some(v) = &verdict {
                let (failed, notes) = failed_checks(v);
                let _ = writeln!(out, "oracle verdict: {}", if v.passed() { "MATCH" } else { "MISMATCH" });
                for f in failed {
                    let _ = writeln!(out, "  failed: {f}");
                }
                for f in notes {
                    let _ = writeln!(out, "  note: {f}");
                }
            }
            print!("{out}");
        }
    }
    match verdict {
        Some(v) if !v.passed() => {
            let (failed, _) = failed_checks(&v);
            let first = v.checks.iter().find(|c| c.property == failed[0]).expect("failed check exists");
            Err(CliError::Mismatch(json!({"input": loaded.name, "property": first.property, "detail": first.detail})))
        }
        _ => Ok(()),
    }
}

fn run_suite(instances: &[Loaded], cfg: &VerifyConfig) -> Result<(Summary, Vec<InstanceVerdict>), CliError> {
    let verdicts: Vec<InstanceVerdict> =
        instances.par_iter().map(|x| verify_lattice(&x.lattice, cfg)).collect::<Result<_, _>>()?;
    let mut summary = Summary::default();
    for (k, (x, v)) in instances.iter().zip(&verdicts).enumerate() {
        summary.add(k, &x.lattice, v);
    }
    Ok((summary, verdicts))
}

fn emit_summary(summary: &Summary, names: &[String], common: &Common) -> Result<(), CliError> {
    match common.format {
        Format::Json => print_json(&with_timestamp(json!({"instances": names, "summary": summary}), common)),
        Format::Text => {
            if common.level == LevelArg::Oracle {
                println!("{} instance(s), oracle matches: {}", summary.instances, summary.oracle_matches);
            } else {
                println!("{} instance(s)", summary.instances);
            }
            print!("{}", summary.render());
        }
    }
    match summary.first_failure() {
        None => Ok(()),
        Some((property, cx)) => Err(CliError::Mismatch(json!({"property": property, "counterexample": cx}))),
    }
}

pub fn verify(input: Option<&Path>, mutate: bool, common: &Common) -> Result<(), CliError> {
    let instances = match input {
        Some(p) => load_all(p)?,
        None => fixture_instances(),
    };
    check_oracle_size(common, &instances.iter().map(|x| &x.lattice).collect::<Vec<_>>())?;
    let cfg = config(common, mutate.then_some(Mutation::NegateDifferential));
    let (summary, _) = run_suite(&instances, &cfg)?;
    let names: Vec<String> = instances.iter().map(|x| x.name.clone()).collect();
    emit_summary(&summary, &names, common)
}

pub fn random(n: usize, count: usize, seed: u64, out: Option<&Path>, common: &Common) -> Result<(), CliError> {
    if common.level == LevelArg::Oracle && n > ORACLE_MAX_N {
        return Err(CliError::invalid("OracleTooLarge", format!("the oracle needs n <= {ORACLE_MAX_N}, got n = {n}")));
    }
    let corpus = random_corpus_fixed(count, n, seed).map_err(|e| CliError::from(FormatError::from(e)))?;
    let instances: Vec<Loaded> = corpus
        .into_iter()
        .map(|e| Loaded { name: format!("{:04}", e.index), lattice: e.lattice, from_graph: false })
        .collect();
    let (summary, verdicts) = run_suite(&instances, &config(common, None))?;
    if let Some(dir) = out {
        let mut reports = String::new();
        for (x, v) in instances.iter().zip(&verdicts) {
            write_file(&dir.join("instances").join(format!("{}.lattice", x.name)), &io::lattice_to_text(&x.lattice))?;
            let line = InstanceLine {
                index: &x.name,
                lattice: io::lattice_to_json(&x.lattice),
                report: InvariantReport::from_lattice(&x.lattice),
                passed: v.passed(),
                oracle: v.oracle.as_ref().map(|o| json!(o)),
            };
            reports.push_str(&serde_json::to_string(&line).expect("json"));
            reports.push('\n');
        }
        write_file(&dir.join("reports.jsonl"), &reports)?;
        let doc = with_timestamp(json!({"n": n, "count": count, "seed": seed, "summary": summary}), common);
        write_file(&dir.join("summary.json"), &serde_json::to_string_pretty(&doc).expect("json"))?;
    }
    let names: Vec<String> = instances.iter().map(|x| x.name.clone()).collect();
    emit_summary(&summary, &names, common)
}

#[derive(Serialize)]
struct InstanceLine<'a> {
    index: &'a str,
    lattice: Value,
    report: InvariantReport,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Value>,
}

pub enum Source {
    Fixtures,
    Path(PathBuf),
    Random { n: usize, count: usize, seed: u64 },
}

#[derive(Serialize)]
struct Finding {
    index: usize,
    name: String,
    lattice: Value,
    t: u64,
    b_g: usize,
    strict: bool,
}

pub fn search_tightness(source: Source, out: Option<&Path>, common: &Common) -> Result<(), CliError> {
    let instances = match source {
        Source::Fixtures => fixture_instances(),
        Source::Path(p) => load_all(&p)?,
        Source::Random { n, count, seed } => random_corpus_fixed(count, n, seed)
            .map_err(|e| CliError::from(FormatError::from(e)))?
            .into_iter()
            .map(|e| Loaded { name: format!("{:04}", e.index), lattice: e.lattice, from_graph: false })
            .collect(),
    };
    if let Some(l) = instances.iter().find(|x| x.lattice.n() > ORACLE_MAX_N) {
        return Err(CliError::invalid(
            "OracleTooLarge",
            format!("the oracle needs n <= {ORACLE_MAX_N}, got n = {}", l.lattice.n()),
        ));
    }
    let ocfg = OracleConfig { field: common.field, closure_cap: 1 << (2 * ORACLE_MAX_N) };
    let rows: Vec<Finding> = instances
        .par_iter()
        .enumerate()
        .map(|(index, x)| {
            let l = &x.lattice;
            let table = betti_oracle(&edge_ideal(&graph_from_lattice(l)), ocfg)?;
            let t = betti::invariants_from_table(&table, 2 * l.n()).t;
            let b_g = l.b_set().len();
            Ok(Finding { index, name: x.name.clone(), lattice: io::lattice_to_json(l), t, b_g, strict: t > b_g as u64 })
        })
        .collect::<Result<_, unmixed::oracle::OracleError>>()
        .map_err(|e| CliError::invalid("Oracle", e.to_string()))?;

    let violations: Vec<&Finding> = rows.iter().filter(|r| r.t < r.b_g as u64).collect();
    let strict: Vec<&Finding> = rows.iter().filter(|r| r.strict).collect();
    let equal = rows.iter().filter(|r| r.t == r.b_g as u64).count();
    let rate = if rows.is_empty() { 1.0 } else { equal as f64 / rows.len() as f64 };

    let mut jsonl = String::new();
    for r in &strict {
        jsonl.push_str(&serde_json::to_string(r).expect("json"));
        jsonl.push('\n');
    }
    let summary = json!({
        "instances": rows.len(),
        "equal": equal,
        "strict": strict.len(),
        "violations": violations.len(),
        "equality_rate": rate,
    });
    if let Some(dir) = out {
        write_file(&dir.join("findings.jsonl"), &jsonl)?;
        let doc = with_timestamp(json!({"summary": summary, "all": rows}), common);
        write_file(&dir.join("tightness.json"), &serde_json::to_string_pretty(&doc).expect("json"))?;
    }
    match common.format {
        Format::Json => print_json(&with_timestamp(json!({"summary": summary, "findings": strict}), common)),
        Format::Text => {
            println!(
                "{} instance(s): t = |B_G| on {equal}, t > |B_G| on {}, equality rate {:.4}",
                rows.len(),
                strict.len(),
                rate
            );
            for r in &strict {
                println!("strict: {} t = {} |B_G| = {}", r.name, r.t, r.b_g);
            }
        }
    }
    match violations.first() {
        None => Ok(()),
        Some(v) => Err(CliError::Mismatch(json!({"property": "last_betti_bound", "counterexample": v}))),
    }
}

pub fn fixtures(out: &Path, format: Format) -> Result<(), CliError> {
    for (name, l) in fixtures::named() {
        let g = graph_from_lattice(&l);
        match format {
            Format::Text => {
                write_file(&out.join(format!("{name}.lattice")), &io::lattice_to_text(&l))?;
                write_file(&out.join(format!("{name}.graph")), &io::graph_to_text(&g))?;
            }
            Format::Json => {
                let lj = serde_json::to_string_pretty(&io::lattice_to_json(&l)).expect("json");
                let gj = serde_json::to_string_pretty(&io::graph_to_json(&g)).expect("json");
                write_file(&out.join(format!("{name}.lattice.json")), &lj)?;
                write_file(&out.join(format!("{name}.graph.json")), &gj)?;
            }
        }
        println!("{name}");
    }
    Ok(())
}
