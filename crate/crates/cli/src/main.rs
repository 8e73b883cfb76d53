//! Command-line front end: analyze an extension, run verification suites,
//! count conjugacy classes and compare correlators across the decomposition.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use gerbe_dual::cohft::{
    self, c_regular_classes, counting_table, gw_decomposition_rows, GwSetup, GwTolerance, Method, OmegaEvaluator,
};
use gerbe_dual::groups::{catalog_entry, GroupExtension};
use gerbe_dual::io::{dual_report, parse_extension, parse_group, parse_json, parse_normal};
use gerbe_dual::mackey::{DualData, DualOptions};
use gerbe_dual::morita::CenterIso;
use gerbe_dual::report::all_pass;
use gerbe_dual::reps::{
    dump_irreps, irreducible_representations, irreducible_representations_with, load_irreps, IrrepDump,
};
use gerbe_dual::verify::{run_suite, Suite, VerifyOptions};
use gerbe_dual::Error;

const EXIT_VERIFY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_CAP: u8 = 4;

#[derive(Parser)]
#[command(
    name = "gerbe-dual",
    version,
    about = "Mackey duals of finite group extensions and their correlators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Action on irreps, orbits, stabilizers, the cocycle and the dual space.
    Analyze(Common),
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Random elements sampled per Morita identity.
        #[arg(long, default_value_t = gerbe_dual::morita::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Conjugacy classes of H over each class of Q, directly and by formula.
    Count(Common),
    /// Compare correlators of BH with those of the dual orbit by orbit.
    Gw {
        #[command(flatten)]
        common: Common,
        #[arg(short, long, default_value_t = 0)]
        genus: usize,
        #[arg(short, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "frobenius")]
        method: Method,
    },
}

#[derive(Args)]
struct Source {
    /// Built-in catalog entry.
    #[arg(long, group = "source")]
    catalog: Option<String>,
    /// Extension JSON: {"H", "normal"} or {"G", "Q", "action", "tau"}.
    #[arg(long, group = "source")]
    extension: Option<PathBuf>,
    /// Group JSON for H; needs --normal.
    #[arg(long, group = "source", requires = "normal")]
    group: Option<PathBuf>,
    /// Normal subgroup JSON, a list of indices of H.
    #[arg(long, requires = "group")]
    normal: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Tolerance for clustering eigenvalues while splitting irreps.
    #[arg(long, default_value_t = 1e-6)]
    cluster_tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Snap cocycle values to nearby roots of unity.
    #[arg(long)]
    snap_roots: bool,
    #[arg(long, default_value_t = cohft::DEFAULT_BRUTE_CAP)]
    brute_cap: u128,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Multiply the cocycle by random phases of this size (fault injection).
    #[arg(long)]
    perturb_c: Option<f64>,
    /// Irreps of G from a previous --dump-irreps.
    #[arg(long)]
    load_irreps: Option<PathBuf>,
    #[arg(long)]
    dump_irreps: Option<PathBuf>,
}

struct RunConfig {
    tolerance: f64,
    cluster_tolerance: f64,
    seed: u64,
    snap_roots: bool,
    brute_cap: u128,
    out_path: Option<PathBuf>,
    format: Format,
}

impl RunConfig {
    fn from_common(c: &Common) -> Result<Self> {
        if !(c.tol > 0.0 && c.cluster_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()).into());
        }
        if c.brute_cap == 0 {
            return Err(Error::InvalidInput("--brute-cap must be positive".into()).into());
        }
        Ok(Self {
            tolerance: c.tol,
            cluster_tolerance: c.cluster_tol,
            seed: c.seed,
            snap_roots: c.snap_roots,
            brute_cap: c.brute_cap,
            out_path: c.out.clone(),
            format: c.format,
        })
    }

    fn to_json(&self) -> Value {
        json!({
            "tolerance": self.tolerance,
            "cluster_tolerance": self.cluster_tolerance,
            "seed": self.seed,
            "snap_roots": self.snap_roots,
            "brute_cap": self.brute_cap.to_string(),
        })
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(parse_json(&text)?)
}

fn load_extension(src: &Source) -> Result<GroupExtension> {
    if let Some(name) = &src.catalog {
        return Ok(catalog_entry(name)?.extension);
    }
    if let Some(path) = &src.extension {
        return Ok(parse_extension(&read_json(path)?)?);
    }
    if let (Some(g), Some(n)) = (&src.group, &src.normal) {
        let h = parse_group(&read_json(g)?)?;
        let normal = parse_normal(&read_json(n)?)?;
        return Ok(GroupExtension::from_quotient(&h, &normal)?);
    }
    Err(Error::Parse("give --catalog, --extension, or --group with --normal".into()).into())
}

fn build_dual(common: &Common, cfg: &RunConfig) -> Result<DualData> {
    let ext = load_extension(&common.source)?;
    let irreps = match &common.load_irreps {
        Some(path) => {
            let dump: Vec<IrrepDump> =
                serde_json::from_value(read_json(path)?).map_err(|e| Error::Parse(format!("irrep dump: {e}")))?;
            load_irreps(&ext.g, &dump, cfg.tolerance.max(1e-9))?
        }
        None => irreducible_representations_with(&ext.g, cfg.seed, cfg.cluster_tolerance)?,
    };
    let opts = DualOptions {
        seed: cfg.seed,
        tol: cfg.tolerance,
        snap_roots: cfg.snap_roots,
    };
    let mut dual = DualData::from_irreps(&ext, irreps, opts)?;
    if let Some(path) = &common.dump_irreps {
        // full precision, so a reloaded set validates at the same tolerance
        write_atomic(path, &serde_json::to_string(&dump_irreps(&dual.irreps))?)?;
    }
    if let Some(eps) = common.perturb_c {
        dual.perturb_cocycle(eps);
    }
    Ok(dual)
}

/// Rounds floats to 12 decimals and maps -0 to 0; keys are already sorted.
fn canonicalize(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            let r = (x * 1e12).round() / 1e12;
            let r = if !r.is_finite() {
                x
            } else if r == 0.0 {
                0.0
            } else {
                r
            };
            serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.iter().map(canonicalize).collect()),
        Value::Object(o) => Value::Object(
            o.iter()
                .map(|(k, v)| (k.clone(), canonicalize(v)))
                .collect::<Map<_, _>>(),
        ),
        other => other.clone(),
    }
}

fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonicalize(v)).expect("serializable");
    s.push('\n');
    s
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(cfg: &RunConfig, json: &Value, csv: impl FnOnce() -> String) -> Result<()> {
    let text = match cfg.format {
        Format::Json => canonical_json(json),
        Format::Csv => csv(),
    };
    match &cfg.out_path {
        Some(p) => write_atomic(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn round12(x: f64) -> String {
    let r = (x * 1e12).round() / 1e12;
    format!("{:.12}", if r == 0.0 { 0.0 } else { r })
}

fn envelope(command: &str, cfg: &RunConfig, dual: &DualData, body: Value) -> Value {
    json!({
        "command": command,
        "config": cfg.to_json(),
        "gauge": dual.gauge,
        "result": body,
    })
}

fn cmd_analyze(common: &Common) -> Result<u8> {
    let cfg = RunConfig::from_common(common)?;
    let dual = build_dual(common, &cfg)?;
    let report = dual_report(&dual)?;
    let stabs = dual.stabilizers()?;
    let csv = || {
        csv_table(
            &[
                "orbit",
                "size",
                "dim",
                "stabilizer_order",
                "regular_classes",
                "center_dim",
            ],
            dual.orbits.iter().zip(&stabs).enumerate().map(|(k, (o, s))| {
                let r = c_regular_classes(s, cfg.tolerance);
                vec![
                    k.to_string(),
                    o.members.len().to_string(),
                    dual.dim(o.representative).to_string(),
                    s.order().to_string(),
                    r.regular_count.to_string(),
                    r.center_dim.to_string(),
                ]
            }),
        )
    };
    emit(&cfg, &envelope("analyze", &cfg, &dual, report), csv)?;
    eprintln!(
        "analyze: {} orbits on {} irreps of G",
        dual.orbits.len(),
        dual.num_irreps()
    );
    Ok(0)
}

fn cmd_verify(common: &Common, suite: Suite, samples: usize) -> Result<u8> {
    let cfg = RunConfig::from_common(common)?;
    let dual = build_dual(common, &cfg)?;
    let opts = VerifyOptions {
        tol: cfg.tolerance,
        samples,
        seed: cfg.seed,
        brute_cap: cfg.brute_cap,
        ..Default::default()
    };
    let checks = run_suite(&dual, suite, &opts)?;
    let pass = all_pass(&checks);
    let body = json!({ "suite": suite, "pass": pass, "checks": checks });
    let csv = || {
        csv_table(
            &["check", "pass"],
            checks.iter().map(|c| vec![c.name.clone(), c.pass.to_string()]),
        )
    };
    emit(&cfg, &envelope("verify", &cfg, &dual, body), csv)?;
    for c in checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {} (residual {:e})", c.name, c.max_residual);
    }
    eprintln!(
        "verify {suite}: {} of {} checks pass",
        checks.iter().filter(|c| c.pass).count(),
        checks.len()
    );
    Ok(if pass { 0 } else { EXIT_VERIFY })
}

fn cmd_count(common: &Common) -> Result<u8> {
    let cfg = RunConfig::from_common(common)?;
    let dual = build_dual(common, &cfg)?;
    let rows = counting_table(&dual, 1e-8)?;
    let regular: Vec<_> = dual
        .stabilizers()?
        .iter()
        .map(|s| c_regular_classes(s, cfg.tolerance))
        .collect();
    let agree = rows.iter().all(|r| r.agree);
    let body = json!({ "rows": rows, "regular_classes": regular, "agree": agree });
    let csv = || {
        csv_table(
            &["q_class", "q_representative", "direct", "formula", "agree"],
            rows.iter().map(|r| {
                vec![
                    r.q_class.to_string(),
                    r.q_representative.to_string(),
                    r.direct.to_string(),
                    r.formula.to_string(),
                    r.agree.to_string(),
                ]
            }),
        )
    };
    emit(&cfg, &envelope("count", &cfg, &dual, body), csv)?;
    let counts: Vec<String> = rows.iter().map(|r| r.direct.to_string()).collect();
    eprintln!(
        "count: ({}){}",
        counts.join(","),
        if agree { "" } else { "; formula disagrees" }
    );
    Ok(if agree { 0 } else { EXIT_VERIFY })
}

fn cmd_gw(common: &Common, genus: usize, n: usize, method: Method) -> Result<u8> {
    let cfg = RunConfig::from_common(common)?;
    let dual = build_dual(common, &cfg)?;
    let ci = CenterIso::new(&dual, cfg.tolerance)?;
    let setup = GwSetup::new(&ci)?;
    let h = &dual.ext.h;
    let irreps_h = match method {
        Method::Character => Some(irreducible_representations(h, cfg.seed)?),
        _ => None,
    };
    let mut eval = OmegaEvaluator::new(h, cfg.brute_cap, irreps_h.as_ref());
    let eval_ref = match method {
        Method::Frobenius => None,
        _ => Some(&mut eval),
    };
    let tol = GwTolerance::default();
    let rows = gw_decomposition_rows(&setup, eval_ref, method, genus, n, tol)?;
    let pass = rows.iter().all(|r| r.pass);
    let body = json!({ "genus": genus, "n": n, "method": method, "pass": pass, "rows": rows });
    let csv = || {
        csv_table(
            &[
                "genus",
                "insertions",
                "method",
                "abs_lhs",
                "abs_rhs",
                "factor",
                "mixed",
                "pass",
            ],
            rows.iter().map(|r| {
                let ins: Vec<String> = r.insertions.iter().map(|[o, i]| format!("{o}.{i}")).collect();
                let abs = |z: [f64; 2]| round12(z[0].hypot(z[1]));
                vec![
                    r.genus.to_string(),
                    ins.join(" "),
                    method.to_string(),
                    abs(r.lhs),
                    r.rhs.map(abs).unwrap_or_default(),
                    r.factor.map(round12).unwrap_or_default(),
                    r.mixed.to_string(),
                    r.pass.to_string(),
                ]
            }),
        )
    };
    emit(&cfg, &envelope("gw", &cfg, &dual, body), csv)?;
    eprintln!(
        "gw g={genus} n={n} ({method}): {} of {} rows pass",
        rows.iter().filter(|r| r.pass).count(),
        rows.len()
    );
    Ok(if pass { 0 } else { EXIT_VERIFY })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Parse(_) | Error::MalformedTable { .. }) => EXIT_PARSE,
        Some(Error::CapExceeded { .. }) => EXIT_CAP,
        _ if err.downcast_ref::<serde_json::Error>().is_some() => EXIT_PARSE,
        _ => EXIT_VALIDATION,
    }
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Analyze(c) => cmd_analyze(c),
        Command::Verify { common, suite, samples } => cmd_verify(common, *suite, *samples),
        Command::Count(c) => cmd_count(c),
        Command::Gw {
            common,
            genus,
            n,
            method,
        } => {
            if *n > 8 || *genus > 4 {
                bail!(Error::InvalidInput("gw supports genus up to 4 and n up to 8".into()));
            }
            cmd_gw(common, *genus, *n, *method)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let code = exit_code(&err);
            eprintln!("error: {err:#}");
            if code == EXIT_CAP {
                eprintln!("hint: rerun with `--method character` to avoid enumeration");
            }
            ExitCode::from(code)
        }
    }
}
