//! `lietorus` command-line driver.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage,
//! configuration and construction errors.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lietorus::grading::EigenspaceDecomposition;
use lietorus::linalg::Matrix;
use lietorus::repmod::{
    build_evaluation, build_realized, evaluation_iso_predicate, find_intertwiner, iso_check, RealizedModule,
};
use lietorus::toroidal::ToroidalAlgebra;
use lietorus::verify::{sweep_jacobi, sweep_lietorus, sweep_module, SweepConfig, SweepReport, SweepTarget};
use lietorus::CycScalar;
use serde_json::{json, Value};

use lietorus_cli::config::{self, ConfigError, PointsConfig, Session, SessionConfig};

#[derive(Parser)]
#[command(name = "lietorus", version, about = "Twisted toroidal Lie algebras and their level-zero modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Degree window half-width (overrides the config).
    #[arg(long, global = true)]
    window: Option<i64>,
    /// Cocycle parameters `a,b` (overrides the config).
    #[arg(long, global = true, value_name = "A,B")]
    phi: Option<String>,
    /// Seed for sampled checks (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of samples for sampled checks (overrides the config).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Directory for JSON reports and TSV tables.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// The graded simple Lie algebra.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
    /// The Lie torus built from the grading.
    Torus {
        #[command(subcommand)]
        action: TorusAction,
    },
    /// The realized module described by the config's `module` section.
    Module {
        #[command(subcommand)]
        action: ModuleAction,
    },
    /// Isomorphism test between two modules.
    Iso {
        #[command(subcommand)]
        action: IsoAction,
    },
    /// Search for an intertwiner between two evaluation modules.
    Intertwine(TwoConfigs),
}

#[derive(Subcommand)]
enum AlgebraAction {
    /// Dimensions and types of the graded pieces.
    Info(OneConfig),
    /// Antisymmetry and Jacobi sweep of the toroidal bracket.
    Check(OneConfig),
}

#[derive(Subcommand)]
enum TorusAction {
    /// Lie torus axioms.
    Check(OneConfig),
}

#[derive(Subcommand)]
enum ModuleAction {
    /// Build the module and summarize its data.
    Build(OneConfig),
    /// Weight table as TSV.
    Weights(OneConfig),
    /// Highest weight spaces per degree as TSV.
    Hws(OneConfig),
    /// Module axiom, level zero, weight, Weyl and integrability checks.
    Check(OneConfig),
}

#[derive(Subcommand)]
enum IsoAction {
    /// Decide whether the two configured modules are isomorphic.
    Check(TwoConfigs),
}

#[derive(Args)]
struct OneConfig {
    #[arg(short = 'c', long = "config")]
    config: PathBuf,
}

#[derive(Args)]
struct TwoConfigs {
    #[arg(short = 'c', long = "config", required = true, num_args = 1)]
    configs: Vec<PathBuf>,
}

enum CliError {
    Config(ConfigError),
    Library(lietorus::Error),
    Io(String),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "IoError: {e}"),
            CliError::Usage(e) => write!(f, "UsageError: {e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<lietorus::Error> for CliError {
    fn from(e: lietorus::Error) -> Self {
        CliError::Library(e)
    }
}

type CliResult = Result<bool, CliError>;

/// Writes to stdout, treating a closed pipe as success.
fn say(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Algebra { action: AlgebraAction::Info(c) } => algebra_info(cli, &load(cli, &c.config)?),
        Command::Algebra { action: AlgebraAction::Check(c) } => algebra_check(cli, &load(cli, &c.config)?),
        Command::Torus { action: TorusAction::Check(c) } => torus_check(cli, &load(cli, &c.config)?),
        Command::Module { action } => {
            let (ModuleAction::Build(c) | ModuleAction::Weights(c) | ModuleAction::Hws(c) | ModuleAction::Check(c)) =
                action;
            let session = load(cli, &c.config)?;
            let module = build_module(&session)?;
            match action {
                ModuleAction::Build(_) => module_build(cli, &session, &module),
                ModuleAction::Weights(_) => module_weights(cli, &session, &module),
                ModuleAction::Hws(_) => module_hws(cli, &session, &module),
                ModuleAction::Check(_) => module_check(cli, &session, &module),
            }
        }
        Command::Iso { action: IsoAction::Check(c) } => {
            let (a, b) = load_pair(cli, &c.configs)?;
            iso(cli, &a, &b)
        }
        Command::Intertwine(c) => {
            let (a, b) = load_pair(cli, &c.configs)?;
            intertwine(cli, &a, &b)
        }
    }
}

fn load(cli: &Cli, path: &Path) -> Result<Session, CliError> {
    let mut config = SessionConfig::load(path)?;
    if let Some(w) = cli.window {
        config.window = w;
    }
    if let Some(p) = &cli.phi {
        let parts: Vec<&str> = p.split(',').collect();
        let [a, b] = parts[..] else {
            return Err(CliError::Usage(format!("--phi expects two comma-separated scalars, got {p:?}")));
        };
        config.phi = [config::ScalarLit::Text(a.trim().into()), config::ScalarLit::Text(b.trim().into())];
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(s) = cli.samples {
        config.samples = s;
    }
    Ok(Session::validate(config, &path.display().to_string())?)
}

fn load_pair(cli: &Cli, paths: &[PathBuf]) -> Result<(Session, Session), CliError> {
    match paths {
        [a, b] => Ok((load(cli, a)?, load(cli, b)?)),
        _ => Err(CliError::Usage(format!("expected exactly two -c configs, got {}", paths.len()))),
    }
}

fn sweep_config(cli: &Cli, s: &Session, target: SweepTarget) -> SweepConfig {
    let mut cfg = SweepConfig::new(target, s.config.window).with_seed(s.config.seed).with_samples(s.config.samples);
    cfg.phi = s.phi.clone();
    cfg.threads = cli.threads;
    cfg
}

fn torus(s: &Session) -> ToroidalAlgebra {
    ToroidalAlgebra::new(s.dec.clone(), s.phi.clone(), s.config.window)
}

fn build_module(s: &Session) -> Result<RealizedModule, CliError> {
    let spec = s.module_spec_required()?;
    Ok(build_realized(&torus(s), spec)?)
}

/// Writes `contents` to the configured or default file name, under `--out` when given.
fn emit(cli: &Cli, configured: Option<&String>, default: &str, contents: &str) -> Result<(), CliError> {
    let path = match (&cli.out, configured) {
        (Some(dir), name) => dir.join(name.map(String::as_str).unwrap_or(default)),
        (None, Some(name)) => PathBuf::from(name),
        (None, None) => return Ok(()),
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn finish_report(cli: &Cli, s: &Session, report: &SweepReport, default: &str) -> CliResult {
    for line in report.summary_lines() {
        say(&format!("{line}\n"));
    }
    emit(cli, s.config.outputs.report.as_ref(), default, &(report.to_json_string() + "\n"))?;
    Ok(report.all_pass())
}

fn conductor_for(s: &Session, xs: &[CycScalar]) -> u32 {
    xs.iter().fold(s.config.conductor, |acc, x| lcm(acc, x.conductor()))
}

fn lcm(a: u32, b: u32) -> u32 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

fn render_all(s: &Session, xs: &[CycScalar]) -> Vec<String> {
    let n = conductor_for(s, xs);
    xs.iter().map(|x| x.render(n)).collect()
}

fn render_matrix(s: &Session, m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| render_all(s, m.row(i))).collect()
}

fn type_name(dec: &EigenspaceDecomposition) -> Value {
    match &dec.root_data {
        Ok(rd) => rd.type_name.map_or(Value::Null, |(l, r)| json!(format!("{l}{r}"))),
        Err(_) => Value::Null,
    }
}

fn algebra_info(cli: &Cli, s: &Session) -> CliResult {
    let dec = &s.dec;
    let classes: Vec<Value> =
        dec.group.elements().iter().map(|k| json!({"class": k, "dim": dec.class_dim(k)})).collect();
    let info = json!({
        "type": format!("{}{}", s.config.algebra.letter, s.config.algebra.rank),
        "dim": dec.g.dim(),
        "m": dec.m(),
        "classes": classes,
        "zero_part_type": type_name(dec),
    });
    let text = serde_json::to_string_pretty(&info).expect("json");
    say(&format!("{text}\n"));
    emit(cli, s.config.outputs.report.as_ref(), "algebra_info.json", &(text + "\n"))?;
    Ok(true)
}

fn algebra_check(cli: &Cli, s: &Session) -> CliResult {
    let report = sweep_jacobi(s.dec.clone(), &sweep_config(cli, s, SweepTarget::Algebra))?;
    finish_report(cli, s, &report, "algebra_check.json")
}

fn torus_check(cli: &Cli, s: &Session) -> CliResult {
    let report = sweep_lietorus(&s.dec, &sweep_config(cli, s, SweepTarget::Algebra))?;
    finish_report(cli, s, &report, "torus_check.json")
}

fn module_build(cli: &Cli, s: &Session, m: &RealizedModule) -> CliResult {
    let graded = m.graded.as_ref().expect("realized modules carry their graded part");
    let points: Vec<Vec<String>> = graded.points.iter().map(|p| render_all(s, p)).collect();
    let info = json!({
        "dim_gl_module": m.dim_v1(),
        "orbit": graded.orbit,
        "multiplicities": graded.multiplicities,
        "points": points,
        "shift": graded.shift,
        "class_dims": graded.class_dims(),
    });
    let text = serde_json::to_string_pretty(&info).expect("json");
    say(&format!("{text}\n"));
    emit(cli, s.config.outputs.report.as_ref(), "module_build.json", &(text + "\n"))?;
    Ok(true)
}

fn module_weights(cli: &Cli, s: &Session, m: &RealizedModule) -> CliResult {
    let tsv = m.weight_table_tsv();
    say(&tsv);
    emit(cli, s.config.outputs.weights.as_ref(), "weights.tsv", &tsv)?;
    Ok(true)
}

fn module_hws(cli: &Cli, s: &Session, m: &RealizedModule) -> CliResult {
    let mut tsv = String::from("k\tdim\texpected\tinterior\n");
    let mut ok = true;
    for e in m.highest_weight_space()? {
        let k: Vec<String> = e.k.iter().map(i64::to_string).collect();
        tsv += &format!("[{}]\t{}\t{}\t{}\n", k.join(","), e.dim, e.expected, e.interior);
        ok &= !e.interior || e.dim == e.expected;
    }
    say(&tsv);
    emit(cli, s.config.outputs.hws.as_ref(), "hws.tsv", &tsv)?;
    Ok(ok)
}

fn module_check(cli: &Cli, s: &Session, m: &RealizedModule) -> CliResult {
    let report = sweep_module(m, &sweep_config(cli, s, SweepTarget::Module))?;
    finish_report(cli, s, &report, "module_check.json")
}

fn iso(cli: &Cli, a: &Session, b: &Session) -> CliResult {
    let qa = &a.module_spec_required()?.params;
    let qb = &b.module_spec_required()?.params;
    let verdict = iso_check(&a.dec, qa, &b.dec, qb)?;
    say(&format!("{}\n", verdict.certificate));
    let report = json!({
        "isomorphic": verdict.isomorphic,
        "clauses": verdict.clauses,
        "certificate": verdict.certificate,
    });
    emit(cli, a.config.outputs.report.as_ref(), "iso_check.json", &(report.to_string() + "\n"))?;
    Ok(true)
}

/// The evaluation point of a config: its first explicit point, else `base`, else all ones.
fn evaluation_point(s: &Session) -> Result<Vec<CycScalar>, CliError> {
    let spec = s.module_spec_required()?;
    if let Some(p) = spec.points.as_ref().and_then(|p| p.first()) {
        return Ok(p.clone());
    }
    if let Some(b) = &spec.base {
        return Ok(b.clone());
    }
    if let Some(m) = &s.config.module {
        if let PointsConfig::Explicit(p) = &m.points {
            if p.is_empty() {
                return Err(CliError::Usage(format!("{}: module.points is empty", s.source)));
            }
        }
    }
    Ok(vec![CycScalar::one(); s.dec.n()])
}

fn intertwine(cli: &Cli, a: &Session, b: &Session) -> CliResult {
    let (pa, pb) = (evaluation_point(a)?, evaluation_point(b)?);
    let la = &a.module_spec_required()?.params.lambda;
    let lb = &b.module_spec_required()?.params.lambda;
    let ma = build_evaluation(a.dec.clone(), la, &pa)?;
    let mb = build_evaluation(b.dec.clone(), lb, &pb)?;
    let t = find_intertwiner(&ma, &mb, cli.window)?;
    let predicate = evaluation_iso_predicate(&a.dec, la, &pa, lb, &pb)?;
    say(&format!("intertwiner: {}\n", if t.is_some() { "found" } else { "none" }));
    say(&format!("criterion: {}\n", if predicate { "isomorphic" } else { "not isomorphic" }));
    let report = json!({
        "intertwiner": t.as_ref().map(|m| render_matrix(a, m)),
        "criterion": predicate,
        "agree": t.is_some() == predicate,
    });
    emit(cli, a.config.outputs.report.as_ref(), "intertwine.json", &(report.to_string() + "\n"))?;
    Ok(t.is_some() == predicate)
}
