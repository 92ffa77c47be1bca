//! Command line front end. Every subcommand prints one deterministic
//! report, as a single JSON document (default) or as plain text, with
//! the field moduli in the header so coordinate input and output stay
//! interpretable across runs.

use std::process::ExitCode;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use nbasis::census::{census, random_nbg, CensusOptions, CriterionPolicy};
use nbasis::criteria::{split_prime_power, CriteriaSuite, CriterionId};
use nbasis::cyclotomy::q_classes;
use nbasis::field::{extend, make_field, parse_element, FFElement, FieldCtx};
use nbasis::idempotent::{idempotents, verify_idempotents, IdempotentChecks, IdempotentSet};
use nbasis::poly::Poly;
use nbasis::{Error, Result};

const SCHEMA_VERSION: u64 = 1;

/// Write a line to stdout, treating a closed pipe as a normal exit so
/// `nbasis ... | head` does not panic.
fn emit(line: &str) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if writeln!(lock, "{line}").is_err() {
        std::process::exit(0);
    }
}

fn emit_raw(chunk: &str) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if write!(lock, "{chunk}").is_err() {
        std::process::exit(0);
    }
}

#[derive(Parser)]
#[command(
    name = "nbasis",
    version,
    about = "Normal basis generator criteria over finite fields",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for the field modulus search and random sampling.
    #[arg(long, global = true, env = "NBASIS_SEED", default_value_t = 0)]
    seed: u64,

    /// Seed for the root of unity and idempotent construction.
    /// Defaults to --seed.
    #[arg(long, global = true)]
    zeta_seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct FieldArgs {
    /// Base field size, a prime power.
    #[arg(long, value_name = "Q", conflicts_with_all = ["p", "m"])]
    q: Option<u128>,

    /// Base field characteristic; use with --m for non-prime bases.
    #[arg(long, value_name = "P")]
    p: Option<u64>,

    /// Degree of the base field over its prime field.
    #[arg(long, value_name = "M", default_value_t = 1)]
    m: u64,

    /// Extension degree over the base field.
    #[arg(long, value_name = "N")]
    n: u64,
}

impl FieldArgs {
    fn split(&self) -> Result<(u64, u64)> {
        match (self.q, self.p) {
            (Some(q), None) => split_prime_power(q),
            (None, Some(p)) => Ok((p, self.m)),
            _ => Err(Error::Parse(
                "give the base field as either --q or --p (with optional --m)".into(),
            )),
        }
    }

    fn base(&self, seed: u64) -> Result<Arc<FieldCtx>> {
        let (p, m) = self.split()?;
        make_field(p, m, seed)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Orbits of Z/n under multiplication by q.
    Classes {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Idempotent decomposition of F_q[x]/(x^n - 1) with its period
    /// matrix; every defining identity is re-checked before printing.
    Idempotents {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Irreducible factors of x^n - 1 over F_q, one per class.
    Factor {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Run normal-basis criteria on one element of F_{q^n}.
    Test {
        #[command(flatten)]
        field: FieldArgs,
        /// Element coordinates over the printed modulus, lowest power
        /// first: residues joined by commas, coordinate groups by
        /// semicolons when the base field is not prime.
        #[arg(long, value_name = "COORDS")]
        elem: String,
        /// Report every criterion, including inapplicable ones.
        #[arg(long)]
        all: bool,
        /// Report a single criterion by name.
        #[arg(long, value_name = "ID", conflicts_with = "all")]
        criterion: Option<String>,
    },
    /// Find a normal basis generator by seeded rejection sampling.
    Search {
        #[command(flatten)]
        field: FieldArgs,
        /// Give up after this many candidates (default 64 * n).
        #[arg(long, value_name = "K")]
        max_tries: Option<u64>,
    },
    /// Generator counts and densities over a grid of field pairs,
    /// cross-validating every applicable criterion per element.
    Census {
        /// Base field sizes, comma separated prime powers.
        #[arg(long, value_name = "Q,...")]
        q: String,
        /// Extension degrees: comma separated values or inclusive
        /// ranges like 1..6.
        #[arg(long, value_name = "N|A..B,...")]
        n: String,
        /// Sweep with one named criterion instead of all of them.
        #[arg(long, value_name = "ID")]
        criterion: Option<String>,
        /// Worker threads; the output does not depend on this.
        #[arg(long, value_name = "W", default_value_t = 1)]
        workers: usize,
        /// Largest field size an exhaustive sweep will accept.
        #[arg(long, value_name = "B", default_value_t = nbasis::census::DEFAULT_BOUND)]
        bound: u128,
        /// Include wall-clock timings in the output.
        #[arg(long)]
        timings: bool,
    },
    /// Exhaustive cross-validation of every applicable criterion for
    /// one field pair.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// Worker threads; the output does not depend on this.
        #[arg(long, value_name = "W", default_value_t = 1)]
        workers: usize,
        /// Largest field size the sweep will accept.
        #[arg(long, value_name = "B", default_value_t = nbasis::census::DEFAULT_BOUND)]
        bound: u128,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Error::Disagreement(report) = &e {
                eprintln!("{}", report.to_json());
            }
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 2 } else { 1 })
        }
    }
}

fn poly_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(FFElement::to_json).collect())
}

fn matrix_json(m: &nbasis::matrix::MatrixFq) -> Value {
    let size = m.size();
    Value::Array(
        (0..size)
            .map(|i| Value::Array((0..size).map(|j| m.get(i, j).to_json()).collect()))
            .collect(),
    )
}

fn checks_json(c: &IdempotentChecks) -> Value {
    json!({
        "matrix_inverse": c.matrix_inverse,
        "sum_is_one": c.sum_is_one,
        "orthogonal_idempotent": c.orthogonal_idempotent,
        "factor_residues": c.factor_residues,
        "root_evaluations": c.root_evaluations,
    })
}

struct Report {
    command: &'static str,
    header: Vec<(String, Value)>,
    /// JSON payload entries and their text renderings, in print order.
    body: Vec<(String, Value, Vec<String>)>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            header: Vec::new(),
            body: Vec::new(),
        }
    }

    fn head(&mut self, key: &str, value: Value) {
        self.header.push((key.to_string(), value));
    }

    fn entry(&mut self, key: &str, value: Value, text: Vec<String>) {
        self.body.push((key.to_string(), value, text));
    }

    fn print(&self, format: Format) {
        match format {
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
                obj.insert("command".into(), json!(self.command));
                let mut header = Map::new();
                for (k, v) in &self.header {
                    header.insert(k.clone(), v.clone());
                }
                obj.insert("field".into(), Value::Object(header));
                for (k, v, _) in &self.body {
                    obj.insert(k.clone(), v.clone());
                }
                emit(&Value::Object(obj).to_string());
            }
            Format::Text => {
                emit(&format!("command: {}", self.command));
                for (k, v) in &self.header {
                    emit(&format!("{k}: {}", text_scalar(v)));
                }
                for (_, _, lines) in &self.body {
                    for line in lines {
                        emit(line);
                    }
                }
            }
        }
    }
}

fn text_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Header block naming the field tower and the seeds that produced
/// it, so coordinate vectors in the rest of the report have a fixed
/// meaning.
fn field_header(
    report: &mut Report,
    base: &Arc<FieldCtx>,
    ext: Option<&Arc<FieldCtx>>,
    n: u64,
    seed: u64,
    zeta_seed: u64,
) {
    report.head("p", json!(base.p()));
    report.head("m", json!(base.degree()));
    report.head("q", json!(base.cardinality().to_string()));
    report.head("n", json!(n));
    match base.modulus_poly() {
        Some(f) => report.head("base_modulus", json!(f.to_string())),
        None => report.head("base_modulus", Value::Null),
    }
    match ext.and_then(|e| e.modulus_poly()) {
        Some(f) => report.head("modulus", json!(f.to_string())),
        None => report.head("modulus", Value::Null),
    }
    report.head("seed", json!(seed));
    report.head("zeta_seed", json!(zeta_seed));
}

fn parse_criterion(s: &str) -> Result<CriterionId> {
    CriterionId::parse(s)
}

/// Degree lists for the census grammar: comma separated terms, each a
/// single value or an inclusive range a..b.
fn parse_degrees(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for term in s.split(',') {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in degree list {s:?}")));
        }
        match term.split_once("..") {
            Some((a, b)) => {
                let lo: u64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad range start {a:?}")))?;
                let hi: u64 = b
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad range end {b:?}")))?;
                if lo > hi {
                    return Err(Error::Parse(format!("empty range {term:?}")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(
                term.parse()
                    .map_err(|_| Error::Parse(format!("bad degree {term:?}")))?,
            ),
        }
    }
    Ok(out)
}

fn parse_prime_powers(s: &str) -> Result<Vec<u128>> {
    s.split(',')
        .map(|term| {
            let term = term.trim();
            let q: u128 = term
                .parse()
                .map_err(|_| Error::Parse(format!("bad field size {term:?}")))?;
            split_prime_power(q)?;
            Ok(q)
        })
        .collect()
}

fn execute(cli: &Cli) -> Result<()> {
    let seed = cli.seed;
    let zeta_seed = cli.zeta_seed.unwrap_or(seed);
    match &cli.command {
        Command::Classes { field } => run_classes(cli, field, seed, zeta_seed),
        Command::Idempotents { field } => run_idempotents(cli, field, seed, zeta_seed),
        Command::Factor { field } => run_factor(cli, field, seed, zeta_seed),
        Command::Test {
            field,
            elem,
            all,
            criterion,
        } => run_test(cli, field, elem, *all, criterion.as_deref(), seed, zeta_seed),
        Command::Search { field, max_tries } => {
            run_search(cli, field, *max_tries, seed, zeta_seed)
        }
        Command::Census {
            q,
            n,
            criterion,
            workers,
            bound,
            timings,
        } => run_census(cli, q, n, criterion.as_deref(), *workers, *bound, *timings),
        Command::Verify {
            field,
            workers,
            bound,
        } => run_verify(cli, field, *workers, *bound, seed, zeta_seed),
    }
}

fn run_classes(cli: &Cli, field: &FieldArgs, seed: u64, zeta_seed: u64) -> Result<()> {
    let base = field.base(seed)?;
    let part = q_classes(field.n, base.cardinality())?;
    let mut report = Report::new("classes");
    field_header(&mut report, &base, None, field.n, seed, zeta_seed);
    let classes: Vec<Value> = part
        .classes
        .iter()
        .map(|c| json!(c.members))
        .collect();
    let text: Vec<String> = std::iter::once(format!("classes: {}", part.len()))
        .chain(part.classes.iter().map(|c| {
            format!(
                "  [{}]",
                c.members
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        }))
        .collect();
    report.entry("classes", Value::Array(classes), text);
    report.print(cli.format);
    Ok(())
}

fn idempotent_report(
    report: &mut Report,
    set: &IdempotentSet,
    checks: &IdempotentChecks,
) {
    let classes: Vec<Value> = set
        .partition
        .classes
        .iter()
        .map(|c| json!(c.members))
        .collect();
    report.entry(
        "classes",
        Value::Array(classes),
        vec![format!("classes: {}", set.partition.len())],
    );
    report.entry(
        "matrix",
        matrix_json(&set.matrix),
        vec![format!("matrix: {} x {}", set.matrix.size(), set.matrix.size())],
    );
    report.entry("matrix_inv", matrix_json(&set.matrix_inv), Vec::new());
    let poly_texts: Vec<String> = set
        .idempotents
        .iter()
        .enumerate()
        .map(|(i, e)| format!("e_{i} = {e}"))
        .collect();
    report.entry(
        "idempotents",
        Value::Array(set.idempotents.iter().map(poly_json).collect()),
        poly_texts,
    );
    report.entry(
        "zeta",
        set.zeta.to_json(),
        vec![format!("zeta: {}", set.zeta)],
    );
    report.entry(
        "checks",
        checks_json(checks),
        vec![format!("checks_pass: {}", checks.all_pass())],
    );
}

fn run_idempotents(cli: &Cli, field: &FieldArgs, seed: u64, zeta_seed: u64) -> Result<()> {
    let base = field.base(seed)?;
    let set = idempotents(field.n, &base, zeta_seed)?;
    let checks = verify_idempotents(&set)?;
    let mut report = Report::new("idempotents");
    field_header(&mut report, &base, None, field.n, seed, zeta_seed);
    idempotent_report(&mut report, &set, &checks);
    if !checks.all_pass() {
        report.print(cli.format);
        return Err(Error::IdentityCheckFailed);
    }
    report.print(cli.format);
    Ok(())
}

fn run_factor(cli: &Cli, field: &FieldArgs, seed: u64, zeta_seed: u64) -> Result<()> {
    let base = field.base(seed)?;
    let ext = extend(&base, field.n, seed)?;
    let suite = CriteriaSuite::with_ext(&base, &ext, zeta_seed)?;
    let factors = suite.factors().ok_or(Error::NotCoprime {
        q: base.cardinality(),
        n: field.n,
    })?;
    let mut report = Report::new("factor");
    field_header(&mut report, &base, None, field.n, seed, zeta_seed);
    let texts: Vec<String> = factors
        .iter()
        .enumerate()
        .map(|(i, f)| format!("f_{i} = {f}"))
        .collect();
    report.entry(
        "factors",
        Value::Array(factors.iter().map(poly_json).collect()),
        texts,
    );
    report.entry(
        "degrees",
        json!(factors
            .iter()
            .map(|f| f.deg().unwrap_or(0))
            .collect::<Vec<_>>()),
        Vec::new(),
    );
    report.print(cli.format);
    Ok(())
}

fn run_test(
    cli: &Cli,
    field: &FieldArgs,
    elem: &str,
    all: bool,
    criterion: Option<&str>,
    seed: u64,
    zeta_seed: u64,
) -> Result<()> {
    let base = field.base(seed)?;
    let ext = extend(&base, field.n, seed)?;
    let suite = CriteriaSuite::with_ext(&base, &ext, zeta_seed)?;
    let alpha = parse_element(&ext, elem)?;
    let verdicts = match criterion {
        Some(name) => vec![suite.verdict(parse_criterion(name)?, &alpha)?],
        None => {
            let every = suite.all_verdicts(&alpha)?;
            if all {
                every
            } else {
                every.into_iter().filter(|v| v.applicable).collect()
            }
        }
    };
    let decisions: Vec<bool> = verdicts.iter().filter_map(|v| v.is_nbg).collect();
    let unanimous = decisions.windows(2).all(|w| w[0] == w[1]);
    let mut report = Report::new("test");
    field_header(&mut report, &base, Some(&ext), field.n, seed, zeta_seed);
    report.entry(
        "element",
        alpha.to_json(),
        vec![format!("element: {alpha}")],
    );
    let verdict_texts: Vec<String> = verdicts
        .iter()
        .map(|v| match v.is_nbg {
            Some(b) => format!("{}: {}", v.criterion, if b { "nbg" } else { "not_nbg" }),
            None => format!("{}: not applicable", v.criterion),
        })
        .collect();
    report.entry(
        "verdicts",
        Value::Array(verdicts.iter().map(|v| v.to_json()).collect()),
        verdict_texts,
    );
    report.entry(
        "unanimous",
        json!(unanimous),
        vec![format!("unanimous: {unanimous}")],
    );
    if !unanimous {
        report.print(cli.format);
        let dump = nbasis::DisagreementReport {
            q: base.cardinality(),
            n: field.n,
            element_index: alpha.to_index(),
            element: alpha.to_string(),
            verdicts: verdicts
                .iter()
                .map(|v| (v.criterion.as_str().to_string(), v.is_nbg))
                .collect(),
        };
        return Err(Error::Disagreement(Box::new(dump)));
    }
    report.print(cli.format);
    Ok(())
}

fn run_search(
    cli: &Cli,
    field: &FieldArgs,
    max_tries: Option<u64>,
    seed: u64,
    zeta_seed: u64,
) -> Result<()> {
    let base = field.base(seed)?;
    let ext = extend(&base, field.n, seed)?;
    let suite = CriteriaSuite::with_ext(&base, &ext, zeta_seed)?;
    let alpha = random_nbg(&suite, seed, max_tries)?;
    let mut report = Report::new("search");
    field_header(&mut report, &base, Some(&ext), field.n, seed, zeta_seed);
    report.entry(
        "element",
        alpha.to_json(),
        vec![format!("element: {alpha}")],
    );
    report.entry("is_nbg", json!(true), vec!["is_nbg: true".to_string()]);
    report.print(cli.format);
    Ok(())
}

fn run_census(
    cli: &Cli,
    q: &str,
    n: &str,
    criterion: Option<&str>,
    workers: usize,
    bound: u128,
    timings: bool,
) -> Result<()> {
    let qs = parse_prime_powers(q)?;
    let ns = parse_degrees(n)?;
    let policy = match criterion {
        Some(name) => CriterionPolicy::Single(parse_criterion(name)?),
        None => CriterionPolicy::All,
    };
    let opts = CensusOptions {
        seed: cli.seed,
        bound,
        workers,
    };
    let rows = census(&qs, &ns, policy, &opts)?;
    match cli.format {
        Format::Json => {
            for row in &rows {
                let mut obj = match row.to_json(timings) {
                    Value::Object(o) => o,
                    _ => unreachable!("rows serialize to objects"),
                };
                obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
                emit(&Value::Object(obj).to_string());
            }
        }
        Format::Text => {
            emit("command: census");
            emit(&format!("seed: {}", cli.seed));
            emit_raw(&nbasis::census::render_table(&rows, timings));
        }
    }
    Ok(())
}

fn run_verify(
    cli: &Cli,
    field: &FieldArgs,
    workers: usize,
    bound: u128,
    seed: u64,
    zeta_seed: u64,
) -> Result<()> {
    let base = field.base(seed)?;
    let q = base.cardinality();
    let opts = CensusOptions {
        seed,
        bound,
        workers,
    };
    let rows = census(&[q], &[field.n], CriterionPolicy::All, &opts)?;
    let row = &rows[0];
    let mut report = Report::new("verify");
    field_header(&mut report, &base, None, field.n, seed, zeta_seed);
    report.entry(
        "criteria",
        Value::Array(
            row.criteria_used
                .iter()
                .map(|id| json!(id.as_str()))
                .collect(),
        ),
        vec![format!(
            "criteria: {}",
            row.criteria_used
                .iter()
                .map(|id| id.as_str())
                .collect::<Vec<_>>()
                .join(",")
        )],
    );
    report.entry(
        "elements_checked",
        json!(row.field_size.to_string()),
        vec![format!("elements_checked: {}", row.field_size)],
    );
    report.entry(
        "nbg_count",
        json!(row.nbg_count.to_string()),
        vec![format!("nbg_count: {}", row.nbg_count)],
    );
    report.entry(
        "unanimous",
        json!(true),
        vec!["unanimous: true".to_string()],
    );
    report.print(cli.format);
    Ok(())
}
