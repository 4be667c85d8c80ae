use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use klr_core::config::{ConfigError, DatumConfig, Setup, ThickConfig};
use klr_core::expr::{self, EvalContext, ExprError};
use klr_core::graded::{self, QuotientRow};
use klr_core::suites::{self, DimRow, SuiteReport, REPORT_SCHEMA};
use klr_core::thick::{enumerate_seq, ThickContext};
use klr_core::{Element, KlrAlgebra, LabelId};

#[derive(Parser)]
#[command(name = "klr", version, about = "Exact computations in KLR algebras and their thick-strand subalgebras")]
struct Cli {
    /// Cartan datum and parameters (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Work over the extended datum with dashed labels `~i`.
    #[arg(long, global = true)]
    extended: bool,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression and print its normal form.
    Normalize {
        #[arg(long)]
        expr: String,
        /// Evaluate inside the thick-strand subalgebra of this (λ,ν) file.
        #[arg(long)]
        lambda_nu: Option<PathBuf>,
    },
    /// Run a relation suite.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Strand bound (defining, nilhecke) or total thick multiplicity (proposition).
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Random triples for the assoc suite.
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Oracle count against engine rank, per degree.
    Dim {
        /// Top sequence, e.g. `1,2`.
        #[arg(long)]
        left: String,
        /// Bottom sequence.
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        #[arg(long, allow_hyphen_values = true)]
        min_degree: Option<i64>,
    },
    /// The nilHecke idempotent e_n on one label.
    En {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        label: String,
    },
    /// List the sequences of a (λ,ν) file.
    Seq {
        #[arg(long)]
        lambda_nu: PathBuf,
    },
    /// Truncated quotient dimensions of the thick-strand subalgebra.
    Quotient {
        #[arg(long)]
        lambda_nu: PathBuf,
        #[arg(long, value_enum, default_value_t = Ideal::Full)]
        ideal: Ideal,
        /// Truncation lengths for the ideal span.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        lengths: Vec<usize>,
        /// Word length for the algebra span (defaults to the largest L).
        #[arg(long)]
        algebra_len: Option<usize>,
        #[arg(long, default_value_t = 6)]
        max_degree: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Defining,
    Extended,
    Proposition,
    Nilhecke,
    Assoc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ideal {
    /// Symmetric dots, solid-first idempotents and the cyclotomic list.
    Full,
    /// Only the idempotents whose first strand is solid.
    SolidStart,
    /// Only the cyclotomic list from the (λ,ν) file.
    Cyclotomic,
    None,
}

enum Failure {
    Check,
    Usage(String),
    Config(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("KLR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(3)
        }
    }
}

fn load(cli: &Cli, extended: bool) -> Result<Setup, Failure> {
    let path = cli.config.as_ref().ok_or_else(|| Failure::Usage("--config is required".into()))?;
    let cfg = DatumConfig::load(path)?;
    Ok(if extended { cfg.build_extended()? } else { cfg.build()? })
}

fn thick(setup: &Setup, path: &Path) -> Result<(ThickConfig, ThickContext), Failure> {
    let cfg = ThickConfig::load(path)?;
    let ctx = cfg.context(setup)?;
    Ok((cfg, ctx))
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        print!("{}", text());
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Normalize { expr, lambda_nu } => normalize(cli, expr, lambda_nu.as_deref()),
        Cmd::Check { suite, n, seed, count } => check(cli, *suite, *n, *seed, *count),
        Cmd::Dim { left, right, max_degree, min_degree } => dim(cli, left, right, *max_degree, *min_degree),
        Cmd::En { n, label } => en(cli, *n, label),
        Cmd::Seq { lambda_nu } => seq(cli, lambda_nu),
        Cmd::Quotient { lambda_nu, ideal, lengths, algebra_len, max_degree } => {
            quotient(cli, lambda_nu, *ideal, lengths, *algebra_len, *max_degree)
        }
    }
}

fn expr_failure(text: &str, e: ExprError) -> Failure {
    match &e {
        ExprError::Parse(p) => Failure::Usage(format!("{e}\n  {text}\n  {}^", " ".repeat(p.pos()))),
        ExprError::Eval(_) => Failure::Usage(e.to_string()),
    }
}

#[derive(Serialize)]
struct Normalized {
    schema: u32,
    input: String,
    result: String,
    degree: Option<i64>,
    homogeneous: bool,
}

fn normalize(cli: &Cli, text: &str, lambda_nu: Option<&Path>) -> Outcome {
    let setup = load(cli, cli.extended || lambda_nu.is_some())?;
    let ctx_store;
    let ctx = match lambda_nu {
        Some(p) => {
            ctx_store = thick(&setup, p)?.1;
            EvalContext::thick(&ctx_store)
        }
        None => EvalContext::ambient(&setup.algebra),
    };
    let v = expr::eval_str(text, &ctx).map_err(|e| expr_failure(text, e))?;
    let alg = &setup.algebra;
    let e = v.ambient();
    let (degree, homogeneous) = match alg.degree_of(e) {
        Ok(d) => (d, true),
        Err(_) => (None, false),
    };
    let out = Normalized { schema: REPORT_SCHEMA, input: text.into(), result: expr::print(alg, e), degree, homogeneous };
    emit(cli, &out, || {
        let deg = match (degree, homogeneous) {
            (Some(d), _) => format!("degree {d}"),
            (None, true) => "degree: zero element".into(),
            (None, false) => "not homogeneous".into(),
        };
        format!("{}\n{deg}\n", out.result)
    });
    Ok(())
}

fn check(cli: &Cli, suite: Suite, n: usize, seed: u64, count: usize) -> Outcome {
    let needs_ext = matches!(suite, Suite::Extended | Suite::Proposition);
    let setup = load(cli, cli.extended || needs_ext)?;
    let alg = &setup.algebra;
    let report: SuiteReport = match suite {
        Suite::Defining => suites::defining(alg, n),
        Suite::Extended => suites::extended(setup.extended.as_ref().expect("extended"), alg),
        Suite::Proposition => suites::proposition(setup.extended.as_ref().expect("extended"), alg, n as u32),
        Suite::Nilhecke => suites::nilhecke(alg, n),
        Suite::Assoc => suites::assoc(alg, count, seed),
    };
    emit(cli, &report, || {
        let mut s = String::new();
        for c in &report.cases {
            if c.pass {
                s.push_str(&format!("ok   {}", c.id));
            } else {
                s.push_str(&format!("FAIL {}", c.id));
            }
            if let Some(w) = &c.witness {
                s.push_str(&format!("  [{w}]"));
            }
            s.push('\n');
        }
        s.push_str(&format!("{}: {} cases, {} failed\n", report.suite, report.total, report.failed));
        s
    });
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn parse_seq(alg: &KlrAlgebra, text: &str) -> Result<Vec<LabelId>, Failure> {
    let body = text.trim().trim_start_matches('(').trim_end_matches(')');
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|t| alg.datum().resolve(t.trim()).map_err(|e| Failure::Usage(e.to_string())))
        .collect()
}

#[derive(Serialize)]
struct DimReport {
    schema: u32,
    left: String,
    right: String,
    rows: Vec<DimRow>,
}

fn dim(cli: &Cli, left: &str, right: &str, max_degree: i64, min_degree: Option<i64>) -> Outcome {
    let setup = load(cli, cli.extended)?;
    let alg = &setup.algebra;
    let top = parse_seq(alg, left)?;
    let bottom = parse_seq(alg, right)?;
    if top.len() != bottom.len() {
        return Err(Failure::Usage(format!("boundary lengths differ: {} vs {}", top.len(), bottom.len())));
    }
    let lo = min_degree.unwrap_or_else(|| suites::min_degree(alg, &bottom));
    let rows = suites::dim_table(alg, &bottom, &top, lo..=max_degree).map_err(|e| Failure::Usage(e.to_string()))?;
    let ok = rows.iter().all(DimRow::agrees);
    let report = DimReport { schema: REPORT_SCHEMA, left: left.into(), right: right.into(), rows };
    emit(cli, &report, || {
        let mut s = format!("{:>7} {:>8} {:>8}\n", "degree", "oracle", "rank");
        for r in &report.rows {
            s.push_str(&format!("{:>7} {:>8} {:>8}\n", r.degree, r.oracle, r.rank));
        }
        s
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[derive(Serialize)]
struct EnReport {
    schema: u32,
    n: usize,
    label: String,
    element: String,
    degree: Option<i64>,
    idempotent: bool,
    /// `c` with `e_n² = c·e_n`, when it exists.
    scaling: Option<String>,
}

fn en(cli: &Cli, n: usize, label: &str) -> Outcome {
    let setup = load(cli, cli.extended)?;
    let alg = &setup.algebra;
    let l = alg.datum().resolve(label).map_err(|e| Failure::Usage(e.to_string()))?;
    let usage = |e: klr_core::KlrError| Failure::Usage(e.to_string());
    let e = alg.nilhecke_en(n, l).map_err(usage)?;
    let idempotent = alg.mul(&e, &e).map_err(usage)? == e;
    let scaling = alg.nilhecke_scaling(n, l).map_err(usage)?.map(|c| c.to_string());
    let degree = alg.degree_of(&e).ok().flatten();
    let report =
        EnReport { schema: REPORT_SCHEMA, n, label: label.into(), element: expr::print(alg, &e), degree, idempotent, scaling };
    emit(cli, &report, || {
        let status = if idempotent {
            "idempotent".to_string()
        } else {
            match &report.scaling {
                Some(c) => format!("e_n^2 = {c} e_n"),
                None => "not idempotent".into(),
            }
        };
        format!("{}\ndegree {}\n{status}\n", report.element, degree.map_or("-".into(), |d| d.to_string()))
    });
    if degree == Some(0) && report.scaling.is_some() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[derive(Serialize)]
struct SeqReport {
    schema: u32,
    count: usize,
    sequences: Vec<String>,
}

fn seq(cli: &Cli, path: &Path) -> Outcome {
    let setup = load(cli, true)?;
    let (cfg, ctx) = thick(&setup, path)?;
    let seqs = enumerate_seq(ctx.lambda(), ctx.nu(), cfg.ordered_nu).map_err(|e| Failure::Config(e.to_string()))?;
    let names: Vec<String> = seqs.iter().map(|s| ctx.seq_name(s)).collect();
    let report = SeqReport { schema: REPORT_SCHEMA, count: names.len(), sequences: names };
    emit(cli, &report, || {
        let mut s = report.sequences.join("\n");
        s.push_str(&format!("\n{} sequences\n", report.count));
        s
    });
    Ok(())
}

#[derive(Serialize)]
struct QuotientReport {
    schema: u32,
    algebra_len: usize,
    rows: Vec<QuotientRow>,
    non_increasing: bool,
    converged: Vec<graded::PieceLabel>,
}

fn quotient(cli: &Cli, path: &Path, ideal: Ideal, lengths: &[usize], algebra_len: Option<usize>, max_degree: i64) -> Outcome {
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(Failure::Usage("--lengths must be positive".into()));
    }
    let setup = load(cli, true)?;
    let (cfg, ctx) = thick(&setup, path)?;
    let alg: &Arc<KlrAlgebra> = &setup.algebra;
    let thick_err = |e: klr_core::thick::ThickError| Failure::Config(e.to_string());
    let gens: Vec<Element> = ctx.generators().map_err(thick_err)?.into_iter().map(|g| g.value.ambient().clone()).collect();
    let mut ideal_gens: Vec<Element> = match ideal {
        Ideal::Full | Ideal::SolidStart => ctx
            .quotient_ideal_generators()
            .map_err(thick_err)?
            .into_iter()
            .filter(|g| ideal == Ideal::Full || g.name.starts_with('e'))
            .map(|g| g.value.ambient().clone())
            .collect(),
        Ideal::Cyclotomic | Ideal::None => Vec::new(),
    };
    if matches!(ideal, Ideal::Full | Ideal::Cyclotomic) {
        for text in &cfg.cyclotomic {
            let v = expr::eval_str(text, &EvalContext::thick(&ctx)).map_err(|e| Failure::Config(format!("cyclotomic `{text}`: {e}")))?;
            ideal_gens.push(v.ambient().clone());
        }
    }
    let a_len = algebra_len.unwrap_or_else(|| *lengths.iter().max().expect("nonempty"));
    let name = |labels: &[LabelId]| ctx.seq_of_expansion(labels).map(|s| ctx.seq_name(s)).unwrap_or_else(|| "?".into());
    let rows = graded::quotient_sweep(alg, &gens, &ideal_gens, a_len, lengths, max_degree, &name)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let non_increasing = graded::monotonicity_violations(&rows).is_empty();
    let converged = graded::converged_pieces(&rows);
    let report = QuotientReport { schema: REPORT_SCHEMA, algebra_len: a_len, rows, non_increasing, converged };
    emit(cli, &report, || {
        let mut s = format!("{:<16} {:<16} {:>6} {:>3} {:>6} {:>6} {:>8}\n", "left", "right", "degree", "L", "rank", "ideal", "quotient");
        for r in &report.rows {
            s.push_str(&format!(
                "{:<16} {:<16} {:>6} {:>3} {:>6} {:>6} {:>8}\n",
                r.piece.left, r.piece.right, r.piece.degree, r.truncation_l, r.rank, r.ideal_rank, r.quotient
            ));
        }
        s.push_str(&format!(
            "non-increasing in L: {}; {} pieces stable over the last three L\n",
            if report.non_increasing { "yes" } else { "NO" },
            report.converged.len()
        ));
        s
    });
    Ok(())
}
