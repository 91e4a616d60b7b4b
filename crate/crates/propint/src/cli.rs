//! Command-line front end.
//!
//! `execute` is a pure function from an argv to an exit code plus payload, so
//! the whole surface is testable in-process. Exit codes: 0 success, 1 usage
//! (bad flags, grids, method or figure tokens), 2 domain or I/O failures.
//! `analyze` exits 2 when any row failed while still emitting the full
//! payload.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataio;
use crate::error::{Error, Result};
use crate::evaluation::{margin_profile, sweep, SweepGrid};
use crate::intervals::{
    ci_wald_cc_with, construct, stat_quadratic_closed, Counts, Method, WaldCcForm,
};
use crate::numerics::ConfidenceLevel;
use crate::recommend::recommend;
use crate::simulation::{simulate_coverage, DEFAULT_SEED};

/// Outcome of one CLI invocation. The payload goes to stdout verbatim (or to
/// `--output` when given).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout_payload: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WaldCcFormArg {
    /// 1/(2n) added to the variance under the root (the form studied here).
    UnderRoot,
    /// Classical additive correction outside the root.
    Additive,
}

impl From<WaldCcFormArg> for WaldCcForm {
    fn from(a: WaldCcFormArg) -> WaldCcForm {
        match a {
            WaldCcFormArg::UnderRoot => WaldCcForm::UnderRoot,
            WaldCcFormArg::Additive => WaldCcForm::Additive,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "propint",
    version,
    about = "Binomial proportion confidence intervals, exact coverage, and the quadratic method",
    disable_help_subcommand = true
)]
struct Cli {
    /// Payload format (figure-data always emits CSV).
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Write the payload to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Confidence intervals for observed counts.
    Ci(CiArgs),
    /// Quadratic test statistic for observed counts against a null p.
    Stat(StatArgs),
    /// Exact or simulated coverage probability over a grid.
    Coverage(CoverageArgs),
    /// Exact expected margin of error over a grid.
    ExpectedMe(GridArgs),
    /// Margin of error as a function of phat*(1-phat).
    MarginProfile(MarginProfileArgs),
    /// Recommend a method for a planned analysis.
    Recommend(RecommendArgs),
    /// Batch subgroup analysis of a subject-level CSV dataset.
    Analyze(AnalyzeArgs),
    /// Classical sample-size rules of thumb for the normal approximation.
    Rules(RulesArgs),
    /// Plot-ready data for the published comparison figures.
    FigureData(FigureDataArgs),
}

#[derive(Args)]
struct CiArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Comma-separated method identifiers, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    method: Vec<String>,
    /// Placement of the 1/(2n) continuity correction for wald_cc.
    #[arg(long, value_enum, default_value_t = WaldCcFormArg::UnderRoot)]
    wald_cc_form: WaldCcFormArg,
}

#[derive(Args)]
struct StatArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// Null hypothesis proportion, strictly inside (0, 1).
    #[arg(long)]
    p: f64,
}

#[derive(Args)]
struct GridArgs {
    /// Comma-separated method identifiers, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    method: Vec<String>,
    /// Trial counts: scalar, comma list, or start:stop:step.
    #[arg(long)]
    n: String,
    /// True proportions: scalar, comma list, or start:stop:step.
    #[arg(long)]
    p: String,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.95])]
    level: Vec<f64>,
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Exact enumeration over the binomial support (the default).
    #[arg(long, conflicts_with = "simulate")]
    exact: bool,
    /// Seeded Monte-Carlo estimate instead of exact enumeration.
    #[arg(long)]
    simulate: bool,
    /// Replications per grid cell when simulating.
    #[arg(long, default_value_t = 10_000)]
    reps: u64,
    /// RNG seed; defaults to PROPINT_SEED, then the built-in constant.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct MarginProfileArgs {
    /// One of wald, wald_cc, quadratic.
    #[arg(long)]
    method: String,
    /// Trial counts: scalar, comma list, or start:stop:step.
    #[arg(long)]
    n: String,
    /// phat*(1-phat) values in [0, 0.25]: scalar, list, or range.
    #[arg(long)]
    pq_grid: String,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args)]
struct RecommendArgs {
    #[arg(long)]
    n: u64,
    /// Reference proportion for the regime thresholds.
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Subject-level CSV with subject_id and outcome columns.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Subgroup filter `col=val[,col=val]`; repeatable, one subgroup each.
    /// Without any filter the whole dataset is analyzed.
    #[arg(long = "filter", value_name = "SPEC")]
    filter: Vec<String>,
    /// Comma-separated method identifiers, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    method: Vec<String>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args)]
struct RulesArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// Optional true proportion; without it the true-p rules fall back to
    /// the observed proportion.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct FigureDataArgs {
    /// One of margins-vs-n, coverage-vs-p, me-vs-p, coverage-vs-n, me-vs-n.
    figure: String,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

// payload model: every subcommand yields a rectangular record table which
// renders to all three formats, or raw preformatted text

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Str(String),
    /// Computed quantity: 7 decimals in tables, full precision in csv/json.
    Num(f64),
    /// Coordinate-like value (level, p, pq): Display everywhere.
    Plain(f64),
    Int(u64),
    Bool(bool),
    List(Vec<String>),
    Null,
}

#[derive(Debug, Clone, PartialEq)]
struct TableData {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

struct Output {
    payload: Payload,
    /// Exit 2 despite a rendered payload (analyze rows that failed).
    degraded: bool,
}

enum Payload {
    Table(TableData),
    Raw(String),
}

impl Output {
    fn table(table: TableData) -> Output {
        Output { payload: Payload::Table(table), degraded: false }
    }
}

pub fn execute<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let exit_code = if err.use_stderr() { 1 } else { 0 };
            let mut text = err.to_string();
            if !text.ends_with('\n') {
                text.push('\n');
            }
            return CommandResult { exit_code, stdout_payload: text };
        }
    };
    let format = cli.format;
    let output_path = cli.output;
    match run(cli.command) {
        Ok(out) => {
            let rendered = match &out.payload {
                Payload::Table(table) => render(table, format),
                Payload::Raw(text) => text.clone(),
            };
            let exit_code = i32::from(out.degraded) * 2;
            match output_path {
                Some(path) => match std::fs::write(&path, &rendered) {
                    Ok(()) => CommandResult {
                        exit_code,
                        stdout_payload: format!("wrote {}\n", path.display()),
                    },
                    Err(err) => CommandResult {
                        exit_code: 2,
                        stdout_payload: format!("error: {err}\n"),
                    },
                },
                None => CommandResult { exit_code, stdout_payload: rendered },
            }
        }
        Err(err) => CommandResult {
            exit_code: exit_code_for(&err),
            stdout_payload: format!("error: {err}\n"),
        },
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Usage(_)
        | Error::UnknownMethod(_)
        | Error::UnknownFigure(_)
        | Error::UnsupportedFigureLevel(_) => 1,
        _ => 2,
    }
}

fn run(cmd: Cmd) -> Result<Output> {
    match cmd {
        Cmd::Ci(a) => run_ci(a),
        Cmd::Stat(a) => run_stat(a),
        Cmd::Coverage(a) => run_coverage(a),
        Cmd::ExpectedMe(a) => run_expected_me(a),
        Cmd::MarginProfile(a) => run_margin_profile(a),
        Cmd::Recommend(a) => run_recommend(a),
        Cmd::Analyze(a) => run_analyze(a),
        Cmd::Rules(a) => run_rules(a),
        Cmd::FigureData(a) => run_figure_data(a),
    }
}

fn parse_methods(tokens: &[String]) -> Result<Vec<Method>> {
    if tokens.len() == 1 && tokens[0].eq_ignore_ascii_case("all") {
        return Ok(Method::ALL.to_vec());
    }
    tokens.iter().map(|t| t.trim().parse()).collect()
}

/// Grid syntax: a scalar, a comma list, or `start:stop:step` (inclusive of
/// stop when it lands on the lattice). Values snap to 12 decimals so that
/// accumulated step error never leaks into output coordinates.
fn parse_f64_grid(spec: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::Usage(format!("empty entry in grid `{spec}`")));
        }
        if token.contains(':') {
            let parts: Vec<&str> = token.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Usage(format!(
                    "range syntax is start:stop:step, got `{token}`"
                )));
            }
            let start = parse_number(parts[0])?;
            let stop = parse_number(parts[1])?;
            let step = parse_number(parts[2])?;
            if !(step > 0.0) {
                return Err(Error::Usage(format!("step must be positive in `{token}`")));
            }
            if stop < start {
                return Err(Error::Usage(format!("stop is below start in `{token}`")));
            }
            let count = ((stop - start) / step + 0.5).floor() as usize + 1;
            for i in 0..count {
                values.push(snap12(start + i as f64 * step));
            }
        } else {
            values.push(parse_number(token)?);
        }
    }
    Ok(values)
}

fn parse_u64_grid(spec: &str) -> Result<Vec<u64>> {
    parse_f64_grid(spec)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
                Ok(v as u64)
            } else {
                Err(Error::Usage(format!("expected integers in grid, got {v}")))
            }
        })
        .collect()
}

fn parse_number(token: &str) -> Result<f64> {
    token
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Usage(format!("not a number: `{token}`")))
}

fn snap12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

fn resolve_seed(cli_seed: Option<u64>) -> Result<u64> {
    if let Some(seed) = cli_seed {
        return Ok(seed);
    }
    match std::env::var("PROPINT_SEED") {
        Ok(raw) => raw.trim().parse::<u64>().map_err(|_| {
            Error::Usage(format!("PROPINT_SEED must be an unsigned integer, got `{raw}`"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(Error::Usage("PROPINT_SEED is not valid unicode".into()))
        }
    }
}

fn parse_levels(levels: &[f64]) -> Result<Vec<ConfidenceLevel>> {
    levels.iter().map(|&l| ConfidenceLevel::new(l)).collect()
}

fn run_ci(a: CiArgs) -> Result<Output> {
    let lv = ConfidenceLevel::new(a.level)?;
    let methods = parse_methods(&a.method)?;
    let c = Counts::new(a.n, a.k)?;
    let mut rows = Vec::with_capacity(methods.len());
    for m in methods {
        let interval = match m {
            Method::WaldCc => ci_wald_cc_with(c, lv, a.wald_cc_form.into()),
            _ => construct(m, c, lv)?,
        };
        rows.push(vec![
            Cell::Str(m.to_string()),
            Cell::Plain(lv.level()),
            Cell::Int(a.n),
            Cell::Int(a.k),
            Cell::Num(interval.lower),
            Cell::Num(interval.upper),
            Cell::Bool(interval.degenerate),
            Cell::Bool(interval.overshoot),
        ]);
    }
    Ok(Output::table(TableData {
        headers: vec!["method", "level", "n", "k", "lower", "upper", "degenerate", "overshoot"],
        rows,
    }))
}

fn run_stat(a: StatArgs) -> Result<Output> {
    let c = Counts::new(a.n, a.k)?;
    let statistic = stat_quadratic_closed(c, a.p)?;
    Ok(Output::table(TableData {
        headers: vec!["n", "k", "p", "statistic"],
        rows: vec![vec![
            Cell::Int(a.n),
            Cell::Int(a.k),
            Cell::Plain(a.p),
            Cell::Num(statistic),
        ]],
    }))
}

fn run_coverage(a: CoverageArgs) -> Result<Output> {
    let methods = parse_methods(&a.grid.method)?;
    let levels = parse_levels(&a.grid.level)?;
    let n_values = parse_u64_grid(&a.grid.n)?;
    let p_values = parse_f64_grid(&a.grid.p)?;
    // exact enumeration is the default; --exact only makes it explicit, and
    // clap rejects combining it with --simulate
    let simulate = a.simulate && !a.exact;
    if !simulate {
        let grid = SweepGrid { methods, levels, n_values, p_values };
        return sweep_output(&grid);
    }
    let seed = resolve_seed(a.seed)?;
    let mut rows = Vec::new();
    for &m in &methods {
        for &lv in &levels {
            for &n in &n_values {
                for &p in &p_values {
                    let rep = simulate_coverage(m, n, p, lv, a.reps, seed)?;
                    rows.push(vec![
                        Cell::Str(m.to_string()),
                        Cell::Plain(lv.level()),
                        Cell::Int(n),
                        Cell::Plain(p),
                        Cell::Int(rep.replications),
                        Cell::Num(rep.empirical_coverage),
                        Cell::Num(rep.standard_error),
                        Cell::Int(rep.seed),
                    ]);
                }
            }
        }
    }
    Ok(Output::table(TableData {
        headers: vec![
            "method",
            "level",
            "n",
            "p",
            "replications",
            "empirical_coverage",
            "standard_error",
            "seed",
        ],
        rows,
    }))
}

fn run_expected_me(a: GridArgs) -> Result<Output> {
    let grid = SweepGrid {
        methods: parse_methods(&a.method)?,
        levels: parse_levels(&a.level)?,
        n_values: parse_u64_grid(&a.n)?,
        p_values: parse_f64_grid(&a.p)?,
    };
    sweep_output(&grid)
}

fn sweep_output(grid: &SweepGrid) -> Result<Output> {
    let points = sweep(grid)?;
    let rows = points
        .into_iter()
        .map(|pt| {
            vec![
                Cell::Str(pt.method.to_string()),
                Cell::Plain(pt.level),
                Cell::Int(pt.n),
                Cell::Plain(pt.p),
                Cell::Num(pt.coverage),
                Cell::Num(pt.expected_me),
            ]
        })
        .collect();
    Ok(Output::table(TableData {
        headers: vec!["method", "level", "n", "p", "coverage", "expected_me"],
        rows,
    }))
}

fn run_margin_profile(a: MarginProfileArgs) -> Result<Output> {
    let method: Method = a.method.trim().parse()?;
    let lv = ConfidenceLevel::new(a.level)?;
    let n_values = parse_u64_grid(&a.n)?;
    let pq_values = parse_f64_grid(&a.pq_grid)?;
    let mut rows = Vec::with_capacity(n_values.len() * pq_values.len());
    for &n in &n_values {
        for &v in &pq_values {
            let margin = margin_profile(method, n, v, lv)?;
            rows.push(vec![
                Cell::Str(method.to_string()),
                Cell::Plain(lv.level()),
                Cell::Int(n),
                Cell::Plain(v),
                Cell::Num(margin),
            ]);
        }
    }
    Ok(Output::table(TableData {
        headers: vec!["method", "level", "n", "pq", "margin"],
        rows,
    }))
}

fn run_recommend(a: RecommendArgs) -> Result<Output> {
    let lv = ConfidenceLevel::new(a.level)?;
    let rec = recommend(a.n, a.p, lv)?;
    Ok(Output::table(TableData {
        headers: vec!["n", "p_ref", "level", "preferred", "acceptable", "rationale"],
        rows: vec![vec![
            Cell::Int(a.n),
            Cell::Plain(a.p),
            Cell::Plain(rec.level),
            Cell::Str(rec.preferred.to_string()),
            Cell::List(rec.acceptable.iter().map(|m| m.to_string()).collect()),
            Cell::Str(rec.rationale),
        ]],
    }))
}

fn parse_filter(spec: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for clause in spec.split(',') {
        let (col, val) = clause.split_once('=').ok_or_else(|| {
            Error::Usage(format!("filter clauses are col=val, got `{clause}`"))
        })?;
        let col = col.trim();
        if col.is_empty() {
            return Err(Error::Usage(format!("empty column name in filter `{spec}`")));
        }
        pairs.push((col.to_string(), val.trim().to_string()));
    }
    Ok(pairs)
}

fn render_filter(filter: &[(String, String)]) -> String {
    if filter.is_empty() {
        return "(all)".into();
    }
    filter
        .iter()
        .map(|(c, v)| format!("{c}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn run_analyze(a: AnalyzeArgs) -> Result<Output> {
    let lv = ConfidenceLevel::new(a.level)?;
    let methods = parse_methods(&a.method)?;
    let filters: Vec<Vec<(String, String)>> = if a.filter.is_empty() {
        vec![Vec::new()]
    } else {
        a.filter.iter().map(|f| parse_filter(f)).collect::<Result<_>>()?
    };
    let records = dataio::load_dataset_path(&a.input)?;
    let analysis = dataio::analyze(&records, &filters, &methods, lv)?;
    let mut degraded = false;
    let rows = analysis
        .into_iter()
        .map(|row| {
            let mut cells = vec![
                Cell::Str(render_filter(&row.filter)),
                Cell::Str(row.method.to_string()),
                Cell::Plain(row.level),
                Cell::Int(row.n),
                Cell::Int(row.k),
            ];
            match row.outcome {
                Ok(interval) => cells.extend([
                    Cell::Num(interval.lower),
                    Cell::Num(interval.upper),
                    Cell::Bool(interval.degenerate),
                    Cell::Bool(interval.overshoot),
                    Cell::Null,
                ]),
                Err(message) => {
                    degraded = true;
                    cells.extend([
                        Cell::Null,
                        Cell::Null,
                        Cell::Null,
                        Cell::Null,
                        Cell::Str(message),
                    ]);
                }
            }
            cells
        })
        .collect();
    Ok(Output {
        payload: Payload::Table(TableData {
            headers: vec![
                "filter",
                "method",
                "level",
                "n",
                "k",
                "lower",
                "upper",
                "degenerate",
                "overshoot",
                "error",
            ],
            rows,
        }),
        degraded,
    })
}

fn run_rules(a: RulesArgs) -> Result<Output> {
    let c = Counts::new(a.n, a.k)?;
    if let Some(p) = a.p {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
    }
    let n = a.n as f64;
    let p_hat = c.p_hat();
    let (true_p, true_basis) = match a.p {
        Some(p) => (p, "true p".to_string()),
        None => (p_hat, "p_hat (no true p supplied)".to_string()),
    };
    let min_np = (n * true_p).min(n * (1.0 - true_p));
    let min_nphat = (n * p_hat).min(n * (1.0 - p_hat));
    let npq_hat = n * p_hat * (1.0 - p_hat);
    let specs: [(&str, &str, f64, f64); 6] = [
        ("min(n*p, n*(1-p)) >= 5", true_basis.as_str(), 5.0, min_np),
        ("min(n*p, n*(1-p)) >= 10", true_basis.as_str(), 10.0, min_np),
        ("min(n*phat, n*(1-phat)) >= 5", "p_hat", 5.0, min_nphat),
        ("min(n*phat, n*(1-phat)) >= 10", "p_hat", 10.0, min_nphat),
        ("n*phat*(1-phat) >= 5", "p_hat", 5.0, npq_hat),
        ("n*phat*(1-phat) >= 10", "p_hat", 10.0, npq_hat),
    ];
    let rows = specs
        .iter()
        .map(|&(rule, basis, threshold, value)| {
            vec![
                Cell::Str(rule.to_string()),
                Cell::Str(basis.to_string()),
                Cell::Plain(threshold),
                Cell::Num(value),
                Cell::Bool(value >= threshold),
            ]
        })
        .collect();
    Ok(Output::table(TableData {
        headers: vec!["rule", "basis", "threshold", "value", "satisfied"],
        rows,
    }))
}

fn run_figure_data(a: FigureDataArgs) -> Result<Output> {
    let payload = emit_figure_data(&a.figure, a.level)?;
    Ok(Output { payload: Payload::Raw(payload), degraded: false })
}

/// Figure methods in presentation order: standard, proposed, then the two
/// main competitors.
const FIGURE_METHODS: [Method; 4] =
    [Method::Wald, Method::Quadratic, Method::AgrestiCoull, Method::Wilson];

const FIGURE_LEVELS: [f64; 3] = [0.90, 0.95, 0.99];

/// CSV data behind the published comparison figures. Deterministic: two
/// calls with the same arguments produce identical bytes.
pub fn emit_figure_data(figure_id: &str, level: f64) -> Result<String> {
    if !FIGURE_LEVELS.contains(&level) {
        return Err(Error::UnsupportedFigureLevel(level));
    }
    let lv = ConfidenceLevel::new(level)?;
    match figure_id {
        "margins-vs-n" => {
            // margin of error against phat*(1-phat) for a spread of n
            let mut rows = Vec::new();
            for m in [Method::Wald, Method::Quadratic] {
                for n in [5u64, 10, 20, 30, 50, 100] {
                    for i in 0..=50u32 {
                        let v = f64::from(i) / 200.0;
                        let margin = margin_profile(m, n, v, lv)?;
                        rows.push(vec![
                            Cell::Str(m.to_string()),
                            Cell::Plain(level),
                            Cell::Int(n),
                            Cell::Plain(v),
                            Cell::Num(margin),
                        ]);
                    }
                }
            }
            Ok(render_csv(&TableData {
                headers: vec!["method", "level", "n", "pq", "margin"],
                rows,
            }))
        }
        "coverage-vs-p" | "me-vs-p" => {
            let grid = SweepGrid {
                methods: FIGURE_METHODS.to_vec(),
                levels: vec![lv],
                n_values: vec![10, 20, 30, 100],
                p_values: (0..=1000).map(|i| f64::from(i) / 1000.0).collect(),
            };
            sweep_csv(&grid)
        }
        "coverage-vs-n" | "me-vs-n" => {
            let grid = SweepGrid {
                methods: FIGURE_METHODS.to_vec(),
                levels: vec![lv],
                n_values: (5..=100).collect(),
                p_values: vec![0.01, 0.05, 0.1, 0.2],
            };
            sweep_csv(&grid)
        }
        other => Err(Error::UnknownFigure(other.to_string())),
    }
}

fn sweep_csv(grid: &SweepGrid) -> Result<String> {
    match sweep_output(grid)? {
        Output { payload: Payload::Table(table), .. } => Ok(render_csv(&table)),
        _ => unreachable!("sweep_output always yields a table"),
    }
}

// rendering

fn render(table: &TableData, format: FormatArg) -> String {
    match format {
        FormatArg::Table => render_table(table),
        FormatArg::Csv => render_csv(table),
        FormatArg::Json => render_json(table),
    }
}

fn cell_text(cell: &Cell, fixed: bool) -> String {
    match cell {
        Cell::Str(s) => s.clone(),
        Cell::Num(v) => {
            if fixed {
                format!("{v:.7}")
            } else {
                format!("{v}")
            }
        }
        Cell::Plain(v) => format!("{v}"),
        Cell::Int(v) => format!("{v}"),
        Cell::Bool(b) => format!("{b}"),
        Cell::List(items) => items.join(";"),
        Cell::Null => if fixed { "-".into() } else { String::new() },
    }
}

fn render_table(table: &TableData) -> String {
    let rendered: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|row| row.iter().map(|c| cell_text(c, true)).collect())
        .collect();
    let mut widths: Vec<usize> = table.headers.iter().map(|h| h.len()).collect();
    for row in &rendered {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let emit_row = |out: &mut String, cells: &[String]| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            if i + 1 == cells.len() {
                out.push_str(cell);
            } else {
                let _ = write!(out, "{cell:<width$}", width = widths[i]);
            }
        }
        out.push('\n');
    };
    let headers: Vec<String> = table.headers.iter().map(|h| h.to_string()).collect();
    emit_row(&mut out, &headers);
    for row in &rendered {
        emit_row(&mut out, row);
    }
    out
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn render_csv(table: &TableData) -> String {
    let mut out = String::new();
    out.push_str(&table.headers.join(","));
    out.push('\n');
    for row in &table.rows {
        let fields: Vec<String> =
            row.iter().map(|c| csv_escape(&cell_text(c, false))).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn render_json(table: &TableData) -> String {
    let array: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            for (header, cell) in table.headers.iter().zip(row) {
                let value = match cell {
                    Cell::Str(s) => serde_json::Value::String(s.clone()),
                    Cell::Num(v) | Cell::Plain(v) => serde_json::Number::from_f64(*v)
                        .map(serde_json::Value::Number)
                        .unwrap_or(serde_json::Value::Null),
                    Cell::Int(v) => serde_json::Value::Number((*v).into()),
                    Cell::Bool(b) => serde_json::Value::Bool(*b),
                    Cell::List(items) => serde_json::Value::Array(
                        items.iter().cloned().map(serde_json::Value::String).collect(),
                    ),
                    Cell::Null => serde_json::Value::Null,
                };
                obj.insert((*header).to_string(), value);
            }
            serde_json::Value::Object(obj)
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Array(array))
        .expect("json serialization of plain values cannot fail");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> String {
        let result = execute(args.iter().copied());
        assert_eq!(result.exit_code, 0, "payload: {}", result.stdout_payload);
        result.stdout_payload
    }

    #[test]
    fn ci_table_has_all_methods_and_frozen_values() {
        let out = run_ok(&["propint", "ci", "--n", "10", "--k", "2"]);
        for m in Method::ALL {
            assert!(out.contains(m.id()), "missing {m} in:\n{out}");
        }
        assert!(out.contains("-0.0479180"));
        assert!(out.contains("0.4479180"));
        // quadratic bounds
        assert!(out.contains("0.0330578"));
        assert!(out.contains("0.5109173"));
    }

    #[test]
    fn ci_respects_method_selection_and_order() {
        let out = run_ok(&["propint", "ci", "--n", "10", "--k", "2", "--method", "wilson,wald"]);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("wilson"));
        assert!(lines[2].starts_with("wald"));
    }

    #[test]
    fn ci_wald_cc_form_switch_changes_bounds() {
        let default = run_ok(&["propint", "ci", "--n", "10", "--k", "2", "--method", "wald_cc"]);
        assert!(default.contains("-0.3035239"));
        let additive = run_ok(&[
            "propint", "ci", "--n", "10", "--k", "2", "--method", "wald_cc",
            "--wald-cc-form", "additive",
        ]);
        assert!(additive.contains("-0.0979180"));
    }

    #[test]
    fn stat_prints_the_statistic() {
        let out = run_ok(&["propint", "stat", "--n", "10", "--k", "2", "--p", "0.5"]);
        assert!(out.contains("3.6000000"), "{out}");
        let neg = run_ok(&["propint", "stat", "--n", "5", "--k", "1", "--p", "0.1"]);
        assert!(neg.contains("-0.3333333"), "{neg}");
    }

    #[test]
    fn coverage_exact_csv_row() {
        let out = run_ok(&[
            "propint", "--format", "csv", "coverage", "--method", "wald", "--n", "10",
            "--p", "0.2", "--level", "0.95",
        ]);
        let mut lines = out.lines();
        assert_eq!(
            lines.next().unwrap(),
            "method,level,n,p,coverage,expected_me"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("wald,0.95,10,0.2,0.88625643"), "{row}");
    }

    #[test]
    fn coverage_grid_syntax_expands() {
        let out = run_ok(&[
            "propint", "--format", "csv", "coverage", "--method", "wald", "--n", "10,20",
            "--p", "0.1:0.3:0.1", "--level", "0.95",
        ]);
        // header + 2 n-values x 3 p-values
        assert_eq!(out.lines().count(), 7);
        assert!(out.contains("wald,0.95,20,0.3,"));
    }

    #[test]
    fn coverage_simulate_is_deterministic_and_seeded() {
        let args = [
            "propint", "--format", "csv", "coverage", "--simulate", "--method", "quadratic",
            "--n", "10", "--p", "0.2", "--level", "0.95", "--reps", "2000", "--seed", "7",
        ];
        let a = run_ok(&args);
        let b = run_ok(&args);
        assert_eq!(a, b);
        assert!(a.lines().nth(1).unwrap().ends_with(",7"), "{a}");
        assert!(a.starts_with(
            "method,level,n,p,replications,empirical_coverage,standard_error,seed"
        ));
    }

    #[test]
    fn seed_precedence_flag_over_env() {
        // the env var path is exercised without parallel-test interference by
        // resolving directly
        assert_eq!(resolve_seed(Some(9)).unwrap(), 9);
        std::env::remove_var("PROPINT_SEED");
        assert_eq!(resolve_seed(None).unwrap(), DEFAULT_SEED);
    }

    #[test]
    fn expected_me_matches_coverage_payload_schema() {
        let out = run_ok(&[
            "propint", "--format", "csv", "expected-me", "--method", "quadratic",
            "--n", "10", "--p", "0.2",
        ]);
        assert!(out.starts_with("method,level,n,p,coverage,expected_me"));
        assert!(out.contains("0.22503666"), "{out}");
    }

    #[test]
    fn margin_profile_rejects_unsupported_methods() {
        let result = execute([
            "propint", "margin-profile", "--method", "wilson", "--n", "30", "--pq-grid", "0.25",
        ]);
        assert_eq!(result.exit_code, 2);
        assert!(result.stdout_payload.contains("margin profile"));
    }

    #[test]
    fn margin_profile_emits_grid() {
        let out = run_ok(&[
            "propint", "--format", "csv", "margin-profile", "--method", "quadratic",
            "--n", "30", "--pq-grid", "0:0.25:0.05",
        ]);
        assert_eq!(out.lines().count(), 7);
        assert!(out.starts_with("method,level,n,pq,margin"));
        assert!(out.contains("quadratic,0.95,30,0.25,"));
    }

    #[test]
    fn recommend_json_has_acceptable_array() {
        let out = run_ok(&[
            "propint", "--format", "json", "recommend", "--n", "8", "--p", "0.1",
        ]);
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        let row = &parsed.as_array().unwrap()[0];
        assert_eq!(row["preferred"], "quadratic");
        assert_eq!(row["acceptable"].as_array().unwrap().len(), 1);
        assert!(row["rationale"].as_str().unwrap().contains("reference proportion"));
    }

    #[test]
    fn rules_reports_six_checks() {
        let out = run_ok(&["propint", "rules", "--n", "90", "--k", "3"]);
        assert_eq!(out.lines().count(), 7);
        // n*phat = 3 fails every threshold
        for line in out.lines().skip(1) {
            assert!(line.trim_end().ends_with("false"), "{line}");
        }
        let with_p = run_ok(&["propint", "rules", "--n", "200", "--k", "100", "--p", "0.5"]);
        assert!(with_p.contains("true p"));
        for line in with_p.lines().skip(1) {
            assert!(line.trim_end().ends_with("true"), "{line}");
        }
    }

    #[test]
    fn figure_data_is_csv_and_deterministic() {
        let a = run_ok(&["propint", "figure-data", "margins-vs-n", "--level", "0.95"]);
        let b = run_ok(&["propint", "figure-data", "margins-vs-n", "--level", "0.95"]);
        assert_eq!(a, b);
        assert!(a.starts_with("method,level,n,pq,margin\n"));
        // 2 methods x 6 n x 51 pq values + header
        assert_eq!(a.lines().count(), 2 * 6 * 51 + 1);
    }

    #[test]
    fn figure_data_rejects_unknown_ids_and_levels() {
        let bad_id = execute(["propint", "figure-data", "coverage-vs-q"]);
        assert_eq!(bad_id.exit_code, 1);
        let bad_level = execute(["propint", "figure-data", "coverage-vs-p", "--level", "0.8"]);
        assert_eq!(bad_level.exit_code, 1);
    }

    #[test]
    fn csv_and_json_payloads_agree_field_by_field() {
        let base = ["ci", "--n", "10", "--k", "0", "--level", "0.99"];
        let mut csv_args = vec!["propint", "--format", "csv"];
        csv_args.extend_from_slice(&base);
        let mut json_args = vec!["propint", "--format", "json"];
        json_args.extend_from_slice(&base);
        let csv_text = run_ok(&csv_args);
        let json_text = run_ok(&json_args);

        let mut rdr = csv::ReaderBuilder::new().from_reader(csv_text.as_bytes());
        let headers = rdr.headers().unwrap().clone();
        let csv_rows: Vec<csv::StringRecord> =
            rdr.records().map(|r| r.unwrap()).collect();
        let json_rows: Vec<serde_json::Value> =
            serde_json::from_str::<serde_json::Value>(&json_text)
                .unwrap()
                .as_array()
                .unwrap()
                .clone();
        assert_eq!(csv_rows.len(), json_rows.len());
        for (crow, jrow) in csv_rows.iter().zip(&json_rows) {
            for (i, header) in headers.iter().enumerate() {
                let cfield = crow.get(i).unwrap();
                match &jrow[header] {
                    serde_json::Value::Number(num) => {
                        assert_eq!(cfield.parse::<f64>().unwrap(), num.as_f64().unwrap());
                    }
                    serde_json::Value::Bool(b) => {
                        assert_eq!(cfield.parse::<bool>().unwrap(), *b);
                    }
                    serde_json::Value::String(s) => assert_eq!(cfield, s),
                    serde_json::Value::Null => assert_eq!(cfield, ""),
                    other => panic!("unexpected json value {other:?}"),
                }
            }
        }
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(execute(["propint", "nonsense"]).exit_code, 1);
        assert_eq!(
            execute(["propint", "ci", "--n", "10", "--k", "2", "--method", "wald2"]).exit_code,
            1
        );
        assert_eq!(
            execute(["propint", "coverage", "--method", "wald", "--n", "5:1:1", "--p", "0.5"])
                .exit_code,
            1
        );
        assert_eq!(
            execute([
                "propint", "coverage", "--method", "wald", "--n", "10", "--p", "0.5",
                "--exact", "--simulate",
            ])
            .exit_code,
            1
        );
    }

    #[test]
    fn domain_errors_exit_two() {
        assert_eq!(execute(["propint", "ci", "--n", "0", "--k", "0"]).exit_code, 2);
        assert_eq!(
            execute(["propint", "ci", "--n", "5", "--k", "9"]).exit_code,
            2
        );
        assert_eq!(
            execute(["propint", "stat", "--n", "10", "--k", "2", "--p", "0"]).exit_code,
            2
        );
    }

    #[test]
    fn help_exits_zero() {
        let help = execute(["propint", "--help"]);
        assert_eq!(help.exit_code, 0);
        assert!(help.stdout_payload.contains("figure-data"));
    }

    #[test]
    fn grid_parser_details() {
        assert_eq!(parse_f64_grid("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_f64_grid("0.1,0.2").unwrap(), vec![0.1, 0.2]);
        let g = parse_f64_grid("0.1:0.3:0.1").unwrap();
        assert_eq!(g, vec![0.1, 0.2, 0.3]);
        let n = parse_u64_grid("5:25:5").unwrap();
        assert_eq!(n, vec![5, 10, 15, 20, 25]);
        assert!(parse_u64_grid("1.5").is_err());
        assert!(parse_f64_grid("0.1:0.3").is_err());
        assert!(parse_f64_grid("0.3:0.1:0.1").is_err());
        assert!(parse_f64_grid("").is_err());
        // snapping keeps lattice coordinates clean
        let fine = parse_f64_grid("0:0.3:0.005").unwrap();
        assert_eq!(fine.len(), 61);
        assert_eq!(fine[3], 0.015);
    }

    #[test]
    fn table_format_is_aligned() {
        let out = run_ok(&["propint", "ci", "--n", "10", "--k", "2", "--method", "wald"]);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("method"));
        let header_cols: Vec<usize> = lines[0]
            .match_indices("lower")
            .map(|(i, _)| i)
            .collect();
        assert_eq!(header_cols.len(), 1);
    }
}
