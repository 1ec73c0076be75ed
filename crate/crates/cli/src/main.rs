//! `srimcount`: exact counts, bounds and verification for irreducible and
//! self-reciprocal irreducible polynomials with prescribed coefficients.
//!
//! Exit status: 0 success, 2 usage or precondition error, 3 verification
//! failure, 4 budget exceeded.

mod output;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{cell, Format};
use srimcount::bounds::bounds_report;
use srimcount::count::{CountKind, Counter, Method};
use srimcount::cyclo::{degree_stats_from, WeightSystem};
use srimcount::gf::{is_prime, prime_power, Field};
use srimcount::hayes::{parse_class, GroupOptions, GroupStructure, HayesClass};
use srimcount::oracle::{oracle_f, oracle_i, oracle_s, OracleOptions, DEFAULT_BUDGET};
use srimcount::verify::{check_example, run_suite, worked_example, Suite, VerifyConfig, WORKED_EXAMPLES};
use srimcount::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "srimcount",
    version,
    about = "Counts of irreducible and SRIM polynomials with prescribed coefficients"
)]
struct Cli {
    /// Field order q = p^r.
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Extension degree r; with a prime --q p the field is F_{p^r}.
    #[arg(long = "ext-degree", global = true)]
    ext_degree: Option<u32>,
    /// Defining polynomial of the extension, ascending coefficients "1,1,0,1".
    #[arg(long, global = true)]
    modulus: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest number of candidate polynomials a brute-force step may visit.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Omit elapsed_ms fields.
    #[arg(long = "no-timing", global = true)]
    no_timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Structure of E^{l,t}: generators and invariant orders.
    Group(Shape),
    /// Weight polynomials P(z; eps) of every class, with d_j, D, D'.
    Ptable(Shape),
    /// Degree statistics of E^l; --check-paper compares the nine worked examples.
    Dtable(DtableArgs),
    /// Exact counts by formula, by enumeration, or both.
    Count {
        #[command(subcommand)]
        kind: CountCmd,
    },
    /// Error bounds at one point or over a grid.
    Bounds(BoundsArgs),
    /// Brute-force enumeration.
    Oracle(OracleArgs),
    /// Grid verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct Shape {
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct Window {
    /// Class text "a=(1,0);b=(1)".
    #[arg(long)]
    epsilon: Option<String>,
    /// a_1,..,a_l.
    #[arg(long, value_delimiter = ',')]
    leading: Option<Vec<String>>,
    /// b_0,..,b_{t-1}.
    #[arg(long, value_delimiter = ',')]
    ending: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct DtableArgs {
    #[arg(long)]
    ell: Option<usize>,
    /// Compare against the embedded worked examples; exit 3 on mismatch.
    #[arg(long = "check-paper")]
    check_paper: bool,
    /// Also compute D' (builds E^{l,l+1}).
    #[arg(long)]
    dprime: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MethodArg {
    Formula,
    Oracle,
    Both,
}

#[derive(Subcommand, Debug)]
enum CountCmd {
    Irreducible {
        /// Degree, or an inclusive range "1..10".
        #[arg(long)]
        d: String,
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        window: Window,
        #[arg(long, value_enum, default_value_t = MethodArg::Formula)]
        method: MethodArg,
    },
    Srim {
        /// Half-degree, or an inclusive range.
        #[arg(long = "half-degree", alias = "d")]
        half_degree: String,
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        window: Window,
        #[arg(long, value_enum, default_value_t = MethodArg::Formula)]
        method: MethodArg,
    },
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Degree, or an inclusive range "1..10".
    #[arg(long)]
    d: String,
    #[command(flatten)]
    shape: Shape,
    #[command(flatten)]
    window: Window,
    /// Include exact counts and per-bound verdicts.
    #[arg(long = "with-exact")]
    with_exact: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OracleKindArg {
    Irreducible,
    Srim,
    #[value(name = "F")]
    F,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(value_enum)]
    kind: OracleKindArg,
    /// Degree (half-degree for srim).
    #[arg(long, alias = "half-degree")]
    d: usize,
    #[command(flatten)]
    shape: Shape,
    #[command(flatten)]
    window: Window,
    /// List matching polynomials (capped).
    #[arg(long)]
    witnesses: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suites to run (repeatable); all by default.
    #[arg(long, value_parser = parse_suite)]
    suite: Vec<Suite>,
    /// Several field orders "2,3"; --q selects one.
    #[arg(long, value_delimiter = ',')]
    qs: Option<Vec<u64>>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long = "d-max")]
    d_max: Option<u64>,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    Suite::parse(s).ok_or_else(|| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite {s:?}; expected one of {}", names.join(", "))
    })
}

/// What a command produced; `failed` selects exit status 3.
struct Output {
    value: Value,
    csv: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    failed: bool,
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn one_or_many(mut v: Vec<Value>) -> Value {
    if v.len() == 1 {
        v.pop().unwrap()
    } else {
        Value::Array(v)
    }
}

fn parse_range(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parse(format!("bad degree or range {s:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a == 0 || a > b {
        return Err(Error::Precondition(format!(
            "degree range {s:?} must be non-empty and start at >= 1"
        )));
    }
    Ok((a..=b).collect())
}

#[derive(Clone)]
struct Ctx {
    q: Option<u64>,
    ext_degree: Option<u32>,
    modulus: Option<String>,
    budget: u64,
}

impl Ctx {
    fn field(&self) -> Result<Arc<Field>> {
        let q = self.q.ok_or_else(|| Error::Precondition("--q is required".into()))?;
        let (p, r) = match self.ext_degree {
            Some(r) if is_prime(q) => (q, r),
            Some(r) => match prime_power(q) {
                Some((p, rr)) if rr == r => (p, r),
                _ => return Err(Error::Precondition(format!("--q {q} and --ext-degree {r} disagree"))),
            },
            None => prime_power(q).ok_or(Error::NotPrime(q))?,
        };
        let modulus = match &self.modulus {
            Some(m) => Some(
                m.split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad modulus {m:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        let p = u32::try_from(p).map_err(|_| Error::FieldTooLarge(q))?;
        Ok(Arc::new(Field::new(p, r, modulus.as_deref())?))
    }

    fn oracle_opts(&self, witnesses: bool) -> OracleOptions {
        OracleOptions {
            budget: self.budget,
            witnesses,
            ..Default::default()
        }
    }
}

// (l, t) from explicit flags, else from the class or window lengths
fn shape_of(ctx: &Ctx, shape: &Shape, w: &Window) -> Result<(usize, usize)> {
    let (mut ell, mut t) = (w.leading.as_ref().map(Vec::len), w.ending.as_ref().map(Vec::len));
    if let Some(e) = &w.epsilon {
        let c = parse_class(&*ctx.field()?, e)?;
        (ell, t) = (Some(c.ell()), Some(c.t()));
    }
    Ok((shape.ell.or(ell).unwrap_or(0), shape.t.or(t).unwrap_or(0)))
}

// the selected class, or every class when none is given
fn classes(g: &GroupStructure, w: &Window) -> Result<Vec<usize>> {
    if let Some(e) = &w.epsilon {
        if w.leading.is_some() || w.ending.is_some() {
            return Err(Error::Precondition(
                "give --epsilon or --leading/--ending, not both".into(),
            ));
        }
        return Ok(vec![g.index_of(&g.parse_class(e)?)?]);
    }
    if w.leading.is_none() && w.ending.is_none() {
        return Ok((0..g.size()).collect());
    }
    let f = g.field();
    let parse = |v: &Option<Vec<String>>| -> Result<Vec<_>> { v.iter().flatten().map(|s| f.parse_elem(s)).collect() };
    let (a, b) = (parse(&w.leading)?, parse(&w.ending)?);
    if a.len() != g.ell() || b.len() != g.t() {
        return Err(Error::Precondition(format!(
            "windows have lengths ({}, {}), expected (l, t) = ({}, {})",
            a.len(),
            b.len(),
            g.ell(),
            g.t()
        )));
    }
    Ok(vec![g.index_of(&HayesClass::new(a, b))?])
}

fn group_of(ctx: &Ctx, ell: usize, t: usize) -> Result<Arc<GroupStructure>> {
    Ok(Arc::new(GroupStructure::build(ctx.field()?, ell, t)?))
}

fn cmd_group(ctx: &Ctx, s: &Shape) -> Result<Output> {
    let g = group_of(ctx, s.ell.unwrap_or(0), s.t.unwrap_or(0))?;
    let sum = g.summary();
    let rows = sum
        .generators
        .iter()
        .zip(&sum.orders)
        .map(|(gen, o)| vec![gen.clone(), o.to_string()])
        .collect();
    Ok(Output {
        value: to_value(&sum),
        csv: Some((vec!["generator", "order"], rows)),
        failed: false,
    })
}

fn cmd_ptable(ctx: &Ctx, s: &Shape) -> Result<Output> {
    let g = group_of(ctx, s.ell.unwrap_or(0), s.t.unwrap_or(0))?;
    let polys = WeightSystem::new(&g)?.all();
    let opts = GroupOptions::default();
    let stats = degree_stats_from(&g, &polys, (g.t() == 0).then_some(&opts))?;
    let mut rows = Vec::new();
    let mut list = Vec::new();
    for p in &polys {
        let coeffs: Vec<String> = p.coeffs[..=p.degree()].iter().map(|c| c.to_string()).collect();
        let eps = g.fmt_index(p.eps);
        rows.push(vec![eps.clone(), p.degree().to_string(), coeffs.join(";")]);
        list.push(json!({"eps": eps, "deg": p.degree(), "coeffs": coeffs}));
    }
    let summary = to_value(&stats);
    rows.push(vec![
        "summary".into(),
        format!("dvec={}", cell(&summary, "dvec")),
        format!(
            "D={};Dprime={};ratio={}",
            cell(&summary, "D"),
            cell(&summary, "Dprime"),
            cell(&summary, "ratio")
        ),
    ]);
    Ok(Output {
        value: json!({"conductor": g.conductor(), "classes": list, "summary": summary}),
        csv: Some((vec!["eps", "deg", "coeffs"], rows)),
        failed: false,
    })
}

fn dtable_row(ctx: &Ctx, q: u64, ell: usize, dprime: bool, check: bool) -> Result<(Value, bool)> {
    let ctx = Ctx {
        q: Some(q),
        ..ctx.clone()
    };
    let g = group_of(&ctx, ell, 0)?;
    let polys = WeightSystem::new(&g)?.all();
    let opts = GroupOptions::default();
    let stats = degree_stats_from(&g, &polys, dprime.then_some(&opts))?;
    let sum = g.summary();
    let mut row = to_value(&stats);
    let m = row.as_object_mut().expect("object");
    m.insert("generators".into(), to_value(&sum.generators));
    m.insert("orders".into(), to_value(&sum.orders));
    let mut ok = true;
    if check {
        let e = worked_example(q, ell)
            .ok_or_else(|| Error::Precondition(format!("no worked example for q={q}, l={ell}")))?;
        let bad = check_example(e)?;
        ok = bad.is_empty();
        m.insert(
            "expected".into(),
            json!({
                "example": e.number,
                "ratio_below": format!("{}/{}", e.ratio_bound.0, e.ratio_bound.1),
                "orders": e.generators.iter().map(|g| json!({"poly": format!("x^{}+1", g.0), "order": g.1})).collect::<Vec<_>>(),
                "match": ok,
                "mismatches": bad,
            }),
        );
    }
    Ok((row, ok))
}

fn cmd_dtable(ctx: &Ctx, a: &DtableArgs) -> Result<Output> {
    let points: Vec<(u64, usize)> = match (ctx.q, a.ell) {
        (Some(q), Some(ell)) => vec![(q, ell)],
        (None, None) if a.check_paper => WORKED_EXAMPLES.iter().map(|e| (e.q, e.ell)).collect(),
        (Some(q), None) if a.check_paper => WORKED_EXAMPLES
            .iter()
            .filter(|e| e.q == q)
            .map(|e| (e.q, e.ell))
            .collect(),
        _ => {
            return Err(Error::Precondition(
                "dtable needs --q and --ell (or --check-paper)".into(),
            ))
        }
    };
    let ctx = Ctx { q: None, ..ctx.clone() };
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    let mut failed = false;
    for (q, ell) in points {
        let (row, ok) = dtable_row(&ctx, q, ell, a.dprime, a.check_paper)?;
        failed |= !ok;
        let expected = row.get("expected");
        csv_rows.push(vec![
            q.to_string(),
            ell.to_string(),
            cell(&row, "dvec"),
            cell(&row, "D"),
            cell(&row, "Dprime"),
            cell(&row, "ratio"),
            cell(&row, "ratio_value"),
            cell(&row, "generators"),
            cell(&row, "orders"),
            expected.map(|p| cell(p, "example")).unwrap_or_default(),
            expected.map(|p| cell(p, "match")).unwrap_or_default(),
        ]);
        rows.push(row);
    }
    Ok(Output {
        value: one_or_many(rows),
        csv: Some((
            vec![
                "q",
                "ell",
                "dvec",
                "D",
                "Dprime",
                "ratio",
                "ratio_value",
                "generators",
                "orders",
                "example",
                "match",
            ],
            csv_rows,
        )),
        failed,
    })
}

const COUNT_COLUMNS: [&str; 11] = [
    "kind",
    "q",
    "d",
    "ell",
    "t",
    "eps",
    "value",
    "main_term",
    "error_term",
    "method",
    "oracle_value",
];

fn cmd_count(ctx: &Ctx, cmd: &CountCmd) -> Result<Output> {
    let (kind, degrees, shape, window, method) = match cmd {
        CountCmd::Irreducible {
            d,
            shape,
            window,
            method,
        } => (CountKind::Irreducible, d, shape, window, *method),
        CountCmd::Srim {
            half_degree,
            shape,
            window,
            method,
        } => (CountKind::Srim, half_degree, shape, window, *method),
    };
    let (ell, t) = shape_of(ctx, shape, window)?;
    if kind == CountKind::Srim && t != 0 {
        return Err(Error::Precondition("SRIM counts take no ending window (t = 0)".into()));
    }
    let g = group_of(ctx, ell, t)?;
    let counter = Counter::new(g.clone())?;
    let eps_list = classes(&g, window)?;
    let opts = ctx.oracle_opts(false);
    let mut out = Vec::new();
    let mut rows = Vec::new();
    let mut failed = false;
    for d in parse_range(degrees)? {
        for &eps in &eps_list {
            let start = Instant::now();
            let formula = match method {
                MethodArg::Oracle => None,
                _ => Some(match kind {
                    CountKind::Srim => counter.s(d, eps)?,
                    _ => counter.i(d, eps)?,
                }),
            };
            let oracle = match method {
                MethodArg::Formula => None,
                _ => {
                    let c = g.class_at(eps);
                    let r = match kind {
                        CountKind::Srim => oracle_s(g.field(), d as usize, &c, &opts)?,
                        _ => oracle_i(g.field(), d as usize, &c, &opts)?,
                    };
                    Some(r.count as i128)
                }
            };
            let (value, m) = match (formula, oracle) {
                (Some(f), None) => (f, Method::Formula),
                (None, Some(o)) => (o, Method::Oracle),
                (Some(f), Some(_)) => (f, Method::Both),
                (None, None) => unreachable!(),
            };
            let rep = counter.report(kind, d, eps, value, m);
            let mut v = to_value(&rep);
            let m = v.as_object_mut().expect("object");
            if let (Some(f), Some(o)) = (formula, oracle) {
                m.insert("oracle_value".into(), json!(o));
                m.insert("agree".into(), json!(f == o));
                failed |= f != o;
            }
            m.insert("elapsed_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
            let p = &v["params"];
            rows.push(vec![
                cell(p, "kind"),
                cell(p, "q"),
                cell(p, "d"),
                cell(p, "ell"),
                cell(p, "t"),
                cell(p, "eps"),
                cell(&v, "value"),
                cell(&v, "main_term"),
                cell(&v, "error_term"),
                cell(&v, "method"),
                cell(&v, "oracle_value"),
            ]);
            out.push(v);
        }
    }
    Ok(Output {
        value: one_or_many(out),
        csv: Some((COUNT_COLUMNS.to_vec(), rows)),
        failed,
    })
}

const BOUND_COLUMNS: [&str; 15] = [
    "q",
    "d",
    "ell",
    "t",
    "eps",
    "thm1_upper",
    "thm1_lower",
    "hsu_upper",
    "cohen_lower",
    "thm2_upper",
    "thm2_lower",
    "exists",
    "exact_irreducible",
    "exact_srim",
    "improvement",
];

fn cmd_bounds(ctx: &Ctx, a: &BoundsArgs) -> Result<Output> {
    let (ell, t) = shape_of(ctx, &a.shape, &a.window)?;
    let g = group_of(ctx, ell, t)?;
    let counter = Counter::new(g.clone())?;
    let eps_list = classes(&g, &a.window)?;
    let mut out = Vec::new();
    let mut rows = Vec::new();
    let mut failed = false;
    for d in parse_range(&a.d)? {
        for &eps in &eps_list {
            let r = bounds_report(&counter, d, eps, a.with_exact)?;
            failed |= r.verdicts.iter().any(|v| v.holds == Some(false));
            let v = to_value(&r);
            let val = |k: &str| {
                v.get(k)
                    .and_then(|b| b.get("value"))
                    .map(|x| x.to_string())
                    .unwrap_or_default()
            };
            let cohen = if r.cohen_applies {
                val("cohen_lower")
            } else {
                String::new()
            };
            rows.push(vec![
                r.params.q.to_string(),
                d.to_string(),
                ell.to_string(),
                t.to_string(),
                r.params.eps.clone(),
                val("thm1_upper"),
                val("thm1_lower"),
                val("hsu_upper"),
                cohen,
                val("thm2_upper"),
                val("thm2_lower"),
                cell(&v, "exists"),
                cell(&v, "exact_irreducible"),
                cell(&v, "exact_srim"),
                r.improvement.to_string(),
            ]);
            out.push(v);
        }
    }
    Ok(Output {
        value: one_or_many(out),
        csv: Some((BOUND_COLUMNS.to_vec(), rows)),
        failed,
    })
}

fn cmd_oracle(ctx: &Ctx, a: &OracleArgs) -> Result<Output> {
    let (ell, t) = shape_of(ctx, &a.shape, &a.window)?;
    let g = group_of(ctx, ell, t)?;
    let opts = ctx.oracle_opts(a.witnesses);
    let mut out = Vec::new();
    let mut rows = Vec::new();
    for eps in classes(&g, &a.window)? {
        let c = g.class_at(eps);
        let r = match a.kind {
            OracleKindArg::Irreducible => oracle_i(g.field(), a.d, &c, &opts)?,
            OracleKindArg::Srim => oracle_s(g.field(), a.d, &c, &opts)?,
            OracleKindArg::F => oracle_f(&g, a.d, eps, &opts)?,
        };
        let v = to_value(&r);
        let p = &v["params"];
        rows.push(vec![
            cell(p, "kind"),
            cell(p, "q"),
            cell(p, "d"),
            cell(p, "ell"),
            cell(p, "t"),
            cell(p, "eps"),
            cell(&v, "count"),
            cell(&v, "visited"),
        ]);
        out.push(v);
    }
    Ok(Output {
        value: one_or_many(out),
        csv: Some((vec!["kind", "q", "d", "ell", "t", "eps", "count", "visited"], rows)),
        failed: false,
    })
}

fn cmd_verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Output> {
    let qs = match (ctx.q, &a.qs) {
        (Some(_), Some(_)) => return Err(Error::Precondition("give --q or --qs, not both".into())),
        (Some(q), None) => Some(vec![q]),
        (None, qs) => qs.clone(),
    };
    let cfg = VerifyConfig {
        qs,
        ell: a.ell,
        t: a.t,
        dmax: a.d_max,
        budget: Some(ctx.budget),
    };
    let suites = if a.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suite.clone()
    };
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    let (mut checks, mut failed) = (0u64, 0u64);
    for s in suites {
        let r = run_suite(s, &cfg)?;
        checks += r.checks;
        failed += r.failed;
        rows.push(vec![
            s.name().to_string(),
            if r.passed() { "PASS" } else { "FAIL" }.to_string(),
            r.checks.to_string(),
            r.failed.to_string(),
        ]);
        reports.push(to_value(&r));
    }
    Ok(Output {
        value: json!({"suites": reports, "checks": checks, "failed": failed, "passed": failed == 0}),
        csv: Some((vec!["suite", "status", "checks", "failed"], rows)),
        failed: failed > 0,
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => 4,
        Error::CapViolation(_) => 3,
        Error::Internal(_) | Error::NoConvergence(_) => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let ctx = Ctx {
        q: cli.q,
        ext_degree: cli.ext_degree,
        modulus: cli.modulus.clone(),
        budget: cli.budget.unwrap_or(DEFAULT_BUDGET),
    };
    if ctx.budget == 0 {
        return Err(Error::Precondition("--budget must be positive".into()));
    }
    match &cli.cmd {
        Cmd::Group(s) => cmd_group(&ctx, s),
        Cmd::Ptable(s) => cmd_ptable(&ctx, s),
        Cmd::Dtable(a) => cmd_dtable(&ctx, a),
        Cmd::Count { kind } => cmd_count(&ctx, kind),
        Cmd::Bounds(a) => cmd_bounds(&ctx, a),
        Cmd::Oracle(a) => cmd_oracle(&ctx, a),
        Cmd::Verify(a) => cmd_verify(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: cannot use {n} threads");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(mut out) => {
            if cli.no_timing {
                output::strip_timing(&mut out.value);
            }
            let text = match (cli.format, &out.csv) {
                (Format::Csv, Some((h, rows))) => output::csv(h, rows),
                (Format::Pretty, _) => output::pretty(&out.value),
                _ => output::json(&out.value),
            };
            print!("{text}");
            if out.failed {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
