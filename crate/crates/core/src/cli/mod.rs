//! The `supcheck` command line: argument parsing and the subcommands.
//!
//! Exit codes: 0 when a condition holds (possibly with tolerated
//! exceptions), 1 when it is violated or a gallery case fails, 2 on input
//! errors.

pub mod cache;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::arith::factor::valuation_u64;
use crate::arith::primes_in_range;
use crate::conditions::{
    Checker, Component, ConditionReport, Factor, GroupSpec, OrderMemo, PrimeContext, ProductPoint, ScanConfig,
    DEFAULT_SAMPLE,
};
use crate::ec::{ec_find_relation, CurveQ, PointQ};
use crate::error::{Error, Result};
use crate::gallery::{self, GalleryOptions, Status};
use crate::gm::relation::{bigint_json, GmRelationView};
use crate::gm::{component_count, decompose_independent, gm_find_relation, GmPoint};
use cache::{default_cache_path, OrderCache};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "supcheck", version, about = "Check support-problem conditions for rational points modulo primes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Do not read or write the order cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Order cache file (default: $SUPCHECK_CACHE or the user cache directory).
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orders of a point modulo each prime of good reduction.
    Order(OrderArgs),
    /// Scan a prime range for violations of a condition.
    Check(CheckArgs),
    /// Find phi(P) = c Q with c minimal.
    Relate(RelateArgs),
    /// Run worked instances by name, or all of them.
    Gallery(GalleryArgs),
    /// Number of components of the smallest algebraic subgroup containing a torus point.
    Components(PointArgs),
    /// Independent sub-point and the multiplier d with ord(P) | d ord(P_J).
    Decompose(PointArgs),
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    /// Group, e.g. gm:2 or ec:0,-2 or gm:1*ec:0,-2; inferred for torus points.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Inclusive prime range lo..hi.
    #[arg(long, default_value = "2..10000")]
    pub primes: String,
    /// Add a v_ell column; may be repeated.
    #[arg(long)]
    pub ell: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConditionArg {
    Sp,
    Lsp,
    Rsp,
    Msp,
    Wmsp,
    Lmsp,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub condition: ConditionArg,
    /// Group of the P points.
    #[arg(long)]
    pub group: Option<String>,
    /// Group of the Q points (default: the P group).
    #[arg(long = "q-group")]
    pub q_group: Option<String>,
    /// P point; repeat for MSP, WMSP and LMSP.
    #[arg(long = "p", required = true, allow_hyphen_values = true)]
    pub p: Vec<String>,
    /// Q point; repeat for MSP, WMSP and LMSP.
    #[arg(long = "q", required = true, allow_hyphen_values = true)]
    pub q: Vec<String>,
    #[arg(long)]
    pub ell: Option<u64>,
    /// Sample of primes for RSP, comma separated (default: the first 25 primes).
    #[arg(long = "S", value_delimiter = ',')]
    pub sample: Vec<u64>,
    /// Coefficient box bound for MSP, WMSP and LMSP.
    #[arg(long = "box", default_value_t = 20)]
    pub bound: u64,
    #[arg(long, default_value = "2..10000")]
    pub primes: String,
    /// Violating primes tolerated.
    #[arg(long, default_value_t = 0)]
    pub budget: usize,
    /// Additive slack for LSP.
    #[arg(long, default_value_t = 0)]
    pub slack: u32,
    /// Always use the coefficient box, even on tori.
    #[arg(long)]
    pub no_exact: bool,
}

#[derive(Debug, Args)]
pub struct RelateArgs {
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long = "q-group")]
    pub q_group: Option<String>,
    #[arg(long = "p", allow_hyphen_values = true)]
    pub p: String,
    #[arg(long = "q", allow_hyphen_values = true)]
    pub q: String,
    /// Coefficient bound for elliptic factors (required when one is present).
    #[arg(long)]
    pub bound: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GalleryArgs {
    /// Case name; omit with no --all to list cases.
    pub name: Option<String>,
    #[arg(long)]
    pub all: bool,
    /// Parameter h of radnoboundS.
    #[arg(long, default_value_t = 3)]
    pub h: u32,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Upper end of every prime scan, overriding the case defaults.
    #[arg(long)]
    pub hi: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

/// Parse `lo..hi` (inclusive).
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| Error::Parse(format!("range {s:?} is not of the form lo..hi")))?;
    let lo = lo.trim().parse().map_err(|_| Error::Parse(format!("invalid range start {lo:?}")))?;
    let hi = hi.trim().trim_start_matches('=').parse().map_err(|_| Error::Parse(format!("invalid range end {hi:?}")))?;
    if lo < 2 || lo > hi {
        return Err(Error::EmptyRange { lo, hi });
    }
    Ok((lo, hi))
}

/// Explicit group, or `gm:n` for a plain list of `n` rationals.
pub fn resolve_group(group: Option<&str>, point: &str) -> Result<GroupSpec> {
    if let Some(g) = group {
        return g.parse();
    }
    if point.contains('*') || point.contains(';') || point.trim().eq_ignore_ascii_case("inf") {
        return Err(Error::Parse(format!("--group is required for point {point:?}")));
    }
    Ok(GroupSpec::gm(point.split(',').count()))
}

pub fn parse_point(group: Option<&str>, point: &str) -> Result<ProductPoint> {
    resolve_group(group, point)?.parse_point(point)
}

struct Context<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    cache: Option<OrderCache>,
}

impl Context<'_> {
    fn memo(&self) -> Option<&dyn OrderMemo> {
        self.cache.as_ref().map(|c| c as &dyn OrderMemo)
    }

    fn json(&mut self, v: &impl Serialize) -> Result<()> {
        let s = serde_json::to_string_pretty(v).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        writeln!(self.out, "{s}").map_err(io)
    }
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("output error: {e}"))
}

/// Parse `args` and run; returns the process exit code.
pub fn run_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = e.exit_code();
            let text = if e.use_stderr() { e.render().to_string() } else { e.to_string() };
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            code
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cache = if cli.no_cache {
        None
    } else {
        cli.cache.clone().or_else(default_cache_path).map(|p| OrderCache::open(&p))
    };
    if let Some(c) = &cache {
        for w in c.warnings() {
            let _ = writeln!(err, "warning: {w}");
        }
    }
    let mut ctx = Context { out, err, cache };
    let result = match cli.command {
        Command::Order(a) => cmd_order(&mut ctx, a),
        Command::Check(a) => cmd_check(&mut ctx, a),
        Command::Relate(a) => cmd_relate(&mut ctx, a),
        Command::Gallery(a) => cmd_gallery(&mut ctx, a),
        Command::Components(a) => cmd_components(&mut ctx, a),
        Command::Decompose(a) => cmd_decompose(&mut ctx, a),
    };
    if let Some(w) = ctx.cache.as_ref().and_then(|c| c.flush()) {
        let _ = writeln!(ctx.err, "warning: {w}");
    }
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_INPUT
        }
    }
}

#[derive(Serialize)]
struct OrderLine {
    p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<u64>,
    #[serde(flatten)]
    valuations: BTreeMap<String, u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
}

fn cmd_order(ctx: &mut Context<'_>, a: OrderArgs) -> Result<i32> {
    let point = parse_point(a.group.as_deref(), &a.point)?;
    let (lo, hi) = parse_range(&a.primes)?;
    for &ell in &a.ell {
        if !crate::arith::is_prime(ell) {
            return Err(Error::InvalidArgument(format!("ell = {ell} is not prime")));
        }
    }
    for p in primes_in_range(lo, hi)? {
        let line = match point.bad_reduction(p) {
            Some(reason) => OrderLine { p, order: None, valuations: BTreeMap::new(), skipped: Some(reason) },
            None => {
                let order = match ctx.memo().and_then(|m| m.get(&point, p)) {
                    Some(o) => o,
                    None => {
                        let o = point.reduce(p)?.order(&mut PrimeContext::new(p));
                        if let Some(m) = ctx.memo() {
                            m.put(&point, p, o);
                        }
                        o
                    }
                };
                let valuations = a.ell.iter().map(|&l| (format!("v_{l}"), valuation_u64(order, l))).collect();
                OrderLine { p, order: Some(order), valuations, skipped: None }
            }
        };
        let s = serde_json::to_string(&line).expect("serializable");
        writeln!(ctx.out, "{s}").map_err(io)?;
    }
    Ok(EXIT_HOLDS)
}

fn cmd_check(ctx: &mut Context<'_>, a: CheckArgs) -> Result<i32> {
    let (lo, hi) = parse_range(&a.primes)?;
    let cfg = ScanConfig { lo, hi, budget: a.budget, slack: a.slack, bound: a.bound, exact: !a.no_exact };
    let ps = a.p.iter().map(|s| parse_point(a.group.as_deref(), s)).collect::<Result<Vec<_>>>()?;
    let q_group = a.q_group.as_deref().or(a.group.as_deref());
    let qs = a.q.iter().map(|s| parse_point(q_group, s)).collect::<Result<Vec<_>>>()?;
    let need_ell = || a.ell.ok_or_else(|| Error::InvalidArgument("--ell is required for this condition".into()));
    let single = |v: &[ProductPoint], what: &str| -> Result<()> {
        if v.len() != 1 {
            return Err(Error::InvalidArgument(format!("expected exactly one --{what}")));
        }
        Ok(())
    };
    let mut checker = Checker::new(&cfg);
    if let Some(m) = ctx.memo() {
        checker = checker.with_memo(m);
    }
    let report: ConditionReport = match a.condition {
        ConditionArg::Sp | ConditionArg::Lsp | ConditionArg::Rsp => {
            single(&ps, "p")?;
            single(&qs, "q")?;
            match a.condition {
                ConditionArg::Sp => checker.sp(&ps[0], &qs[0])?,
                ConditionArg::Lsp => checker.lsp(&ps[0], &qs[0], need_ell()?)?,
                _ => {
                    let sample = if a.sample.is_empty() { DEFAULT_SAMPLE.to_vec() } else { a.sample.clone() };
                    checker.rsp(&ps[0], &qs[0], &sample)?
                }
            }
        }
        ConditionArg::Msp => checker.msp(&ps, &qs)?,
        ConditionArg::Lmsp => checker.lmsp(&ps, &qs, need_ell()?)?,
        ConditionArg::Wmsp => {
            if ps.len() != 2 || qs.len() != 2 {
                return Err(Error::InvalidArgument("WMSP takes exactly two --p and two --q".into()));
            }
            checker.wmsp(&ps[0], &ps[1], &qs[0], &qs[1])?
        }
    };
    ctx.json(&report)?;
    Ok(if report.holds() { EXIT_HOLDS } else { EXIT_VIOLATED })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Block {
    Torus {
        /// Rows act on the torus coordinates of P, one row per torus coordinate of Q.
        matrix: Vec<Vec<serde_json::Value>>,
        c: serde_json::Value,
    },
    Elliptic {
        /// Factor index of the Q component, 0-based.
        factor: usize,
        curve: String,
        /// Factor indices of the P components on the same curve.
        sources: Vec<usize>,
        coefficients: Vec<i64>,
        c: u64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct RelateOutput {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    /// `false` when an elliptic block was searched only up to the bound.
    pub exhaustive: bool,
    pub relation: Option<RelationOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationOut {
    pub c: serde_json::Value,
    pub blocks: Vec<Block>,
}

fn torus_part(x: &ProductPoint) -> Option<GmPoint> {
    let mut out: Option<GmPoint> = None;
    for c in x.components() {
        if let Component::Gm(g) = c {
            out = Some(match out {
                None => g.clone(),
                Some(acc) => acc.concat(g),
            });
        }
    }
    out
}

fn elliptic_parts(x: &ProductPoint) -> Vec<(usize, CurveQ, PointQ)> {
    x.group()
        .factors()
        .iter()
        .zip(x.components())
        .enumerate()
        .filter_map(|(i, (f, c))| match (f, c) {
            (Factor::Ec(e), Component::Ec(r)) => Some((i, *e, r.clone())),
            _ => None,
        })
        .collect()
}

/// Blockwise relation search: homomorphisms between a torus and a curve,
/// or between distinct curves, are zero, so each block of `Q` is related
/// only to the matching part of `P`. `bound` limits the coefficient search
/// on elliptic blocks and is required when `Q` has one.
pub fn relate(p: &ProductPoint, q: &ProductPoint, bound: Option<u64>) -> Result<RelateOutput> {
    let mut blocks = Vec::new();
    let mut c = BigInt::one();
    let mut found = true;
    let mut exhaustive = true;

    if let Some(qt) = torus_part(q) {
        let pt = torus_part(p).unwrap_or_else(|| GmPoint::identity(1));
        match gm_find_relation(&pt, &qt)? {
            Some(rel) => {
                c = c.lcm(&rel.c);
                let view = GmRelationView::from(&rel);
                blocks.push(Block::Torus { matrix: view.matrix, c: view.c });
            }
            None => found = false,
        }
    }
    let p_ec = elliptic_parts(p);
    for (i, curve, target) in elliptic_parts(q) {
        let bound = bound.ok_or_else(|| Error::InvalidArgument("--bound is required with elliptic factors".into()))?;
        exhaustive = false;
        if !found {
            break;
        }
        let sources: Vec<&(usize, CurveQ, PointQ)> = p_ec.iter().filter(|(_, e, _)| *e == curve).collect();
        let points: Vec<PointQ> = sources.iter().map(|s| s.2.clone()).collect();
        match ec_find_relation(&curve, &points, &target, bound)? {
            Some(rel) => {
                c = c.lcm(&BigInt::from(rel.c));
                blocks.push(Block::Elliptic {
                    factor: i,
                    curve: curve.to_string(),
                    sources: sources.iter().map(|s| s.0).collect(),
                    coefficients: rel.coefficients,
                    c: rel.c,
                });
            }
            None => found = false,
        }
    }
    Ok(RelateOutput {
        p: p.to_string(),
        q: q.to_string(),
        exhaustive,
        relation: found.then(|| RelationOut { c: bigint_json(&c), blocks }),
    })
}

fn cmd_relate(ctx: &mut Context<'_>, a: RelateArgs) -> Result<i32> {
    let p = parse_point(a.group.as_deref(), &a.p)?;
    let q = parse_point(a.q_group.as_deref().or(a.group.as_deref()), &a.q)?;
    ctx.json(&relate(&p, &q, a.bound)?)?;
    Ok(EXIT_HOLDS)
}

#[derive(Serialize)]
struct GalleryOutput {
    cases: Vec<gallery::CaseResult>,
    unimplemented: Vec<&'static str>,
}

fn cmd_gallery(ctx: &mut Context<'_>, a: GalleryArgs) -> Result<i32> {
    let opts = GalleryOptions { h: a.h, trials: a.trials, seed: a.seed, hi: a.hi };
    let cases = match (&a.name, a.all) {
        (Some(_), true) => return Err(Error::InvalidArgument("give a case name or --all, not both".into())),
        (Some(name), false) => vec![gallery::run_case(name, &opts)?],
        (None, true) => gallery::run_all(&opts)?,
        (None, false) => {
            for n in gallery::CASE_NAMES {
                writeln!(ctx.out, "{n}").map_err(io)?;
            }
            return Ok(EXIT_HOLDS);
        }
    };
    let failed = cases.iter().any(|c| c.status == Status::Fail);
    write!(ctx.err, "{}", gallery::summary_table(&cases)).map_err(io)?;
    ctx.json(&GalleryOutput { cases, unimplemented: gallery::UNIMPLEMENTED_REFERENCES.to_vec() })?;
    Ok(if failed { EXIT_VIOLATED } else { EXIT_HOLDS })
}

fn cmd_components(ctx: &mut Context<'_>, a: PointArgs) -> Result<i32> {
    let point: GmPoint = a.point.parse()?;
    let n = component_count(&point)?;
    ctx.json(&serde_json::json!({ "point": point.to_string(), "components": bigint_json(&n) }))?;
    Ok(EXIT_HOLDS)
}

fn cmd_decompose(ctx: &mut Context<'_>, a: PointArgs) -> Result<i32> {
    let point: GmPoint = a.point.parse()?;
    let dec = decompose_independent(&point)?;
    let j: Vec<usize> = dec.indices.iter().map(|i| i + 1).collect();
    ctx.json(&serde_json::json!({
        "point": point.to_string(),
        "J": j,
        "d": bigint_json(&dec.d),
        "sub_point": dec.sub_point.to_string(),
    }))?;
    Ok(EXIT_HOLDS)
}
