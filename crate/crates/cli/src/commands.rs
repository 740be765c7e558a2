use std::sync::Arc;
use std::time::Instant;

use anyhow::anyhow;
use linset_core::{
    b2_binomial, b2_curve_test, b2_pqq_test, classify_lp_table, cross_validate, decide, eq3_sum,
    is_scattered_definition, lp_binomial, norm_class_reps, rank_nested_minors, search_l2, BinomialError,
    FieldCtx, FieldError, L2Conclusion, LpTable, Method, PolyError, ScatterError, ScatterReport, SigmaPoly,
    Verdict,
};
use serde_json::json;

use crate::render::{modulus_text, opt, Output};
use crate::{Cli, Command, Expect, FieldArgs, MethodArg, PolyArgs};

pub const SCATTERED: u8 = 0;
pub const EXPECT_MISMATCH: u8 = 1;
pub const USAGE: u8 = 2;
pub const INCONSISTENT: u8 = 3;
pub const NOT_SCATTERED: u8 = 10;

/// Largest q covered by the standard search range.
const STANDARD_MAX_Q: u64 = 9;

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: USAGE, error: error.into() }
    }

    fn inconsistent(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: INCONSISTENT, error: error.into() }
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        Failure::usage(e)
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure::usage(e)
    }
}

impl From<ScatterError> for Failure {
    fn from(e: ScatterError) -> Self {
        Failure::inconsistent(e)
    }
}

impl From<BinomialError> for Failure {
    fn from(e: BinomialError) -> Self {
        match e {
            BinomialError::Poly(e) => Failure::usage(e),
            other => Failure::inconsistent(other),
        }
    }
}

type CmdResult = Result<Output, Failure>;

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::FieldInfo { field } => field_info(&build_field(field, cli.cap)?),
        Command::Check { field, s, poly, method } => {
            let f = build_poly(&build_field(field, cli.cap)?, *s, poly)?;
            check(cli, &f, *method)
        }
        Command::Rank { field, s, poly } => rank(&build_poly(&build_field(field, cli.cap)?, *s, poly)?),
        Command::ClassifyLp { field, s, method } => {
            classify_lp(cli, &build_field(field, cli.cap)?, *s, *method)
        }
        Command::SearchL2 { field, s, expect, large_q } => {
            let ctx = build_field(field, cli.cap)?;
            if ctx.q() > STANDARD_MAX_Q {
                if !large_q {
                    return Err(Failure::usage(anyhow!(
                        "q = {} is beyond the standard range q <= {STANDARD_MAX_Q}; pass --large-q to run it",
                        ctx.q()
                    )));
                }
                eprintln!("warning: q = {} > {STANDARD_MAX_Q}; this search may take a long time", ctx.q());
            }
            search(cli, &ctx, *s, *expect)
        }
        Command::CurveTest { field, s, b } => curve_test(&build_field(field, cli.cap)?, *s, b.as_deref()),
    }
}

fn build_field(a: &FieldArgs, cap: u64) -> Result<Arc<FieldCtx>, Failure> {
    Ok(Arc::new(FieldCtx::with_cap(a.p, a.e, a.n, cap)?))
}

fn build_poly(ctx: &Arc<FieldCtx>, s: u32, a: &PolyArgs) -> Result<SigmaPoly, Failure> {
    let f = match (&a.poly, &a.lp, &a.b2) {
        (Some(text), _, _) => SigmaPoly::parse(ctx.clone(), Some(s), text)?,
        (_, Some(delta), _) => lp_binomial(ctx, ctx.parse_elt(delta)?, s)?,
        (_, _, Some(b)) => b2_binomial(ctx, ctx.parse_elt(b)?, s)?,
        _ => return Err(Failure::usage(anyhow!("one of --poly, --lp, --b2 is required"))),
    };
    Ok(f)
}

fn method_of(m: MethodArg) -> Option<Method> {
    match m {
        MethodArg::Definition => Some(Method::Definition),
        MethodArg::Kernel => Some(Method::KernelSweep),
        MethodArg::Minor => Some(Method::MinorCriterion),
        MethodArg::All => None,
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn progress(msg: std::fmt::Arguments<'_>) {
    eprintln!("[linset] {msg}");
}

fn field_info(ctx: &Arc<FieldCtx>) -> CmdResult {
    let info = ctx.info();
    let mut json = to_json(&info);
    json["size"] = json!(ctx.size());
    json["theta"] = json!(ctx.theta());
    let text = format!(
        "F_{{{}^{}}} over F_{}: p={} e={} size={} theta={}\nmodulus (c0..): {}\ngenerator: {}\n",
        info.q,
        info.n,
        info.q,
        info.p,
        info.e,
        ctx.size(),
        ctx.theta(),
        modulus_text(&info.modulus),
        info.generator
    );
    Ok(Output {
        json,
        header: vec!["p", "e", "q", "n", "size", "theta", "modulus", "generator"],
        rows: vec![vec![
            info.p.to_string(),
            info.e.to_string(),
            info.q.to_string(),
            info.n.to_string(),
            ctx.size().to_string(),
            ctx.theta().to_string(),
            modulus_text(&info.modulus),
            info.generator.to_string(),
        ]],
        text,
        code: 0,
    })
}

fn check(cli: &Cli, f: &SigmaPoly, method: MethodArg) -> CmdResult {
    let mut report: ScatterReport = match method_of(method) {
        Some(m) => decide(f, m)?,
        None => cross_validate(f)?,
    };
    if cli.verify && !report.is_consistent_with(f) {
        return Err(Failure::inconsistent(anyhow!("witness fails re-verification for {f}")));
    }
    if cli.no_timing {
        report.timings.clear();
    }
    let code = if report.verdict.is_scattered() { SCATTERED } else { NOT_SCATTERED };
    let (wx, wt) = (report.witness.map(|w| w.x), report.witness.map(|w| w.t));
    let mut text = format!("{}\n{} ({})\n", report.poly, report.verdict, report.method);
    if let Some(w) = report.witness {
        text += &format!("witness: x = {}, t = {}\n", w.x, w.t);
    }
    for t in &report.timings {
        text += &format!("{}: {:.3} ms\n", t.method, t.elapsed_ms);
    }
    Ok(Output {
        json: to_json(&report),
        header: vec!["p", "e", "n", "poly", "verdict", "method", "witness_x", "witness_t", "candidates"],
        rows: vec![vec![
            report.field.p.to_string(),
            report.field.e.to_string(),
            report.field.n.to_string(),
            report.poly.clone(),
            report.verdict.to_string(),
            report.method.to_string(),
            opt(wx),
            opt(wt),
            report.stats.candidates.to_string(),
        ]],
        text,
        code,
    })
}

fn rank(f: &SigmaPoly) -> CmdResult {
    let minors = rank_nested_minors(f);
    let image = f.image_rank();
    if minors != image {
        return Err(Failure::inconsistent(anyhow!(
            "nested-minor rank {minors} differs from image rank {image} for {f}"
        )));
    }
    let json = json!({
        "field": to_json(&f.ctx().info()),
        "poly": f.to_string(),
        "nested_minor_rank": minors,
        "image_rank": image,
        "kernel_dim": f.n() - image,
    });
    Ok(Output {
        json,
        header: vec!["poly", "nested_minor_rank", "image_rank", "kernel_dim"],
        rows: vec![vec![f.to_string(), minors.to_string(), image.to_string(), (f.n() - image).to_string()]],
        text: format!("{f}\nrank {minors} (nested minors) = {image} (image)\n"),
        code: 0,
    })
}

fn classify_lp(cli: &Cli, ctx: &Arc<FieldCtx>, s: u32, method: MethodArg) -> CmdResult {
    progress(format_args!(
        "classifying {} values of delta (q={}, n={}, s={s})",
        ctx.order(),
        ctx.q(),
        ctx.n()
    ));
    let mut table: LpTable = match method_of(method) {
        Some(m) => classify_lp_table(ctx, s, m)?,
        None => {
            let mut tables = Vec::new();
            for m in [Method::Definition, Method::KernelSweep, Method::MinorCriterion] {
                tables.push(classify_lp_table(ctx, s, m)?);
            }
            // the three audits already agree delta by delta; this is belt and braces
            if tables.iter().any(|t| t.classes != tables[0].classes) {
                return Err(Failure::inconsistent(anyhow!("audit tables differ")));
            }
            tables.pop().expect("three tables")
        }
    };
    if !table.norm_criterion_holds {
        return Err(Failure::inconsistent(anyhow!("norm criterion does not partition the verdicts")));
    }
    if cli.no_timing {
        table.elapsed_ms = None;
    }
    let mut text = format!(
        "q={} n={} s={s}: {} scattered, {} not scattered (audit: {})\n",
        ctx.q(),
        ctx.n(),
        table.scattered,
        table.not_scattered,
        table.audit_method
    );
    for c in &table.classes {
        text += &format!("  norm {}: {} scattered, {} not\n", c.norm, c.scattered, c.not_scattered);
    }
    let rows = table
        .classes
        .iter()
        .map(|c| {
            vec![
                ctx.q().to_string(),
                ctx.n().to_string(),
                s.to_string(),
                c.norm.to_string(),
                c.count.to_string(),
                c.scattered.to_string(),
                c.not_scattered.to_string(),
            ]
        })
        .collect();
    Ok(Output {
        json: to_json(&table),
        header: vec!["q", "n", "s", "norm", "count", "scattered", "not_scattered"],
        rows,
        text,
        code: 0,
    })
}

fn search(cli: &Cli, ctx: &Arc<FieldCtx>, s: u32, expect: Option<Expect>) -> CmdResult {
    progress(format_args!(
        "searching {} norm classes of b (q={}, n={}, s={s})",
        ctx.q() - 1,
        ctx.q(),
        ctx.n()
    ));
    let start = Instant::now();
    let mut report = search_l2(ctx, s)?;
    progress(format_args!("done in {:.1} s", start.elapsed().as_secs_f64()));
    if cli.verify {
        verify_l2_witnesses(ctx, s, &report.classes)?;
    }
    if cli.no_timing {
        report.elapsed_ms = None;
    }
    let code = match expect {
        Some(Expect::NoneScattered) if report.conclusion != L2Conclusion::NoneScattered => EXPECT_MISMATCH,
        Some(Expect::SomeScattered) if report.conclusion != L2Conclusion::SomeScattered => EXPECT_MISMATCH,
        _ => 0,
    };
    let info = &report.params.field;
    let conclusion = to_json(&report.conclusion).as_str().unwrap_or_default().to_owned();
    let mut text = format!(
        "x^σ + b x^(σ^2) over F_{{{}^{}}}, s={s}: {} ({} of {} norm classes scattered)\n",
        info.q,
        info.n,
        conclusion,
        report.scattered_classes,
        report.classes.len()
    );
    for c in &report.classes {
        text += &format!("  b={} norm={} {}", c.b, c.norm_b, c.verdict);
        if let Some(x) = c.witness {
            text += &format!(" (x={x})");
        }
        text.push('\n');
    }
    let rows = report
        .classes
        .iter()
        .map(|c| {
            vec![
                info.p.to_string(),
                info.e.to_string(),
                info.q.to_string(),
                info.n.to_string(),
                s.to_string(),
                modulus_text(&info.modulus),
                info.generator.to_string(),
                c.b.to_string(),
                c.norm_b.to_string(),
                c.verdict.to_string(),
                opt(c.witness),
                conclusion.clone(),
                opt(report.elapsed_ms),
            ]
        })
        .collect();
    Ok(Output {
        json: to_json(&report),
        header: vec![
            "p",
            "e",
            "q",
            "n",
            "s",
            "modulus",
            "generator",
            "b",
            "norm_b",
            "verdict",
            "witness",
            "conclusion",
            "elapsed_ms",
        ],
        rows,
        text,
        code,
    })
}

/// A trace-sum witness `x` must zero the sum at `w = -(1 + b^{-1} x^{σ-σ^2})`,
/// and the binomial must then have an explicit collision `x f(t) = t f(x)`.
fn verify_l2_witnesses(ctx: &Arc<FieldCtx>, s: u32, classes: &[linset_core::L2Class]) -> Result<(), Failure> {
    let order = ctx.order();
    let exp = (ctx.sigma_power(s, 1) + order - ctx.sigma_power(s, 2)) % order;
    for c in classes {
        let Some(x) = c.witness else { continue };
        let b_inv = ctx.inv(c.b).map_err(Failure::inconsistent)?;
        let w = ctx.neg(ctx.add(linset_core::Felt::ONE, ctx.mul(b_inv, ctx.pow_reduced(x, exp))));
        if !eq3_sum(ctx, s, w).is_zero() {
            return Err(Failure::inconsistent(anyhow!(
                "witness x={x} for b={} fails the trace-sum equation",
                c.b
            )));
        }
        let f = b2_binomial(ctx, c.b, s)?;
        let def = is_scattered_definition(&f)?;
        if def.verdict != Verdict::NotScattered || !def.is_consistent_with(&f) {
            return Err(Failure::inconsistent(anyhow!("no verified collision for b={}", c.b)));
        }
    }
    Ok(())
}

fn curve_test(ctx: &Arc<FieldCtx>, s: u32, b: Option<&str>) -> CmdResult {
    let bs = match b {
        Some(text) => vec![ctx.parse_elt(text)?],
        None => norm_class_reps(ctx),
    };
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut text = String::new();
    for b in bs {
        let pqq = b2_pqq_test(ctx, b, s)?;
        let point = b2_curve_test(ctx, b, s)?;
        if pqq.is_some() != point.is_some() {
            return Err(Failure::inconsistent(anyhow!(
                "b={b}: trace-sum test and curve test disagree ({} vs {})",
                opt(pqq),
                point.map(|p| format!("({}, {})", p.x0, p.y0)).unwrap_or_default()
            )));
        }
        let verdict = if pqq.is_none() { Verdict::Scattered } else { Verdict::NotScattered };
        text += &format!("b={b} {verdict}");
        if let Some(p) = point {
            text += &format!(" point=({}, {})", p.x0, p.y0);
        }
        text.push('\n');
        rows.push(vec![
            b.to_string(),
            verdict.to_string(),
            opt(pqq),
            opt(point.map(|p| p.x0)),
            opt(point.map(|p| p.y0)),
        ]);
        items.push(json!({ "b": b, "verdict": verdict, "pqq_witness": pqq, "point": point }));
    }
    Ok(Output {
        json: json!({ "field": to_json(&ctx.info()), "s": s, "results": items }),
        header: vec!["b", "verdict", "pqq_witness", "x0", "y0"],
        rows,
        text,
        code: 0,
    })
}
