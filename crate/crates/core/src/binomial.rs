//! The Lunardon-Polverino binomial `x^σ + δ x^{σ^{n-1}}` and the binomial
//! `x^σ + b x^{σ^2}`: norm classification, the single-equation tests built on
//! the determinant of `B(z)`, the curve-point reformulation and the search
//! over norm classes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Felt, FieldCtx, FieldInfo};
use crate::linpoly::{gcd, PolyError, SigmaPoly};
use crate::scatter::{cross_validate, decide, is_scattered_definition, Method, ScatterError, Verdict};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BinomialError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Scatter(#[from] ScatterError),
    #[error("norm(delta) = 1 for delta = {0} but no solution of the trace-sum equation was found")]
    MissingEq3Witness(Felt),
    #[error("{what} disagree for {param} = {value}: {left} vs {right}")]
    Disagreement { what: &'static str, param: &'static str, value: Felt, left: Verdict, right: Verdict },
    #[error("curve point ({x0}, {y0}) fails re-verification")]
    InvalidCurvePoint { x0: Felt, y0: Felt },
}

fn check_coprime(ctx: &FieldCtx, s: u32) -> Result<(), PolyError> {
    if gcd(s as u64, ctx.n() as u64) != 1 {
        return Err(PolyError::NotCoprime { s, n: ctx.n() });
    }
    Ok(())
}

/// `x^σ + δ x^{σ^{n-1}}`.
pub fn lp_binomial(ctx: &Arc<FieldCtx>, delta: Felt, s: u32) -> Result<SigmaPoly, PolyError> {
    let mut f = SigmaPoly::monomial(ctx.clone(), s, 1, Felt::ONE)?;
    f.set_coeff(ctx.n() as usize - 1, delta)?;
    Ok(f)
}

/// `x^σ + b x^{σ^2}`.
pub fn b2_binomial(ctx: &Arc<FieldCtx>, b: Felt, s: u32) -> Result<SigmaPoly, PolyError> {
    let mut f = SigmaPoly::monomial(ctx.clone(), s, 1, Felt::ONE)?;
    f.set_coeff(2, b)?;
    Ok(f)
}

/// `sum_{i<n} z^{(σ^i - 1)/(σ - 1)}`, with `z^0 = 1` so that the value at
/// zero is 1.
pub fn eq3_sum(ctx: &FieldCtx, s: u32, z: Felt) -> Felt {
    (0..ctx.n()).fold(Felt::ZERO, |acc, i| ctx.add(acc, ctx.pow_reduced(z, ctx.geom_sum_exponent(s, i))))
}

/// `(σ^a - σ^b) mod (q^n - 1)`.
fn sigma_diff(ctx: &FieldCtx, s: u32, a: u32, b: u32) -> u64 {
    let o = ctx.order();
    (ctx.sigma_power(s, a) + o - ctx.sigma_power(s, b)) % o
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpVerdict {
    pub delta: Felt,
    pub norm_delta: Felt,
    pub scattered: bool,
    pub eq3_witness: Option<Felt>,
}

/// First `x` among the projective representatives with
/// `eq3_sum(δ x^{σ^{n-1} - σ}) = 0`; `None` means the binomial is scattered.
pub fn lp_eq3_test(ctx: &FieldCtx, delta: Felt, s: u32) -> Option<Felt> {
    let exp = sigma_diff(ctx, s, ctx.n() - 1, 1);
    let reps: Vec<Felt> = ctx.projective_reps().collect();
    reps.par_iter()
        .position_first(|&x| {
            let z = ctx.mul(delta, ctx.pow_reduced(x, exp));
            eq3_sum(ctx, s, z).is_zero()
        })
        .map(|i| reps[i])
}

/// Classifies the Lunardon-Polverino binomial by the norm of `δ`. When the
/// norm is one a solution `x` of the trace-sum equation is located and kept.
/// `δ = 0` gives the pseudoregulus polynomial and is decided directly.
pub fn lp_classify(ctx: &Arc<FieldCtx>, delta: Felt, s: u32) -> Result<LpVerdict, BinomialError> {
    check_coprime(ctx, s)?;
    let norm_delta = ctx.norm(delta);
    if delta.is_zero() {
        let r = is_scattered_definition(&lp_binomial(ctx, delta, s)?)?;
        return Ok(LpVerdict { delta, norm_delta, scattered: r.verdict.is_scattered(), eq3_witness: None });
    }
    if norm_delta != Felt::ONE {
        return Ok(LpVerdict { delta, norm_delta, scattered: true, eq3_witness: None });
    }
    let x = lp_eq3_test(ctx, delta, s).ok_or(BinomialError::MissingEq3Witness(delta))?;
    Ok(LpVerdict { delta, norm_delta, scattered: false, eq3_witness: Some(x) })
}

/// `{y^{σ-1} : y != 0, Tr(y) = 0}`.
pub fn rephr_set(ctx: &FieldCtx, s: u32) -> BTreeSet<Felt> {
    let e = (ctx.sigma_power(s, 1) + ctx.order() - 1) % ctx.order();
    ctx.nonzero().filter(|&y| ctx.trace(y).is_zero()).map(|y| ctx.pow_reduced(y, e)).collect()
}

/// First `x` among the projective representatives with `eq3_sum(w) = 0`,
/// `w = -(1 + b^{-1} x^{σ - σ^2})`; `None` means `x^σ + b x^{σ^2}` is
/// scattered. `b = 0` is decided as the pseudoregulus polynomial.
pub fn b2_pqq_test(ctx: &Arc<FieldCtx>, b: Felt, s: u32) -> Result<Option<Felt>, BinomialError> {
    check_coprime(ctx, s)?;
    if b.is_zero() {
        let r = is_scattered_definition(&b2_binomial(ctx, b, s)?)?;
        return Ok(r.witness.map(|w| w.x));
    }
    let b_inv = ctx.inv(b).expect("b is nonzero");
    let exp = sigma_diff(ctx, s, 1, 2);
    let reps: Vec<Felt> = ctx.projective_reps().collect();
    let hit = reps.par_iter().position_first(|&x| {
        let w = ctx.neg(ctx.add(Felt::ONE, ctx.mul(b_inv, ctx.pow_reduced(x, exp))));
        eq3_sum(ctx, s, w).is_zero()
    });
    Ok(hit.map(|i| reps[i]))
}

/// A point of `b^{-1} X^{q-1} + Y^{σ-1} + 1 = 0` with nonzero coordinates
/// and `Tr(y0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x0: Felt,
    pub y0: Felt,
}

impl CurvePoint {
    pub fn verify(&self, ctx: &FieldCtx, b: Felt, s: u32) -> bool {
        let Ok(b_inv) = ctx.inv(b) else { return false };
        if self.x0.is_zero() || self.y0.is_zero() || !ctx.trace(self.y0).is_zero() {
            return false;
        }
        let q1 = ctx.q() - 1;
        let sig1 = (ctx.sigma_power(s, 1) + ctx.order() - 1) % ctx.order();
        let lhs = ctx.add(
            ctx.add(ctx.mul(b_inv, ctx.pow_reduced(self.x0, q1)), ctx.pow_reduced(self.y0, sig1)),
            Felt::ONE,
        );
        lhs.is_zero()
    }
}

/// Searches the curve `b^{-1} X^{q-1} + Y^{σ-1} + 1 = 0` for a point with
/// `x0, y0 != 0` and `Tr(y0) = 0`. Such a point exists iff `x^σ + b x^{σ^2}`
/// is not scattered. `b = 0` has no curve and yields `None`, matching the
/// scattered pseudoregulus polynomial.
pub fn b2_curve_test(ctx: &FieldCtx, b: Felt, s: u32) -> Result<Option<CurvePoint>, BinomialError> {
    if gcd(s as u64, ctx.n() as u64) != 1 {
        return Err(PolyError::NotCoprime { s, n: ctx.n() }.into());
    }
    let Ok(b_inv) = ctx.inv(b) else { return Ok(None) };
    let q1 = ctx.q() - 1;
    // X^{q-1} is constant on F_q^* cosets
    let mut values: HashMap<Felt, Felt> = HashMap::new();
    for x in ctx.projective_reps() {
        values.entry(ctx.mul(b_inv, ctx.pow_reduced(x, q1))).or_insert(x);
    }
    let sig1 = (ctx.sigma_power(s, 1) + ctx.order() - 1) % ctx.order();
    let minus_one = ctx.neg(Felt::ONE);
    let ys: Vec<Felt> = ctx.nonzero().collect();
    let hit = ys.par_iter().find_map_first(|&y0| {
        if !ctx.trace(y0).is_zero() {
            return None;
        }
        let target = ctx.sub(minus_one, ctx.pow_reduced(y0, sig1));
        values.get(&target).map(|&x0| CurvePoint { x0, y0 })
    });
    match hit {
        Some(pt) if !pt.verify(ctx, b, s) => Err(BinomialError::InvalidCurvePoint { x0: pt.x0, y0: pt.y0 }),
        other => Ok(other),
    }
}

/// `g^j` for `j = 0..q-1`: one element per value of the norm on F_{q^n}^*.
pub fn norm_class_reps(ctx: &FieldCtx) -> Vec<Felt> {
    (0..ctx.q() - 1).map(|j| ctx.g_pow(j as i128)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    #[serde(flatten)]
    pub field: FieldInfo,
    pub s: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L2Class {
    pub b: Felt,
    pub norm_b: Felt,
    pub verdict: Verdict,
    /// Solution `x` of the trace-sum equation for `w(x)`, present iff not scattered.
    pub witness: Option<Felt>,
    /// Second element of the same norm, checked to share the verdict.
    pub partner_b: Felt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum L2Conclusion {
    NoneScattered,
    SomeScattered,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L2SearchReport {
    pub params: SearchParams,
    pub classes: Vec<L2Class>,
    pub conclusion: L2Conclusion,
    pub scattered_classes: usize,
    pub elapsed_ms: Option<f64>,
}

impl L2SearchReport {
    pub fn scattered_bs(&self) -> Vec<Felt> {
        self.classes.iter().filter(|c| c.verdict.is_scattered()).map(|c| c.b).collect()
    }
}

fn verdict_of(witness: Option<Felt>) -> Verdict {
    if witness.is_some() {
        Verdict::NotScattered
    } else {
        Verdict::Scattered
    }
}

/// Decides `x^σ + b x^{σ^2}` for one `b` per norm class with the trace-sum
/// test, audits each verdict with all three generic deciders and checks a
/// second `b` of the same norm.
pub fn search_l2(ctx: &Arc<FieldCtx>, s: u32) -> Result<L2SearchReport, BinomialError> {
    check_coprime(ctx, s)?;
    let start = Instant::now();
    let shift = ctx.g_pow(ctx.q() as i128 - 1);
    let classes = norm_class_reps(ctx)
        .par_iter()
        .map(|&b| -> Result<L2Class, BinomialError> {
            let witness = b2_pqq_test(ctx, b, s)?;
            let verdict = verdict_of(witness);
            let audit = cross_validate(&b2_binomial(ctx, b, s)?)?.verdict;
            if audit != verdict {
                return Err(BinomialError::Disagreement {
                    what: "trace-sum test and generic deciders",
                    param: "b",
                    value: b,
                    left: verdict,
                    right: audit,
                });
            }
            let partner_b = ctx.mul(b, shift);
            let partner = verdict_of(b2_pqq_test(ctx, partner_b, s)?);
            if partner != verdict {
                return Err(BinomialError::Disagreement {
                    what: "same-norm coefficients",
                    param: "b",
                    value: partner_b,
                    left: verdict,
                    right: partner,
                });
            }
            Ok(L2Class { b, norm_b: ctx.norm(b), verdict, witness, partner_b })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let scattered_classes = classes.iter().filter(|c| c.verdict.is_scattered()).count();
    Ok(L2SearchReport {
        params: SearchParams { field: ctx.info(), s },
        classes,
        conclusion: if scattered_classes == 0 {
            L2Conclusion::NoneScattered
        } else {
            L2Conclusion::SomeScattered
        },
        scattered_classes,
        elapsed_ms: Some(start.elapsed().as_secs_f64() * 1e3),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpNormClass {
    pub norm: Felt,
    pub count: u64,
    pub scattered: u64,
    pub not_scattered: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpTable {
    pub params: SearchParams,
    pub audit_method: Method,
    pub classes: Vec<LpNormClass>,
    pub scattered: u64,
    pub not_scattered: u64,
    /// Every class is uniformly scattered or uniformly not, and exactly the
    /// norm-one class is not.
    pub norm_criterion_holds: bool,
    pub elapsed_ms: Option<f64>,
}

/// Classifies the Lunardon-Polverino binomial for every `δ != 0`, auditing
/// each norm-based verdict with the chosen generic decider.
pub fn classify_lp_table(ctx: &Arc<FieldCtx>, s: u32, audit: Method) -> Result<LpTable, BinomialError> {
    check_coprime(ctx, s)?;
    let start = Instant::now();
    let deltas: Vec<Felt> = ctx.nonzero().collect();
    let rows = deltas
        .par_iter()
        .map(|&delta| -> Result<(Felt, bool), BinomialError> {
            let v = lp_classify(ctx, delta, s)?;
            let generic = decide(&lp_binomial(ctx, delta, s)?, audit)?.verdict;
            if generic.is_scattered() != v.scattered {
                return Err(BinomialError::Disagreement {
                    what: "norm shortcut and generic decider",
                    param: "delta",
                    value: delta,
                    left: if v.scattered { Verdict::Scattered } else { Verdict::NotScattered },
                    right: generic,
                });
            }
            Ok((v.norm_delta, v.scattered))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut by_norm: BTreeMap<Felt, LpNormClass> = BTreeMap::new();
    for (norm, scattered) in rows {
        let c = by_norm.entry(norm).or_insert(LpNormClass { norm, count: 0, scattered: 0, not_scattered: 0 });
        c.count += 1;
        if scattered {
            c.scattered += 1;
        } else {
            c.not_scattered += 1;
        }
    }
    let classes: Vec<LpNormClass> = by_norm.into_values().collect();
    let norm_criterion_holds = classes.iter().all(|c| {
        if c.norm == Felt::ONE {
            c.not_scattered == c.count
        } else {
            c.scattered == c.count
        }
    });
    Ok(LpTable {
        params: SearchParams { field: ctx.info(), s },
        audit_method: audit,
        scattered: classes.iter().map(|c| c.scattered).sum(),
        not_scattered: classes.iter().map(|c| c.not_scattered).sum(),
        classes,
        norm_criterion_holds,
        elapsed_ms: Some(start.elapsed().as_secs_f64() * 1e3),
    })
}
