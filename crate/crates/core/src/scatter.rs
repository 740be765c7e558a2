//! Three independent scatteredness deciders.
//!
//! * [`is_scattered_definition`] looks for a collision of `f(x)/x` over the
//!   projective representatives.
//! * [`is_scattered_kernel`] sweeps `m` over the whole field and asks whether
//!   `m x + f(x)` has a kernel of dimension at least two, reading the rank off
//!   the nested minors of its Dickson matrix.
//! * [`is_scattered_minor`] checks that the North-West `(n-1)`-minor of the
//!   `g_x` Dickson matrix never vanishes.
//!
//! Every `NotScattered` report carries a witness `(x, t)` with
//! `x f(t) = t f(x)` and `t/x` outside F_q, re-checked before it is returned.
//! Loops run in parallel but always report the first hit in generator-power
//! order, so results do not depend on the thread count.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dickson::{nw_minor_det, rank_nested_minors};
use crate::gf::{Felt, FieldCtx, FieldInfo};
use crate::linpoly::SigmaPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Scattered,
    NotScattered,
}

impl Verdict {
    pub fn is_scattered(self) -> bool {
        self == Verdict::Scattered
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Scattered => "scattered",
            Verdict::NotScattered => "not_scattered",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Definition,
    KernelSweep,
    MinorCriterion,
    NormShortcut,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Definition => "definition",
            Method::KernelSweep => "kernel_sweep",
            Method::MinorCriterion => "minor_criterion",
            Method::NormShortcut => "norm_shortcut",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatterError {
    #[error("deciders disagree: {0:?}")]
    Inconsistent(Vec<(Method, Verdict)>),
    #[error("{method} produced a witness that fails re-verification: {witness:?}")]
    InvalidWitness { method: Method, witness: Witness },
    #[error("{method} found a failure at x = {x} but no witness t")]
    MissingWitness { method: Method, x: Felt },
}

/// Two F_q-independent nonzero elements with `x f(t) = t f(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Felt,
    pub t: Felt,
}

impl Witness {
    pub fn verify(&self, f: &SigmaPoly) -> bool {
        let ctx = &**f.ctx();
        if self.x.is_zero() || self.t.is_zero() || !ctx.contains(self.x) || !ctx.contains(self.t) {
            return false;
        }
        let lhs = ctx.mul(self.x, f.eval(self.t));
        let rhs = ctx.mul(self.t, f.eval(self.x));
        let ratio = ctx.div(self.t, self.x).expect("x is nonzero");
        lhs == rhs && !ctx.in_subfield(ratio)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    /// Loop candidates (points `x` or shifts `m`) examined before stopping.
    pub candidates: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodTiming {
    pub method: Method,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterReport {
    pub verdict: Verdict,
    pub method: Method,
    pub witness: Option<Witness>,
    pub stats: Stats,
    pub field: FieldInfo,
    pub poly: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<MethodTiming>,
}

impl ScatterReport {
    fn build(
        f: &SigmaPoly,
        method: Method,
        witness: Option<Witness>,
        candidates: u64,
    ) -> Result<Self, ScatterError> {
        if let Some(w) = witness {
            if !w.verify(f) {
                return Err(ScatterError::InvalidWitness { method, witness: w });
            }
        }
        Ok(ScatterReport {
            verdict: if witness.is_some() { Verdict::NotScattered } else { Verdict::Scattered },
            method,
            witness,
            stats: Stats { candidates },
            field: f.ctx().info(),
            poly: f.to_string(),
            timings: Vec::new(),
        })
    }

    /// Checks the report invariants against `f`: a witness is present
    /// exactly when the verdict is negative, and it verifies.
    pub fn is_consistent_with(&self, f: &SigmaPoly) -> bool {
        match (self.verdict, self.witness) {
            (Verdict::Scattered, None) => true,
            (Verdict::NotScattered, Some(w)) => w.verify(f),
            _ => false,
        }
    }
}

fn reps(ctx: &FieldCtx) -> Vec<Felt> {
    ctx.projective_reps().collect()
}

/// First `t` among the representatives, other than `x`, with `x f(t) = t f(x)`.
fn find_partner(f: &SigmaPoly, x: Felt, reps: &[Felt]) -> Option<Felt> {
    let ctx = &**f.ctx();
    let fx = f.eval(x);
    reps.iter().copied().find(|&t| t != x && ctx.mul(x, f.eval(t)) == ctx.mul(t, fx))
}

pub fn is_scattered_definition(f: &SigmaPoly) -> Result<ScatterReport, ScatterError> {
    let ctx = &**f.ctx();
    let reps = reps(ctx);
    let values: Vec<Felt> =
        reps.par_iter().map(|&x| ctx.div(f.eval(x), x).expect("reps are nonzero")).collect();
    let mut seen: HashMap<Felt, usize> = HashMap::with_capacity(values.len());
    for (j, v) in values.iter().enumerate() {
        if let Some(&i) = seen.get(v) {
            let w = Witness { x: reps[i], t: reps[j] };
            return ScatterReport::build(f, Method::Definition, Some(w), j as u64 + 1);
        }
        seen.insert(*v, j);
    }
    ScatterReport::build(f, Method::Definition, None, reps.len() as u64)
}

pub fn is_scattered_kernel(f: &SigmaPoly) -> Result<ScatterReport, ScatterError> {
    let ctx = &**f.ctx();
    let n = f.n();
    let shifts: Vec<Felt> = ctx.elements().collect();
    let hit = shifts.par_iter().position_first(|&m| rank_nested_minors(&f.shifted(m)) + 1 < n);
    match hit {
        None => ScatterReport::build(f, Method::KernelSweep, None, shifts.len() as u64),
        Some(pos) => {
            let fm = f.shifted(shifts[pos]);
            // two distinct representatives in the kernel are F_q-independent
            let mut kernel = ctx.projective_reps().filter(|&x| fm.eval(x).is_zero());
            let x = kernel.next();
            let t = kernel.next();
            match (x, t) {
                (Some(x), Some(t)) => {
                    ScatterReport::build(f, Method::KernelSweep, Some(Witness { x, t }), pos as u64 + 1)
                }
                _ => Err(ScatterError::MissingWitness {
                    method: Method::KernelSweep,
                    x: x.unwrap_or(Felt::ZERO),
                }),
            }
        }
    }
}

pub fn is_scattered_minor(f: &SigmaPoly) -> Result<ScatterReport, ScatterError> {
    let f1 = f.normalize_a0();
    let reps = reps(f.ctx());
    let hit = reps.par_iter().position_first(|&x| nw_minor_det(&f1, x).expect("reps are nonzero").is_zero());
    match hit {
        None => ScatterReport::build(f, Method::MinorCriterion, None, reps.len() as u64),
        Some(pos) => {
            let x = reps[pos];
            let t = find_partner(f, x, &reps)
                .ok_or(ScatterError::MissingWitness { method: Method::MinorCriterion, x })?;
            ScatterReport::build(f, Method::MinorCriterion, Some(Witness { x, t }), pos as u64 + 1)
        }
    }
}

/// Runs one of the generic deciders.
pub fn decide(f: &SigmaPoly, method: Method) -> Result<ScatterReport, ScatterError> {
    match method {
        Method::Definition | Method::NormShortcut => is_scattered_definition(f),
        Method::KernelSweep => is_scattered_kernel(f),
        Method::MinorCriterion => is_scattered_minor(f),
    }
}

/// Runs all three generic deciders and insists on one verdict. Returns the
/// definition report with per-method timings attached.
pub fn cross_validate(f: &SigmaPoly) -> Result<ScatterReport, ScatterError> {
    let mut reports = Vec::with_capacity(3);
    let mut timings = Vec::with_capacity(3);
    for method in [Method::Definition, Method::KernelSweep, Method::MinorCriterion] {
        let start = Instant::now();
        let r = decide(f, method)?;
        timings.push(MethodTiming { method, elapsed_ms: start.elapsed().as_secs_f64() * 1e3 });
        reports.push(r);
    }
    if reports.iter().any(|r| r.verdict != reports[0].verdict) {
        return Err(ScatterError::Inconsistent(reports.iter().map(|r| (r.method, r.verdict)).collect()));
    }
    let mut out = reports.swap_remove(0);
    out.timings = timings;
    Ok(out)
}
