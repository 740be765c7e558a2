//! σ-linearized polynomials `f(x) = a_0 x + a_1 x^σ + ... + a_{n-1} x^{σ^{n-1}}`
//! with `σ = q^s`, `gcd(s, n) = 1`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Felt, FieldCtx, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("s = {s} is not coprime to n = {n}")]
    NotCoprime { s: u32, n: u32 },
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("coefficient index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: u32 },
    #[error("malformed polynomial: {0}")]
    Syntax(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Integer `r` with `q^r = count`; `count` must be a power of `q`.
fn log_q(count: u64, q: u64) -> u32 {
    let mut r = 0;
    let mut c = count;
    while c > 1 {
        debug_assert_eq!(c % q, 0, "{count} is not a power of {q}");
        c /= q;
        r += 1;
    }
    r
}

#[derive(Clone)]
pub struct SigmaPoly {
    ctx: Arc<FieldCtx>,
    s: u32,
    coeffs: Vec<Felt>,
}

impl PartialEq for SigmaPoly {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.s == other.s && self.coeffs == other.coeffs
    }
}

impl Eq for SigmaPoly {}

impl fmt::Debug for SigmaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `s=<s>; a[0]=<elt>; ...; a[n-1]=<elt>`, the format accepted by
/// [`SigmaPoly::parse`].
impl fmt::Display for SigmaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={}", self.s)?;
        for (i, a) in self.coeffs.iter().enumerate() {
            write!(f, "; a[{i}]={a}")?;
        }
        Ok(())
    }
}

impl SigmaPoly {
    pub fn new(ctx: Arc<FieldCtx>, s: u32, coeffs: Vec<Felt>) -> Result<Self, PolyError> {
        let n = ctx.n();
        if gcd(s as u64, n as u64) != 1 {
            return Err(PolyError::NotCoprime { s, n });
        }
        if coeffs.len() != n as usize {
            return Err(PolyError::WrongLength { expected: n as usize, got: coeffs.len() });
        }
        if let Some(bad) = coeffs.iter().find(|&&a| !ctx.contains(a)) {
            return Err(PolyError::Syntax(format!("{bad} is not an element of the field")));
        }
        Ok(SigmaPoly { ctx, s, coeffs })
    }

    pub fn zero(ctx: Arc<FieldCtx>, s: u32) -> Result<Self, PolyError> {
        let n = ctx.n() as usize;
        SigmaPoly::new(ctx, s, vec![Felt::ZERO; n])
    }

    /// `coeff * x^{σ^i}`.
    pub fn monomial(ctx: Arc<FieldCtx>, s: u32, i: usize, coeff: Felt) -> Result<Self, PolyError> {
        let mut f = SigmaPoly::zero(ctx, s)?;
        f.set_coeff(i, coeff)?;
        Ok(f)
    }

    /// Builds the σ-form from coefficients given in q-degrees:
    /// `b[j]` multiplies `x^{q^j}`.
    pub fn from_q_form(ctx: Arc<FieldCtx>, s: u32, b: &[Felt]) -> Result<Self, PolyError> {
        let n = ctx.n() as usize;
        if b.len() != n {
            return Err(PolyError::WrongLength { expected: n, got: b.len() });
        }
        let coeffs = (0..n).map(|i| b[(i * s as usize) % n]).collect();
        SigmaPoly::new(ctx, s, coeffs)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn n(&self) -> u32 {
        self.ctx.n()
    }

    pub fn coeffs(&self) -> &[Felt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Felt {
        self.coeffs[i]
    }

    pub fn set_coeff(&mut self, i: usize, a: Felt) -> Result<(), PolyError> {
        let n = self.n();
        let slot = self.coeffs.get_mut(i).ok_or(PolyError::IndexOutOfRange { index: i, n })?;
        *slot = a;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_zero())
    }

    pub fn eval(&self, x: Felt) -> Felt {
        if x.is_zero() {
            return Felt::ZERO;
        }
        let ctx = &*self.ctx;
        self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()).fold(Felt::ZERO, |acc, (i, &a)| {
            let xi = ctx.pow_reduced(x, ctx.sigma_power(self.s, i as u32));
            ctx.add(acc, ctx.mul(a, xi))
        })
    }

    /// Coefficients in q-degrees: entry `j` multiplies `x^{q^j}`.
    pub fn q_form(&self) -> Vec<Felt> {
        let n = self.n() as usize;
        let mut b = vec![Felt::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            b[(i * self.s as usize) % n] = a;
        }
        b
    }

    /// Adjoint with respect to the trace bilinear form: in q-form the
    /// coefficient of `x^{q^{n-i}}` is `b_i^{q^{n-i}}`.
    pub fn adjoint(&self) -> SigmaPoly {
        let n = self.n() as usize;
        let b = self.q_form();
        let mut hat = vec![Felt::ZERO; n];
        for (i, &bi) in b.iter().enumerate() {
            let j = (n - i) % n;
            hat[j] = self.ctx.frobenius(bi, j as i64);
        }
        SigmaPoly::from_q_form(self.ctx.clone(), self.s, &hat).expect("adjoint keeps s and length")
    }

    /// Drops the `a_0 x` term, which does not affect scatteredness.
    pub fn normalize_a0(&self) -> SigmaPoly {
        let mut f = self.clone();
        f.coeffs[0] = Felt::ZERO;
        f
    }

    /// `m x + f(x)`.
    pub fn shifted(&self, m: Felt) -> SigmaPoly {
        let mut f = self.clone();
        f.coeffs[0] = self.ctx.add(f.coeffs[0], m);
        f
    }

    /// Dimension over F_q of the image, counted by enumerating every value.
    pub fn image_rank(&self) -> u32 {
        let ctx = &*self.ctx;
        let order = ctx.order() as usize;
        let mut seen = vec![false; ctx.size() as usize];
        let mut count = 0u64;
        for x in ctx.elements() {
            let idx = self.eval(x).log().map_or(order, |k| k as usize);
            if !seen[idx] {
                seen[idx] = true;
                count += 1;
            }
        }
        log_q(count, ctx.q())
    }

    /// Elements of the kernel, zero included, in generator-power order.
    pub fn kernel(&self) -> Vec<Felt> {
        self.ctx.elements().filter(|&x| self.eval(x).is_zero()).collect()
    }

    /// Dimension over F_q of the kernel, counted directly.
    pub fn kernel_dim(&self) -> u32 {
        log_q(self.kernel().len() as u64, self.ctx.q())
    }

    /// The F_q-linear set `{<(x, f(x))> : x != 0}` on PG(1, q^n).
    pub fn linear_set(&self) -> LinearSet {
        let ctx = &*self.ctx;
        let points = ctx
            .projective_reps()
            .map(|x| ProjPoint::Affine(ctx.div(self.eval(x), x).expect("reps are nonzero")))
            .collect();
        LinearSet { points }
    }

    /// Parses the text form `s=<int>; a[i]=<elt>; ...` or a JSON array of
    /// `n` element strings. Omitted coefficients are zero; `s` defaults to
    /// `default_s` when the text does not set it. `a<i>=` is accepted as a
    /// shorthand for `a[i]=`.
    pub fn parse(ctx: Arc<FieldCtx>, default_s: Option<u32>, text: &str) -> Result<Self, PolyError> {
        let t = text.trim();
        if t.starts_with('[') {
            let items: Vec<String> = serde_json::from_str(t).map_err(|e| PolyError::Syntax(e.to_string()))?;
            let coeffs = items.iter().map(|e| ctx.parse_elt(e)).collect::<Result<Vec<_>, _>>()?;
            let s = default_s.ok_or_else(|| PolyError::Syntax("missing s".into()))?;
            return SigmaPoly::new(ctx, s, coeffs);
        }

        let n = ctx.n() as usize;
        let mut s = default_s;
        let mut coeffs = vec![Felt::ZERO; n];
        for item in t.split(';').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| PolyError::Syntax(format!("expected key=value, got {item:?}")))?;
            let key = key.trim();
            if key == "s" {
                let v = value.trim().parse().map_err(|_| PolyError::Syntax(format!("bad s in {item:?}")))?;
                s = Some(v);
                continue;
            }
            let index = key
                .strip_prefix('a')
                .map(|r| r.trim_start_matches('[').trim_end_matches(']'))
                .and_then(|r| r.trim().parse::<usize>().ok())
                .ok_or_else(|| PolyError::Syntax(format!("bad coefficient key {key:?}")))?;
            if index >= n {
                return Err(PolyError::IndexOutOfRange { index, n: n as u32 });
            }
            coeffs[index] = ctx.parse_elt(value)?;
        }
        let s = s.ok_or_else(|| PolyError::Syntax("missing s".into()))?;
        SigmaPoly::new(ctx, s, coeffs)
    }
}

/// A point of PG(1, q^n): `<(1, z)>` or `<(0, 1)>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProjPoint {
    Affine(Felt),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSet {
    points: BTreeSet<ProjPoint>,
}

impl LinearSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.contains(p)
    }

    pub fn points(&self) -> &BTreeSet<ProjPoint> {
        &self.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(p: u64, e: u32, n: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, e, n).unwrap())
    }

    fn random_poly(ctx: &Arc<FieldCtx>, s: u32, rng: &mut ChaCha8Rng) -> SigmaPoly {
        let coeffs = (0..ctx.n())
            .map(|_| {
                let k = rng.gen_range(0..ctx.size());
                if k == 0 {
                    Felt::ZERO
                } else {
                    ctx.g_pow(k as i128 - 1)
                }
            })
            .collect();
        SigmaPoly::new(ctx.clone(), s, coeffs).unwrap()
    }

    fn trace_poly(ctx: &Arc<FieldCtx>) -> SigmaPoly {
        SigmaPoly::new(ctx.clone(), 1, vec![Felt::ONE; ctx.n() as usize]).unwrap()
    }

    #[test]
    fn construction_errors() {
        let ctx = field(2, 1, 4);
        assert_eq!(SigmaPoly::zero(ctx.clone(), 2).unwrap_err(), PolyError::NotCoprime { s: 2, n: 4 });
        assert_eq!(
            SigmaPoly::new(ctx.clone(), 1, vec![Felt::ONE]).unwrap_err(),
            PolyError::WrongLength { expected: 4, got: 1 }
        );
        assert!(SigmaPoly::monomial(ctx, 1, 4, Felt::ONE).is_err());
    }

    #[test]
    fn eval_examples() {
        let ctx = field(2, 1, 3);
        let f = SigmaPoly::monomial(ctx.clone(), 1, 1, Felt::ONE).unwrap();
        assert_eq!(f.eval(Felt::ONE), Felt::ONE);
        assert_eq!(f.eval(Felt::ZERO), Felt::ZERO);
        let g = ctx.generator();
        assert_eq!(f.eval(g), ctx.mul(g, g));
    }

    #[test]
    fn q_form_examples() {
        let ctx = field(2, 1, 5);
        let f = SigmaPoly::monomial(ctx.clone(), 2, 1, Felt::ONE).unwrap();
        let b = f.q_form();
        assert_eq!(b.iter().position(|a| !a.is_zero()), Some(2));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for s in [1, 2, 3, 4] {
            let f = random_poly(&ctx, s, &mut rng);
            let back = SigmaPoly::from_q_form(ctx.clone(), s, &f.q_form()).unwrap();
            assert_eq!(back, f);
            if s == 1 {
                assert_eq!(f.q_form(), f.coeffs());
            }
        }
    }

    #[test]
    fn q_form_evaluates_identically() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (p, e, n) in [(2, 1, 5), (3, 1, 4), (2, 2, 3), (2, 1, 7), (3, 1, 5)] {
            let ctx = field(p, e, n);
            for s in (1..n).filter(|&s| gcd(s as u64, n as u64) == 1) {
                let f = random_poly(&ctx, s, &mut rng);
                let b = f.q_form();
                for x in ctx.elements() {
                    let by_q = b.iter().enumerate().fold(Felt::ZERO, |acc, (j, &bj)| {
                        ctx.add(acc, ctx.mul(bj, ctx.frobenius(x, j as i64)))
                    });
                    assert_eq!(f.eval(x), by_q);
                }
            }
        }
    }

    #[test]
    fn eval_is_fq_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, e, n) in [(3, 1, 4), (2, 2, 3), (5, 1, 3)] {
            let ctx = field(p, e, n);
            let sub: Vec<Felt> = ctx.elements().filter(|&c| ctx.in_subfield(c)).collect();
            let f = random_poly(&ctx, 1, &mut rng);
            for _ in 0..50 {
                let x = ctx.g_pow(rng.gen_range(0..ctx.order()) as i128);
                let y = ctx.g_pow(rng.gen_range(0..ctx.order()) as i128);
                for &c in &sub {
                    let lhs = f.eval(ctx.add(x, ctx.mul(c, y)));
                    let rhs = ctx.add(f.eval(x), ctx.mul(c, f.eval(y)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        let ctx = field(3, 1, 4);
        let xq = SigmaPoly::monomial(ctx.clone(), 1, 1, Felt::ONE).unwrap();
        assert_eq!(xq.adjoint(), SigmaPoly::monomial(ctx.clone(), 1, 3, Felt::ONE).unwrap());
        let a0 = SigmaPoly::monomial(ctx.clone(), 1, 0, ctx.g_pow(7)).unwrap();
        assert_eq!(a0.adjoint(), a0);
    }

    #[test]
    fn adjoint_satisfies_trace_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (p, e, n) in [(3, 1, 4), (2, 1, 5), (2, 2, 3)] {
            let ctx = field(p, e, n);
            for s in (1..n).filter(|&s| gcd(s as u64, n as u64) == 1) {
                let f = random_poly(&ctx, s, &mut rng);
                let hat = f.adjoint();
                assert_eq!(hat.adjoint(), f);
                for _ in 0..100 {
                    let x = ctx.g_pow(rng.gen_range(0..ctx.order()) as i128);
                    let y = ctx.g_pow(rng.gen_range(0..ctx.order()) as i128);
                    let lhs = ctx.trace(ctx.mul(y, f.eval(x)));
                    let rhs = ctx.trace(ctx.mul(x, hat.eval(y)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn normalize_a0_examples() {
        let ctx = field(2, 1, 3);
        let f = SigmaPoly::monomial(ctx.clone(), 1, 1, Felt::ONE).unwrap();
        assert_eq!(f.normalize_a0(), f);
        let x = SigmaPoly::monomial(ctx.clone(), 1, 0, Felt::ONE).unwrap();
        assert!(x.normalize_a0().is_zero());
    }

    #[test]
    fn rank_and_kernel_examples() {
        let ctx = field(3, 1, 4);
        let n = ctx.n();
        let x = SigmaPoly::monomial(ctx.clone(), 1, 0, Felt::ONE).unwrap();
        assert_eq!((x.image_rank(), x.kernel_dim()), (n, 0));
        let t = trace_poly(&ctx);
        assert_eq!(t.image_rank(), 1);
        let z = SigmaPoly::zero(ctx.clone(), 1).unwrap();
        assert_eq!((z.image_rank(), z.kernel_dim()), (0, n));
        // x - x^q has kernel exactly F_q
        let mut d = SigmaPoly::monomial(ctx.clone(), 1, 0, Felt::ONE).unwrap();
        d.set_coeff(1, ctx.neg(Felt::ONE)).unwrap();
        assert_eq!(d.kernel_dim(), 1);
        assert!(d.kernel().iter().all(|&k| ctx.in_subfield(k)));
    }

    #[test]
    fn rank_plus_kernel_is_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, e, n) in [(2, 1, 6), (3, 1, 4), (2, 2, 3), (5, 1, 3)] {
            let ctx = field(p, e, n);
            for _ in 0..40 {
                let mut f = random_poly(&ctx, 1, &mut rng);
                // sparse polynomials hit the low-rank cases
                for i in 0..n as usize {
                    if rng.gen_bool(0.5) {
                        f.set_coeff(i, Felt::ZERO).unwrap();
                    }
                }
                assert_eq!(f.image_rank() + f.kernel_dim(), n);
            }
        }
    }

    #[test]
    fn linear_set_examples() {
        let ctx = field(2, 1, 3);
        let f = SigmaPoly::monomial(ctx.clone(), 1, 1, Felt::ONE).unwrap();
        let ls = f.linear_set();
        assert_eq!(ls.len(), 7);
        for z in ctx.nonzero() {
            assert!(ls.contains(&ProjPoint::Affine(z)));
        }
        let z = SigmaPoly::zero(ctx.clone(), 1).unwrap().linear_set();
        assert_eq!(z.points().iter().copied().collect::<Vec<_>>(), vec![ProjPoint::Affine(Felt::ZERO)]);

        // pseudoregulus: norm-one points, independent of s
        for (p, n) in [(3u64, 4u32), (2, 5), (4, 3)] {
            let ctx = if p == 4 { field(2, 2, n) } else { field(p, 1, n) };
            let expected: BTreeSet<ProjPoint> =
                ctx.nonzero().filter(|&z| ctx.norm(z) == Felt::ONE).map(ProjPoint::Affine).collect();
            for s in (1..n).filter(|&s| gcd(s as u64, n as u64) == 1) {
                let f = SigmaPoly::monomial(ctx.clone(), s, 1, Felt::ONE).unwrap();
                assert_eq!(f.linear_set().points(), &expected);
            }
        }
    }

    #[test]
    fn text_format() {
        let ctx = field(3, 1, 4);
        let f = SigmaPoly::parse(ctx.clone(), Some(1), "a1=g^0").unwrap();
        assert_eq!(f, SigmaPoly::monomial(ctx.clone(), 1, 1, Felt::ONE).unwrap());
        let g = SigmaPoly::parse(ctx.clone(), None, "s=3; a[0]=g^5; a[2]=[1,1]; a[3]=2").unwrap();
        assert_eq!(g.s(), 3);
        assert_eq!(g.coeff(3), ctx.neg(Felt::ONE));
        assert_eq!(SigmaPoly::parse(ctx.clone(), None, &g.to_string()).unwrap(), g);
        let j = SigmaPoly::parse(ctx.clone(), Some(1), r#"["0","g^0","0","g^3"]"#).unwrap();
        assert_eq!(j.coeff(3), ctx.g_pow(3));
        assert!(SigmaPoly::parse(ctx.clone(), None, "a1=g^0").is_err());
        assert!(SigmaPoly::parse(ctx.clone(), Some(1), "a9=g^0").is_err());
        assert!(SigmaPoly::parse(ctx.clone(), Some(1), "a1=h").is_err());
        assert!(SigmaPoly::parse(ctx, Some(1), "a1").is_err());
    }
}
