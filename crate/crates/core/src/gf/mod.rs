//! Table-driven arithmetic in F_{q^n} = F_{p^{e n}}.
//!
//! Nonzero elements are stored as discrete logarithms to a fixed primitive
//! element `g`; addition goes through a Zech logarithm table. The subfield
//! F_q is never materialized: it is the fixed field of `z -> z^q`.

mod fp_poly;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use fp_poly::{is_irreducible, is_prime, prime_factors, FpPoly};

/// Default cap on the number of field elements.
pub const DEFAULT_CAP: u64 = 1 << 22;

const ZERO_REP: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("exponent e must be positive")]
    ZeroExponent,
    #[error("extension degree n = {0} is below 3")]
    DegreeTooSmall(u32),
    #[error("field of size {size} exceeds the cap of {cap} elements")]
    TooLarge { size: u128, cap: u64 },
    #[error("zero has no inverse")]
    InverseOfZero,
    #[error("cannot parse field element {0:?}")]
    BadElement(String),
}

/// An element of F_{q^n}: either zero or `g^k` with `0 <= k < q^n - 1`.
///
/// Two values are equal iff they denote the same field element of the
/// context that produced them.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Felt(u32);

impl Felt {
    pub const ZERO: Felt = Felt(ZERO_REP);
    pub const ONE: Felt = Felt(0);

    pub fn is_zero(self) -> bool {
        self.0 == ZERO_REP
    }

    /// Discrete log to the context generator, `None` for zero.
    pub fn log(self) -> Option<u32> {
        (!self.is_zero()).then_some(self.0)
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => f.write_str("0"),
            Some(k) => write!(f, "g^{k}"),
        }
    }
}

impl fmt::Debug for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses the canonical `0` / `g^k` form. The exponent is not reduced; use
/// [`FieldCtx::parse_elt`] for the full input syntax.
impl FromStr for Felt {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "0" {
            return Ok(Felt::ZERO);
        }
        t.strip_prefix("g^")
            .and_then(|k| k.parse::<u32>().ok())
            .filter(|&k| k != ZERO_REP)
            .map(Felt)
            .ok_or_else(|| FieldError::BadElement(s.to_string()))
    }
}

impl Serialize for Felt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Felt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Report echo of a [`FieldCtx`]: enough to rebuild it deterministically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    pub n: u32,
    /// Monic modulus coefficients over F_p, constant term first.
    pub modulus: Vec<u64>,
    /// Base-p encoding of the generator's coefficient vector.
    pub generator: u64,
}

/// Immutable description of F_{q^n} together with its log/antilog/Zech tables.
pub struct FieldCtx {
    p: u64,
    e: u32,
    n: u32,
    q: u64,
    size: u64,
    order: u64,
    theta: u64,
    /// Monic modulus over F_p, low degree first (length `e*n + 1`).
    modulus: Vec<u64>,
    /// Base-p encoding of the generator's coefficient vector.
    generator: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    /// `q^k mod (q^n - 1)` for `k` in `0..n`.
    frob: Vec<u64>,
    neg_one: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

fn digits(mut enc: u64, p: u64, d: usize) -> Vec<u64> {
    let mut out = vec![0; d];
    for slot in out.iter_mut() {
        *slot = enc % p;
        enc /= p;
    }
    out
}

fn encode(c: &[u64], p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Multiplication of coefficient vectors modulo a monic modulus; only used
/// while the tables are being built.
fn mul_vec(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let d = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * d];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for top in (d..2 * d).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (k, &m) in modulus[..d].iter().enumerate() {
            let idx = top - d + k;
            prod[idx] = (prod[idx] + p - c * m % p) % p;
        }
        prod[top] = 0;
    }
    prod.truncate(d);
    prod
}

fn pow_vec(a: &[u64], mut k: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let d = modulus.len() - 1;
    let mut acc = vec![0u64; d];
    acc[0] = 1;
    let mut base = a.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_vec(&acc, &base, modulus, p);
        }
        base = mul_vec(&base, &base, modulus, p);
        k >>= 1;
    }
    acc
}

impl FieldCtx {
    /// Builds F_{p^{e n}} with the default size cap.
    pub fn new(p: u64, e: u32, n: u32) -> Result<Self, FieldError> {
        Self::with_cap(p, e, n, DEFAULT_CAP)
    }

    pub fn with_cap(p: u64, e: u32, n: u32, cap: u64) -> Result<Self, FieldError> {
        if n < 3 {
            return Err(FieldError::DegreeTooSmall(n));
        }
        Self::construct(p, e, n, cap)
    }

    /// Same as [`FieldCtx::with_cap`] without the `n >= 3` restriction.
    pub(crate) fn construct(p: u64, e: u32, n: u32, cap: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroExponent);
        }
        let d = e as usize * n as usize;
        let cap = cap.min(u32::MAX as u64);
        let size_wide = (p as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if size_wide > cap as u128 {
            return Err(FieldError::TooLarge { size: size_wide, cap });
        }
        let size = size_wide as u64;
        let q = p.pow(e);
        let order = size - 1;

        // first irreducible monic modulus in base-p order of (c_0, .., c_{d-1})
        let modulus = (0..size)
            .map(|k| {
                let mut c = digits(k, p, d);
                c.push(1);
                c
            })
            .find(|c| is_irreducible(&FpPoly::new(c.clone()), p))
            .expect("an irreducible polynomial of every degree exists");
        debug_assert_eq!(FpPoly::new(modulus.clone()).coeffs().len(), d + 1);

        let factors = prime_factors(order);
        let one = digits(1, p, d);
        let generator = (1..size)
            .find(|&k| {
                let c = digits(k, p, d);
                factors.iter().all(|&r| pow_vec(&c, order / r, &modulus, p) != one)
            })
            .expect("the multiplicative group is cyclic");

        let gvec = digits(generator, p, d);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![ZERO_REP; size as usize];
        let mut cur = one.clone();
        for i in 0..order {
            let enc = encode(&cur, p);
            exp.push(enc as u32);
            log[enc as usize] = i as u32;
            cur = mul_vec(&cur, &gvec, &modulus, p);
        }
        debug_assert_eq!(cur, one);

        // zech[i] = log(1 + g^i); adding 1 only touches the constant digit
        let zech = exp
            .iter()
            .map(|&v| {
                let v = v as u64;
                let c0 = v % p;
                log[(v - c0 + (c0 + 1) % p) as usize]
            })
            .collect();

        let frob = (0..n as u64)
            .scan(1u64, |acc, _| {
                let cur = *acc;
                *acc = ((*acc as u128 * q as u128) % order as u128) as u64;
                Some(cur)
            })
            .collect();

        let neg_one = if p == 2 { 0 } else { (order / 2) as u32 };

        Ok(FieldCtx {
            p,
            e,
            n,
            q,
            size,
            order,
            theta: order / (q - 1),
            modulus,
            generator,
            exp,
            log,
            zech,
            frob,
            neg_one,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Extension degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.e * self.n
    }

    /// Number of field elements, `q^n`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Order of the multiplicative group, `q^n - 1`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Number of points of the projective line over F_q^n seen from F_q:
    /// `(q^n - 1) / (q - 1)`.
    pub fn theta(&self) -> u64 {
        self.theta
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Base-p integer encoding of the generator's coefficient vector.
    pub fn generator_index(&self) -> u64 {
        self.generator
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            p: self.p,
            e: self.e,
            q: self.q,
            n: self.n,
            modulus: self.modulus.clone(),
            generator: self.generator,
        }
    }

    pub fn zero(&self) -> Felt {
        Felt::ZERO
    }

    pub fn one(&self) -> Felt {
        Felt::ONE
    }

    pub fn generator(&self) -> Felt {
        self.g_pow(1)
    }

    fn reduce(&self, k: i128) -> u32 {
        k.rem_euclid(self.order as i128) as u32
    }

    /// `g^k` for any integer `k`.
    pub fn g_pow(&self, k: i128) -> Felt {
        Felt(self.reduce(k))
    }

    /// Whether `z` is a valid element of this context.
    pub fn contains(&self, z: Felt) -> bool {
        z.is_zero() || (z.0 as u64) < self.order
    }

    /// The image of the integer `c` under Z -> F_p.
    pub fn from_int(&self, c: i64) -> Felt {
        Felt(self.log[c.rem_euclid(self.p as i64) as usize])
    }

    /// Element with the given coefficients in the polynomial basis
    /// `1, a, a^2, ...` where `a` is a root of the modulus.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Felt, FieldError> {
        if coeffs.len() > self.degree() as usize {
            return Err(FieldError::BadElement(format!("{coeffs:?}")));
        }
        let c: Vec<u64> = coeffs.iter().map(|&c| c % self.p).collect();
        Ok(Felt(self.log[encode(&c, self.p) as usize]))
    }

    pub fn to_coeffs(&self, z: Felt) -> Vec<u64> {
        let enc = match z.log() {
            None => 0,
            Some(k) => self.exp[k as usize] as u64,
        };
        digits(enc, self.p, self.degree() as usize)
    }

    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let diff = if b.0 >= a.0 { b.0 - a.0 } else { (b.0 as u64 + self.order - a.0 as u64) as u32 };
        let z = self.zech[diff as usize];
        if z == ZERO_REP {
            Felt::ZERO
        } else {
            self.mul(a, Felt(z))
        }
    }

    pub fn neg(&self, a: Felt) -> Felt {
        self.mul(a, Felt(self.neg_one))
    }

    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        if a.is_zero() || b.is_zero() {
            return Felt::ZERO;
        }
        let s = a.0 as u64 + b.0 as u64;
        Felt(if s >= self.order { s - self.order } else { s } as u32)
    }

    pub fn inv(&self, a: Felt) -> Result<Felt, FieldError> {
        match a.log() {
            None => Err(FieldError::InverseOfZero),
            Some(0) => Ok(Felt::ONE),
            Some(k) => Ok(Felt((self.order - k as u64) as u32)),
        }
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `z^k`; the exponent is reduced modulo `q^n - 1` when `z != 0`.
    pub fn pow(&self, z: Felt, k: i128) -> Result<Felt, FieldError> {
        match z.log() {
            None if k < 0 => Err(FieldError::InverseOfZero),
            None if k == 0 => Ok(Felt::ONE),
            None => Ok(Felt::ZERO),
            Some(l) => Ok(self.pow_log(l, (k.rem_euclid(self.order as i128)) as u64)),
        }
    }

    /// `z^k` for an exponent already reduced modulo `q^n - 1`, with `0^0 = 1`.
    pub fn pow_reduced(&self, z: Felt, k: u64) -> Felt {
        match z.log() {
            None if k == 0 => Felt::ONE,
            None => Felt::ZERO,
            Some(l) => self.pow_log(l, k),
        }
    }

    fn pow_log(&self, l: u32, k: u64) -> Felt {
        Felt(((l as u64 * k) % self.order) as u32)
    }

    /// `q^k mod (q^n - 1)` for any integer `k`.
    pub fn q_power(&self, k: i64) -> u64 {
        self.frob[k.rem_euclid(self.n as i64) as usize]
    }

    /// `z^{q^k}`.
    pub fn frobenius(&self, z: Felt, k: i64) -> Felt {
        match z.log() {
            None => Felt::ZERO,
            Some(l) => self.pow_log(l, self.q_power(k)),
        }
    }

    /// Relative norm to F_q, `z^{(q^n-1)/(q-1)}`.
    pub fn norm(&self, z: Felt) -> Felt {
        self.pow_reduced(z, self.theta)
    }

    /// Relative trace to F_q, the sum of the `n` conjugates of `z`.
    pub fn trace(&self, z: Felt) -> Felt {
        (0..self.n as i64).fold(Felt::ZERO, |acc, k| self.add(acc, self.frobenius(z, k)))
    }

    /// Whether `z` lies in the subfield F_q.
    pub fn in_subfield(&self, z: Felt) -> bool {
        self.frobenius(z, 1) == z
    }

    /// One representative `g^i`, `0 <= i < theta`, per coset of F_q^*.
    pub fn projective_reps(&self) -> impl ExactSizeIterator<Item = Felt> + '_ {
        (0..self.theta as u32).map(Felt)
    }

    /// Nonzero elements in generator-power order `g^0, g^1, ...`.
    pub fn nonzero(&self) -> impl ExactSizeIterator<Item = Felt> + '_ {
        (0..self.order as u32).map(Felt)
    }

    /// All elements: zero first, then generator-power order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + '_ {
        std::iter::once(Felt::ZERO).chain(self.nonzero())
    }

    /// `σ^i mod (q^n - 1)` with `σ = q^s`.
    pub fn sigma_power(&self, s: u32, i: u32) -> u64 {
        self.q_power(s as i64 * i as i64)
    }

    /// `1 + σ + ... + σ^{i-1}` reduced modulo `q^n - 1`; zero for `i = 0`.
    pub fn geom_sum_exponent(&self, s: u32, i: u32) -> u64 {
        (0..i).fold(0u64, |acc, j| (acc + self.sigma_power(s, j)) % self.order)
    }

    /// Parses `0`, `g^k` (any integer `k`), a bare integer of the prime
    /// field, or a coefficient vector `[c0,c1,...]` in the polynomial basis.
    pub fn parse_elt(&self, s: &str) -> Result<Felt, FieldError> {
        let bad = || FieldError::BadElement(s.to_string());
        let t = s.trim();
        if let Some(k) = t.strip_prefix("g^") {
            let k: i128 = k.trim().parse().map_err(|_| bad())?;
            return Ok(self.g_pow(k));
        }
        if let Some(body) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coeffs = if body.trim().is_empty() {
                Vec::new()
            } else {
                body.split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?
            };
            return self.from_coeffs(&coeffs).map_err(|_| bad());
        }
        let c: i64 = t.parse().map_err(|_| bad())?;
        Ok(self.from_int(c))
    }
}
