//! Dense polynomials over a prime field, used only while constructing a
//! [`FieldCtx`](super::FieldCtx): modulus search and the irreducibility test.

/// Coefficients are stored low degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FpPoly {
    coeffs: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl FpPoly {
    pub(crate) fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs }
    }

    pub(crate) fn x() -> Self {
        FpPoly::new(vec![0, 1])
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub(crate) fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub(crate) fn sub(&self, other: &Self, p: u64) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let out = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        FpPoly::new(out)
    }

    pub(crate) fn mul(&self, other: &Self, p: u64) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(Vec::new());
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        FpPoly::new(out)
    }

    /// Remainder of division by `m`, which must be nonzero.
    pub(crate) fn rem(&self, m: &Self, p: u64) -> Self {
        let dm = m.degree().expect("division by zero polynomial");
        let lead_inv = inv_mod(m.coeffs[dm], p);
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            if c != 0 {
                for (k, &mk) in m.coeffs.iter().enumerate() {
                    let idx = top - dm + k;
                    r[idx] = (r[idx] + p - c * mk % p) % p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        FpPoly::new(r)
    }

    pub(crate) fn gcd(&self, other: &Self, p: u64) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `self^exp mod m`.
    pub(crate) fn pow_mod(&self, mut exp: u64, m: &Self, p: u64) -> Self {
        let mut acc = FpPoly::new(vec![1]).rem(m, p);
        let mut base = self.rem(m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, p).rem(m, p);
            }
            base = base.mul(&base, p).rem(m, p);
            exp >>= 1;
        }
        acc
    }
}

/// Ben-Or irreducibility test: a polynomial of degree `d` over F_p is
/// irreducible iff `gcd(x^{p^i} - x, f) = 1` for every `1 <= i <= d/2`.
pub(crate) fn is_irreducible(f: &FpPoly, p: u64) -> bool {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    if f.coeffs[0] == 0 {
        return false;
    }
    let x = FpPoly::x();
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        xp = xp.pow_mod(p, f, p);
        let g = xp.sub(&x, p).gcd(f, p);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
