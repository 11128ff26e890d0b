//! Prime-field arithmetic, primitive roots, discrete-log tables, and
//! multiplicative/additive characters mod p.
//!
//! Characters are kept as integer exponents (`k * dlog[t] mod (p-1)` for chi,
//! `c * t mod p` for psi); complex values are materialized only at
//! accumulation time from precomputed root-of-unity tables, so all character
//! algebra is exact and floating point enters once per term.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on p: the dlog and root-of-unity tables are O(p).
pub const MAX_P: u64 = 1 << 26;

/// An odd prime p together with a primitive root, the full discrete-log
/// table, and precomputed root-of-unity tables for zeta_(p-1) and zeta_p.
///
/// Immutable after construction; safe to share across parallel workers.
pub struct PrimeField {
    p: u64,
    g: u64,
    dlog: Vec<u32>,
    roots_pm1: Vec<Complex64>,
    roots_p: Vec<Complex64>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_P {
            return Err(Error::PrimeTooLarge(p));
        }
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let g = find_primitive_root(p)?;
        let mut dlog = vec![0u32; p as usize];
        let mut acc = 1u64;
        for m in 0..p - 1 {
            dlog[acc as usize] = m as u32;
            acc = acc * g % p; // p < 2^26 so the product fits u64
        }
        debug_assert_eq!(acc, 1);
        Ok(PrimeField {
            p,
            g,
            dlog,
            roots_pm1: roots_of_unity(p - 1),
            roots_p: roots_of_unity(p),
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The smallest primitive root mod p.
    #[inline]
    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Discrete log base g of t, for t in [1, p).
    #[inline]
    pub fn dlog(&self, t: u64) -> u64 {
        debug_assert!(t >= 1 && t < self.p);
        self.dlog[t as usize] as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue via Fermat.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    /// zeta_(p-1)^m for m in [0, p-1).
    #[inline]
    pub fn root_pm1(&self, m: u64) -> Complex64 {
        self.roots_pm1[m as usize]
    }

    /// zeta_p^m for m in [0, p).
    #[inline]
    pub fn root_p(&self, m: u64) -> Complex64 {
        self.roots_p[m as usize]
    }
}

impl std::fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimeField")
            .field("p", &self.p)
            .field("g", &self.g)
            .finish()
    }
}

fn roots_of_unity(n: u64) -> Vec<Complex64> {
    // Direct per-entry evaluation; repeated multiplication would accumulate error.
    let step = std::f64::consts::TAU / n as f64;
    (0..n)
        .map(|j| {
            let (s, c) = (j as f64 * step).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all u64 with this witness set.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root mod p (deterministic).
pub fn find_primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) || p < 3 {
        return Err(Error::NotPrime(p));
    }
    let factors = prime_factors(p - 1);
    'cand: for g in 2..p {
        for &q in &factors {
            if powmod(g, (p - 1) / q, p) == 1 {
                continue 'cand;
            }
        }
        return Ok(g);
    }
    unreachable!("every prime has a primitive root")
}

/// Multiplicative character chi(t) = exp(2 pi i k dlog(t) / (p-1)), chi(0) = 0.
#[derive(Clone, Copy, Debug)]
pub struct MultChar<'a> {
    field: &'a PrimeField,
    k: u64,
    order: u64,
}

impl<'a> MultChar<'a> {
    pub fn new(field: &'a PrimeField, k: u64) -> Result<Self> {
        let pm1 = field.p() - 1;
        if k >= pm1 {
            return Err(Error::BadCharIndex { index: k, p: field.p() });
        }
        let order = pm1 / gcd(k, pm1);
        Ok(MultChar { field, k, order })
    }

    /// The canonical character of exact order a (index k = (p-1)/a).
    pub fn from_order(field: &'a PrimeField, a: u64) -> Result<Self> {
        let pm1 = field.p() - 1;
        if a == 0 || pm1 % a != 0 {
            return Err(Error::BadCharOrder { order: a, pm1 });
        }
        Self::new(field, if a == 1 { 0 } else { pm1 / a })
    }

    #[inline]
    pub fn field(&self) -> &'a PrimeField {
        self.field
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    #[inline]
    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    #[inline]
    pub fn index(&self) -> u64 {
        self.k
    }

    /// Exponent of zeta_(p-1) for chi(t), or None when t = 0 (chi(0) = 0).
    #[inline]
    pub fn exponent(&self, t: u64) -> Option<u64> {
        if t == 0 {
            None
        } else {
            Some(self.k * self.field.dlog(t) % (self.field.p() - 1))
        }
    }

    pub fn eval(&self, t: u64) -> Complex64 {
        match self.exponent(t) {
            None => Complex64::new(0.0, 0.0),
            Some(m) => self.field.root_pm1(m),
        }
    }
}

/// Additive character psi(t) = exp(2 pi i c t / p).
#[derive(Clone, Copy, Debug)]
pub struct AddChar<'a> {
    field: &'a PrimeField,
    c: u64,
}

impl<'a> AddChar<'a> {
    pub fn new(field: &'a PrimeField, c: u64) -> Result<Self> {
        if c >= field.p() {
            return Err(Error::BadCharIndex { index: c, p: field.p() });
        }
        Ok(AddChar { field, c })
    }

    #[inline]
    pub fn field(&self) -> &'a PrimeField {
        self.field
    }

    #[inline]
    pub fn is_trivial(&self) -> bool {
        self.c == 0
    }

    #[inline]
    pub fn coefficient(&self) -> u64 {
        self.c
    }

    /// Exponent of zeta_p for psi(t).
    #[inline]
    pub fn exponent(&self, t: u64) -> u64 {
        self.c * (t % self.field.p()) % self.field.p()
    }

    #[inline]
    pub fn eval(&self, t: u64) -> Complex64 {
        self.field.root_p(self.exponent(t))
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
