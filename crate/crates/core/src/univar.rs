//! Dense univariate polynomial arithmetic over F_p, enough for root
//! extraction via gcd(Y^p - Y, f) and for resultant-free bivariate GCDs.
//!
//! Coefficients are canonical residues; index = degree. The zero polynomial
//! is the empty vector.

use rand_core::RngCore;

/// Trim trailing zero coefficients in place.
pub fn normalize(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

pub fn degree(c: &[u64]) -> Option<usize> {
    if c.is_empty() {
        None
    } else {
        Some(c.len() - 1)
    }
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] = x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] = (out[i] + x) % p;
    }
    normalize(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] = x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] = (out[i] + p - x) % p;
    }
    normalize(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    normalize(&mut out);
    out
}

pub fn scale(a: &[u64], s: u64, p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| x * s % p).collect();
    normalize(&mut out);
    out
}

fn powmod_u64(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_u64(a: u64, p: u64) -> u64 {
    powmod_u64(a, p - 2, p)
}

/// Remainder of a divided by b (b nonzero).
pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_u64(*b.last().unwrap(), p);
    while r.len() > db {
        let coeff = *r.last().unwrap() % p;
        if coeff != 0 {
            let q = coeff * lead_inv % p;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - q * bi % p) % p;
            }
        }
        r.pop();
        normalize(&mut r);
        if r.len() <= db {
            break;
        }
    }
    normalize(&mut r);
    r
}

/// Exact quotient a / b; panics if the division is not exact (internal use).
pub fn div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    assert!(!b.is_empty());
    if a.is_empty() {
        return Vec::new();
    }
    assert!(a.len() >= b.len());
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_u64(*b.last().unwrap(), p);
    let mut q = vec![0u64; a.len() - b.len() + 1];
    while r.len() > db {
        let coeff = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if coeff != 0 {
            let qc = coeff * lead_inv % p;
            q[shift] = qc;
            for (i, &bi) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - qc * bi % p) % p;
            }
        }
        r.pop();
        normalize(&mut r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    normalize(&mut q);
    q
}

/// Monic gcd (zero polynomial if both inputs are zero).
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    normalize(&mut x);
    normalize(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lc) = x.last() {
        if lc != 1 {
            x = scale(&x, inv_u64(lc, p), p);
        }
    }
    x
}

pub fn eval(c: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &ci in c.iter().rev() {
        acc = (acc * x + ci) % p;
    }
    acc
}

/// base^e mod (m, p) by square-and-multiply in F_p[Y]/(m).
pub fn powmod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// All distinct roots in F_p of a nonzero polynomial, ascending.
///
/// Computes gcd(Y^p - Y, f) to isolate the product of distinct linear
/// factors, then splits it by randomized equal-degree splitting with
/// gcd((Y+a)^((p-1)/2) - 1, g). Output is sorted, so the result does not
/// depend on the RNG path.
pub fn roots(f: &[u64], p: u64, rng: &mut impl RngCore) -> Vec<u64> {
    let mut f = f.to_vec();
    normalize(&mut f);
    assert!(!f.is_empty(), "cannot take roots of the zero polynomial");
    let mut out = Vec::new();
    // Strip a root at zero early: it is invisible to the (Y+a)^... trick only
    // in edge cases, but cheap to handle directly.
    if f[0] == 0 {
        out.push(0);
        while f[0] == 0 && f.len() > 1 {
            f.remove(0);
        }
    }
    if f.len() == 1 {
        out.sort_unstable();
        return out;
    }
    // product of (Y - r) over distinct roots r != 0
    let xp = powmod_poly(&[0, 1], p, &f, p);
    let lin = gcd(&sub(&xp, &[0, 1], p), &f, p);
    split_linear(&lin, p, rng, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

fn split_linear(g: &[u64], p: u64, rng: &mut impl RngCore, out: &mut Vec<u64>) {
    match degree(g) {
        None | Some(0) => {}
        Some(1) => {
            // monic Y + c0 -> root -c0
            let c0 = g[0];
            out.push(if c0 == 0 { 0 } else { p - c0 });
        }
        Some(_) => {
            // g is monic and splits into distinct linear factors.
            loop {
                let a = rng.next_u64() % p;
                let shifted = [a, 1u64];
                let w = powmod_poly(&shifted, (p - 1) / 2, g, p);
                let d = gcd(&sub(&w, &[1], p), g, p);
                if !d.is_empty() && d.len() - 1 > 0 && d.len() < g.len() {
                    let rest = div_exact(g, &d, p);
                    split_linear(&d, p, rng, out);
                    split_linear(&rest, p, rng, out);
                    return;
                }
            }
        }
    }
}
