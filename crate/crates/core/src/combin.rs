//! Exact integer combinatorics shared by the moment predictions and the
//! probability model. Everything here stays in `i128` until the caller
//! converts once to `f64`.

use crate::error::{Error, Result};

/// Largest r+s accepted by the complex-moment main term.
pub const MAX_COMPLEX_ORDER: u32 = 24;
/// Largest k accepted by the real-moment main term / Gaussian moments.
pub const MAX_REAL_ORDER: u32 = 48;
/// Largest j accepted by the S(j,j) main term.
pub const MAX_SJJ_ORDER: u32 = 20;

pub fn binomial(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

pub fn factorial(n: u32) -> i128 {
    (1..=n as i128).product()
}

/// (k-1)!! for even k, the k-th standard Gaussian moment numerator.
pub fn double_factorial_odd(k: u32) -> i128 {
    let mut acc: i128 = 1;
    let mut m = 1;
    while m < k as i128 {
        acc *= m;
        m += 2;
    }
    acc
}

/// Integer core of the leading term of E (Re Z)^r (Im Z)^s and of the
/// complex-moment main term: t! * sum_{j+l=t} C(r,j) C(s,l) (-1)^(s-l),
/// divided by i^s. Zero when r+s is odd. The division by i^s is exact: the
/// combinatorial sum vanishes whenever s is odd, and contributes a sign
/// (-1)^(s/2) otherwise. The caller divides by 2^(r+s).
pub fn leading_term_numerator(r: u32, s: u32) -> Result<i128> {
    if r + s > MAX_COMPLEX_ORDER {
        return Err(Error::OrderCap(r + s, MAX_COMPLEX_ORDER));
    }
    if (r + s) % 2 == 1 {
        return Ok(0);
    }
    let t = (r + s) / 2;
    let mut sum: i128 = 0;
    for j in 0..=r.min(t) {
        let l = t - j;
        if l > s {
            continue;
        }
        let sign = if (s - l) % 2 == 0 { 1 } else { -1 };
        sum += sign * binomial(r, j) * binomial(s, l);
    }
    if s % 2 == 1 {
        // i^s would be imaginary; the sum must cancel for the moment to be real.
        debug_assert_eq!(sum, 0);
        return Ok(0);
    }
    let isign = if (s / 2) % 2 == 0 { 1 } else { -1 };
    Ok(factorial(t) * sum * isign)
}
