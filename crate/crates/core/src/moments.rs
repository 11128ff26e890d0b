//! Empirical moments of a window series and the predicted main terms.
//!
//! M(r,s) = sum over x of (Re S)^r (Im S)^s, S(j1,j2) = sum of S^j1 conj(S)^j2,
//! and the main terms: for r+s = 2t even,
//!     M(r,s) ~ t! H^t |I| (beta-alpha)^t / (2^(r+s) i^s) * K(r,s)
//! with K the signed binomial sum, and for even k,
//!     M(k) ~ k!/(2^(k/2) (k/2)!) |I| H^(k/2) (beta-alpha)^(k/2).
//! The integer parts are computed exactly before a single float conversion.

use num_complex::Complex64;

use crate::combin;
use crate::error::{Error, Result};
use crate::window_sums::{KahanComplex, WindowSeries};

/// Which normalization a reported moment uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    /// Divide by (H (beta-alpha) / 2)^((r+s)/2).
    ComplexNorm,
    /// Divide by (H (beta-alpha))^(k/2).
    RealNorm,
}

/// One row of a moment comparison table.
#[derive(Clone, Debug)]
pub struct MomentReport {
    /// (r, s) for complex moments; (k, 0) for real ones; (j, j) for S(j,j).
    pub order: (u32, u32),
    pub empirical: f64,
    pub predicted_main: f64,
    pub error_budget: f64,
    pub normalization: Normalization,
    /// empirical/predicted - 1 when the main term is nonzero, otherwise the
    /// empirical value divided by the natural scale of the even moment.
    pub rel_err: f64,
}

/// M(r,s) = sum_x (Re S(x))^r (Im S(x))^s. Always real.
pub fn empirical_mrs(series: &WindowSeries, r: u32, s: u32) -> f64 {
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for z in &series.values {
        let v = z.re.powi(r as i32) * z.im.powi(s as i32);
        let y = v - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    acc
}

/// S(j1,j2) = sum_x S(x)^j1 conj(S(x))^j2.
pub fn empirical_sj1j2(series: &WindowSeries, j1: u32, j2: u32) -> Complex64 {
    let mut acc = KahanComplex::default();
    for z in &series.values {
        acc.add(powu(*z, j1) * powu(z.conj(), j2));
    }
    acc.value()
}

fn powu(z: Complex64, mut e: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut b = z;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

/// Main term of M(r,s) for a complex series. Zero when r+s is odd.
pub fn predicted_main_complex(r: u32, s: u32, h: u64, i_len: u64, ba: f64) -> Result<f64> {
    let numer = combin::leading_term_numerator(r, s)?;
    if numer == 0 {
        return Ok(0.0);
    }
    let t = ((r + s) / 2) as i32;
    let scale = (h as f64 * ba).powi(t) * i_len as f64 / 2f64.powi((r + s) as i32);
    Ok(numer as f64 * scale)
}

/// Main term of M(k) for a real series: mu_k |I| (H (beta-alpha))^(k/2).
pub fn predicted_main_real(k: u32, h: u64, i_len: u64, ba: f64) -> Result<f64> {
    if k > combin::MAX_REAL_ORDER {
        return Err(Error::OrderCap(k, combin::MAX_REAL_ORDER));
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let mu = combin::double_factorial_odd(k) as f64;
    Ok(mu * i_len as f64 * (h as f64 * ba).powi((k / 2) as i32))
}

/// Main term of S(j,j): j! H^j |I| (beta-alpha)^j.
pub fn predicted_sjj(j: u32, h: u64, i_len: u64, ba: f64) -> Result<f64> {
    if j > combin::MAX_SJJ_ORDER {
        return Err(Error::OrderCap(j, combin::MAX_SJJ_ORDER));
    }
    Ok(combin::factorial(j) as f64 * (h as f64 * ba).powi(j as i32) * i_len as f64)
}

/// Error budget of the complex moment theorem:
/// (t!)^2 H^(t-1) d^(r+s) |I| + 2^t t! d^(2(r+s)) H^(r+s) sqrt(p) ln^(r+s+1) p.
/// May be infinite for large orders; that flags the order as untestable.
pub fn error_budget_complex(r: u32, s: u32, h: u64, i_len: u64, d: u32, p: u64) -> f64 {
    let n = (r + s) as i32;
    let t = n / 2; // floor for odd orders; the odd case keeps only the second term
    let tf = combin::factorial(t as u32) as f64;
    let lp = (p as f64).ln();
    let hh = h as f64;
    let df = d as f64;
    tf * tf * hh.powi(t - 1) * df.powi(n) * i_len as f64
        + 2f64.powi(t) * tf * df.powi(2 * n) * hh.powi(n) * (p as f64).sqrt() * lp.powi(n + 1)
}

/// Error budget of the real moment theorem:
/// (k/2)! d^k H^(k/2-1) |I| + d^(2k) H^k sqrt(p) ln^(k+1) p.
pub fn error_budget_real(k: u32, h: u64, i_len: u64, d: u32, p: u64) -> f64 {
    let kf = combin::factorial(k / 2) as f64;
    let lp = (p as f64).ln();
    let hh = h as f64;
    let df = d as f64;
    kf * df.powi(k as i32) * hh.powi(k as i32 / 2 - 1) * i_len as f64
        + df.powi(2 * k as i32) * hh.powi(k as i32) * (p as f64).sqrt() * lp.powi(k as i32 + 1)
}

/// phi(u,v) = (1/|I|) sum_x exp(i u Re S~ + i v Im S~) with the complex-case
/// normalization S~ = S sqrt(2) / sqrt(H (beta-alpha)).
pub fn empirical_charfun(series: &WindowSeries, u: f64, v: f64) -> Result<Complex64> {
    let scale = series.params.box_scale();
    if scale <= 0.0 {
        return Err(Error::ZeroNormalizer);
    }
    let norm = (2.0 / scale).sqrt();
    let mut acc = KahanComplex::default();
    for z in &series.values {
        let phase = u * z.re * norm + v * z.im * norm;
        let (s, c) = phase.sin_cos();
        acc.add(Complex64::new(c, s));
    }
    Ok(acc.value() / series.values.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_geom::JInterval;
    use crate::window_sums::WindowParams;
    use approx::assert_relative_eq;

    fn series_of(values: Vec<Complex64>, h: u64, alpha: f64, beta: f64) -> WindowSeries {
        let p = 101;
        WindowSeries {
            params: WindowParams {
                h,
                i_start: 0,
                i_len: values.len() as u64,
                alpha,
                beta,
                j: JInterval::from_alpha_beta(alpha, beta, p).unwrap(),
                thetas: vec![],
            },
            p,
            values,
        }
    }

    #[test]
    fn mrs_small_cases() {
        let s = series_of(
            vec![Complex64::new(1.0, 1.0), Complex64::new(1.0, -1.0)],
            2,
            0.0,
            1.0,
        );
        assert_relative_eq!(empirical_mrs(&s, 0, 0), 2.0);
        assert_relative_eq!(empirical_mrs(&s, 1, 1), 0.0);
        let z = series_of(vec![Complex64::new(0.0, 0.0); 5], 2, 0.0, 1.0);
        assert_relative_eq!(empirical_mrs(&z, 2, 0), 0.0);
        assert_relative_eq!(empirical_mrs(&z, 0, 0), 5.0);
    }

    #[test]
    fn sj1j2_small_cases() {
        let s = series_of(vec![Complex64::new(0.0, 1.0)], 1, 0.0, 1.0);
        let v = empirical_sj1j2(&s, 2, 0);
        assert_relative_eq!(v.re, -1.0, epsilon = 1e-15);
        assert_relative_eq!(v.im, 0.0, epsilon = 1e-15);
        assert_relative_eq!(empirical_sj1j2(&s, 0, 0).re, 1.0);
        let m = series_of(
            vec![Complex64::new(3.0, 4.0), Complex64::new(-1.0, 2.0)],
            1,
            0.0,
            1.0,
        );
        let v = empirical_sj1j2(&m, 1, 1);
        assert_relative_eq!(v.re, 25.0 + 5.0, epsilon = 1e-12);
        assert!(v.re >= 0.0 && v.im.abs() < 1e-12);
    }

    #[test]
    fn predicted_complex_examples() {
        // (2,0) -> H |I| (beta-alpha) / 2
        let v = predicted_main_complex(2, 0, 10, 1000, 0.5).unwrap();
        assert_relative_eq!(v, 10.0 * 1000.0 * 0.5 / 2.0);
        // (1,1) -> 0, (0,0) -> |I|
        assert_relative_eq!(predicted_main_complex(1, 1, 10, 1000, 0.5).unwrap(), 0.0);
        assert_relative_eq!(predicted_main_complex(0, 0, 10, 1000, 0.5).unwrap(), 1000.0);
        // odd order -> 0
        assert_relative_eq!(predicted_main_complex(2, 1, 10, 1000, 0.5).unwrap(), 0.0);
        // (0,2) matches (2,0) by symmetry
        assert_relative_eq!(
            predicted_main_complex(0, 2, 10, 1000, 0.5).unwrap(),
            predicted_main_complex(2, 0, 10, 1000, 0.5).unwrap()
        );
        assert!(predicted_main_complex(13, 12, 2, 2, 1.0).is_err());
    }

    #[test]
    fn predicted_real_examples() {
        // k=2 -> |I| H (beta-alpha)
        assert_relative_eq!(predicted_main_real(2, 10, 7, 1.0).unwrap(), 70.0);
        // k=3 -> 0
        assert_relative_eq!(predicted_main_real(3, 10, 7, 1.0).unwrap(), 0.0);
        // k=4 -> 3 |I| H^2 (beta-alpha)^2, cross-check mu_4 = 3
        assert_relative_eq!(predicted_main_real(4, 10, 7, 1.0).unwrap(), 3.0 * 7.0 * 100.0);
        assert!(predicted_main_real(50, 10, 7, 1.0).is_err());
    }

    #[test]
    fn predicted_sjj_examples() {
        assert_relative_eq!(predicted_sjj(0, 5, 11, 0.5).unwrap(), 11.0);
        assert_relative_eq!(predicted_sjj(1, 5, 11, 0.5).unwrap(), 5.0 * 11.0 * 0.5);
        assert_relative_eq!(predicted_sjj(2, 5, 11, 0.5).unwrap(), 2.0 * 25.0 * 11.0 * 0.25);
        assert!(predicted_sjj(21, 5, 11, 0.5).is_err());
    }

    #[test]
    fn charfun_basics() {
        let s = series_of(vec![Complex64::new(0.0, 0.0); 9], 4, 0.0, 1.0);
        let v = empirical_charfun(&s, 0.7, -0.3).unwrap();
        assert_relative_eq!(v.re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(v.im, 0.0, epsilon = 1e-15);
        let v = empirical_charfun(&s, 0.0, 0.0).unwrap();
        assert_relative_eq!(v.re, 1.0, epsilon = 1e-15);
        let m = series_of(
            vec![Complex64::new(1.5, -0.25), Complex64::new(-0.75, 2.0)],
            4,
            0.0,
            1.0,
        );
        assert!(empirical_charfun(&m, 1.0, 2.0).unwrap().norm() <= 1.0 + 1e-12);
    }

    // The binomial bridge: M(r,s) from the S(j1,j2) table reproduces
    // empirical_mrs exactly up to float noise. This is the identity the
    // decomposition oracle leans on, so test it on synthetic data.
    #[test]
    fn binomial_bridge_identity() {
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0;
        let values: Vec<Complex64> =
            (0..200).map(|_| Complex64::new(unit(), unit())).collect();
        let s = series_of(values, 4, 0.0, 1.0);
        for r in 0..=4u32 {
            for sdeg in 0..=(4 - r) {
                let direct = empirical_mrs(&s, r, sdeg);
                let bridged = bridge(&s, r, sdeg);
                let tol = 1e-6 * direct.abs().max(1.0);
                assert!(
                    (direct - bridged).abs() <= tol,
                    "bridge mismatch at ({r},{sdeg}): {direct} vs {bridged}"
                );
            }
        }
    }

    /// 1/(2^(r+s) i^s) sum_{j,l} C(r,j) C(s,l) (-1)^(s-l) S(j+l, r+s-j-l).
    fn bridge(series: &WindowSeries, r: u32, s: u32) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=r {
            for l in 0..=s {
                let c = (combin::binomial(r, j) * combin::binomial(s, l)) as f64;
                let sign = if (s - l) % 2 == 0 { 1.0 } else { -1.0 };
                acc += c * sign * empirical_sj1j2(series, j + l, r + s - j - l);
            }
        }
        // divide by 2^(r+s) i^s
        let i_pow = match s % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let v = acc / (2f64.powi((r + s) as i32) * i_pow);
        v.re
    }
}
