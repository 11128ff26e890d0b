//! The probability model: Z_H = X_1 + ... + X_H with the X_i independent and
//! uniform on the unit circle. Exact leading moments, seeded Monte Carlo
//! sampling, and the characteristic-function comparison against the
//! two-dimensional Gaussian.
//!
//! RNG: ChaCha8 (counter-based, published constants), seeded explicitly.
//! Uniform angles use 53-bit mantissa division. Sampling parallelizes over
//! fixed-size chunks with per-chunk seeds (seed xor chunk index), so results
//! do not depend on the worker count.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combin;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct ModelConfig {
    /// Number of unit-circle summands per sample.
    pub h: u64,
    pub n_samples: u64,
    pub seed: u64,
}

impl ModelConfig {
    pub fn new(h: u64, n_samples: u64, seed: u64) -> Result<Self> {
        if h == 0 || n_samples == 0 {
            return Err(Error::BadWindow(format!(
                "model needs H >= 1 and n_samples >= 1, got H={h}, n={n_samples}"
            )));
        }
        Ok(ModelConfig { h, n_samples, seed })
    }
}

/// Samples per RNG chunk; chunk c is seeded with seed xor c.
const CHUNK: u64 = 8192;

#[inline]
fn unit_f64(bits: u64) -> f64 {
    // 53-bit mantissa division: uniform in [0, 1)
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draw all samples of Z_H, deterministic in the seed.
pub fn sample_zh(config: &ModelConfig) -> Vec<Complex64> {
    let n_chunks = config.n_samples.div_ceil(CHUNK);
    (0..n_chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ c);
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(config.n_samples);
            (lo..hi)
                .map(|_| {
                    let mut z = Complex64::new(0.0, 0.0);
                    for _ in 0..config.h {
                        let angle = std::f64::consts::TAU * unit_f64(rng.next_u64());
                        let (s, cth) = angle.sin_cos();
                        z += Complex64::new(cth, s);
                    }
                    z
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Leading term of E (Re Z_H)^r (Im Z_H)^s:
/// 0 for odd r+s; t! H^t / (2^(r+s) i^s) * sum C(r,j) C(s,l) (-1)^(s-l)
/// for r+s = 2t. The 1/(2^(r+s) i^s) prefactor comes from the binomial
/// expansion of Re and Im and is required for E (Re Z_H)^2 = H/2.
pub fn exact_leading_moment(r: u32, s: u32, h: u64) -> Result<f64> {
    let numer = combin::leading_term_numerator(r, s)?;
    if numer == 0 {
        return Ok(0.0);
    }
    let t = ((r + s) / 2) as i32;
    Ok(numer as f64 * (h as f64).powi(t) / 2f64.powi((r + s) as i32))
}

/// Monte Carlo estimate of E (Re Z)^r (Im Z)^s from a sample set.
pub fn mc_moment(samples: &[Complex64], r: u32, s: u32) -> f64 {
    let mut acc = 0.0;
    let mut comp = 0.0;
    for z in samples {
        let v = z.re.powi(r as i32) * z.im.powi(s as i32);
        let y = v - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    acc / samples.len() as f64
}

#[derive(Clone, Copy, Debug)]
pub struct CharfunCheck {
    pub mc_value: Complex64,
    pub target: f64,
    pub deviation: f64,
}

/// Compare the empirical characteristic function of the normalized model
/// Z~ = Z / sqrt(H/2) against exp(-(u^2+v^2)/2). Valid for |u|,|v| <= H^(1/4).
pub fn model_charfun_check(
    u: f64,
    v: f64,
    config: &ModelConfig,
    samples: &[Complex64],
) -> Result<CharfunCheck> {
    let limit = (config.h as f64).powf(0.25);
    if u.abs() > limit || v.abs() > limit {
        return Err(Error::CharfunRange { limit });
    }
    let norm = 1.0 / (config.h as f64 / 2.0).sqrt();
    let mut acc = crate::window_sums::KahanComplex::default();
    for z in samples {
        let phase = u * z.re * norm + v * z.im * norm;
        let (s, c) = phase.sin_cos();
        acc.add(Complex64::new(c, s));
    }
    let mc_value = acc.value() / samples.len() as f64;
    let target = (-(u * u + v * v) / 2.0).exp();
    Ok(CharfunCheck { mc_value, target, deviation: (mc_value - Complex64::new(target, 0.0)).norm() })
}

/// mu_k: the k-th moment of the standard Gaussian, (k-1)!! for even k.
pub fn gauss_moment_mu(k: u32) -> Result<f64> {
    if k > combin::MAX_REAL_ORDER {
        return Err(Error::OrderCap(k, combin::MAX_REAL_ORDER));
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    Ok(combin::double_factorial_odd(k) as f64)
}
