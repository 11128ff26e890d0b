//! The short hybrid sum S_H(x;C) for all x in an interval I, computed by an
//! incremental sliding-window kernel, plus the projection u_theta(x).
//!
//! Window convention: the window at x is the cyclic residue set
//! {x+1, ..., x+H} mod p, and a point contributes chi(g(P)) psi(f(P)) when
//! its y-coordinate lies in J. Poles of f or g drop the point; g(P) = 0
//! contributes chi(0) = 0.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::curve_geom::{CurveColumns, JInterval, MapValue, RationalMap};
use crate::error::{Error, Result};
use crate::ff_char::{AddChar, MultChar};

/// Window geometry: length H, cyclic interval I, y-interval J from
/// (alpha, beta), and the projection angles.
#[derive(Clone, Debug)]
pub struct WindowParams {
    pub h: u64,
    pub i_start: u64,
    pub i_len: u64,
    pub alpha: f64,
    pub beta: f64,
    pub j: JInterval,
    pub thetas: Vec<f64>,
}

impl WindowParams {
    pub fn new(
        p: u64,
        h: u64,
        i_start: u64,
        i_len: u64,
        alpha: f64,
        beta: f64,
        thetas: Vec<f64>,
    ) -> Result<Self> {
        if h == 0 || h > p {
            return Err(Error::BadWindow(format!("need 1 <= H <= p, got H={h}")));
        }
        if i_len == 0 || i_len > p {
            return Err(Error::BadWindow(format!("need 1 <= |I| <= p, got |I|={i_len}")));
        }
        if i_start >= p {
            return Err(Error::BadWindow(format!("I start {i_start} not a residue mod {p}")));
        }
        let j = JInterval::from_alpha_beta(alpha, beta, p)?;
        Ok(WindowParams { h, i_start, i_len, alpha, beta, j, thetas })
    }

    /// H (beta - alpha), the variance scale of the window box.
    pub fn box_scale(&self) -> f64 {
        self.h as f64 * (self.beta - self.alpha)
    }
}

/// The computed series S(x) for x in I, index-aligned with I.
#[derive(Clone, Debug)]
pub struct WindowSeries {
    pub params: WindowParams,
    pub p: u64,
    pub values: Vec<Complex64>,
}

/// Kahan-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanComplex {
    sum: Complex64,
    comp: Complex64,
}

impl KahanComplex {
    pub fn add(&mut self, v: Complex64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

/// The term configuration: curve columns plus (g, f, chi, psi).
#[derive(Clone, Copy)]
pub struct SumSpec<'a> {
    pub cols: &'a CurveColumns,
    pub g: &'a RationalMap,
    pub f: &'a RationalMap,
    pub chi: &'a MultChar<'a>,
    pub psi: &'a AddChar<'a>,
}

impl<'a> SumSpec<'a> {
    fn term(&self, x: u64, y: u64) -> Complex64 {
        let g_val = match self.g.eval(x, y) {
            MapValue::Pole => return Complex64::new(0.0, 0.0),
            MapValue::Value(v) => v,
        };
        let f_val = match self.f.eval(x, y) {
            MapValue::Pole => return Complex64::new(0.0, 0.0),
            MapValue::Value(v) => v,
        };
        match self.chi.exponent(g_val) {
            None => Complex64::new(0.0, 0.0), // chi(0) = 0
            Some(m) => {
                let field = self.chi.field();
                field.root_pm1(m) * field.root_p(self.psi.exponent(f_val))
            }
        }
    }
}

/// Sum of chi(g) psi(f) over the points of one column with y in J.
pub fn column_term_sum(spec: &SumSpec<'_>, x0: u64, j: JInterval) -> Complex64 {
    let mut acc = KahanComplex::default();
    for &y in spec.cols.col(x0) {
        if j.contains(y) {
            acc.add(spec.term(x0, y));
        }
    }
    acc.value()
}

/// Reference oracle: sum column_term_sum over the window {x+1, ..., x+H}.
pub fn naive_window_sum(spec: &SumSpec<'_>, x: u64, h: u64, j: JInterval) -> Complex64 {
    let p = spec.cols.p();
    let mut acc = KahanComplex::default();
    for step in 1..=h {
        acc.add(column_term_sum(spec, (x + step) % p, j));
    }
    acc.value()
}

/// Steps between forced full recomputes of the sliding accumulator.
const RECOMPUTE_PERIOD: u64 = 1024;

/// Compute S(x) for every x in I incrementally. Per-column term sums are
/// cached (computed in parallel), the slide itself is a serial pass with a
/// full recompute every `RECOMPUTE_PERIOD` steps to bound float drift, so
/// the output is bitwise independent of the worker count.
pub fn sliding_series(spec: &SumSpec<'_>, params: &WindowParams) -> WindowSeries {
    let p = spec.cols.p();
    let h = params.h;
    let i_len = params.i_len;
    let j = params.j;

    // Columns touched: {i_start+1, ..., i_start+i_len+H} cyclically.
    let touched: Vec<u64> = if i_len + h >= p {
        (0..p).collect()
    } else {
        (1..=i_len + h).map(|k| (params.i_start + k) % p).collect()
    };
    let mut col_sum: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); p as usize];
    let sums: Vec<(u64, Complex64)> = touched
        .par_iter()
        .map(|&x| (x, column_term_sum(spec, x, j)))
        .collect();
    for (x, s) in sums {
        col_sum[x as usize] = s;
    }

    let recompute = |x: u64| -> Complex64 {
        let mut acc = KahanComplex::default();
        for step in 1..=h {
            acc.add(col_sum[((x + step) % p) as usize]);
        }
        acc.value()
    };

    let mut values = Vec::with_capacity(i_len as usize);
    let mut current = recompute(params.i_start);
    values.push(current);
    for idx in 1..i_len {
        let x = (params.i_start + idx) % p;
        if idx % RECOMPUTE_PERIOD == 0 {
            current = recompute(x);
        } else {
            // S(x) = S(x-1) - term(x) + term(x+H)
            current = current - col_sum[x as usize] + col_sum[((x + h) % p) as usize];
        }
        values.push(current);
    }
    WindowSeries { params: params.clone(), p, values }
}

/// u_theta(x) = (S e^{-i theta} + conj(S) e^{i theta}) / (2 sqrt((beta-alpha) H)),
/// the normalized projection of S(x) onto the line through angle theta.
pub fn project_theta(series: &WindowSeries, theta: f64) -> Result<Vec<f64>> {
    let scale = series.params.box_scale();
    if scale <= 0.0 {
        return Err(Error::ZeroNormalizer);
    }
    let norm = scale.sqrt();
    let (s, c) = theta.sin_cos();
    Ok(series
        .values
        .iter()
        .map(|z| (z.re * c + z.im * s) / norm)
        .collect())
}
