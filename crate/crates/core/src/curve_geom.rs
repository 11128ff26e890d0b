//! Bivariate polynomials and rational maps over F_p, point enumeration on
//! plane curves as per-x columns, and rectangle point counts.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::univar;

/// One monomial c * x^i * y^j with c != 0 reduced mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub xe: u32,
    pub ye: u32,
    pub coeff: u64,
}

/// A bivariate polynomial over F_p, stored sparsely and also as rows
/// indexed by y-degree for Horner evaluation.
#[derive(Clone, Debug)]
pub struct BivarPoly {
    p: u64,
    terms: Vec<Term>,
    /// yrows[j] = coefficients (ascending x-degree) of the y^j row.
    yrows: Vec<Vec<u64>>,
    deg_total: u32,
    deg_y: u32,
}

impl BivarPoly {
    /// Build from (x-exponent, y-exponent, coefficient) triples. Coefficients
    /// are reduced mod p, duplicates merged, zero terms dropped.
    pub fn new(p: u64, raw: &[(u32, u32, i64)]) -> Result<Self> {
        let mut merged: Vec<(u32, u32, u64)> = Vec::new();
        for &(i, j, c) in raw {
            let c = c.rem_euclid(p as i64) as u64;
            if let Some(e) = merged.iter_mut().find(|e| e.0 == i && e.1 == j) {
                e.2 = (e.2 + c) % p;
            } else {
                merged.push((i, j, c));
            }
        }
        merged.retain(|e| e.2 != 0);
        if merged.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        merged.sort_unstable_by_key(|e| (e.1, e.0));
        let deg_y = merged.iter().map(|e| e.1).max().unwrap();
        let deg_total = merged.iter().map(|e| e.0 + e.1).max().unwrap();
        let mut yrows = vec![Vec::new(); deg_y as usize + 1];
        for &(i, j, c) in &merged {
            let row = &mut yrows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, 0);
            }
            row[i as usize] = c;
        }
        let terms = merged
            .into_iter()
            .map(|(xe, ye, coeff)| Term { xe, ye, coeff })
            .collect();
        Ok(BivarPoly { p, terms, yrows, deg_total, deg_y })
    }

    /// The constant polynomial 1.
    pub fn one(p: u64) -> Self {
        Self::new(p, &[(0, 0, 1)]).expect("1 is not zero")
    }

    pub fn constant(p: u64, c: i64) -> Result<Self> {
        Self::new(p, &[(0, 0, c)])
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Total degree max(i + j).
    #[inline]
    pub fn deg_total(&self) -> u32 {
        self.deg_total
    }

    #[inline]
    pub fn deg_y(&self) -> u32 {
        self.deg_y
    }

    /// Is this a nonzero constant?
    pub fn is_constant(&self) -> bool {
        self.deg_total == 0
    }

    /// The constant value if `is_constant`.
    pub fn constant_value(&self) -> Option<u64> {
        if self.is_constant() {
            Some(self.terms[0].coeff)
        } else {
            None
        }
    }

    /// q(x, y) mod p: Horner in y, with per-row Horner in x.
    pub fn eval(&self, x: u64, y: u64) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for row in self.yrows.iter().rev() {
            acc = acc * y % p;
            acc = (acc + univar::eval(row, x, p)) % p;
        }
        acc
    }

    /// Coefficients (ascending y-degree) of the univariate polynomial
    /// P(x0, Y).
    pub fn univariate_in_y(&self, x0: u64) -> Vec<u64> {
        let mut c: Vec<u64> = self
            .yrows
            .iter()
            .map(|row| univar::eval(row, x0, self.p))
            .collect();
        univar::normalize(&mut c);
        c
    }

    /// P(x + delta, y): substitute and re-expand by the binomial theorem.
    /// Binomial coefficients are computed exactly and reduced mod p.
    pub fn shift_x(&self, delta: u64) -> Self {
        let p = self.p;
        let d = delta % p;
        if d == 0 {
            return self.clone();
        }
        let mut raw: Vec<(u32, u32, i64)> = Vec::new();
        for t in &self.terms {
            // (x + d)^i = sum_m C(i, m) d^(i-m) x^m
            for m in 0..=t.xe {
                let binom = (crate::combin::binomial(t.xe, m) % p as i128) as u64;
                let dpow = crate::ff_char::powmod(d, (t.xe - m) as u64, p);
                let c = t.coeff * binom % p * dpow % p;
                if c != 0 {
                    raw.push((m, t.ye, c as i64));
                }
            }
        }
        BivarPoly::new(p, &raw).expect("shift of a nonzero polynomial is nonzero")
    }

    /// Internal zero polynomial, used only as the numerator of the zero map.
    pub(crate) fn zero(p: u64) -> Self {
        BivarPoly {
            p,
            terms: Vec::new(),
            yrows: vec![Vec::new()],
            deg_total: 0,
            deg_y: 0,
        }
    }
}

fn inv_small(a: u64, p: u64) -> u64 {
    crate::ff_char::powmod(a, p - 2, p)
}

/// Evaluation of a rational map: either a residue or a pole marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapValue {
    Value(u64),
    Pole,
}

impl MapValue {
    pub fn value(self) -> Option<u64> {
        match self {
            MapValue::Value(v) => Some(v),
            MapValue::Pole => None,
        }
    }
}

/// f = num / den as a rational function on the plane.
#[derive(Clone, Debug)]
pub struct RationalMap {
    pub num: BivarPoly,
    pub den: BivarPoly,
    den_const_inv: Option<u64>,
}

impl RationalMap {
    /// Checks that num and den share no nonconstant factor (exact bivariate
    /// gcd, run when both total degrees are at most 8; larger inputs are
    /// accepted as asserted by the caller).
    pub fn new(num: BivarPoly, den: BivarPoly) -> Result<Self> {
        assert_eq!(num.p(), den.p(), "numerator and denominator field mismatch");
        if num.deg_total() <= 8
            && den.deg_total() <= 8
            && !num_is_zero(&num)
            && bivar_common_factor(&num, &den)
        {
            return Err(Error::CommonFactor);
        }
        let den_const_inv = den.constant_value().map(|c| {
            let p = den.p();
            inv_small(c, p)
        });
        Ok(RationalMap { num, den, den_const_inv })
    }

    /// The constant map c (denominator 1). The zero map is allowed here even
    /// though the zero polynomial is not a valid `BivarPoly` on its own.
    pub fn constant(p: u64, c: i64) -> Result<Self> {
        let num = BivarPoly::new(p, &[(0, 0, c)]).unwrap_or_else(|_| BivarPoly::zero(p));
        Self::new(num, BivarPoly::one(p))
    }

    pub fn p(&self) -> u64 {
        self.den.p()
    }

    /// Degree of the denominator (d_f in the error budgets).
    pub fn den_degree(&self) -> u32 {
        if self.den_const_inv.is_some() {
            0
        } else {
            self.den.deg_total()
        }
    }

    pub fn eval(&self, x: u64, y: u64) -> MapValue {
        let p = self.p();
        let n = eval_allow_zero(&self.num, x, y);
        match self.den_const_inv {
            Some(inv) => MapValue::Value(n * inv % p),
            None => {
                let d = self.den.eval(x, y);
                if d == 0 {
                    MapValue::Pole
                } else {
                    MapValue::Value(n * inv_small(d, p) % p)
                }
            }
        }
    }

    pub fn shift_x(&self, delta: u64) -> Self {
        let num = if num_is_zero(&self.num) {
            self.num.clone()
        } else {
            self.num.shift_x(delta)
        };
        RationalMap {
            num,
            den: self.den.shift_x(delta),
            den_const_inv: self.den_const_inv,
        }
    }
}

fn num_is_zero(q: &BivarPoly) -> bool {
    q.terms().is_empty()
}

fn eval_allow_zero(q: &BivarPoly, x: u64, y: u64) -> u64 {
    if num_is_zero(q) {
        0
    } else {
        q.eval(x, y)
    }
}

// --- bivariate gcd via primitive pseudo-remainder sequence -----------------

type YPoly = Vec<Vec<u64>>; // index = y-degree, entry = poly in x

fn to_ypoly(q: &BivarPoly) -> YPoly {
    let mut rows: YPoly = q.yrows.clone();
    while rows.last().is_some_and(|r| r.is_empty()) {
        rows.pop();
    }
    rows
}

fn ypoly_is_zero(a: &YPoly) -> bool {
    a.iter().all(|r| r.is_empty())
}

fn ypoly_trim(a: &mut YPoly) {
    while a.last().is_some_and(|r| r.is_empty()) {
        a.pop();
    }
}

fn content(a: &YPoly, p: u64) -> Vec<u64> {
    let mut g: Vec<u64> = Vec::new();
    for row in a {
        if !row.is_empty() {
            g = univar::gcd(&g, row, p);
        }
    }
    g
}

fn divide_content(a: &YPoly, c: &[u64], p: u64) -> YPoly {
    a.iter()
        .map(|row| {
            if row.is_empty() {
                Vec::new()
            } else {
                univar::div_exact(row, c, p)
            }
        })
        .collect()
}

/// Pseudo-remainder of a by b in y, coefficients in F_p[x].
fn pseudo_rem(a: &YPoly, b: &YPoly, p: u64) -> YPoly {
    let db = b.len() - 1;
    let lc_b = b.last().unwrap().clone();
    let mut r = a.clone();
    ypoly_trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let lc_r = r.last().unwrap().clone();
        // r <- lc_b * r - lc_r * y^(dr-db) * b
        let mut next: YPoly = r.iter().map(|row| univar::mul(row, &lc_b, p)).collect();
        for (j, brow) in b.iter().enumerate() {
            let idx = dr - db + j;
            let t = univar::mul(brow, &lc_r, p);
            next[idx] = univar::sub(&next[idx], &t, p);
        }
        next.truncate(dr); // leading term cancels by construction
        ypoly_trim(&mut next);
        r = next;
        if ypoly_is_zero(&r) {
            break;
        }
    }
    r
}

/// True if the two polynomials share a nonconstant common factor.
pub(crate) fn bivar_common_factor(a: &BivarPoly, b: &BivarPoly) -> bool {
    let p = a.p();
    let ya = to_ypoly(a);
    let yb = to_ypoly(b);
    // Common factor involving only x: gcd of the two contents.
    let ca = content(&ya, p);
    let cb = content(&yb, p);
    let cg = univar::gcd(&ca, &cb, p);
    if univar::degree(&cg).is_some_and(|d| d > 0) {
        return true;
    }
    // Common factor with positive y-degree: primitive PRS gcd in F_p[x][y].
    let mut f = divide_content(&ya, &ca, p);
    let mut g = divide_content(&yb, &cb, p);
    if f.len() < 2 || g.len() < 2 {
        // one side has y-degree 0 after content removal; its only factors
        // are in x, which the content check already covered
        return false;
    }
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = pseudo_rem(&f, &g, p);
        if ypoly_is_zero(&r) {
            // g divides f (up to content): common factor of positive y-degree
            return g.len() >= 2;
        }
        let cr = content(&r, p);
        let rp = divide_content(&r, &cr, p);
        f = g;
        g = rp;
        if g.len() < 2 {
            return false;
        }
    }
}

// --- column enumeration -----------------------------------------------------

/// How columns are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnStrategy {
    /// deg_y = 1: solve a(x) y + b(x) = 0 per column.
    Graph,
    /// c y^2 = q(x) with constant c: one pass over a square-root table.
    Hyperelliptic,
    /// Roots of P(x, .) via gcd(Y^p - Y, P(x, Y)) and equal-degree splitting.
    Generic,
    /// Try every y; only sensible for p <= 10^4.
    Scan,
}

/// For every x in [0, p): the sorted list of y with P(x, y) = 0, stored in
/// CSR layout. Immutable after construction.
#[derive(Clone, Debug)]
pub struct CurveColumns {
    p: u64,
    deg_curve: u32,
    deg_y: u32,
    offsets: Vec<u64>,
    roots: Vec<u64>,
}

impl CurveColumns {
    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Total degree of the defining polynomial.
    #[inline]
    pub fn curve_degree(&self) -> u32 {
        self.deg_curve
    }

    #[inline]
    pub fn deg_y(&self) -> u32 {
        self.deg_y
    }

    /// The y-roots over column x (sorted ascending).
    #[inline]
    pub fn col(&self, x: u64) -> &[u64] {
        let lo = self.offsets[x as usize] as usize;
        let hi = self.offsets[x as usize + 1] as usize;
        &self.roots[lo..hi]
    }

    /// Total number of affine points.
    pub fn total_points(&self) -> u64 {
        self.roots.len() as u64
    }
}

const SCAN_LIMIT: u64 = 10_000;

pub fn select_strategy(curve: &BivarPoly) -> ColumnStrategy {
    if curve.deg_y() == 1 {
        ColumnStrategy::Graph
    } else if hyperelliptic_shape(curve).is_some() {
        ColumnStrategy::Hyperelliptic
    } else if curve.p() <= SCAN_LIMIT {
        ColumnStrategy::Scan
    } else {
        ColumnStrategy::Generic
    }
}

/// Enumerate all columns with an auto-selected strategy. `seed` drives the
/// randomized equal-degree splitting of the generic strategy; the output is
/// deterministic (sorted) regardless.
pub fn enumerate_columns(curve: &BivarPoly, seed: u64) -> Result<CurveColumns> {
    enumerate_columns_with(curve, select_strategy(curve), seed)
}

pub fn enumerate_columns_with(
    curve: &BivarPoly,
    strategy: ColumnStrategy,
    seed: u64,
) -> Result<CurveColumns> {
    if curve.deg_y() == 0 {
        return Err(Error::NotACurve);
    }
    let p = curve.p();
    let per_col: Vec<Vec<u64>> = match strategy {
        ColumnStrategy::Graph => graph_columns(curve)?,
        ColumnStrategy::Hyperelliptic => hyperelliptic_columns(curve)?,
        ColumnStrategy::Generic => generic_columns(curve, seed)?,
        ColumnStrategy::Scan => scan_columns(curve)?,
    };
    let mut offsets = Vec::with_capacity(p as usize + 1);
    let mut total = 0u64;
    offsets.push(0);
    for col in &per_col {
        total += col.len() as u64;
        offsets.push(total);
    }
    let mut roots = Vec::with_capacity(total as usize);
    for col in &per_col {
        roots.extend_from_slice(col);
    }
    Ok(CurveColumns {
        p,
        deg_curve: curve.deg_total(),
        deg_y: curve.deg_y(),
        offsets,
        roots,
    })
}

fn graph_columns(curve: &BivarPoly) -> Result<Vec<Vec<u64>>> {
    let p = curve.p();
    // P = a(x) y + b(x); a(x) = b(x) = 0 would make every y a solution,
    // i.e. the curve contains the vertical line x = c.
    let b = curve.yrows.first().cloned().unwrap_or_default();
    let a = curve.yrows.get(1).cloned().unwrap_or_default();
    let results: Vec<std::result::Result<Vec<u64>, u64>> = (0..p)
        .into_par_iter()
        .map(|x| {
            let av = univar::eval(&a, x, p);
            let bv = univar::eval(&b, x, p);
            if av == 0 {
                if bv == 0 {
                    Err(x)
                } else {
                    Ok(Vec::new())
                }
            } else {
                // y = -b / a
                Ok(vec![(p - bv) % p * inv_small(av, p) % p])
            }
        })
        .collect();
    let mut cols = Vec::with_capacity(p as usize);
    for r in results {
        match r {
            Ok(c) => cols.push(c),
            Err(x) => return Err(Error::VerticalLine { x }),
        }
    }
    Ok(cols)
}

/// If the curve is c y^2 + q(x) = 0 with constant nonzero c, return (c, q).
fn hyperelliptic_shape(curve: &BivarPoly) -> Option<(u64, Vec<u64>)> {
    if curve.deg_y() != 2 {
        return None;
    }
    if curve.yrows.len() > 1 && !curve.yrows[1].is_empty() {
        return None; // has a y^1 row
    }
    let top = &curve.yrows[2];
    if top.len() != 1 {
        return None; // y^2 coefficient depends on x
    }
    Some((top[0], curve.yrows[0].clone()))
}

fn hyperelliptic_columns(curve: &BivarPoly) -> Result<Vec<Vec<u64>>> {
    let p = curve.p();
    let (c, q) = hyperelliptic_shape(curve).expect("strategy requires y^2 = q(x) shape");
    // sqrt_tbl[t] = smallest y with y^2 = t, or u32::MAX
    let mut sqrt_tbl = vec![u32::MAX; p as usize];
    let mut y = (p - 1) / 2 + 1;
    while y > 0 {
        y -= 1;
        sqrt_tbl[(y * y % p) as usize] = y as u32;
    }
    let cinv = inv_small(c, p);
    let cols: Vec<Vec<u64>> = (0..p)
        .into_par_iter()
        .map(|x| {
            // y^2 = -q(x) / c
            let v = (p - univar::eval(&q, x, p)) % p * cinv % p;
            let r = sqrt_tbl[v as usize];
            if r == u32::MAX {
                Vec::new()
            } else if r == 0 {
                vec![0]
            } else {
                vec![r as u64, p - r as u64]
            }
        })
        .collect();
    Ok(cols)
}

fn scan_columns(curve: &BivarPoly) -> Result<Vec<Vec<u64>>> {
    let p = curve.p();
    let deg_y = curve.deg_y() as usize;
    let cols: Vec<Vec<u64>> = (0..p)
        .into_par_iter()
        .map(|x| (0..p).filter(|&y| curve.eval(x, y) == 0).collect::<Vec<u64>>())
        .collect();
    for (x, col) in cols.iter().enumerate() {
        if col.len() > deg_y {
            return Err(Error::VerticalLine { x: x as u64 });
        }
    }
    Ok(cols)
}

fn generic_columns(curve: &BivarPoly, seed: u64) -> Result<Vec<Vec<u64>>> {
    let p = curve.p();
    let results: Vec<std::result::Result<Vec<u64>, u64>> = (0..p)
        .into_par_iter()
        .map(|x| {
            let f = curve.univariate_in_y(x);
            if f.is_empty() {
                return Err(x); // P(x, .) identically zero
            }
            if f.len() == 1 {
                return Ok(Vec::new());
            }
            // per-column RNG derived from the experiment seed and the column
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ x.wrapping_mul(0x9E3779B97F4A7C15));
            Ok(univar::roots(&f, p, &mut rng))
        })
        .collect();
    let mut cols = Vec::with_capacity(p as usize);
    for r in results {
        match r {
            Ok(c) => cols.push(c),
            Err(x) => return Err(Error::VerticalLine { x }),
        }
    }
    Ok(cols)
}

/// Residue interval \[lo, hi) on the y-axis (no wrap; J = [ceil(alpha p),
/// floor(beta p)) always satisfies lo <= hi).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JInterval {
    pub lo: u64,
    pub hi: u64,
}

impl JInterval {
    pub fn from_alpha_beta(alpha: f64, beta: f64, p: u64) -> Result<Self> {
        let valid = (0.0..1.0).contains(&alpha) && alpha < beta && beta <= 1.0;
        if !valid {
            return Err(Error::BadWindow(format!(
                "need 0 <= alpha < beta <= 1, got alpha={alpha}, beta={beta}"
            )));
        }
        let lo = (alpha * p as f64).ceil() as u64;
        let hi = (beta * p as f64).floor() as u64;
        Ok(JInterval { lo, hi })
    }

    pub fn full(p: u64) -> Self {
        JInterval { lo: 0, hi: p }
    }

    #[inline]
    pub fn contains(&self, y: u64) -> bool {
        self.lo <= y && y < self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }
}

/// Number of curve points in the cyclic window {xlo+1, ..., xlo+H} x J.
pub fn count_points_rect(cols: &CurveColumns, xlo: u64, h: u64, j: JInterval) -> u64 {
    let p = cols.p();
    let mut n = 0u64;
    for step in 1..=h.min(p) {
        let x = (xlo + step) % p;
        n += cols.col(x).iter().filter(|&&y| j.contains(y)).count() as u64;
    }
    n
}
