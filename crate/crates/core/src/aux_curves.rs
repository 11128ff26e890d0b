//! Auxiliary systems C_h and C°_h: coupled shifted copies P(x+h_i, y_i) = 0
//! of a plane curve over a shared x, with optional identification of
//! indeterminates. Provides point enumeration and box counts, a Weil-count
//! irreducibility probe, the assembled functions F and G, the exact splitting
//! identity for S(j1,j2), and the complete-sum degeneracy probe.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::curve_geom::{BivarPoly, CurveColumns, JInterval, MapValue, RationalMap};
use crate::error::{Error, Result};
use crate::ff_char::{AddChar, MultChar};
use crate::window_sums::{column_term_sum, KahanComplex, SumSpec};

/// Offset tuple h = (h_1, ..., h_r) with every entry in (0, h_max].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Offsets {
    h: Vec<u64>,
}

impl Offsets {
    pub fn new(h: Vec<u64>, h_max: u64) -> Result<Self> {
        if h.iter().any(|&v| v == 0 || v > h_max) {
            return Err(Error::BadWindow(format!(
                "offsets must lie in (0, {h_max}], got {h:?}"
            )));
        }
        Ok(Offsets { h })
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }
}

/// Assignment of an indeterminate label to each position. Two positions may
/// share a label only if they share an offset; labels are normalized to
/// first-occurrence order (a restricted growth string).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndeterminateMap {
    labels: Vec<usize>,
}

impl IndeterminateMap {
    pub fn new(labels: Vec<usize>, offsets: &Offsets) -> Result<Self> {
        assert_eq!(labels.len(), offsets.len(), "one label per position");
        let h = offsets.as_slice();
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                if labels[i] == labels[j] && h[i] != h[j] {
                    return Err(Error::IllegalIdentification { a: h[i], b: h[j] });
                }
            }
        }
        Ok(IndeterminateMap { labels: normalize_labels(&labels) })
    }

    /// Every position gets its own indeterminate (always legal). This is the
    /// identification realizing C_h itself.
    pub fn all_distinct(n: usize) -> Self {
        IndeterminateMap { labels: (0..n).collect() }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// All identifications belonging to h: the product over equal-offset
    /// groups of the set partitions of each group, in restricted-growth
    /// order. Deterministic.
    pub fn enumerate_for(offsets: &Offsets) -> Vec<IndeterminateMap> {
        let h = offsets.as_slice();
        let n = h.len();
        // group positions by offset value, preserving position order
        let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
        for (i, &v) in h.iter().enumerate() {
            if let Some(g) = groups.iter_mut().find(|g| g.0 == v) {
                g.1.push(i);
            } else {
                groups.push((v, vec![i]));
            }
        }
        let per_group: Vec<Vec<Vec<usize>>> = groups
            .iter()
            .map(|(_, members)| set_partitions(members.len()))
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; groups.len()];
        loop {
            // combine: label = (group index, block id) made globally unique
            let mut labels = vec![0usize; n];
            let mut base = 0usize;
            for (gi, (_, members)) in groups.iter().enumerate() {
                let part = &per_group[gi][choice[gi]];
                for (mi, &pos) in members.iter().enumerate() {
                    labels[pos] = base + part[mi];
                }
                base += part.iter().max().map_or(0, |m| m + 1);
            }
            out.push(IndeterminateMap { labels: normalize_labels(&labels) });
            // odometer over partition choices
            let mut gi = groups.len();
            loop {
                if gi == 0 {
                    return out;
                }
                gi -= 1;
                choice[gi] += 1;
                if choice[gi] < per_group[gi].len() {
                    break;
                }
                choice[gi] = 0;
            }
        }
    }
}

/// Relabel so ids appear in first-occurrence order starting at 0.
fn normalize_labels(labels: &[usize]) -> Vec<usize> {
    let mut map: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::with_capacity(labels.len());
    for &l in labels {
        let id = match map.iter().find(|e| e.0 == l) {
            Some(e) => e.1,
            None => {
                let id = map.len();
                map.push((l, id));
                id
            }
        };
        out.push(id);
    }
    out
}

/// All set partitions of {0, ..., n-1} as restricted growth strings, in RGS
/// lexicographic order.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        out.push(rgs.clone());
        // next RGS: increment the rightmost position that can grow
        let mut i = n;
        loop {
            if i == 1 {
                return out;
            }
            i -= 1;
            let max_prefix = rgs[..i].iter().max().copied().unwrap_or(0);
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for v in rgs.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                break;
            }
            rgs[i] = 0;
        }
    }
}

/// The system P(x + t_k, y_k) = 0 over the distinct labels, with the
/// distinctness constraints realizing C° when requested.
#[derive(Clone, Debug)]
pub struct AuxSystem {
    curve: BivarPoly,
    /// offset per original position
    positions: Vec<u64>,
    /// label per original position
    labels: Vec<usize>,
    /// t(Y): offset per label, in first-occurrence order
    label_offsets: Vec<u64>,
}

pub fn build_aux_system(
    curve: &BivarPoly,
    offsets: &Offsets,
    idmap: &IndeterminateMap,
) -> Result<AuxSystem> {
    let h = offsets.as_slice();
    let labels = idmap.labels().to_vec();
    assert_eq!(h.len(), labels.len(), "one label per position");
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if labels[i] == labels[j] && h[i] != h[j] {
                return Err(Error::IllegalIdentification { a: h[i], b: h[j] });
            }
        }
    }
    let n_labels = labels.iter().max().map_or(0, |m| m + 1);
    let mut label_offsets = vec![0u64; n_labels];
    for (pos, &l) in labels.iter().enumerate() {
        label_offsets[l] = h[pos];
    }
    Ok(AuxSystem {
        curve: curve.clone(),
        positions: h.to_vec(),
        labels,
        label_offsets,
    })
}

impl AuxSystem {
    pub fn num_positions(&self) -> usize {
        self.positions.len()
    }

    pub fn num_labels(&self) -> usize {
        self.label_offsets.len()
    }

    /// t(Y), the deduplicated offsets in first-occurrence order.
    pub fn label_offsets(&self) -> &[u64] {
        &self.label_offsets
    }

    /// The C° distinctness constraints: groups of two or more labels sharing
    /// one offset, whose y-values must be pairwise distinct.
    pub fn distinctness_groups(&self) -> Vec<Vec<usize>> {
        let n = self.label_offsets.len();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for l in 0..n {
            if groups.iter().any(|g| g.contains(&l)) {
                continue;
            }
            let g: Vec<usize> = (l..n)
                .filter(|&m| self.label_offsets[m] == self.label_offsets[l])
                .collect();
            if g.len() >= 2 {
                groups.push(g);
            }
        }
        groups
    }

    pub fn positions(&self) -> &[u64] {
        &self.positions
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Upper bound D^r on the degree of the system.
    pub fn degree_bound(&self) -> f64 {
        (self.curve.deg_total() as f64).powi(self.num_labels() as i32)
    }

    /// Visit every C°-solution (x, y per label) with x in the cyclic interval
    /// I and every y in J. Distinct labels over one offset must take distinct
    /// y values; drop `restricted` to enumerate C_h instead.
    pub fn for_each_solution<F: FnMut(u64, &[u64])>(
        &self,
        cols: &CurveColumns,
        i_start: u64,
        i_len: u64,
        j: JInterval,
        restricted: bool,
        mut visit: F,
    ) -> Result<()> {
        if self.num_positions() > 4 {
            return Err(Error::Guard(format!(
                "aux enumeration supports r <= 4 positions, got {}",
                self.num_positions()
            )));
        }
        let p = cols.p();
        let n = self.num_labels();
        let mut ys = vec![0u64; n];
        for idx in 0..i_len {
            let x = (i_start + idx) % p;
            self.recurse(cols, p, x, j, restricted, 0, &mut ys, &mut visit);
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F: FnMut(u64, &[u64])>(
        &self,
        cols: &CurveColumns,
        p: u64,
        x: u64,
        j: JInterval,
        restricted: bool,
        k: usize,
        ys: &mut Vec<u64>,
        visit: &mut F,
    ) {
        if k == self.num_labels() {
            visit(x, ys);
            return;
        }
        let col = cols.col((x + self.label_offsets[k]) % p);
        'cand: for &y in col {
            if !j.contains(y) {
                continue;
            }
            if restricted {
                for (l, &prev) in ys.iter().enumerate().take(k) {
                    if self.label_offsets[l] == self.label_offsets[k] && prev == y {
                        continue 'cand;
                    }
                }
            }
            ys[k] = y;
            self.recurse(cols, p, x, j, restricted, k + 1, ys, visit);
        }
    }

    /// Number of C°-points in the box I x J.
    pub fn count_points_box(
        &self,
        cols: &CurveColumns,
        i_start: u64,
        i_len: u64,
        j: JInterval,
    ) -> Result<u64> {
        let mut n = 0u64;
        self.for_each_solution(cols, i_start, i_len, j, true, |_, _| n += 1)?;
        Ok(n)
    }

    /// Number of C_h-points over the full x range and full J; no
    /// distinctness, so this is a plain product of column sizes.
    pub fn count_points_full(&self, cols: &CurveColumns) -> u64 {
        let p = cols.p();
        (0..p)
            .into_par_iter()
            .map(|x| {
                let mut prod = 1u64;
                for &t in &self.label_offsets {
                    prod *= cols.col((x + t) % p).len() as u64;
                    if prod == 0 {
                        break;
                    }
                }
                prod
            })
            .sum()
    }
}

/// Outcome of the Weil-count irreducibility heuristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    IrreducibleLike,
    ReducibleLike,
    Inconclusive,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::IrreducibleLike => "IRREDUCIBLE-LIKE",
            Classification::ReducibleLike => "REDUCIBLE-LIKE",
            Classification::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProbeOutcome {
    pub classification: Classification,
    pub point_count: u64,
    pub nearest_multiple: u64,
    pub band: f64,
}

/// Count all F_p points of C_h and classify by the nearest multiple of p:
/// within 2 D^(2r) sqrt(p) of 1*p reads as irreducible-like, of m*p (m >= 2)
/// as reducible-like. A heuristic, not a certificate.
pub fn irreducibility_probe(system: &AuxSystem, cols: &CurveColumns) -> Result<ProbeOutcome> {
    let r = system.num_labels();
    if r > 3 {
        return Err(Error::Guard(format!(
            "irreducibility probe supports r <= 3 labels, got {r}"
        )));
    }
    let p = cols.p() as f64;
    let count = system.count_points_full(cols);
    let d = system.curve.deg_total() as f64;
    let band = 2.0 * d.powi(2 * r as i32) * p.sqrt();
    let m = (count as f64 / p).round() as u64;
    let classification = if m >= 1 && (count as f64 - m as f64 * p).abs() <= band {
        if m == 1 {
            Classification::IrreducibleLike
        } else {
            Classification::ReducibleLike
        }
    } else {
        Classification::Inconclusive
    };
    Ok(ProbeOutcome { classification, point_count: count, nearest_multiple: m, band })
}

/// F(x, Y) = sum of f over the first j1 positions minus the rest; evaluates
/// on solution tuples, propagating poles.
pub struct AssembledSum<'a> {
    f: &'a RationalMap,
    system: &'a AuxSystem,
    j1: usize,
}

pub fn assemble_f<'a>(f: &'a RationalMap, system: &'a AuxSystem, j1: usize) -> AssembledSum<'a> {
    assert!(j1 <= system.num_positions());
    AssembledSum { f, system, j1 }
}

impl AssembledSum<'_> {
    pub fn eval(&self, x: u64, ys: &[u64]) -> MapValue {
        let p = self.f.p();
        let mut acc = 0u64;
        for (pos, (&h, &l)) in self
            .system
            .positions
            .iter()
            .zip(self.system.labels.iter())
            .enumerate()
        {
            let v = match self.f.eval((x + h) % p, ys[l]) {
                MapValue::Pole => return MapValue::Pole,
                MapValue::Value(v) => v,
            };
            acc = if pos < self.j1 {
                (acc + v) % p
            } else {
                (acc + p - v) % p
            };
        }
        MapValue::Value(acc)
    }
}

/// G(x, Y) = product of g over the first j1 positions divided by the product
/// over the rest; poles and zero denominators propagate as poles.
pub struct AssembledProduct<'a> {
    g: &'a RationalMap,
    system: &'a AuxSystem,
    j1: usize,
}

pub fn assemble_g<'a>(g: &'a RationalMap, system: &'a AuxSystem, j1: usize) -> AssembledProduct<'a> {
    assert!(j1 <= system.num_positions());
    AssembledProduct { g, system, j1 }
}

impl AssembledProduct<'_> {
    pub fn eval(&self, x: u64, ys: &[u64]) -> MapValue {
        let p = self.g.p();
        let mut num = 1u64;
        let mut den = 1u64;
        for (pos, (&h, &l)) in self
            .system
            .positions
            .iter()
            .zip(self.system.labels.iter())
            .enumerate()
        {
            let v = match self.g.eval((x + h) % p, ys[l]) {
                MapValue::Pole => return MapValue::Pole,
                MapValue::Value(v) => v,
            };
            if pos < self.j1 {
                num = num * v % p;
            } else {
                if v == 0 {
                    return MapValue::Pole;
                }
                den = den * v % p;
            }
        }
        let den_inv = crate::ff_char::powmod(den, p - 2, p);
        MapValue::Value(num * den_inv % p)
    }
}

/// Right-hand side of the splitting identity: enumerate every offset tuple
/// h in (0, H]^(j1+j2), every identification Y belonging to h, and every
/// C°_t(Y) solution in I x J, and sum chi(G) psi(F). Must reproduce
/// empirical_sj1j2 up to float noise.
#[allow(clippy::too_many_arguments)]
pub fn decomposed_sj1j2(
    cols: &CurveColumns,
    curve: &BivarPoly,
    g: &RationalMap,
    f: &RationalMap,
    chi: &MultChar<'_>,
    psi: &AddChar<'_>,
    i_start: u64,
    i_len: u64,
    j: JInterval,
    h_max: u64,
    j1: u32,
    j2: u32,
) -> Result<Complex64> {
    let n = (j1 + j2) as usize;
    if n > 3 {
        return Err(Error::Guard(format!("decomposition requires j1+j2 <= 3, got {n}")));
    }
    if h_max > 8 {
        return Err(Error::Guard(format!("decomposition requires H <= 8, got {h_max}")));
    }
    if cols.p() > 1000 {
        return Err(Error::Guard(format!(
            "decomposition requires p <= 1000, got {}",
            cols.p()
        )));
    }
    let field = chi.field();
    let mut total = KahanComplex::default();
    let mut tuple = vec![1u64; n];
    loop {
        let offsets = Offsets::new(tuple.clone(), h_max)?;
        for idmap in IndeterminateMap::enumerate_for(&offsets) {
            let system = build_aux_system(curve, &offsets, &idmap)?;
            let fa = assemble_f(f, &system, j1 as usize);
            let ga = assemble_g(g, &system, j1 as usize);
            system.for_each_solution(cols, i_start, i_len, j, true, |x, ys| {
                let gv = match ga.eval(x, ys) {
                    MapValue::Pole => return,
                    MapValue::Value(v) => v,
                };
                let fv = match fa.eval(x, ys) {
                    MapValue::Pole => return,
                    MapValue::Value(v) => v,
                };
                match chi.exponent(gv) {
                    None => {} // chi(0) = 0
                    Some(m) => {
                        total.add(field.root_pm1(m) * field.root_p(psi.exponent(fv)));
                    }
                }
            })?;
        }
        // next tuple in lexicographic order
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(total.value());
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] <= h_max {
                break;
            }
            tuple[k] = 1;
        }
    }
}

/// Flag produced by the degeneracy probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegeneracyFlag {
    Ok,
    DegenerateLike,
}

impl std::fmt::Display for DegeneracyFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DegeneracyFlag::Ok => "OK",
            DegeneracyFlag::DegenerateLike => "DEGENERATE-LIKE",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DegeneracyReport {
    /// |sum over all affine points of C of chi(g) psi(f)|.
    pub complete_sum_modulus: f64,
    /// D (D + d_g + d_f) sqrt(p) ln(p).
    pub perelmuter_budget: f64,
    /// Same sum over the pair system (h = (1,2)); catches f linear on C,
    /// which the single complete sum cannot (it vanishes there exactly).
    pub pair_sum_modulus: f64,
    /// D^2 (D^2 + 2 d_g + 2 d_f) sqrt(p); no completion factor is needed for
    /// a complete sum.
    pub pair_budget: f64,
    pub flag: DegeneracyFlag,
}

/// Sanity-check that (C, g, f, chi, psi) is not of the degenerate shapes
/// excluded by the distribution theorems, by measuring complete sums that
/// the Perel'muter bound forces to be O(sqrt p) in the nondegenerate case.
pub fn degeneracy_probe(
    cols: &CurveColumns,
    curve: &BivarPoly,
    g: &RationalMap,
    f: &RationalMap,
    chi: &MultChar<'_>,
    psi: &AddChar<'_>,
) -> DegeneracyReport {
    let p = cols.p();
    let spec = SumSpec { cols, g, f, chi, psi };
    let j_full = JInterval::full(p);
    let partials: Vec<Complex64> = (0..p)
        .into_par_iter()
        .map(|x| column_term_sum(&spec, x, j_full))
        .collect();
    let mut acc = KahanComplex::default();
    for v in partials {
        acc.add(v);
    }
    let complete = acc.value().norm();

    let d = curve.deg_total() as f64;
    let dg = g.den_degree() as f64;
    let df = f.den_degree() as f64;
    let pf = p as f64;
    let budget = d * (d + dg + df) * pf.sqrt() * pf.ln();

    // pair probe on C_(1,2): F = f(x+1, y1) - f(x+2, y2), G = g(..)/g(..)
    let offsets = Offsets::new(vec![1, 2], 2).expect("static offsets");
    let idmap = IndeterminateMap::all_distinct(2);
    let system = build_aux_system(curve, &offsets, &idmap).expect("distinct labels always legal");
    let fa = assemble_f(f, &system, 1);
    let ga = assemble_g(g, &system, 1);
    let field = chi.field();
    let pair_partials: Vec<Complex64> = (0..p)
        .into_par_iter()
        .map(|x| {
            let mut acc = KahanComplex::default();
            for &y1 in cols.col((x + 1) % p) {
                for &y2 in cols.col((x + 2) % p) {
                    let ys = [y1, y2];
                    let gv = match ga.eval(x, &ys) {
                        MapValue::Pole => continue,
                        MapValue::Value(v) => v,
                    };
                    let fv = match fa.eval(x, &ys) {
                        MapValue::Pole => continue,
                        MapValue::Value(v) => v,
                    };
                    if let Some(m) = chi.exponent(gv) {
                        acc.add(field.root_pm1(m) * field.root_p(psi.exponent(fv)));
                    }
                }
            }
            acc.value()
        })
        .collect();
    let mut acc = KahanComplex::default();
    for v in pair_partials {
        acc.add(v);
    }
    let pair = acc.value().norm();
    let pair_budget = d * d * (d * d + 2.0 * dg + 2.0 * df) * pf.sqrt();

    let flag = if complete > 10.0 * budget || pair > 10.0 * pair_budget {
        DegeneracyFlag::DegenerateLike
    } else {
        DegeneracyFlag::Ok
    };
    DegeneracyReport {
        complete_sum_modulus: complete,
        perelmuter_budget: budget,
        pair_sum_modulus: pair,
        pair_budget,
        flag,
    }
}
