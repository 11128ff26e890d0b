//! The experiment commands. Every command returns the summary JSON value;
//! callers serialize it with the deterministic writer and evaluate checks.

use std::fs;
use std::path::Path;

use curvesum::aux_curves::{
    build_aux_system, decomposed_sj1j2, degeneracy_probe, irreducibility_probe, Classification,
    DegeneracyFlag, IndeterminateMap, Offsets,
};
use curvesum::curve_geom::{enumerate_columns, BivarPoly, CurveColumns, RationalMap};
use curvesum::dist_tests::{
    gauss1d_cdf, ks_distance, rect_empirical_freq, rect_gauss_prob, Ecdf,
};
use curvesum::ff_char::{AddChar, MultChar, PrimeField};
use curvesum::model_mc::{
    exact_leading_moment, gauss_moment_mu, mc_moment, model_charfun_check, sample_zh, ModelConfig,
};
use curvesum::moments::{
    empirical_charfun, empirical_mrs, empirical_sj1j2, error_budget_complex, error_budget_real,
    predicted_main_complex, predicted_main_real, predicted_sjj,
};
use curvesum::window_sums::{project_theta, sliding_series, SumSpec, WindowParams, WindowSeries};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::config::Experiment;
use crate::report::num;
use crate::svg;

pub enum CmdError {
    /// Exit code 1.
    Invalid(String),
    /// Exit code 2.
    Guard(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Io(e)
    }
}

fn core_err(e: curvesum::Error) -> CmdError {
    match e {
        curvesum::Error::Guard(_) | curvesum::Error::OrderCap(..) | curvesum::Error::CharfunRange { .. } => {
            CmdError::Guard(e.to_string())
        }
        other => CmdError::Invalid(other.to_string()),
    }
}

type CmdResult = Result<Value, CmdError>;

/// Everything a curve experiment needs, built once per command.
struct Workbench<'a> {
    chi: MultChar<'a>,
    psi: AddChar<'a>,
    cols: CurveColumns,
}

fn build_workbench<'a>(exp: &Experiment, field: &'a PrimeField) -> Result<Workbench<'a>, CmdError> {
    let chi = MultChar::new(field, exp.chi_index).map_err(core_err)?;
    let psi = AddChar::new(field, exp.psi_c).map_err(core_err)?;
    let cols = enumerate_columns(&exp.curve, exp.seed).map_err(core_err)?;
    Ok(Workbench { chi, psi, cols })
}

/// S(x) is real exactly when psi is trivial and chi is real (order <= 2).
fn is_real_case(chi: &MultChar<'_>, psi: &AddChar<'_>) -> bool {
    psi.is_trivial() && chi.order() <= 2
}

fn map_terms(m: &RationalMap) -> Value {
    let terms = |q: &BivarPoly| -> Value {
        Value::Array(
            q.terms()
                .iter()
                .map(|t| json!([t.xe, t.ye, t.coeff]))
                .collect(),
        )
    };
    json!({"num": terms(&m.num), "den": terms(&m.den)})
}

fn curve_degree_sum(exp: &Experiment) -> u32 {
    exp.curve.deg_total() + exp.g.den_degree() + exp.f.den_degree()
}

fn echo(exp: &Experiment) -> Value {
    let curve_terms: Vec<Value> = exp
        .curve
        .terms()
        .iter()
        .map(|t| json!([t.xe, t.ye, t.coeff]))
        .collect();
    json!({
        "p": exp.p,
        "curve": curve_terms,
        "g": map_terms(&exp.g),
        "f": map_terms(&exp.f),
        "chi_index": exp.chi_index,
        "psi_c": exp.psi_c,
        "alpha": num(exp.alpha),
        "beta": num(exp.beta),
        "H": exp.h,
        "i_start": exp.i_start,
        "i_len": exp.i_len,
        "seed": exp.seed,
        "d_total": curve_degree_sum(exp),
    })
}

fn warnings_value(exp: &Experiment) -> Value {
    Value::Array(exp.warnings.iter().map(|w| Value::String(w.clone())).collect())
}

fn moment_tables(exp: &Experiment, series: &WindowSeries) -> Result<Value, CmdError> {
    let ba = exp.beta - exp.alpha;
    let d = curve_degree_sum(exp);
    let mut complex = Map::new();
    for &(r, s) in &exp.moments_rs {
        let emp = empirical_mrs(series, r, s);
        let pred = predicted_main_complex(r, s, exp.h, exp.i_len, ba).map_err(core_err)?;
        let budget = error_budget_complex(r, s, exp.h, exp.i_len, d, exp.p);
        let scale = exp.i_len as f64 * (exp.h as f64 * ba / 2.0).powi(((r + s) / 2) as i32);
        let rel = if pred != 0.0 { emp / pred - 1.0 } else { emp / scale };
        complex.insert(
            format!("r{r}_s{s}"),
            json!({
                "empirical": num(emp),
                "predicted": num(pred),
                "error_budget": num(budget),
                "rel_err": num(rel),
            }),
        );
    }
    let mut real = Map::new();
    for &k in &exp.moments_k {
        let emp = empirical_mrs(series, k, 0);
        let pred = predicted_main_real(k, exp.h, exp.i_len, ba).map_err(core_err)?;
        let budget = error_budget_real(k, exp.h, exp.i_len, d, exp.p);
        let scale = exp.i_len as f64 * (exp.h as f64 * ba).powf(k as f64 / 2.0);
        let rel = if pred != 0.0 { emp / pred - 1.0 } else { emp / scale };
        real.insert(
            format!("k{k}"),
            json!({
                "empirical": num(emp),
                "predicted": num(pred),
                "error_budget": num(budget),
                "rel_err": num(rel),
            }),
        );
    }
    let mut sjj = Map::new();
    for &j in &exp.sjj {
        let emp = empirical_sj1j2(series, j, j);
        let pred = predicted_sjj(j, exp.h, exp.i_len, ba).map_err(core_err)?;
        let rel = if pred != 0.0 { emp.re / pred - 1.0 } else { emp.re };
        sjj.insert(
            format!("j{j}"),
            json!({
                "empirical_re": num(emp.re),
                "empirical_im": num(emp.im),
                "predicted": num(pred),
                "rel_err": num(rel),
            }),
        );
    }
    Ok(json!({
        "complex": Value::Object(complex),
        "real": Value::Object(real),
        "sjj": Value::Object(sjj),
    }))
}

fn degeneracy_value(exp: &Experiment, bench: &Workbench<'_>) -> (Value, DegeneracyFlag) {
    let report = degeneracy_probe(
        &bench.cols,
        &exp.curve,
        &exp.g,
        &exp.f,
        &bench.chi,
        &bench.psi,
    );
    let v = json!({
        "complete_sum_modulus": num(report.complete_sum_modulus),
        "perelmuter_budget": num(report.perelmuter_budget),
        "pair_sum_modulus": num(report.pair_sum_modulus),
        "pair_budget": num(report.pair_budget),
        "flag": report.flag.to_string(),
    });
    (v, report.flag)
}

fn dist_tests_value(exp: &Experiment, series: &WindowSeries, real_case: bool) -> Result<Value, CmdError> {
    let mut ks = Map::new();
    if real_case {
        // Theorem target: S / sqrt(H (beta-alpha)) against the standard normal
        let u0 = project_theta(series, 0.0).map_err(core_err)?;
        let e = Ecdf::new(u0).map_err(core_err)?;
        ks.insert(
            "real".to_string(),
            num(ks_distance(&e, |t| gauss1d_cdf(t, 1.0))),
        );
    } else {
        for (k, &theta) in exp.theta_list.iter().enumerate() {
            let u = project_theta(series, theta).map_err(core_err)?;
            let e = Ecdf::new(u).map_err(core_err)?;
            ks.insert(
                format!("theta_{k}"),
                num(ks_distance(&e, |t| gauss1d_cdf(t, 0.5))),
            );
        }
    }
    let mut rects = Map::new();
    if !real_case {
        for (k, &rect) in exp.rects.iter().enumerate() {
            let freq = rect_empirical_freq(series, rect).map_err(core_err)?;
            let prob = rect_gauss_prob(rect);
            rects.insert(
                format!("rect_{k}"),
                json!({
                    "x_lo": num(rect.x_lo), "x_hi": num(rect.x_hi),
                    "y_lo": num(rect.y_lo), "y_hi": num(rect.y_hi),
                    "freq": num(freq),
                    "prob": num(prob),
                    "abs_err": num((freq - prob).abs()),
                }),
            );
        }
    }
    Ok(json!({"ks": Value::Object(ks), "rects": Value::Object(rects)}))
}

fn write_series_csv(exp: &Experiment, series: &WindowSeries, path: &Path) -> Result<(), CmdError> {
    let mut header = String::from("x,re_S,im_S");
    let mut projections = Vec::new();
    for (k, &theta) in exp.theta_list.iter().enumerate() {
        header.push_str(&format!(",u_theta_{k}"));
        projections.push(project_theta(series, theta).map_err(core_err)?);
    }
    let mut out = String::with_capacity(series.values.len() * 80);
    out.push_str(&header);
    out.push('\n');
    for (idx, z) in series.values.iter().enumerate() {
        let x = (exp.i_start + idx as u64) % exp.p;
        out.push_str(&format!("{x},{:.16e},{:.16e}", z.re, z.im));
        for proj in &projections {
            out.push_str(&format!(",{:.16e}", proj[idx]));
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn cmd_sweep(exp: &Experiment, out_dir: &Path) -> CmdResult {
    fs::create_dir_all(out_dir)?;
    let field = PrimeField::new(exp.p).map_err(core_err)?;
    let bench = build_workbench(exp, &field)?;
    let real_case = is_real_case(&bench.chi, &bench.psi);

    let (degeneracy, flag) = degeneracy_value(exp, &bench);

    let spec = SumSpec {
        cols: &bench.cols,
        g: &exp.g,
        f: &exp.f,
        chi: &bench.chi,
        psi: &bench.psi,
    };
    let params = WindowParams::new(
        exp.p,
        exp.h,
        exp.i_start,
        exp.i_len,
        exp.alpha,
        exp.beta,
        exp.theta_list.clone(),
    )
    .map_err(core_err)?;
    let series = sliding_series(&spec, &params);

    write_series_csv(exp, &series, &out_dir.join("series.csv"))?;

    let moments = moment_tables(exp, &series)?;

    let dist = if flag == DegeneracyFlag::DegenerateLike {
        json!({
            "skipped_reason":
                "degeneracy probe flagged DEGENERATE-LIKE; the Gaussian limit laws do not apply",
        })
    } else {
        dist_tests_value(exp, &series, real_case)?
    };

    // histograms: complex case gets the variance-1/2 projection law for
    // every theta; the real case is the theta = 0 standard-normal law
    if real_case {
        let u0 = project_theta(&series, 0.0).map_err(core_err)?;
        let svg_text = svg::histogram(&u0, 1.0, "S / sqrt(H(beta-alpha)) vs N(0,1)");
        fs::write(out_dir.join("hist_real.svg"), svg_text)?;
    } else {
        for (k, &theta) in exp.theta_list.iter().enumerate() {
            let u = project_theta(&series, theta).map_err(core_err)?;
            let title = format!("u_theta (theta index {k}, theta = {theta:.6}) vs N(0,1/2)");
            let svg_text = svg::histogram(&u, 0.5, &title);
            fs::write(out_dir.join(format!("hist_theta_{k}.svg")), svg_text)?;
        }
    }

    Ok(json!({
        "case": if real_case { "real" } else { "complex" },
        "config_echo": echo(exp),
        "degeneracy": degeneracy,
        "dist": dist,
        "moments": moments,
        "points_total": bench.cols.total_points(),
        "warnings": warnings_value(exp),
    }))
}

pub fn cmd_moments(exp: &Experiment, out_dir: &Path) -> CmdResult {
    fs::create_dir_all(out_dir)?;
    let field = PrimeField::new(exp.p).map_err(core_err)?;
    let bench = build_workbench(exp, &field)?;
    let spec = SumSpec {
        cols: &bench.cols,
        g: &exp.g,
        f: &exp.f,
        chi: &bench.chi,
        psi: &bench.psi,
    };
    let params = WindowParams::new(
        exp.p,
        exp.h,
        exp.i_start,
        exp.i_len,
        exp.alpha,
        exp.beta,
        exp.theta_list.clone(),
    )
    .map_err(core_err)?;
    let series = sliding_series(&spec, &params);
    let moments = moment_tables(exp, &series)?;

    // empirical characteristic function on the standard grid
    let mut charfun = Map::new();
    for &u in &[0.0f64, 0.5, 1.0] {
        for &v in &[0.0f64, 0.5, 1.0] {
            let phi = empirical_charfun(&series, u, v).map_err(core_err)?;
            let target = (-(u * u + v * v) / 2.0).exp();
            charfun.insert(
                format!("u{u}_v{v}"),
                json!({
                    "re": num(phi.re),
                    "im": num(phi.im),
                    "gauss_target": num(target),
                    "deviation": num((phi - curvesum::Complex64::new(target, 0.0)).norm()),
                }),
            );
        }
    }

    Ok(json!({
        "charfun": Value::Object(charfun),
        "config_echo": echo(exp),
        "moments": moments,
        "warnings": warnings_value(exp),
    }))
}

pub fn cmd_model(exp: &Experiment, out_dir: &Path) -> CmdResult {
    fs::create_dir_all(out_dir)?;
    let mc = exp
        .mc
        .as_ref()
        .ok_or_else(|| CmdError::Invalid("model command requires an \"mc\" section".into()))?;
    let config = ModelConfig::new(mc.h, mc.n_samples, mc.seed).map_err(core_err)?;
    let samples = sample_zh(&config);
    let n = samples.len() as f64;

    let mut moments = Map::new();
    for r in 0..=6u32 {
        for s in 0..=(6 - r) {
            let exact = exact_leading_moment(r, s, mc.h).map_err(core_err)?;
            let emp = mc_moment(&samples, r, s);
            let envelope = (0.02 * exact.abs())
                .max(5.0 * (mc.h as f64).powf((r + s) as f64 / 2.0) / n.sqrt());
            moments.insert(
                format!("r{r}_s{s}"),
                json!({
                    "exact_leading": num(exact),
                    "mc": num(emp),
                    "envelope": num(envelope),
                    "envelope_ratio": num((emp - exact).abs() / envelope),
                }),
            );
        }
    }

    let mut charfun = Map::new();
    for &u in &[0.0f64, 0.5, 1.0] {
        for &v in &[0.0f64, 0.5, 1.0] {
            let c = model_charfun_check(u, v, &config, &samples).map_err(core_err)?;
            charfun.insert(
                format!("u{u}_v{v}"),
                json!({
                    "mc_re": num(c.mc_value.re),
                    "mc_im": num(c.mc_value.im),
                    "target": num(c.target),
                    "deviation": num(c.deviation),
                }),
            );
        }
    }

    let mut mu = Map::new();
    for k in 0..=8u32 {
        mu.insert(format!("k{k}"), num(gauss_moment_mu(k).map_err(core_err)?));
    }

    Ok(json!({
        "charfun": Value::Object(charfun),
        "config_echo": json!({"H": mc.h, "n_samples": mc.n_samples, "seed": mc.seed}),
        "moments": Value::Object(moments),
        "mu": Value::Object(mu),
    }))
}

pub fn cmd_auxprobe(exp: &Experiment, out_dir: &Path) -> CmdResult {
    fs::create_dir_all(out_dir)?;
    let aux = exp
        .aux
        .as_ref()
        .ok_or_else(|| CmdError::Invalid("auxprobe command requires an \"aux\" section".into()))?;
    let field = PrimeField::new(exp.p).map_err(core_err)?;
    let bench = build_workbench(exp, &field)?;

    // classification histogram over sampled offset tuples with pairwise
    // distinct entries (r = 1 tuples are trivially distinct)
    if aux.r as u64 > aux.h_max {
        return Err(CmdError::Invalid(format!(
            "aux.h_max = {} cannot host {} pairwise-distinct offsets",
            aux.h_max, aux.r
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(aux.seed);
    let mut counts = [0u32; 3];
    let mut sampled = 0u32;
    while sampled < aux.samples {
        let tuple: Vec<u64> = (0..aux.r).map(|_| 1 + rng.next_u64() % aux.h_max).collect();
        let mut sorted = tuple.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != tuple.len() {
            continue;
        }
        sampled += 1;
        let off = Offsets::new(tuple, aux.h_max).map_err(core_err)?;
        let system = build_aux_system(&exp.curve, &off, &IndeterminateMap::all_distinct(aux.r as usize))
            .map_err(core_err)?;
        let probe = irreducibility_probe(&system, &bench.cols).map_err(core_err)?;
        match probe.classification {
            Classification::IrreducibleLike => counts[0] += 1,
            Classification::ReducibleLike => counts[1] += 1,
            Classification::Inconclusive => counts[2] += 1,
        }
    }
    let classification = json!({
        "irreducible_like": counts[0],
        "reducible_like": counts[1],
        "inconclusive": counts[2],
        "samples": aux.samples,
        "reducible_fraction": num(counts[1] as f64 / aux.samples.max(1) as f64),
    });

    // splitting-identity residuals at the guarded small parameters
    let identity = if exp.p <= 1000 && exp.h <= 8 {
        let spec = SumSpec {
            cols: &bench.cols,
            g: &exp.g,
            f: &exp.f,
            chi: &bench.chi,
            psi: &bench.psi,
        };
        let params = WindowParams::new(
            exp.p,
            exp.h,
            exp.i_start,
            exp.i_len,
            exp.alpha,
            exp.beta,
            vec![],
        )
        .map_err(core_err)?;
        let series = sliding_series(&spec, &params);
        let j = params.j;
        let mut table = Map::new();
        for j1 in 0..=3u32 {
            for j2 in 0..=(3 - j1) {
                let lhs = empirical_sj1j2(&series, j1, j2);
                let rhs = decomposed_sj1j2(
                    &bench.cols,
                    &exp.curve,
                    &exp.g,
                    &exp.f,
                    &bench.chi,
                    &bench.psi,
                    exp.i_start,
                    exp.i_len,
                    j,
                    exp.h,
                    j1,
                    j2,
                )
                .map_err(core_err)?;
                let residual = (lhs - rhs).norm() / lhs.norm().max(1.0);
                table.insert(
                    format!("j1_{j1}_j2_{j2}"),
                    json!({
                        "lhs_re": num(lhs.re), "lhs_im": num(lhs.im),
                        "rhs_re": num(rhs.re), "rhs_im": num(rhs.im),
                        "residual": num(residual),
                    }),
                );
            }
        }
        Value::Object(table)
    } else {
        json!({"skipped_reason": format!(
            "identity check requires p <= 1000 and H <= 8, got p = {}, H = {}",
            exp.p, exp.h
        )})
    };

    Ok(json!({
        "classification": classification,
        "config_echo": echo(exp),
        "identity": identity,
        "warnings": warnings_value(exp),
    }))
}

pub fn cmd_probe(exp: &Experiment, out_dir: &Path) -> CmdResult {
    fs::create_dir_all(out_dir)?;
    let field = PrimeField::new(exp.p).map_err(core_err)?;
    let bench = build_workbench(exp, &field)?;
    let (degeneracy, _) = degeneracy_value(exp, &bench);
    Ok(json!({
        "config_echo": echo(exp),
        "degeneracy": degeneracy,
        "warnings": warnings_value(exp),
    }))
}
