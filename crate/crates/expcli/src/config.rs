//! Experiment configuration: a single JSON document, no environment
//! variables. Field names and shapes are documented in the README.

use curvesum::curve_geom::{BivarPoly, RationalMap};
use curvesum::dist_tests::GaussRect;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub p: u64,
    /// Polynomial as [x_exp, y_exp, coeff] triples.
    pub curve: Vec<(u32, u32, i64)>,
    /// Defaults to the constant 1.
    pub g: Option<RawMap>,
    /// Defaults to the constant 0.
    pub f: Option<RawMap>,
    pub chi: RawChi,
    pub psi: RawPsi,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "H")]
    pub h: HSpec,
    #[serde(rename = "I")]
    pub i: RawInterval,
    #[serde(default)]
    pub theta_list: Vec<f64>,
    #[serde(default)]
    pub rects: Vec<RawRect>,
    #[serde(default)]
    pub moments_rs: Vec<(u32, u32)>,
    #[serde(default)]
    pub moments_k: Vec<u32>,
    #[serde(default)]
    pub sjj: Vec<u32>,
    pub aux: Option<AuxConfig>,
    pub mc: Option<McConfig>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Debug, Deserialize)]
pub struct RawMap {
    pub num: Vec<(u32, u32, i64)>,
    /// Defaults to the constant 1.
    pub den: Option<Vec<(u32, u32, i64)>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RawChi {
    Index { index: u64 },
    Order { order: u64 },
}

#[derive(Debug, Deserialize)]
pub struct RawPsi {
    pub c: u64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum HSpec {
    Literal(u64),
    /// The only accepted formula is "floor(log^2 p)" (natural logarithm).
    Formula(String),
}

#[derive(Debug, Deserialize)]
pub struct RawInterval {
    pub start: u64,
    pub length: RawLength,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RawLength {
    Count(u64),
    Word(String),
}

#[derive(Debug, Deserialize)]
pub struct RawRect {
    pub x_lo: Option<f64>,
    pub x_hi: Option<f64>,
    pub y_lo: Option<f64>,
    pub y_hi: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AuxConfig {
    pub r: u32,
    pub samples: u32,
    pub h_max: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct McConfig {
    #[serde(rename = "H")]
    pub h: u64,
    pub n_samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CheckSpec {
    /// Dotted path into summary.json, e.g. "dist.ks.theta_0".
    pub path: String,
    /// The check passes when |value at path| <= max_abs.
    pub max_abs: f64,
}

/// A validation failure with the offending field named.
#[derive(Debug)]
pub struct ValidationError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ValidationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config field `{}`: {}", self.field, self.message)
    }
}

/// Fully validated experiment parameters (core objects not yet built).
pub struct Experiment {
    pub p: u64,
    pub curve: BivarPoly,
    pub g: RationalMap,
    pub f: RationalMap,
    pub chi_index: u64,
    pub psi_c: u64,
    pub alpha: f64,
    pub beta: f64,
    pub h: u64,
    pub i_start: u64,
    pub i_len: u64,
    pub theta_list: Vec<f64>,
    pub rects: Vec<GaussRect>,
    pub moments_rs: Vec<(u32, u32)>,
    pub moments_k: Vec<u32>,
    pub sjj: Vec<u32>,
    pub aux: Option<AuxConfig>,
    pub mc: Option<McConfig>,
    pub seed: u64,
    pub checks: Vec<CheckSpec>,
    /// Asymptotic-hypothesis advisories (|I| small, H large); never fatal.
    pub warnings: Vec<String>,
}

fn err(field: &str, message: impl Into<String>) -> ValidationError {
    ValidationError { field: field.to_string(), message: message.into() }
}

pub fn validate(raw: RawConfig, seed_override: Option<u64>) -> Result<Experiment, ValidationError> {
    let p = raw.p;
    if !curvesum::ff_char::is_prime(p) || p < 3 {
        return Err(err("p", format!("{p} is not an odd prime")));
    }
    let curve = BivarPoly::new(p, &raw.curve).map_err(|e| err("curve", e.to_string()))?;
    if curve.deg_y() == 0 {
        return Err(err("curve", "deg_y must be at least 1"));
    }
    let build_map = |raw: &RawMap, field: &str| -> Result<RationalMap, ValidationError> {
        let num = BivarPoly::new(p, &raw.num).map_err(|e| err(field, format!("num: {e}")))?;
        let den = match &raw.den {
            None => BivarPoly::one(p),
            Some(d) => BivarPoly::new(p, d).map_err(|e| err(field, format!("den: {e}")))?,
        };
        RationalMap::new(num, den).map_err(|e| err(field, e.to_string()))
    };
    let g = match &raw.g {
        None => RationalMap::constant(p, 1).expect("constant map"),
        Some(m) => build_map(m, "g")?,
    };
    let f = match &raw.f {
        None => RationalMap::constant(p, 0).expect("constant map"),
        Some(m) => build_map(m, "f")?,
    };
    let chi_index = match raw.chi {
        RawChi::Index { index } => {
            if index >= p - 1 {
                return Err(err("chi.index", format!("index {index} not in [0, p-1)")));
            }
            index
        }
        RawChi::Order { order } => {
            if order == 0 || (p - 1) % order != 0 {
                return Err(err(
                    "chi.order",
                    format!("order {order} does not divide p-1 = {}", p - 1),
                ));
            }
            if order == 1 {
                0
            } else {
                (p - 1) / order
            }
        }
    };
    if raw.psi.c >= p {
        return Err(err("psi.c", format!("c = {} not in [0, p)", raw.psi.c)));
    }
    if !(0.0 <= raw.alpha && raw.alpha < raw.beta && raw.beta <= 1.0) {
        return Err(err(
            "alpha/beta",
            format!("need 0 <= alpha < beta <= 1, got ({}, {})", raw.alpha, raw.beta),
        ));
    }
    let h = match raw.h {
        HSpec::Literal(v) => v,
        HSpec::Formula(s) => {
            let norm: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            if norm == "floor(log^2p)" || norm == "floor(log2p)" || norm == "floor(log\u{b2}p)" {
                let lp = (p as f64).ln();
                (lp * lp).floor() as u64
            } else {
                return Err(err("H", format!("unknown formula {s:?}; use \"floor(log^2 p)\"")));
            }
        }
    };
    if h == 0 || h > p {
        return Err(err("H", format!("need 1 <= H <= p, got {h}")));
    }
    if raw.i.start >= p {
        return Err(err("I.start", format!("start {} not a residue mod p", raw.i.start)));
    }
    let i_len = match raw.i.length {
        RawLength::Count(n) => n,
        RawLength::Word(ref w) if w == "full" => p,
        RawLength::Word(ref w) => {
            return Err(err("I.length", format!("expected a count or \"full\", got {w:?}")));
        }
    };
    if i_len == 0 || i_len > p {
        return Err(err("I.length", format!("need 1 <= |I| <= p, got {i_len}")));
    }
    let mut rects = Vec::new();
    for (k, r) in raw.rects.iter().enumerate() {
        let rect = GaussRect::new(
            r.x_lo.unwrap_or(f64::NEG_INFINITY),
            r.x_hi.unwrap_or(f64::INFINITY),
            r.y_lo.unwrap_or(f64::NEG_INFINITY),
            r.y_hi.unwrap_or(f64::INFINITY),
        )
        .map_err(|e| err(&format!("rects[{k}]"), e.to_string()))?;
        rects.push(rect);
    }
    if let Some(aux) = &raw.aux {
        if aux.r == 0 || aux.r > 4 {
            return Err(err("aux.r", format!("need 1 <= r <= 4, got {}", aux.r)));
        }
        if aux.h_max == 0 {
            return Err(err("aux.h_max", "must be positive"));
        }
    }
    if let Some(mc) = &raw.mc {
        if mc.h == 0 || mc.n_samples == 0 {
            return Err(err("mc", "H and n_samples must be positive"));
        }
    }
    for (k, c) in raw.checks.iter().enumerate() {
        if c.max_abs < 0.0 || !c.max_abs.is_finite() {
            return Err(err(&format!("checks[{k}].max_abs"), "must be finite and nonnegative"));
        }
    }

    // Asymptotic-hypothesis advisories: the theorems predict nothing when
    // |I| <= p^0.55 or H >= p^0.2, but desk experiments may stress the edges.
    let mut warnings = Vec::new();
    if (i_len as f64) <= (p as f64).powf(0.55) {
        warnings.push(format!(
            "|I| = {i_len} <= p^0.55 = {:.1}: below the theorem range, results are advisory",
            (p as f64).powf(0.55)
        ));
    }
    if (h as f64) >= (p as f64).powf(0.2) {
        warnings.push(format!(
            "H = {h} >= p^0.2 = {:.1}: outside log H = o(log p), results are advisory",
            (p as f64).powf(0.2)
        ));
    }

    Ok(Experiment {
        p,
        curve,
        g,
        f,
        chi_index,
        psi_c: raw.psi.c,
        alpha: raw.alpha,
        beta: raw.beta,
        h,
        i_start: raw.i.start,
        i_len,
        theta_list: raw.theta_list,
        rects,
        moments_rs: raw.moments_rs,
        moments_k: raw.moments_k,
        sjj: raw.sjj,
        aux: raw.aux,
        mc: raw.mc,
        seed: seed_override.unwrap_or(raw.seed),
        checks: raw.checks,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_json() -> serde_json::Value {
        serde_json::json!({
            "p": 101,
            "curve": [[0, 1, 1], [2, 0, -1]],
            "chi": {"order": 2},
            "psi": {"c": 0},
            "alpha": 0.0,
            "beta": 1.0,
            "H": 5,
            "I": {"start": 0, "length": "full"}
        })
    }

    fn parse(v: serde_json::Value) -> Result<Experiment, ValidationError> {
        let raw: RawConfig = serde_json::from_value(v).expect("raw parse");
        validate(raw, None)
    }

    #[test]
    fn minimal_config_validates() {
        let e = parse(base_json()).unwrap();
        assert_eq!(e.p, 101);
        assert_eq!(e.h, 5);
        assert_eq!(e.i_len, 101);
        assert_eq!(e.chi_index, 50);
    }

    #[test]
    fn each_invariant_has_a_failing_fixture() {
        // composite p
        let mut v = base_json();
        v["p"] = 100.into();
        assert!(parse(v).is_err());
        // H = 0
        let mut v = base_json();
        v["H"] = 0.into();
        assert!(parse(v).is_err());
        // H > p
        let mut v = base_json();
        v["H"] = 102.into();
        assert!(parse(v).is_err());
        // chi order not dividing p - 1
        let mut v = base_json();
        v["chi"] = serde_json::json!({"order": 3});
        assert!(parse(v).is_err());
        // psi.c out of range
        let mut v = base_json();
        v["psi"] = serde_json::json!({"c": 101});
        assert!(parse(v).is_err());
        // alpha >= beta
        let mut v = base_json();
        v["alpha"] = 0.7.into();
        v["beta"] = 0.7.into();
        assert!(parse(v).is_err());
        // beta > 1
        let mut v = base_json();
        v["beta"] = 1.5.into();
        assert!(parse(v).is_err());
        // I.start out of range
        let mut v = base_json();
        v["I"] = serde_json::json!({"start": 101, "length": 5});
        assert!(parse(v).is_err());
        // |I| = 0
        let mut v = base_json();
        v["I"] = serde_json::json!({"start": 0, "length": 0});
        assert!(parse(v).is_err());
        // curve with deg_y = 0
        let mut v = base_json();
        v["curve"] = serde_json::json!([[2, 0, 1]]);
        assert!(parse(v).is_err());
        // zero curve polynomial
        let mut v = base_json();
        v["curve"] = serde_json::json!([[0, 1, 0]]);
        assert!(parse(v).is_err());
        // chi index out of range
        let mut v = base_json();
        v["chi"] = serde_json::json!({"index": 100});
        assert!(parse(v).is_err());
        // rational map with a common factor
        let mut v = base_json();
        v["f"] = serde_json::json!({"num": [[0, 1, 1]], "den": [[0, 1, 1], [0, 0, 0]]});
        assert!(parse(v).is_err());
        // degenerate rectangle
        let mut v = base_json();
        v["rects"] = serde_json::json!([{"x_lo": 1.0, "x_hi": -1.0}]);
        assert!(parse(v).is_err());
        // bad aux.r
        let mut v = base_json();
        v["aux"] = serde_json::json!({"r": 5, "samples": 10, "h_max": 5, "seed": 1});
        assert!(parse(v).is_err());
        // bad mc block
        let mut v = base_json();
        v["mc"] = serde_json::json!({"H": 0, "n_samples": 100, "seed": 1});
        assert!(parse(v).is_err());
        // unknown H formula
        let mut v = base_json();
        v["H"] = serde_json::json!("floor(sqrt p)");
        assert!(parse(v).is_err());
        // unknown top-level field
        let mut v = base_json();
        v["tpyo"] = 3.into();
        assert!(serde_json::from_value::<RawConfig>(v).is_err());
    }

    #[test]
    fn h_formula_evaluates() {
        let mut v = base_json();
        v["p"] = 10007.into();
        v["H"] = serde_json::json!("floor(log^2 p)");
        let e = parse(v).unwrap();
        // ln(10007)^2 = 84.86...
        assert_eq!(e.h, 84);
    }

    #[test]
    fn hypothesis_warnings_fire() {
        let mut v = base_json();
        v["I"] = serde_json::json!({"start": 0, "length": 10});
        let e = parse(v).unwrap();
        assert!(e.warnings.iter().any(|w| w.contains("|I|")));
        assert!(e.warnings.iter().any(|w| w.contains("H =")));
    }

    #[test]
    fn seed_override_wins() {
        let mut v = base_json();
        v["seed"] = 7.into();
        let raw: RawConfig = serde_json::from_value(v).unwrap();
        let e = validate(raw, Some(99)).unwrap();
        assert_eq!(e.seed, 99);
    }
}
