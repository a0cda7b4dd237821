//! JSON configuration of transformations.
//!
//! ```json
//! { "field": [1, 1], "digits": [["0","0"], ["1","0"]],
//!   "parts": [[{"lo": ["0","0"], "hi": ["-1","1"]}], [{"lo": ["-1","1"], "hi": ["1","0"]}]],
//!   "side": "right" }
//! { "preset": "minimal_weight", "field": [1, 1, 1], "alpha": ["1/2", "0", "0"], "restrict": false }
//! ```
//! Every element of Q(β) is a list of d rationals (coefficients of 1, β, …, β^{d−1}).

use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{compute_v, invariant_density, preset, restrict_to_support, BetaTransform, Expansion, IntervalQB, Preset, PresetParams, Side, TransformError};
use crate::numfield::{PisotField, QBeta};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IntervalJson {
    pub lo: Vec<Num>,
    pub hi: Vec<Num>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum TransformConfig {
    Preset {
        preset: Preset,
        field: Vec<i64>,
        #[serde(default)]
        alpha: Option<Vec<Num>>,
        #[serde(default)]
        digits: Option<Vec<Vec<Num>>>,
        #[serde(default)]
        restrict: bool,
    },
    Explicit {
        field: Vec<i64>,
        digits: Vec<Vec<Num>>,
        parts: Vec<Vec<IntervalJson>>,
        #[serde(default = "default_side")]
        side: Side,
        #[serde(default)]
        restrict: bool,
    },
}

fn default_side() -> Side {
    Side::Right
}

fn cfg_err(e: impl std::fmt::Display) -> TransformError {
    TransformError::Config(e.to_string())
}

pub fn parse_rational(n: &Num) -> Result<BigRational, TransformError> {
    match n {
        Num::Int(i) => Ok(BigRational::from_integer((*i).into())),
        Num::Str(s) => BigRational::from_str(s.trim()).map_err(|_| cfg_err(format!("bad rational {:?}", s))),
    }
}

pub fn parse_qbeta(f: &PisotField, v: &[Num]) -> Result<QBeta, TransformError> {
    if v.len() != f.degree() {
        return Err(cfg_err(format!("expected {} coordinates, got {}", f.degree(), v.len())));
    }
    let c = v.iter().map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    Ok(f.from_coords(c)?)
}

pub fn parse_qbeta_value(f: &PisotField, v: &Value) -> Result<QBeta, TransformError> {
    let nums: Vec<Num> = serde_json::from_value(v.clone()).map_err(cfg_err)?;
    parse_qbeta(f, &nums)
}

/// Coordinates as JSON: integers where integral, "p/q" strings otherwise.
pub fn qbeta_json(x: &QBeta) -> Value {
    Value::Array(
        x.coords()
            .iter()
            .map(|c| match c.is_integer().then(|| c.to_integer().to_i64()).flatten() {
                Some(n) => json!(n),
                None => json!(c.to_string()),
            })
            .collect(),
    )
}

/// A digit as a plain integer when it is one, else as coordinates.
pub fn digit_json(a: &QBeta) -> Value {
    let c = a.coords();
    if c[1..].iter().all(|x| x.is_zero()) && c[0].is_integer() {
        if let Some(n) = c[0].to_integer().to_i64() {
            return json!(n);
        }
    }
    qbeta_json(a)
}

pub fn expansion_json(t: &BetaTransform, e: &Expansion) -> Value {
    let dig = |w: &[usize]| -> Vec<Value> { w.iter().map(|&a| digit_json(&t.digits()[a])).collect() };
    json!({ "preperiod": dig(&e.preperiod), "period": dig(&e.period), "exact": e.exact })
}

pub fn transform_json(t: &BetaTransform) -> Value {
    json!({
        "field": t.field().coeffs(),
        "digits": t.digits().iter().map(qbeta_json).collect::<Vec<_>>(),
        "parts": t.parts().iter().map(|p| p.iter().map(|iv| json!({"lo": qbeta_json(&iv.lo), "hi": qbeta_json(&iv.hi)})).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "side": t.side(),
    })
}

impl TransformConfig {
    pub fn from_json(s: &str) -> Result<Self, TransformError> {
        serde_json::from_str(s).map_err(cfg_err)
    }

    pub fn field_coeffs(&self) -> &[i64] {
        match self {
            TransformConfig::Preset { field, .. } | TransformConfig::Explicit { field, .. } => field,
        }
    }

    pub fn build(&self) -> Result<BetaTransform, TransformError> {
        let f = PisotField::new(self.field_coeffs())?;
        let (t, restrict) = match self {
            TransformConfig::Preset { preset: kind, alpha, digits, restrict, .. } => {
                let alpha = alpha.as_ref().map(|a| parse_qbeta(&f, a)).transpose()?;
                let digits = digits
                    .as_ref()
                    .map(|ds| ds.iter().map(|d| parse_qbeta(&f, d)).collect::<Result<Vec<_>, _>>())
                    .transpose()?;
                (preset(&f, *kind, &PresetParams { alpha, digits })?, *restrict)
            }
            TransformConfig::Explicit { digits, parts, side, restrict, .. } => {
                let ds = digits.iter().map(|d| parse_qbeta(&f, d)).collect::<Result<Vec<_>, _>>()?;
                let ps = parts
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|iv| Ok(IntervalQB::new(parse_qbeta(&f, &iv.lo)?, parse_qbeta(&f, &iv.hi)?)))
                            .collect::<Result<Vec<_>, TransformError>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                (BetaTransform::new(&f, ds, ps, *side)?, *restrict)
            }
        };
        if restrict {
            let vd = compute_v(&t, 100_000)?;
            let dens = invariant_density(&t, &vd)?;
            restrict_to_support(&t, &vd, &dens)
        } else {
            Ok(t)
        }
    }
}
