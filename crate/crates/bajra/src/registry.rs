//! Built-in map registry. Specs are strings of the form
//! `gini:p,q`, `power:p`, `quasi:<expr>`, `ratio:<expr1>,<expr2>,<a>,<b>` or
//! `hyperboloid`; expressions use the grammar of [`crate::expr`] and
//! interval endpoints accept `inf` / `-inf`.

use crate::error::{Error, Result};
use crate::expr::parse_expr;
use crate::families::{gini_map, hyperboloid_map, GiniParams};
use crate::maps::{AdmissibleMap, RatioMap};

fn bad(spec: &str, reason: impl Into<String>) -> Error {
    Error::InvalidMapSpec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

fn parse_f64(spec: &str, text: &str, what: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| bad(spec, format!("{what} `{text}` is not a number")))
}

/// Builds a map from its registry spec.
pub fn build_map(spec: &str) -> Result<Box<dyn AdmissibleMap>> {
    let spec = spec.trim();
    if spec == "hyperboloid" {
        return Ok(Box::new(hyperboloid_map()));
    }
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| bad(spec, "expected `name:args` or `hyperboloid`"))?;
    match kind {
        "gini" => {
            let (p_text, q_text) = args
                .split_once(',')
                .ok_or_else(|| bad(spec, "gini needs two parameters `p,q`"))?;
            let p = parse_f64(spec, p_text, "parameter p")?;
            let q = parse_f64(spec, q_text, "parameter q")?;
            if !p.is_finite() || !q.is_finite() {
                return Err(bad(spec, "gini parameters must be finite"));
            }
            Ok(Box::new(gini_map(GiniParams::new(p, q))?))
        }
        "power" => {
            let p = parse_f64(spec, args, "parameter p")?;
            if !p.is_finite() {
                return Err(bad(spec, "power parameter must be finite"));
            }
            Ok(Box::new(gini_map(GiniParams::new(p, 0.0))?))
        }
        "quasi" => {
            let g = parse_expr(args).map_err(|e| bad(spec, e.to_string()))?;
            let map = RatioMap::new(
                format!("quasi:{args}"),
                move |x| g.eval(x),
                |_| 1.0,
                0.0,
                f64::INFINITY,
            )?;
            Ok(Box::new(map))
        }
        "ratio" => {
            // expressions in this grammar cannot contain commas, so the
            // four fields split unambiguously
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() != 4 {
                return Err(bad(spec, "ratio needs `expr1,expr2,a,b`"));
            }
            let f1 = parse_expr(parts[0]).map_err(|e| bad(spec, e.to_string()))?;
            let f2 = parse_expr(parts[1]).map_err(|e| bad(spec, e.to_string()))?;
            let lo = parse_f64(spec, parts[2], "endpoint a")?;
            let hi = parse_f64(spec, parts[3], "endpoint b")?;
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(bad(spec, "endpoints must satisfy a < b"));
            }
            let map = RatioMap::new(
                format!("ratio:{args}"),
                move |x| f1.eval(x),
                move |x| f2.eval(x),
                lo,
                hi,
            )?;
            Ok(Box::new(map))
        }
        other => Err(bad(spec, format!("unknown map family `{other}`"))),
    }
}
