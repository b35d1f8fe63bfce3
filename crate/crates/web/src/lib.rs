//! Browser bindings. Each entry point takes plain values and returns a JSON
//! string so the page needs no glue beyond `JSON.parse`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use flagflow::anosov::{self, GroupSpec, SpectrumOptions};
use flagflow::zeta::{self, Representation, ZetaJob, ZetaMode};
use flagflow::{ThetaSet, WeightVector, C64};

/// Name of a shipped spec, or a spec as JSON text.
fn load(spec: &str) -> Result<GroupSpec, String> {
    let t = spec.trim();
    if t.starts_with('{') {
        return GroupSpec::from_json_str(t).map_err(|e| e.to_string());
    }
    anosov::builtin_spec(t).ok_or_else(|| format!("unknown spec {t:?}"))
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|x| x.parse().map_err(|_| format!("cannot parse {x:?}"))).collect()
}

fn weights(spec: &GroupSpec, s: &str) -> Result<(ThetaSet, WeightVector), String> {
    let theta = spec.theta.clone();
    let vals: Vec<f64> = parse_list(s)?;
    let w = if vals.is_empty() {
        WeightVector::constant(&theta, 1.0)
    } else if vals.len() == theta.len() {
        WeightVector::new(&theta, &vals).map_err(|e| e.to_string())?
    } else {
        return Err(format!("expected {} weights for theta {:?}", theta.len(), theta.indices()));
    };
    Ok((theta, w))
}

pub fn spec_list_value() -> Value {
    Value::Array(
        anosov::builtin_specs()
            .into_iter()
            .map(|(name, s)| json!({ "name": name, "d": s.d, "field": s.field.symbol(), "theta": s.theta.indices(), "generators": s.labels, "notes": s.notes }))
            .collect(),
    )
}

pub fn limit_cone_value(spec: &str, max_len: usize) -> Result<Value, String> {
    let spec = load(spec)?;
    let sample = anosov::limit_cone_sample(&spec, &spec.theta, max_len).map_err(|e| e.to_string())?;
    let points: Vec<Value> = sample.points.iter().map(|(len, p)| json!({ "len": len, "p": p.entries() })).collect();
    Ok(json!({ "d": spec.d, "theta": spec.theta.indices(), "points": points, "skipped": sample.skipped, "spread": sample.spread() }))
}

pub fn periods_value(spec: &str, s: &str, max_len: usize) -> Result<Value, String> {
    let spec = load(spec)?;
    let (theta, w) = weights(&spec, s)?;
    let sample = anosov::limit_cone_sample(&spec, &theta, max_len).map_err(|e| e.to_string())?;
    let verdict = anosov::is_admissible(&spec.root_system(), &w, &sample, 0.0).map_err(|e| e.to_string())?;
    let opts = SpectrumOptions { cross_check_every: 1, ..Default::default() };
    let recs = anosov::period_spectrum(&spec, &theta, &w, max_len, &opts).map_err(|e| e.to_string())?;
    let worst = recs.iter().filter_map(|r| r.cocycle_error).fold(0.0f64, f64::max);
    let rows: Vec<Value> = recs
        .iter()
        .map(|r| json!({ "word": r.label, "len": r.len, "lambda": r.lambda.entries(), "period": r.period, "margin_min": r.margin_min(), "failure": r.failure }))
        .collect();
    Ok(json!({ "admissible": verdict.admissible, "admissibility_margin": verdict.min_value, "cocycle_error": worst, "records": rows }))
}

pub fn zeta_value(spec: &str, s: &str, z_re: f64, z_im: f64, max_len: usize) -> Result<Value, String> {
    let spec = load(spec)?;
    let (theta, w) = weights(&spec, s)?;
    let job = ZetaJob { spec: &spec, theta, s: w, z: C64::new(z_re, z_im), rho: Representation::trivial(spec.rank(), 1), max_len };
    let p = zeta::zeta(&job, ZetaMode::Product).map_err(|e| e.to_string())?;
    let t = zeta::zeta(&job, ZetaMode::TraceSeries).map_err(|e| e.to_string())?;
    let d = &p.diagnostics;
    Ok(json!({
        "log_zeta": [p.log_zeta.re, p.log_zeta.im],
        "zeta": [p.zeta.re, p.zeta.im],
        "series_difference": (p.log_zeta - t.log_zeta).norm(),
        "n_classes": d.n_classes,
        "min_period": d.min_period,
        "shell_increments": d.shell_increments,
        "tail_estimate": d.tail_estimate,
        "abscissa": d.abscissa,
        "below_abscissa": d.below_abscissa,
    }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn spec_list() -> String {
    spec_list_value().to_string()
}

#[wasm_bindgen]
pub fn limit_cone(spec: &str, max_len: usize) -> Result<String, JsValue> {
    to_js(limit_cone_value(spec, max_len))
}

#[wasm_bindgen]
pub fn periods(spec: &str, s: &str, max_len: usize) -> Result<String, JsValue> {
    to_js(periods_value(spec, s, max_len))
}

#[wasm_bindgen]
pub fn zeta_eval(spec: &str, s: &str, z_re: f64, z_im: f64, max_len: usize) -> Result<String, JsValue> {
    to_js(zeta_value(spec, s, z_re, z_im, max_len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_points_return_json() {
        assert_eq!(spec_list_value().as_array().unwrap().len(), 5);
        let c = limit_cone_value("schottky-sl2r", 3).unwrap();
        assert!(c["points"].as_array().unwrap().len() > 4);
        let p = periods_value("diagonal-one-generator-sl3", "", 3).unwrap();
        assert_eq!(p["records"].as_array().unwrap().len(), 2);
        assert_eq!(p["admissible"], true);
        let z = zeta_value("schottky-sl2r", "1", 1.5, 0.0, 5).unwrap();
        assert!(z["series_difference"].as_f64().unwrap() < 1e-10);
        assert!(periods_value("nope", "", 2).is_err());
        assert!(periods_value("schottky-sl2r", "1,2", 2).is_err());
    }
}
